//! Scenario configuration files and their load-time validation.

use std::path::Path;

use qevent_core::photon::SpectralAmplitude;
use qevent_core::{
    build_clock, ArrivalEvent, CMatrix, CVector, ClockRegister, Complex64, EventSpec, FrequencyGrid, HermitianOperator,
    HilbertLabel, Projector, StateVector, Tolerances, Units,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    FiniteDim,
    PhotonArrival,
    PhotonFrequency,
}

/// Dense complex matrix as separate real and imaginary row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub real: Vec<Vec<f64>>,
    #[serde(default)]
    pub imag: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockConfig {
    pub d: usize,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub dimension: usize,
    pub hamiltonian: MatrixConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventConfig {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub projector: Option<MatrixConfig>,
    #[serde(default)]
    pub omega0: Option<f64>,
    #[serde(default)]
    pub z0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub omega_min: f64,
    pub omega_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumConfig {
    Gaussian {
        omega0: f64,
        sigma: f64,
    },
    Chirped {
        omega0: f64,
        sigma: f64,
        beta: f64,
    },
    Rectangular {
        lo: f64,
        hi: f64,
    },
    /// Samples on the grid as `[re, im]` pairs; rescaled to unit norm.
    Explicit {
        values: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "d")]
    D,
    #[serde(rename = "N")]
    N,
    #[serde(rename = "T_total")]
    TTotal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: Kind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub clock: Option<ClockConfig>,
    #[serde(default)]
    pub system: Option<SystemConfig>,
    /// Complex amplitudes as `[re, im]` pairs.
    #[serde(default)]
    pub initial_state: Option<Vec<[f64; 2]>>,
    pub event: EventConfig,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default, rename = "T_total")]
    pub t_total: Option<f64>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// A parsed configuration plus the hash of its exact bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ScenarioConfig,
    pub sha256: String,
    pub stem: String,
}

/// Validated finite-dimensional problem.
#[derive(Debug, Clone)]
pub struct FiniteProblem {
    pub clock: ClockRegister,
    pub hs: HermitianOperator,
    pub psi0: StateVector,
    pub event: EventSpec,
}

/// Validated photon problem.
#[derive(Debug, Clone)]
pub struct PhotonProblem {
    pub phi: SpectralAmplitude,
    pub arrival: Option<ArrivalEvent>,
    pub omega0: Option<f64>,
    pub t_total: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum Problem {
    Finite(FiniteProblem),
    Photon(PhotonProblem),
}

pub fn load(path: &Path) -> Result<LoadedConfig, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let config: ScenarioConfig = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Validation { field: serde_field(&e), message: e.to_string() })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario").to_string();
    Ok(LoadedConfig { config, sha256: hex::encode(Sha256::digest(&bytes)), stem })
}

fn serde_field(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    // serde reports "unknown field `x`" / "missing field `x`"; surface the name
    msg.split('`').nth(1).map(str::to_string).unwrap_or_else(|| "<root>".into())
}

fn invalid(field: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Validation { field: field.into(), message: err.to_string() }
}

fn require<'a, T>(value: &'a Option<T>, field: &str, kind: Kind) -> Result<&'a T, CliError> {
    value.as_ref().ok_or_else(|| invalid(field, format!("required for kind {kind:?}")))
}

fn matrix(field: &str, m: &MatrixConfig, dim: usize) -> Result<CMatrix, CliError> {
    let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
    if !shape_ok(&m.real) || m.imag.as_ref().is_some_and(|im| !shape_ok(im)) {
        return Err(invalid(field, format!("expected a {dim}x{dim} matrix")));
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| Complex64::new(m.real[r][c], m.imag.as_ref().map_or(0.0, |im| im[r][c]))))
}

impl ScenarioConfig {
    /// Validate every field against the core invariants and build the problem.
    pub fn problem(&self) -> Result<Problem, CliError> {
        self.problem_with(None)
    }

    /// As [`ScenarioConfig::problem`], with one sweep value substituted.
    pub fn problem_with(&self, sweep_value: Option<(SweepParameter, f64)>) -> Result<Problem, CliError> {
        match self.kind {
            Kind::FiniteDim => self.finite(sweep_value).map(Problem::Finite),
            Kind::PhotonArrival | Kind::PhotonFrequency => self.photon(sweep_value).map(Problem::Photon),
        }
    }

    fn finite(&self, sweep: Option<(SweepParameter, f64)>) -> Result<FiniteProblem, CliError> {
        let kind = self.kind;
        let tol = &self.tolerances;
        let clock_cfg = require(&self.clock, "clock", kind)?;
        let system = require(&self.system, "system", kind)?;
        let (mut d, mut dt) = (clock_cfg.d, clock_cfg.dt);
        match sweep {
            // refine the grid inside a fixed window
            Some((SweepParameter::D, v)) => {
                let window = d as f64 * dt;
                d = as_count("sweep.values", v)?;
                dt = window / d as f64;
            }
            Some((SweepParameter::TTotal, v)) => dt = v / d as f64,
            Some((SweepParameter::N, _)) => return Err(invalid("sweep.parameter", "N applies to photon kinds")),
            None => {}
        }
        let clock = build_clock(d, dt).map_err(|e| invalid("clock", e))?;

        let space = HilbertLabel::new("system", system.dimension).map_err(|e| invalid("system.dimension", e))?;
        let h = matrix("system.hamiltonian", &system.hamiltonian, system.dimension)?;
        let hs = HermitianOperator::new_with(space.clone(), h, Units::Energy, tol)
            .map_err(|e| invalid("system.hamiltonian", e))?;

        let amps = require(&self.initial_state, "initial_state", kind)?;
        if amps.len() != system.dimension {
            return Err(invalid(
                "initial_state",
                format!("expected {} amplitudes, got {}", system.dimension, amps.len()),
            ));
        }
        let v = CVector::from_iterator(amps.len(), amps.iter().map(|[re, im]| Complex64::new(*re, *im)));
        let psi0 = StateVector::new_with(space.clone(), v, tol).map_err(|e| invalid("initial_state", e))?;

        let proj_cfg = require(&self.event.projector, "event.projector", kind)?;
        let p = matrix("event.projector", proj_cfg, system.dimension)?;
        let op = HermitianOperator::new_with(space, p, Units::Dimensionless, tol)
            .map_err(|e| invalid("event.projector", e))?;
        let projector = Projector::new_with(op, tol).map_err(|e| invalid("event.projector", e))?;
        let label = self.event.label.clone().unwrap_or_else(|| "event".into());
        Ok(FiniteProblem { clock, hs, psi0, event: EventSpec::new(label, projector) })
    }

    fn photon(&self, sweep: Option<(SweepParameter, f64)>) -> Result<PhotonProblem, CliError> {
        let kind = self.kind;
        let mut g = *require(&self.grid, "grid", kind)?;
        let mut t_total = self.t_total;
        match sweep {
            Some((SweepParameter::N, v)) => g.n = as_count("sweep.values", v)?,
            Some((SweepParameter::TTotal, v)) if kind == Kind::PhotonFrequency => t_total = Some(v),
            Some((p, _)) => return Err(invalid("sweep.parameter", format!("{p:?} does not apply to kind {kind:?}"))),
            None => {}
        }
        let grid = FrequencyGrid::new(g.n, g.omega_min, g.omega_max).map_err(|e| invalid("grid", e))?;
        let phi = match require(&self.spectrum, "spectrum", kind)? {
            SpectrumConfig::Gaussian { omega0, sigma } => SpectralAmplitude::gaussian(grid, *omega0, *sigma),
            SpectrumConfig::Chirped { omega0, sigma, beta } => SpectralAmplitude::chirped(grid, *omega0, *sigma, *beta),
            SpectrumConfig::Rectangular { lo, hi } => SpectralAmplitude::rectangular(grid, *lo, *hi),
            SpectrumConfig::Explicit { values } => {
                SpectralAmplitude::normalize(grid, values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            }
        }
        .map_err(|e| invalid("spectrum", e))?;
        match kind {
            Kind::PhotonArrival => {
                let z0 = *require(&self.event.z0, "event.z0", kind)?;
                Ok(PhotonProblem { phi, arrival: Some(ArrivalEvent::new(z0)), omega0: None, t_total: None })
            }
            _ => {
                let omega0 = *require(&self.event.omega0, "event.omega0", kind)?;
                let t = t_total.ok_or_else(|| invalid("T_total", "required for kind PhotonFrequency"))?;
                Ok(PhotonProblem { phi, arrival: None, omega0: Some(omega0), t_total: Some(t) })
            }
        }
    }
}

fn as_count(field: &str, v: f64) -> Result<usize, CliError> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(invalid(field, format!("{v} is not a positive integer")))
    }
}
