//! Single-photon wavepackets on a uniform frequency grid.
//!
//! Conventions: `∫dω|φ(ω)|²/2π = 1`, `φ̃(t) = ∫dω/2π e^{-iωt} φ(ω)`,
//! `∫dt|φ̃(t)|² = 1`. A screen at `z0` (with `c = 1`) detects the photon at
//! `t0 = z0`, and the arrival distribution is `|φ̃(t - t0)|²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{boundary_mass, boundary_warning};
use crate::tolerance::Tolerances;

/// `ω_n = omega_min + n·dω` for `n = 0..N`, `N` even.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    omega_min: f64,
    d_omega: f64,
    n: usize,
}

impl FrequencyGrid {
    /// `n` bins covering `[omega_min, omega_max)`; only nonnegative frequencies.
    pub fn new(n: usize, omega_min: f64, omega_max: f64) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::contract(format!("frequency grid size must be even and >= 2, got {n}")));
        }
        if !(omega_min >= 0.0) || !omega_max.is_finite() || !(omega_max > omega_min) {
            return Err(Error::contract(format!(
                "frequency grid needs 0 <= omega_min < omega_max, got [{omega_min}, {omega_max})"
            )));
        }
        Ok(FrequencyGrid { omega_min, d_omega: (omega_max - omega_min) / n as f64, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn d_omega(&self) -> f64 {
        self.d_omega
    }

    pub fn omega(&self, n: usize) -> f64 {
        self.omega_min + n as f64 * self.d_omega
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.omega(i)).collect()
    }

    /// Dual time spacing `2π/(N·dω)`.
    pub fn dt(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.d_omega)
    }

    /// `t_k = (k - N/2)·dt`.
    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        let half = (self.n / 2) as f64;
        (0..self.n).map(|k| (k as f64 - half) * dt).collect()
    }

    /// Length of the dual time window, `N·dt = 2π/dω`.
    pub fn time_window(&self) -> f64 {
        2.0 * PI / self.d_omega
    }

    fn contains_time(&self, t: f64) -> bool {
        let half = self.time_window() / 2.0;
        t >= -half && t < half
    }
}

/// Sampled spectral amplitude `φ(ω_n)` with `Σ|φ_n|²·dω/2π = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAmplitude {
    grid: FrequencyGrid,
    phi: Vec<Complex64>,
}

impl SpectralAmplitude {
    pub fn new(grid: FrequencyGrid, phi: Vec<Complex64>) -> Result<Self> {
        Self::new_with(grid, phi, &Tolerances::default())
    }

    pub fn new_with(grid: FrequencyGrid, phi: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if phi.len() != grid.len() {
            return Err(Error::SpaceMismatch {
                expected: format!("frequency grid of {} points", grid.len()),
                found: format!("{} samples", phi.len()),
            });
        }
        let norm = spectral_norm(&grid, &phi);
        if !((norm - 1.0).abs() <= 100.0 * tol.norm) {
            return Err(Error::contract(format!("spectral amplitude norm Σ|φ|²dω/2π = {norm} is not 1")));
        }
        Ok(SpectralAmplitude { grid, phi })
    }

    /// Rescale arbitrary samples to unit norm.
    pub fn normalize(grid: FrequencyGrid, mut phi: Vec<Complex64>) -> Result<Self> {
        if phi.len() != grid.len() {
            return Err(Error::SpaceMismatch {
                expected: format!("frequency grid of {} points", grid.len()),
                found: format!("{} samples", phi.len()),
            });
        }
        let norm = spectral_norm(&grid, &phi);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::contract("spectral amplitude has zero or non-finite norm"));
        }
        let s = norm.sqrt().recip();
        phi.iter_mut().for_each(|z| *z *= s);
        Ok(SpectralAmplitude { grid, phi })
    }

    /// `φ(ω) ∝ exp(-(ω - ω0)²/(4σ²))`, so `|φ|²` has standard deviation `σ`.
    pub fn gaussian(grid: FrequencyGrid, omega0: f64, sigma: f64) -> Result<Self> {
        Self::chirped(grid, omega0, sigma, 0.0)
    }

    /// Gaussian multiplied by the quadratic spectral phase `e^{iβω²}`.
    pub fn chirped(grid: FrequencyGrid, omega0: f64, sigma: f64, beta: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::contract(format!("gaussian width must be positive, got {sigma}")));
        }
        let phi = grid
            .omegas()
            .into_iter()
            .map(|w| {
                let x = w - omega0;
                Complex64::from_polar((-x * x / (4.0 * sigma * sigma)).exp(), beta * w * w)
            })
            .collect();
        Self::normalize(grid, phi)
    }

    /// Flat amplitude on `[lo, hi)`.
    pub fn rectangular(grid: FrequencyGrid, lo: f64, hi: f64) -> Result<Self> {
        let phi =
            grid.omegas().into_iter().map(|w| Complex64::new(if w >= lo && w < hi { 1.0 } else { 0.0 }, 0.0)).collect();
        Self::normalize(grid, phi)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.phi
    }

    /// `|φ_n|²·dω/2π`; sums to 1.
    pub fn spectral_weights(&self) -> Vec<f64> {
        let w = self.grid.d_omega / (2.0 * PI);
        self.phi.iter().map(|z| z.norm_sqr() * w).collect()
    }

    /// `φ_n e^{iω_n t0}`, the spectral form of a time shift by `t0`.
    pub fn delayed(&self, t0: f64) -> SpectralAmplitude {
        let phi =
            self.phi.iter().enumerate().map(|(n, z)| z * Complex64::from_polar(1.0, self.grid.omega(n) * t0)).collect();
        SpectralAmplitude { grid: self.grid, phi }
    }
}

fn spectral_norm(grid: &FrequencyGrid, phi: &[Complex64]) -> f64 {
    phi.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.d_omega / (2.0 * PI)
}

/// Screen at `z0`; with `c = 1` the arrival reference time is `t0 = z0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrivalEvent {
    pub z0: f64,
}

impl ArrivalEvent {
    pub const C: f64 = 1.0;

    pub fn new(z0: f64) -> Self {
        ArrivalEvent { z0 }
    }

    pub fn t0(&self) -> f64 {
        self.z0 / Self::C
    }
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// `φ̃(t_k) = (dω/2π) Σ_n e^{-iω_n t_k} φ_n` on the dual grid.
///
/// With `ω_n t_k = ω_min t_k + 2πnk/N - πn` this is one forward FFT of
/// `(-1)^n φ_n` followed by the carrier phase `e^{-iω_min t_k}`.
pub fn to_time_domain(phi: &SpectralAmplitude) -> Vec<Complex64> {
    let grid = phi.grid;
    let mut buf: Vec<Complex64> = phi.phi.iter().enumerate().map(|(n, z)| if n % 2 == 0 { *z } else { -z }).collect();
    plan(grid.n, false).process(&mut buf);
    let scale = grid.d_omega / (2.0 * PI);
    for (z, t) in buf.iter_mut().zip(grid.times()) {
        *z *= Complex64::from_polar(scale, -grid.omega_min * t);
    }
    buf
}

/// Inverse of [`to_time_domain`].
pub fn from_time_domain(grid: FrequencyGrid, tilde: &[Complex64]) -> Result<SpectralAmplitude> {
    if tilde.len() != grid.len() {
        return Err(Error::SpaceMismatch {
            expected: format!("frequency grid of {} points", grid.len()),
            found: format!("{} samples", tilde.len()),
        });
    }
    let mut buf: Vec<Complex64> =
        tilde.iter().zip(grid.times()).map(|(z, t)| z * Complex64::from_polar(1.0, grid.omega_min * t)).collect();
    plan(grid.n, true).process(&mut buf);
    // forward scale dω/2π, inverse FFT gains N: undo both
    let scale = 2.0 * PI / (grid.d_omega * grid.n as f64);
    let phi = buf.into_iter().enumerate().map(|(n, z)| if n % 2 == 0 { z * scale } else { -z * scale }).collect();
    SpectralAmplitude::new(grid, phi)
}

/// Arrival-time distribution `p(t_k|Π) = |φ̃(t_k - t0)|²·dt`, with its boundary diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalDistribution {
    pub times: Vec<f64>,
    pub p: Vec<f64>,
    pub boundary_mass: f64,
    pub warnings: Vec<String>,
}

pub fn arrival_distribution(phi: &SpectralAmplitude, ev: &ArrivalEvent) -> Result<ArrivalDistribution> {
    arrival_distribution_with(phi, ev, &Tolerances::default())
}

pub fn arrival_distribution_with(
    phi: &SpectralAmplitude,
    ev: &ArrivalEvent,
    tol: &Tolerances,
) -> Result<ArrivalDistribution> {
    let t0 = ev.t0();
    if !phi.grid.contains_time(t0) {
        return Err(Error::contract(format!(
            "arrival time t0 = {t0} lies outside the dual time window of length {}",
            phi.grid.time_window()
        )));
    }
    let dt = phi.grid.dt();
    let p: Vec<f64> = to_time_domain(&phi.delayed(t0)).iter().map(|z| z.norm_sqr() * dt).collect();
    let mass = boundary_mass(&p, tol.edge_fraction);
    Ok(ArrivalDistribution {
        times: phi.grid.times(),
        warnings: boundary_warning(mass, tol.edge_fraction, tol.edge_mass).into_iter().collect(),
        boundary_mass: mass,
        p,
    })
}

/// Spectral moments of `|φ|²/2π` (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonEnergy {
    #[serde(rename = "E_mean")]
    pub e_mean: f64,
    #[serde(rename = "E_std")]
    pub e_std: f64,
}

pub fn photon_energy_statistics(phi: &SpectralAmplitude) -> PhotonEnergy {
    let w = phi.spectral_weights();
    let (m0, m1, m2) = w.iter().enumerate().fold((0.0, 0.0, 0.0), |(a, b, c), (n, &p)| {
        let om = phi.grid.omega(n);
        (a + p, b + p * om, c + p * om * om)
    });
    let mean = m1 / m0;
    PhotonEnergy { e_mean: mean, e_std: (m2 / m0 - mean * mean).max(0.0).sqrt() }
}

/// Arrival-time spread against spectral width, with the bound `1/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeBandwidthReport {
    pub t0: f64,
    pub t_mean: f64,
    pub t_std: f64,
    #[serde(rename = "E_mean")]
    pub e_mean: f64,
    #[serde(rename = "E_std")]
    pub e_std: f64,
    #[serde(rename = "product_conditional")]
    pub product: f64,
    #[serde(rename = "bound_conditional")]
    pub bound: f64,
    #[serde(rename = "margin_conditional")]
    pub margin: f64,
    /// Time window over which the arrival moments are taken.
    pub time_window: f64,
    pub boundary_mass: f64,
    pub warnings: Vec<String>,
    pub times: Vec<f64>,
    pub p_t_given_event: Vec<f64>,
}

pub fn time_bandwidth_report(phi: &SpectralAmplitude, ev: &ArrivalEvent) -> Result<TimeBandwidthReport> {
    time_bandwidth_report_with(phi, ev, &Tolerances::default())
}

pub fn time_bandwidth_report_with(
    phi: &SpectralAmplitude,
    ev: &ArrivalEvent,
    tol: &Tolerances,
) -> Result<TimeBandwidthReport> {
    let dist = arrival_distribution_with(phi, ev, tol)?;
    let ts = crate::events::time_statistics(&dist.p, &dist.times);
    let energy = photon_energy_statistics(phi);
    let product = ts.t_std * energy.e_std;
    Ok(TimeBandwidthReport {
        t0: ev.t0(),
        t_mean: ts.t_mean,
        t_std: ts.t_std,
        e_mean: energy.e_mean,
        e_std: energy.e_std,
        product,
        bound: 0.5,
        margin: product - 0.5,
        time_window: phi.grid.time_window(),
        boundary_mass: dist.boundary_mass,
        warnings: dist.warnings,
        times: dist.times,
        p_t_given_event: dist.p,
    })
}

/// Sharp-frequency event `Π_{ω0}` regularized by a window of length `T_total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEventReport {
    pub omega0: f64,
    /// Grid frequency actually used (nearest bin to `omega0`).
    pub omega_bin: f64,
    pub t_total: f64,
    pub p_event: f64,
    pub times: Vec<f64>,
    pub p_t_given_event: Vec<f64>,
    pub t_std: f64,
    /// Bin-width floor `dω/√12`; the ideal sharp event has zero spread.
    #[serde(rename = "E_std")]
    pub e_std: f64,
    #[serde(rename = "product_conditional")]
    pub product: f64,
}

/// The conditional arrival distribution for `Π_{ω0}` is uniform across the
/// window. Time moments are those of the uniform density, so `t_std` is
/// exactly `T_total/√12`; the energy spread is the single-bin floor.
pub fn frequency_event_report(
    phi: &SpectralAmplitude,
    omega0: f64,
    t_total: f64,
    tol: &Tolerances,
) -> Result<FrequencyEventReport> {
    let grid = phi.grid;
    let top = grid.omega(grid.n - 1) + grid.d_omega;
    if !(omega0 >= grid.omega_min && omega0 < top) {
        return Err(Error::contract(format!(
            "omega0 = {omega0} lies outside the frequency grid [{}, {top})",
            grid.omega_min
        )));
    }
    if !(t_total > 0.0 && t_total.is_finite()) {
        return Err(Error::contract(format!("T_total must be positive and finite, got {t_total}")));
    }
    let bin = (((omega0 - grid.omega_min) / grid.d_omega).round() as usize).min(grid.n - 1);
    let p_event = phi.phi[bin].norm_sqr() * grid.d_omega / (2.0 * PI);
    if !(p_event > tol.p_floor) {
        return Err(Error::EventNeverHappens { p_event, floor: tol.p_floor });
    }

    let m = grid.n;
    let w = t_total / m as f64;
    let times: Vec<f64> = (0..m).map(|k| -t_total / 2.0 + (k as f64 + 0.5) * w).collect();
    let p = vec![1.0 / m as f64; m];
    // bin-integrated moments of the piecewise-constant density
    let mean: f64 = p.iter().zip(&times).map(|(p, t)| p * t).sum();
    let second: f64 = p.iter().zip(&times).map(|(p, t)| p * (t * t + w * w / 12.0)).sum();
    let t_std = (second - mean * mean).max(0.0).sqrt();
    let e_std = grid.d_omega / 12f64.sqrt();
    Ok(FrequencyEventReport {
        omega0,
        omega_bin: grid.omega(bin),
        t_total,
        p_event,
        times,
        p_t_given_event: p,
        t_std,
        e_std,
        product: t_std * e_std,
    })
}
