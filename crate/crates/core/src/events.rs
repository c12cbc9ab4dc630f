//! Conditional event statistics on a history state.
//!
//! Given an event projector `Π` on the system, the clock reading conditioned
//! on the event has distribution `p(t_k|Π) = ⟨ψ(t_k)|Π|ψ(t_k)⟩ / (d·p(Π))`.
//! Its RMSE `Δt_ev` is paired with a conditional energy spread `ΔE_ev`, taken
//! from `Π Hs Π` when `[Π, Hs] = 0` and from the clock energy `Hπ = Hc ⊗ Π`
//! otherwise, and the products are compared against `1/2` and `√P_ev/2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::history::HistoryState;
use crate::quantum::{uncertainty, CVector, Projector};
use crate::report::{boundary_mass, boundary_warning, EnergyPath, EnergyStats, EventReport};
use crate::tolerance::Tolerances;

/// A named event projector on the system space.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSpec {
    pub label: String,
    projector: Projector,
}

impl EventSpec {
    pub fn new(label: impl Into<String>, projector: Projector) -> Self {
        EventSpec { label: label.into(), projector }
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }
}

/// Bayes-conditioned clock distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioned {
    pub p_event: f64,
    pub p_conditional: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStats {
    pub t_mean: f64,
    pub t_std: f64,
}

/// `p(t_k, Π) = ⟨ψ(t_k)|Π|ψ(t_k)⟩ / d` for every clock reading.
pub fn joint_time_distribution(h: &HistoryState, ev: &EventSpec) -> Result<Vec<f64>> {
    h.system_space().ensure_same(ev.projector.space())?;
    let pi = ev.projector.matrix();
    Ok(h.slices()
        .map(|sl| {
            let v = CVector::from_column_slice(sl);
            v.dotc(&(pi * &v)).re.max(0.0)
        })
        .collect())
}

/// Bayes' rule: `p(Π) = Σ_k p(t_k, Π)`, `p(t_k|Π) = p(t_k, Π)/p(Π)`.
pub fn condition_on_event(p_joint: &[f64], p_floor: f64) -> Result<Conditioned> {
    if let Some(bad) = p_joint.iter().find(|p| !(**p >= 0.0)) {
        return Err(Error::contract(format!("joint probabilities must be nonnegative, found {bad}")));
    }
    let p_event: f64 = p_joint.iter().sum();
    if !(p_event > p_floor) {
        return Err(Error::EventNeverHappens { p_event, floor: p_floor });
    }
    Ok(Conditioned { p_event, p_conditional: p_joint.iter().map(|p| p / p_event).collect() })
}

/// Mean and RMSE of the clock reading under `p_conditional`.
pub fn time_statistics(p_conditional: &[f64], times: &[f64]) -> TimeStats {
    assert_eq!(p_conditional.len(), times.len(), "distribution and grid lengths differ");
    let mean: f64 = p_conditional.iter().zip(times).map(|(p, t)| p * t).sum();
    let var: f64 = p_conditional.iter().zip(times).map(|(p, t)| p * (t - mean) * (t - mean)).sum();
    TimeStats { t_mean: mean, t_std: var.sqrt() }
}

/// `max |[Π, Hs]|`.
pub fn commutator_norm(h: &HistoryState, ev: &EventSpec) -> Result<f64> {
    ev.projector.operator().commutator_max_norm(h.hs())
}

/// Conditional energy from `Π Hs Π` (requires `[Π, Hs] = 0`).
///
/// The moments are evaluated on a single slice and again on `|Ψ⟩⟩`; the two
/// must agree, and every slice must give the same value.
pub fn conditional_energy_commuting(h: &HistoryState, ev: &EventSpec, tol: &Tolerances) -> Result<EnergyStats> {
    let comm = commutator_norm(h, ev)?;
    if comm > tol.commuting_gate {
        return Err(Error::contract(format!(
            "[Π, Hs] = {comm:e} exceeds the commuting gate {:e}; use conditional_energy_clock",
            tol.commuting_gate
        )));
    }
    let pi = ev.projector.matrix();
    let hs = h.hs().matrix();
    let phs = pi * hs * pi;
    // ‖(Hs - e)Πv‖², the centered second moment (Hs Π = Π Hs Π here)
    let centered = |v: &CVector, e: f64| {
        let w = pi * v;
        (hs * &w - &w * Complex64::new(e, 0.0)).norm_squared()
    };

    let psi0 = h.psi0().amplitudes();
    let p0 = psi0.dotc(&(pi * psi0)).re;
    if !(p0 > tol.p_floor) {
        return Err(Error::EventNeverHappens { p_event: p0, floor: tol.p_floor });
    }
    let mean0 = psi0.dotc(&(&phs * psi0)).re / p0;
    let single = EnergyStats { e_mean: mean0, e_std: (centered(psi0, mean0) / p0).sqrt() };

    let d = h.clock().d() as f64;
    let slices: Vec<CVector> = h.slices().map(CVector::from_column_slice).collect();
    let (mut p, mut m1) = (0.0, 0.0);
    let mut spread = 0.0_f64;
    for v in &slices {
        let b = v.dotc(&(&phs * v)).re;
        spread = spread.max((b * d - mean0 * p0).abs());
        p += v.dotc(&(pi * v)).re;
        m1 += b;
    }
    let mean = m1 / p;
    let var = slices.iter().map(|v| centered(v, mean)).sum::<f64>() / p;
    let joint = EnergyStats { e_mean: mean, e_std: var.sqrt() };
    let scale = 1.0 + single.e_mean.abs() + single.e_std;
    let gap = (joint.e_mean - single.e_mean).abs().max((joint.e_std - single.e_std).abs());
    if gap > 1e-10 * scale || spread > 1e-10 * scale {
        return Err(Error::numerical(format!(
            "commuting-path moments disagree between slice and history evaluation ({gap:e}, slice spread {spread:e})"
        )));
    }
    Ok(single)
}

/// `ΠΨ` and `(Hc ⊗ 1)ΠΨ`, row-major in (clock, system).
struct Projected {
    ds: usize,
    g: Vec<Complex64>,
    hg: Vec<Complex64>,
    p: f64,
}

impl Projected {
    fn new(h: &HistoryState, ev: &EventSpec) -> Result<Self> {
        h.system_space().ensure_same(ev.projector.space())?;
        let ds = h.system_dim();
        let d = h.clock().d();
        let pi = ev.projector.matrix();
        let mut g = Vec::with_capacity(d * ds);
        for sl in h.slices() {
            g.extend((pi * CVector::from_column_slice(sl)).iter());
        }
        let mut hg = vec![Complex64::new(0.0, 0.0); d * ds];
        for s in 0..ds {
            let col: Vec<Complex64> = (0..d).map(|k| g[k * ds + s]).collect();
            for (k, v) in h.clock().apply_hc(&col).into_iter().enumerate() {
                hg[k * ds + s] = v;
            }
        }
        let p = g.iter().map(|z| z.norm_sqr()).sum();
        Ok(Projected { ds, g, hg, p })
    }

    /// `αT⟨Hπ⟩` and the centered `αT⟨(Hπ - μ)²⟩`.
    fn clock_moments(&self) -> (f64, f64) {
        let m1: f64 = self.g.iter().zip(&self.hg).map(|(a, b)| (a.conj() * b).re).sum();
        let mu = m1 / self.p;
        let var = self.g.iter().zip(&self.hg).map(|(a, b)| (b - a * mu).norm_sqr()).sum::<f64>() / self.p;
        (mu, var)
    }
}

/// Conditional energy from the clock: `E_ev = -αT⟨Hπ⟩`,
/// `ΔE_ev² = αT⟨Hπ²⟩ - (αT⟨Hπ⟩)²`. Valid whether or not `[Π, Hs] = 0`.
pub fn conditional_energy_clock(h: &HistoryState, ev: &EventSpec, tol: &Tolerances) -> Result<EnergyStats> {
    let proj = Projected::new(h, ev)?;
    clock_energy(&proj, tol)
}

fn clock_energy(proj: &Projected, tol: &Tolerances) -> Result<EnergyStats> {
    if !(proj.p > tol.p_floor) {
        return Err(Error::EventNeverHappens { p_event: proj.p, floor: tol.p_floor });
    }
    let (mu, var) = proj.clock_moments();
    Ok(EnergyStats { e_mean: -mu, e_std: var.sqrt() })
}

/// Full conditional statistics, both uncertainty products, their bounds and
/// the finite-clock Robertson lower bounds.
pub fn uncertainty_report(h: &HistoryState, ev: &EventSpec, tol: &Tolerances) -> Result<EventReport> {
    let joint = joint_time_distribution(h, ev)?;
    let cond = condition_on_event(&joint, tol.p_floor)?;
    let times = h.clock().times();
    let ts = time_statistics(&cond.p_conditional, times);
    let alpha_t = 1.0 / cond.p_event;

    let proj = Projected::new(h, ev)?;
    let clock = clock_energy(&proj, tol)?;
    let comm = commutator_norm(h, ev)?;
    let commuting = comm <= tol.commuting_gate;
    let system = if commuting { Some(conditional_energy_commuting(h, ev, tol)?) } else { None };
    let (path, energy) = match system {
        Some(s) => (EnergyPath::Commuting, s),
        None => (EnergyPath::Clock, clock),
    };
    let delta_hs = uncertainty(h.psi0(), h.hs())?;

    // ⟨TπΨ|HπΨ⟩ and ⟨TπΨ|(1 ⊗ Hs)Ψ⟩; commutator expectations are 2i·Im of these.
    let ds = proj.ds;
    let hs = h.hs().matrix();
    let (mut th, mut ths) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (k, sl) in h.slices().enumerate() {
        let t = times[k];
        let hv = hs * CVector::from_column_slice(sl);
        for s in 0..ds {
            let u = proj.g[k * ds + s] * t;
            th += u.conj() * proj.hg[k * ds + s];
            ths += u.conj() * hv[s];
        }
    }

    let product_conditional = ts.t_std * energy.e_std;
    let product_unconditional = ts.t_std * delta_hs;
    let bound_unconditional = 0.5 * cond.p_event.sqrt();
    let mass = boundary_mass(&cond.p_conditional, tol.edge_fraction);
    let warnings = boundary_warning(mass, tol.edge_fraction, tol.edge_mass).into_iter().collect();

    Ok(EventReport {
        label: ev.label.clone(),
        p_event: cond.p_event,
        alpha_t,
        t_mean: ts.t_mean,
        t_std: ts.t_std,
        e_mean: energy.e_mean,
        e_std: energy.e_std,
        energy_path: path,
        commuting,
        commutator_norm: comm,
        clock_energy: clock,
        system_energy: system,
        delta_hs,
        product_conditional,
        bound_conditional: 0.5,
        margin_conditional: product_conditional - 0.5,
        product_unconditional,
        bound_unconditional,
        margin_unconditional: product_unconditional - bound_unconditional,
        robertson_conditional: alpha_t * th.im.abs(),
        robertson_unconditional: alpha_t.sqrt() * ths.im.abs(),
        time_centering_gap: ts.t_mean * ts.t_mean * (1.0 - cond.p_event),
        boundary_mass: mass,
        warnings,
        p_t_given_event: cond.p_conditional,
    })
}
