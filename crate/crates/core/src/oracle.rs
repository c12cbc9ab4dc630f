//! Brute-force reference path for small instances.
//!
//! Everything here is formed densely on the joint space from its defining
//! formula: the density matrix `|Ψ⟩⟩⟨⟨Ψ|`, the projectors `|t_k⟩⟨t_k| ⊗ Π`,
//! the clock operators `Tc = diag(t_k)` and `Hc = F diag(p_n) F†`, and every
//! moment as an explicit quadratic form. Only `quantum` primitives are used,
//! so agreement with the structured path in `events` is a genuine cross-check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::events::EventSpec;
use crate::history::HistoryState;
use crate::quantum::{tensor_product, uncertainty, CMatrix, CVector, HermitianOperator, HilbertLabel, Units};
use crate::report::{boundary_mass, boundary_warning, EnergyPath, EnergyStats, EventReport};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseMoments {
    pub mean: f64,
    pub second_moment: f64,
}

fn check_cap(h: &HistoryState, tol: &Tolerances) -> Result<usize> {
    let dim = h.psi().dim();
    if dim > tol.oracle_max_dim {
        return Err(Error::Resource { requested: dim, cap: tol.oracle_max_dim });
    }
    Ok(dim)
}

fn clock_label(h: &HistoryState) -> HilbertLabel {
    h.clock().space().clone()
}

/// `Tc = diag(t_k)`.
pub fn dense_tc(h: &HistoryState) -> HermitianOperator {
    let times = h.clock().times();
    HermitianOperator::diagonal(clock_label(h), times, Units::Time).expect("clock times are finite")
}

/// `Hc = F diag(p_n) F†` with `F[k, n] = e^{i p_n t_k}/√d` formed entry by entry.
pub fn dense_hc(h: &HistoryState) -> Result<HermitianOperator> {
    let clock = h.clock();
    let d = clock.d();
    let (t, p) = (clock.times(), clock.frequencies());
    let f = CMatrix::from_fn(d, d, |k, n| Complex64::from_polar(1.0 / (d as f64).sqrt(), p[n] * t[k]));
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(d, p.iter().map(|&x| Complex64::new(x, 0.0))));
    let m = &f * diag * f.adjoint();
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianOperator::new(clock_label(h), m, Units::Energy)
}

/// `p(t_k, Π) = Tr[(|t_k⟩⟨t_k| ⊗ Π) |Ψ⟩⟩⟨⟨Ψ|]`, traced in full.
pub fn born_rule_joint(h: &HistoryState, ev: &EventSpec) -> Result<Vec<f64>> {
    born_rule_joint_with(h, ev, &Tolerances::default())
}

pub fn born_rule_joint_with(h: &HistoryState, ev: &EventSpec, tol: &Tolerances) -> Result<Vec<f64>> {
    let dim = check_cap(h, tol)?;
    if ev.projector().space() != h.system_space() {
        return Err(Error::SpaceMismatch {
            expected: h.system_space().to_string(),
            found: ev.projector().space().to_string(),
        });
    }
    let psi = h.psi().amplitudes();
    let rho = psi * psi.adjoint();
    let d = h.clock().d();
    let mut out = Vec::with_capacity(d);
    for k in 0..d {
        let mut tk = vec![0.0; d];
        tk[k] = 1.0;
        let clock_proj = HermitianOperator::diagonal(clock_label(h), &tk, Units::Dimensionless)?;
        let pk = tensor_product(&clock_proj, ev.projector().operator())?;
        let m = pk.matrix();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                tr += m[(i, j)] * rho[(j, i)];
            }
        }
        out.push(tr.re);
    }
    Ok(out)
}

/// `⟨⟨Ψ|A|Ψ⟩⟩` and `⟨⟨Ψ|A²|Ψ⟩⟩` for a dense joint-space operator.
pub fn dense_moments(h: &HistoryState, a: &HermitianOperator) -> Result<DenseMoments> {
    dense_moments_with(h, a, &Tolerances::default())
}

pub fn dense_moments_with(h: &HistoryState, a: &HermitianOperator, tol: &Tolerances) -> Result<DenseMoments> {
    check_cap(h, tol)?;
    if a.dim() != h.psi().dim() {
        return Err(Error::SpaceMismatch { expected: h.psi().space().to_string(), found: a.space().to_string() });
    }
    let psi = h.psi().amplitudes();
    let av = a.matrix() * psi;
    Ok(DenseMoments { mean: psi.dotc(&av).re, second_moment: av.norm_squared() })
}

/// Every [`EventReport`] field recomputed densely.
pub fn oracle_report(h: &HistoryState, ev: &EventSpec, tol: &Tolerances) -> Result<EventReport> {
    check_cap(h, tol)?;
    let joint = born_rule_joint_with(h, ev, tol)?;
    let p: f64 = joint.iter().sum();
    if !(p > tol.p_floor) {
        return Err(Error::EventNeverHappens { p_event: p, floor: tol.p_floor });
    }
    let cond: Vec<f64> = joint.iter().map(|x| x / p).collect();
    let alpha = 1.0 / p;

    let pi = ev.projector().operator();
    let t_pi = tensor_product(&dense_tc(h), pi)?;
    let h_pi = tensor_product(&dense_hc(h)?, pi)?;
    let id_c = HermitianOperator::identity(clock_label(h));
    let hs_joint = tensor_product(&id_c, h.hs())?;

    let psi = h.psi().amplitudes();
    let pi_joint = tensor_product(&id_c, pi)?;
    let pi_psi = pi_joint.matrix() * psi;
    // conditional mean αT⟨A⟩ and centered variance αT‖(A - μ(1 ⊗ Π))Ψ‖²
    let conditional = |a: &HermitianOperator| -> Result<(f64, f64)> {
        let mu = alpha * dense_moments_with(h, a, tol)?.mean;
        let r = a.matrix() * psi - &pi_psi * Complex64::new(mu, 0.0);
        Ok((mu, (alpha * r.norm_squared()).sqrt()))
    };

    let (t_mean, t_std) = conditional(&t_pi)?;
    let (clock_mean, clock_std) = conditional(&h_pi)?;
    let clock = EnergyStats { e_mean: -clock_mean, e_std: clock_std };

    let comm = pi.commutator_max_norm(h.hs())?;
    let commuting = comm <= tol.commuting_gate;
    let system = if commuting {
        let phs = pi.matrix() * h.hs().matrix() * pi.matrix();
        let phs = HermitianOperator::new(
            h.system_space().clone(),
            (&phs + phs.adjoint()) * Complex64::new(0.5, 0.0),
            Units::Energy,
        )?;
        let (mean, std) = conditional(&tensor_product(&id_c, &phs)?)?;
        Some(EnergyStats { e_mean: mean, e_std: std })
    } else {
        None
    };
    let (energy_path, energy) = match system {
        Some(s) => (EnergyPath::Commuting, s),
        None => (EnergyPath::Clock, clock),
    };

    let u = t_pi.matrix() * psi;
    let rob_c = alpha * u.dotc(&(h_pi.matrix() * psi)).im.abs();
    let rob_u = alpha.sqrt() * u.dotc(&(hs_joint.matrix() * psi)).im.abs();

    let delta_hs = uncertainty(h.psi0(), h.hs())?;
    let product_conditional = t_std * energy.e_std;
    let product_unconditional = t_std * delta_hs;
    let bound_unconditional = 0.5 * p.sqrt();
    let mass = boundary_mass(&cond, tol.edge_fraction);

    Ok(EventReport {
        label: ev.label.clone(),
        p_event: p,
        alpha_t: alpha,
        t_mean,
        t_std,
        e_mean: energy.e_mean,
        e_std: energy.e_std,
        energy_path,
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
        robertson_conditional: rob_c,
        robertson_unconditional: rob_u,
        time_centering_gap: t_mean * t_mean * (1.0 - p),
        boundary_mass: mass,
        warnings: boundary_warning(mass, tol.edge_fraction, tol.edge_mass).into_iter().collect(),
        p_t_given_event: cond,
    })
}

/// Largest scaled difference `|x - y| / (1 + max(|x|, |y|))` over every numeric field,
/// or `None` when their discrete fields (label, path, flags, warnings) differ.
pub fn report_distance(a: &EventReport, b: &EventReport) -> Option<f64> {
    if a.label != b.label
        || a.energy_path != b.energy_path
        || a.commuting != b.commuting
        || a.warnings != b.warnings
        || a.system_energy.is_some() != b.system_energy.is_some()
        || a.p_t_given_event.len() != b.p_t_given_event.len()
    {
        return None;
    }
    let rel = |x: f64, y: f64| (x - y).abs() / (1.0 + x.abs().max(y.abs()));
    let mut scalars = vec![
        (a.p_event, b.p_event),
        (a.alpha_t, b.alpha_t),
        (a.t_mean, b.t_mean),
        (a.t_std, b.t_std),
        (a.e_mean, b.e_mean),
        (a.e_std, b.e_std),
        (a.commutator_norm, b.commutator_norm),
        (a.clock_energy.e_mean, b.clock_energy.e_mean),
        (a.clock_energy.e_std, b.clock_energy.e_std),
        (a.delta_hs, b.delta_hs),
        (a.product_conditional, b.product_conditional),
        (a.bound_conditional, b.bound_conditional),
        (a.margin_conditional, b.margin_conditional),
        (a.product_unconditional, b.product_unconditional),
        (a.bound_unconditional, b.bound_unconditional),
        (a.margin_unconditional, b.margin_unconditional),
        (a.robertson_conditional, b.robertson_conditional),
        (a.robertson_unconditional, b.robertson_unconditional),
        (a.time_centering_gap, b.time_centering_gap),
        (a.boundary_mass, b.boundary_mass),
    ];
    if let (Some(x), Some(y)) = (a.system_energy, b.system_energy) {
        scalars.push((x.e_mean, y.e_mean));
        scalars.push((x.e_std, y.e_std));
    }
    scalars.extend(a.p_t_given_event.iter().copied().zip(b.p_t_given_event.iter().copied()));
    Some(scalars.into_iter().map(|(x, y)| rel(x, y)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::build_clock;
    use crate::events::{joint_time_distribution, uncertainty_report};
    use crate::history::build_history;
    use crate::quantum::{Projector, StateVector};

    fn space(n: usize) -> HilbertLabel {
        HilbertLabel::new("system", n).unwrap()
    }

    fn sigma_x() -> HermitianOperator {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        HermitianOperator::new(space(2), CMatrix::from_row_slice(2, 2, &[o, l, l, o]), Units::Energy).unwrap()
    }

    fn rabi(d: usize) -> HistoryState {
        let clock = build_clock(d, 0.2).unwrap();
        build_history(&clock, &sigma_x(), &StateVector::basis(space(2), 0).unwrap()).unwrap()
    }

    #[test]
    fn identity_and_null_events() {
        let h = rabi(16);
        let all = EventSpec::new("all", Projector::identity(space(2)));
        for p in born_rule_joint(&h, &all).unwrap() {
            assert!((p - 1.0 / 16.0).abs() < 1e-14);
        }
        let none = EventSpec::new("none", Projector::zero(space(2)));
        assert!(born_rule_joint(&h, &none).unwrap().iter().all(|p| p.abs() < 1e-15));
    }

    #[test]
    fn joint_matches_structured_path() {
        let h = rabi(32);
        let ev = EventSpec::new("up", Projector::onto_basis(space(2), &[1]).unwrap());
        let a = born_rule_joint(&h, &ev).unwrap();
        let b = joint_time_distribution(&h, &ev).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_time_moment_and_symmetric_energy() {
        let clock = build_clock(16, 0.3).unwrap();
        let zero = HermitianOperator::zero(space(2), Units::Energy);
        let plus = StateVector::normalize(space(2), CVector::from_element(2, Complex64::new(1.0, 0.0))).unwrap();
        let h = build_history(&clock, &zero, &plus).unwrap();
        let pi = Projector::onto_basis(space(2), &[0]).unwrap();
        let grid_mean = clock.times().iter().sum::<f64>() / 16.0;
        let m = dense_moments(&h, &tensor_product(&dense_tc(&h), pi.operator()).unwrap()).unwrap();
        assert!((m.mean - 0.5 * grid_mean).abs() < 1e-13);
        let m = dense_moments(&h, &tensor_product(&dense_hc(&h).unwrap(), pi.operator()).unwrap()).unwrap();
        assert!(m.mean.abs() < 1e-12);
    }

    #[test]
    fn dense_hc_matches_clock_operator() {
        let h = rabi(16);
        let diff = crate::quantum::max_abs(&(dense_hc(&h).unwrap().matrix() - h.clock().hc().matrix()));
        assert!(diff < 1e-11);
    }

    #[test]
    fn cap_is_a_resource_error() {
        let h = rabi(32);
        let tol = Tolerances { oracle_max_dim: 32, ..Tolerances::default() };
        let ev = EventSpec::new("up", Projector::onto_basis(space(2), &[1]).unwrap());
        assert!(matches!(born_rule_joint_with(&h, &ev, &tol), Err(Error::Resource { .. })));
    }

    #[test]
    fn reports_agree_on_rabi() {
        let h = rabi(32);
        let tol = Tolerances::default();
        let ev = EventSpec::new("up", Projector::onto_basis(space(2), &[1]).unwrap());
        let a = oracle_report(&h, &ev, &tol).unwrap();
        let b = uncertainty_report(&h, &ev, &tol).unwrap();
        let dist = report_distance(&a, &b).expect("discrete fields agree");
        assert!(dist < 1e-10, "{dist:e}");
    }
}
