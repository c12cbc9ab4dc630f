//! The timeless clock ⊗ system state
//! `|Ψ⟩⟩ = d^{-1/2} Σ_k |t_k⟩ ⊗ exp(-i Hs t_k)|ψ0⟩`
//! and its constraint diagnostics.
//!
//! The uniform Riemann weight `1/d` replaces `dt/T`, so `|Ψ⟩⟩` is exactly
//! normalized and every clock slice carries `|ψ(t_k)⟩/√d`. The Dirac-type
//! constraint `(Hc ⊗ 1 + 1 ⊗ Hs)|Ψ⟩⟩ = 0` is not imposed; it is measured.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clock::ClockRegister;
use crate::error::{Error, Result};
use crate::quantum::{CVector, HermitianOperator, HilbertLabel, StateVector, Units};
use crate::tolerance::Tolerances;

/// `|Ψ⟩⟩` together with the data it was built from.
#[derive(Debug, Clone)]
pub struct HistoryState {
    clock: ClockRegister,
    hs: HermitianOperator,
    psi0: StateVector,
    psi: StateVector,
}

/// First and second moments of system and clock energy on `|Ψ⟩⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyEquality {
    pub mean_sys: f64,
    pub mean_clock: f64,
    pub std_sys: f64,
    pub std_clock: f64,
}

impl EnergyEquality {
    /// `|⟨Hs⟩ + ⟨Hc⟩|`.
    pub fn mean_discrepancy(&self) -> f64 {
        (self.mean_sys + self.mean_clock).abs()
    }

    /// `|ΔHs - ΔHc|`.
    pub fn std_discrepancy(&self) -> f64 {
        (self.std_sys - self.std_clock).abs()
    }
}

pub fn build_history(clock: &ClockRegister, hs: &HermitianOperator, psi0: &StateVector) -> Result<HistoryState> {
    build_history_with(clock, hs, psi0, &Tolerances::default())
}

pub fn build_history_with(
    clock: &ClockRegister,
    hs: &HermitianOperator,
    psi0: &StateVector,
    tol: &Tolerances,
) -> Result<HistoryState> {
    if hs.units() != Units::Energy {
        return Err(Error::contract("system Hamiltonian must carry energy units"));
    }
    hs.space().ensure_same(psi0.space())?;
    let joint = clock.space().product(hs.space(), tol.max_joint_dim)?;
    let ds = hs.dim();
    let d = clock.d();
    let spec = hs.spectrum()?;
    let coeffs = spec.coefficients(psi0.amplitudes());
    let weight = 1.0 / (d as f64).sqrt();

    let mut amps = vec![Complex64::new(0.0, 0.0); d * ds];
    amps.par_chunks_mut(ds).zip(clock.times().par_iter()).for_each(|(chunk, &t)| {
        let slice = spec.evolve_coefficients(&coeffs, t);
        for (dst, src) in chunk.iter_mut().zip(slice.iter()) {
            *dst = src * weight;
        }
    });
    let psi = StateVector::new_with(joint, DVector::from_vec(amps), tol)?;
    Ok(HistoryState { clock: clock.clone(), hs: hs.clone(), psi0: psi0.clone(), psi })
}

impl HistoryState {
    pub fn clock(&self) -> &ClockRegister {
        &self.clock
    }

    pub fn hs(&self) -> &HermitianOperator {
        &self.hs
    }

    pub fn psi0(&self) -> &StateVector {
        &self.psi0
    }

    /// The joint vector, clock index slowest.
    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    pub fn system_space(&self) -> &HilbertLabel {
        self.hs.space()
    }

    pub fn system_dim(&self) -> usize {
        self.hs.dim()
    }

    /// Amplitudes at clock index `k`, i.e. `|ψ(t_k)⟩/√d`.
    pub fn slice(&self, k: usize) -> &[Complex64] {
        let ds = self.system_dim();
        &self.psi.amplitudes().as_slice()[k * ds..(k + 1) * ds]
    }

    pub fn slices(&self) -> impl Iterator<Item = &[Complex64]> + '_ {
        self.psi.amplitudes().as_slice().chunks(self.system_dim())
    }

    /// Clock profile of system basis component `s`.
    pub fn column(&self, s: usize) -> Vec<Complex64> {
        self.slices().map(|sl| sl[s]).collect()
    }

    /// `‖(Hc ⊗ 1 + 1 ⊗ Hs)|Ψ⟩⟩‖`.
    pub fn constraint_residual(&self) -> f64 {
        let ds = self.system_dim();
        let d = self.clock.d();
        let mut out = vec![Complex64::new(0.0, 0.0); d * ds];
        for s in 0..ds {
            for (k, v) in self.clock.apply_hc(&self.column(s)).into_iter().enumerate() {
                out[k * ds + s] = v;
            }
        }
        let h = self.hs.matrix();
        for (k, sl) in self.slices().enumerate() {
            let hv = h * CVector::from_column_slice(sl);
            for (dst, v) in out[k * ds..(k + 1) * ds].iter_mut().zip(hv.iter()) {
                *dst += v;
            }
        }
        out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// System and clock energy moments on `|Ψ⟩⟩`.
    pub fn energy_equality_check(&self) -> EnergyEquality {
        let h = self.hs.matrix();
        let (mut m1, mut m2) = (0.0, 0.0);
        for sl in self.slices() {
            let v = CVector::from_column_slice(sl);
            let hv = h * &v;
            m1 += v.dotc(&hv).re;
            m2 += hv.norm_squared();
        }
        let mut c = [0.0; 3];
        for s in 0..self.system_dim() {
            let m = self.clock.momentum_moments(&self.column(s));
            for (acc, x) in c.iter_mut().zip(m) {
                *acc += x;
            }
        }
        EnergyEquality {
            mean_sys: m1,
            mean_clock: c[1],
            std_sys: (m2 - m1 * m1).max(0.0).sqrt(),
            std_clock: (c[2] - c[1] * c[1]).max(0.0).sqrt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::build_clock;
    use crate::quantum::{evolve, expectation, CMatrix};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit() -> HilbertLabel {
        HilbertLabel::new("system", 2).unwrap()
    }

    fn sigma_z() -> HermitianOperator {
        HermitianOperator::diagonal(qubit(), &[1.0, -1.0], Units::Energy).unwrap()
    }

    fn sigma_x() -> HermitianOperator {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        HermitianOperator::new(qubit(), m, Units::Energy).unwrap()
    }

    fn ket0() -> StateVector {
        StateVector::basis(qubit(), 0).unwrap()
    }

    #[test]
    fn no_dynamics_gives_uniform_history() {
        let clock = build_clock(4, 1.0).unwrap();
        let h = build_history(&clock, &HermitianOperator::zero(qubit(), Units::Energy), &ket0()).unwrap();
        for k in 0..4 {
            assert_eq!(h.slice(k), &[c(0.5, 0.0), c(0.0, 0.0)]);
        }
    }

    #[test]
    fn eigenstate_slices_carry_phase() {
        let clock = build_clock(8, 0.3).unwrap();
        let h = build_history(&clock, &sigma_z(), &ket0()).unwrap();
        let w = 1.0 / 8f64.sqrt();
        for (k, &t) in clock.times().iter().enumerate() {
            let expect = Complex64::from_polar(w, -t);
            assert_abs_diff_eq!((h.slice(k)[0] - expect).norm(), 0.0, epsilon = 1e-15);
            assert_eq!(h.slice(k)[1], c(0.0, 0.0));
        }
    }

    #[test]
    fn slices_match_per_time_evolution() {
        let clock = build_clock(64, 0.1).unwrap();
        let h = build_history(&clock, &sigma_x(), &ket0()).unwrap();
        let w = 1.0 / 8.0;
        for (k, &t) in clock.times().iter().enumerate() {
            let direct = evolve(&ket0(), &sigma_x(), t).unwrap();
            for (a, b) in h.slice(k).iter().zip(direct.amplitudes().iter()) {
                assert_abs_diff_eq!((a - b * w).norm(), 0.0, epsilon = 1e-12);
            }
            // closed form cos t |0⟩ - i sin t |1⟩
            assert_abs_diff_eq!((h.slice(k)[1] - c(0.0, -t.sin() * w)).norm(), 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(h.psi().norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn joint_dimension_cap() {
        let clock = build_clock(64, 0.1).unwrap();
        let tol = Tolerances { max_joint_dim: 100, ..Tolerances::default() };
        let err = build_history_with(&clock, &sigma_x(), &ket0(), &tol).unwrap_err();
        assert_eq!(err, Error::Resource { requested: 128, cap: 100 });
    }

    #[test]
    fn system_mean_is_conserved_on_history() {
        let clock = build_clock(32, 0.17).unwrap();
        let hs = HermitianOperator::new(
            qubit(),
            CMatrix::from_row_slice(2, 2, &[c(0.3, 0.), c(0.5, -0.2), c(0.5, 0.2), c(-1.1, 0.)]),
            Units::Energy,
        )
        .unwrap();
        let psi0 = StateVector::normalize(qubit(), CVector::from_vec(vec![c(0.6, 0.1), c(0.2, -0.7)])).unwrap();
        let h = build_history(&clock, &hs, &psi0).unwrap();
        let e = h.energy_equality_check();
        assert_abs_diff_eq!(e.mean_sys, expectation(&psi0, &hs).unwrap(), epsilon = 1e-10);
        for &t in clock.times() {
            let st = evolve(&psi0, &hs, t).unwrap();
            assert_abs_diff_eq!(expectation(&st, &hs).unwrap(), e.mean_sys, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_hamiltonian_energy_moments() {
        let clock = build_clock(16, 0.4).unwrap();
        let h = build_history(&clock, &HermitianOperator::zero(qubit(), Units::Energy), &ket0()).unwrap();
        let e = h.energy_equality_check();
        assert_eq!(e.mean_sys, 0.0);
        assert_eq!(e.std_sys, 0.0);
        assert_abs_diff_eq!(e.mean_clock, 0.0, epsilon = 1e-10);
        // the uniform profile is the zero-frequency mode of the periodic grid
        assert!(h.constraint_residual() < 1e-12);
    }

    #[test]
    fn sigma_z_clock_mean_within_tolerance() {
        let clock = build_clock(512, 0.05).unwrap();
        let h = build_history(&clock, &sigma_z(), &ket0()).unwrap();
        let e = h.energy_equality_check();
        assert_eq!(e.mean_sys, 1.0);
        assert!((e.mean_clock + 1.0).abs() <= 0.05, "{e:?}");
    }

    #[test]
    fn constraint_vanishes_for_commensurate_window() {
        // energies ±1 lie on the grid 2π m / T when T = 2π·8
        let d = 512;
        let clock = build_clock(d, 2.0 * PI * 8.0 / d as f64).unwrap();
        assert!(clock.dt() <= 0.1);
        let h = build_history(&clock, &sigma_z(), &ket0()).unwrap();
        assert!(h.constraint_residual() <= 1e-9);
        let e = h.energy_equality_check();
        assert!(e.mean_discrepancy() < 1e-10 && e.std_discrepancy() < 1e-6, "{e:?}");
    }

    #[test]
    fn constraint_residual_matches_dense_application() {
        let clock = build_clock(8, 0.37).unwrap();
        let h = build_history(&clock, &sigma_x(), &ket0()).unwrap();
        let hc = clock.hc().matrix();
        let op = hc.kronecker(&CMatrix::identity(2, 2)) + CMatrix::identity(8, 8).kronecker(sigma_x().matrix());
        let dense = (op * h.psi().amplitudes()).norm();
        assert_abs_diff_eq!(h.constraint_residual(), dense, epsilon = 1e-12);
    }

    #[test]
    fn parallel_build_is_deterministic() {
        let clock = build_clock(256, 0.05).unwrap();
        let a = build_history(&clock, &sigma_x(), &ket0()).unwrap();
        let b = build_history(&clock, &sigma_x(), &ket0()).unwrap();
        assert_eq!(a.psi().amplitudes(), b.psi().amplitudes());
    }
}
