//! Finite quantum clock register.
//!
//! The clock lives on `d` grid points `t_k = (k - d/2)·dt`. Its time operator
//! `Tc` is diagonal in that basis and its energy `Hc = F diag(p) F†` is the
//! discrete momentum conjugate to `Tc`, with `F[k, n] = exp(i p_n t_k)/√d` and
//! the centered frequency grid `p_n = 2π m/(d·dt)`, `m = n - d/2`. For even `d`
//! the value `-π/dt` has no positive partner; it is kept so that `F` stays
//! unitary.
//!
//! No finite pair satisfies `[Tc, Hc] = i` exactly (the trace of a commutator
//! vanishes). The pair is accurate on states whose support stays away from the
//! grid edges, where the periodic wrap-around of the transform lives.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::quantum::{CMatrix, HermitianOperator, HilbertLabel, StateVector, Units, I};

/// Clock dimension, time grid and the conjugate pair `(Tc, Hc)`.
#[derive(Clone)]
pub struct ClockRegister {
    inner: Arc<Inner>,
}

struct Inner {
    space: HilbertLabel,
    dt: f64,
    times: Vec<f64>,
    frequencies: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    tc: OnceLock<HermitianOperator>,
    hc: OnceLock<HermitianOperator>,
}

/// Builds a clock of `d` points spaced `dt`.
pub fn build_clock(d: usize, dt: f64) -> Result<ClockRegister> {
    ClockRegister::new(d, dt)
}

impl ClockRegister {
    pub fn new(d: usize, dt: f64) -> Result<Self> {
        if d < 4 {
            return Err(Error::contract(format!("clock dimension must be at least 4, got {d}")));
        }
        if d % 2 != 0 {
            return Err(Error::contract(format!("clock dimension must be even for the centered transform, got {d}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::contract(format!("clock spacing must be positive, got {dt}")));
        }
        let half = (d / 2) as f64;
        let times = (0..d).map(|k| (k as f64 - half) * dt).collect();
        let dp = 2.0 * std::f64::consts::PI / (d as f64 * dt);
        let frequencies = (0..d).map(|n| (n as f64 - half) * dp).collect();
        let mut planner = FftPlanner::new();
        Ok(ClockRegister {
            inner: Arc::new(Inner {
                space: HilbertLabel::new("clock", d)?,
                dt,
                times,
                frequencies,
                forward: planner.plan_fft_forward(d),
                inverse: planner.plan_fft_inverse(d),
                tc: OnceLock::new(),
                hc: OnceLock::new(),
            }),
        })
    }

    pub fn d(&self) -> usize {
        self.inner.times.len()
    }

    pub fn dt(&self) -> f64 {
        self.inner.dt
    }

    /// Window length `T = d·dt`.
    pub fn total_time(&self) -> f64 {
        self.d() as f64 * self.inner.dt
    }

    /// Energy resolution `2π/T` of the frequency grid.
    pub fn energy_resolution(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.total_time()
    }

    pub fn space(&self) -> &HilbertLabel {
        &self.inner.space
    }

    pub fn times(&self) -> &[f64] {
        &self.inner.times
    }

    /// Eigenvalues of `Hc`, indexed like the columns of `F` (ascending).
    pub fn frequencies(&self) -> &[f64] {
        &self.inner.frequencies
    }

    /// Dense time operator, materialized on first use.
    pub fn tc(&self) -> &HermitianOperator {
        self.inner.tc.get_or_init(|| {
            HermitianOperator::diagonal(self.space().clone(), self.times(), Units::Time)
                .expect("grid length matches clock space")
        })
    }

    /// Dense clock Hamiltonian, materialized on first use.
    pub fn hc(&self) -> &HermitianOperator {
        self.inner.hc.get_or_init(|| {
            let d = self.d();
            let mut e0 = vec![Complex64::new(0.0, 0.0); d];
            e0[0] = Complex64::new(1.0, 0.0);
            // Hc is circulant: Hc[j, l] depends on (j - l) mod d only.
            let col = self.apply_hc(&e0);
            let mut m = CMatrix::zeros(d, d);
            for j in 0..d {
                m[(j, j)] = Complex64::new(col[0].re, 0.0);
                for l in 0..j {
                    let v = col[j - l];
                    m[(j, l)] = v;
                    m[(l, j)] = v.conj();
                }
            }
            HermitianOperator::from_parts_unchecked(self.space().clone(), m, Units::Energy)
        })
    }

    // F[k, n] = s·(-1)^(k+n)·exp(2πi nk/d)/√d with s = (-1)^(d/2).
    fn phase_sign(&self) -> f64 {
        if (self.d() / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Coefficients `F† g` in the `Hc` eigenbasis.
    pub fn to_momentum(&self, g: &[Complex64]) -> Vec<Complex64> {
        let d = self.d();
        assert_eq!(g.len(), d, "clock profile length");
        let mut buf: Vec<Complex64> = g.iter().enumerate().map(|(k, &z)| if k % 2 == 0 { z } else { -z }).collect();
        self.inner.forward.process(&mut buf);
        let scale = self.phase_sign() / (d as f64).sqrt();
        for (n, z) in buf.iter_mut().enumerate() {
            *z *= if n % 2 == 0 { scale } else { -scale };
        }
        buf
    }

    /// Inverse of [`ClockRegister::to_momentum`]: `F ĝ`.
    pub fn from_momentum(&self, ghat: &[Complex64]) -> Vec<Complex64> {
        let d = self.d();
        assert_eq!(ghat.len(), d, "momentum profile length");
        let mut buf: Vec<Complex64> = ghat.iter().enumerate().map(|(n, &z)| if n % 2 == 0 { z } else { -z }).collect();
        self.inner.inverse.process(&mut buf);
        let scale = self.phase_sign() / (d as f64).sqrt();
        for (k, z) in buf.iter_mut().enumerate() {
            *z *= if k % 2 == 0 { scale } else { -scale };
        }
        buf
    }

    /// `Hc g` in `O(d log d)`.
    pub fn apply_hc(&self, g: &[Complex64]) -> Vec<Complex64> {
        let mut ghat = self.to_momentum(g);
        for (z, &p) in ghat.iter_mut().zip(self.frequencies()) {
            *z *= p;
        }
        self.from_momentum(&ghat)
    }

    /// `Tc g`.
    pub fn apply_tc(&self, g: &[Complex64]) -> Vec<Complex64> {
        g.iter().zip(self.times()).map(|(z, &t)| z * t).collect()
    }

    /// `(Σ|ĝ_n|², Σ p_n|ĝ_n|², Σ p_n²|ĝ_n|²)` for an unnormalized profile.
    pub fn momentum_moments(&self, g: &[Complex64]) -> [f64; 3] {
        let ghat = self.to_momentum(g);
        let mut m = [0.0; 3];
        for (z, &p) in ghat.iter().zip(self.frequencies()) {
            let w = z.norm_sqr();
            m[0] += w;
            m[1] += p * w;
            m[2] += p * p * w;
        }
        m
    }

    /// `‖([Tc, Hc] - i)|probe⟩‖`: how far the finite pair is from canonical on `probe`.
    pub fn commutator_residual(&self, probe: &StateVector) -> Result<f64> {
        self.space().ensure_same(probe.space())?;
        let g: Vec<Complex64> = probe.amplitudes().iter().copied().collect();
        let th = self.apply_tc(&self.apply_hc(&g));
        let ht = self.apply_hc(&self.apply_tc(&g));
        let r2: f64 = th.iter().zip(&ht).zip(&g).map(|((a, b), v)| (a - b - I * v).norm_sqr()).sum();
        Ok(r2.sqrt())
    }
}

/// Mid-grid Gaussian probe with amplitude `exp(-(t - center)²/(4 width²))`.
pub fn gaussian_probe(clock: &ClockRegister, center: f64, width: f64) -> Result<StateVector> {
    let amps = clock
        .times()
        .iter()
        .map(|&t| Complex64::new((-(t - center).powi(2) / (4.0 * width * width)).exp(), 0.0))
        .collect::<Vec<_>>();
    StateVector::normalize(clock.space().clone(), nalgebra::DVector::from_vec(amps))
}

/// Commutator residual of a fixed-physical-width Gaussian (`T/16`) centered
/// mid-grid; the convergence diagnostic reported by sweeps.
pub fn reference_commutator_residual(clock: &ClockRegister) -> Result<f64> {
    let probe = gaussian_probe(clock, 0.0, clock.total_time() / 16.0)?;
    clock.commutator_residual(&probe)
}

impl fmt::Debug for ClockRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClockRegister")
            .field("d", &self.d())
            .field("dt", &self.dt())
            .field("total_time", &self.total_time())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use std::f64::consts::PI;

    // Transform matrix written out from its definition.
    fn dense_f(clock: &ClockRegister) -> CMatrix {
        let d = clock.d();
        CMatrix::from_fn(d, d, |k, n| {
            Complex64::from_polar(1.0 / (d as f64).sqrt(), clock.frequencies()[n] * clock.times()[k])
        })
    }

    fn dense_hc(clock: &ClockRegister) -> CMatrix {
        let f = dense_f(clock);
        let p = CMatrix::from_diagonal(&DVector::from_iterator(
            clock.d(),
            clock.frequencies().iter().map(|&p| Complex64::new(p, 0.0)),
        ));
        &f * p * f.adjoint()
    }

    #[test]
    fn grid_arithmetic() {
        let c = build_clock(4, 1.0).unwrap();
        assert_eq!(c.times(), &[-2.0, -1.0, 0.0, 1.0]);
        assert_eq!(build_clock(8, 0.5).unwrap().total_time(), 4.0);
    }

    #[test]
    fn rejects_unsupported_sizes() {
        assert!(matches!(build_clock(2, 1.0), Err(Error::Contract(_))));
        assert!(matches!(build_clock(7, 1.0), Err(Error::Contract(_))));
        assert!(matches!(build_clock(8, 0.0), Err(Error::Contract(_))));
        assert!(matches!(build_clock(8, f64::NAN), Err(Error::Contract(_))));
    }

    #[test]
    fn tc_is_the_grid() {
        let c = build_clock(16, 0.3).unwrap();
        let tc = c.tc().matrix();
        for j in 0..16 {
            for k in 0..16 {
                let expect = if j == k { c.times()[k] } else { 0.0 };
                assert_eq!(tc[(j, k)], Complex64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn hc_matches_definition_and_is_hermitian() {
        for &(d, dt) in &[(4, 1.0), (6, 0.2), (32, 0.05), (64, 0.7)] {
            let c = build_clock(d, dt).unwrap();
            let diff = crate::quantum::max_abs(&(c.hc().matrix() - dense_hc(&c)));
            assert!(diff < 1e-10 * (PI / dt), "d={d}: {diff}");
            assert!(crate::quantum::hermiticity_deviation(c.hc().matrix()) < 1e-10);
        }
    }

    #[test]
    fn hc_diagonal_in_transformed_basis() {
        let c = build_clock(32, 0.25).unwrap();
        let f = dense_f(&c);
        let diag = f.adjoint() * c.hc().matrix() * &f;
        for n in 0..32 {
            for m in 0..32 {
                let expect = if n == m { c.frequencies()[n] } else { 0.0 };
                assert_abs_diff_eq!((diag[(n, m)] - Complex64::new(expect, 0.0)).norm(), 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn transform_matches_dense_and_round_trips() {
        let c = build_clock(12, 0.4).unwrap();
        let g: Vec<Complex64> =
            (0..12).map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64).cos() * 0.3)).collect();
        let dense = dense_f(&c).adjoint() * DVector::from_vec(g.clone());
        let fast = c.to_momentum(&g);
        for (a, b) in fast.iter().zip(dense.iter()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-13);
        }
        let back = c.from_momentum(&fast);
        for (a, b) in back.iter().zip(&g) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn spectrum_spans_nyquist_range() {
        let c = build_clock(256, 0.05).unwrap();
        let spec = c.hc().spectrum().unwrap().eigenvalues().to_vec();
        let lo = spec[0];
        let hi = spec[255];
        assert_abs_diff_eq!(lo, -PI / 0.05, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, PI / 0.05 - c.energy_resolution(), epsilon = 1e-9);
        assert_abs_diff_eq!(lo, -62.83, epsilon = 5e-3);
        // symmetric up to the single unpaired Nyquist value
        for k in 1..128 {
            assert_abs_diff_eq!(spec[k], -spec[256 - k], epsilon = 1e-9);
        }
    }

    #[test]
    fn commutator_residual_matches_dense_oracle() {
        let c = build_clock(16, 0.5).unwrap();
        let tc = c.tc().matrix();
        let hc = dense_hc(&c);
        let comm = tc * &hc - &hc * tc - CMatrix::identity(16, 16) * I;
        for k in [0, 3, 8, 15] {
            let probe = StateVector::basis(c.space().clone(), k).unwrap();
            let dense = (&comm * probe.amplitudes()).norm();
            assert_abs_diff_eq!(c.commutator_residual(&probe).unwrap(), dense, epsilon = 1e-10);
        }
    }

    #[test]
    fn edge_basis_state_is_pathological() {
        for &d in &[16, 64, 256] {
            let c = build_clock(d, 1.0).unwrap();
            let edge = StateVector::basis(c.space().clone(), 0).unwrap();
            let r = c.commutator_residual(&edge).unwrap();
            assert!(r > d as f64 / 10.0, "d={d}: residual {r}");
        }
    }

    #[test]
    fn gaussian_mid_grid_is_canonical() {
        let c = build_clock(256, 0.05).unwrap();
        let probe = gaussian_probe(&c, 0.0, 8.0 * c.dt()).unwrap();
        assert!(c.commutator_residual(&probe).unwrap() <= 1e-6);
    }

    #[test]
    fn uniform_superposition_is_not_canonical() {
        let c = build_clock(4, 1.0).unwrap();
        let amps = DVector::from_element(4, Complex64::new(0.5, 0.0));
        let probe = StateVector::new(c.space().clone(), amps).unwrap();
        assert!(c.commutator_residual(&probe).unwrap() > 0.1);
    }

    #[test]
    fn residual_decreases_with_d_at_fixed_window() {
        let window = 12.8;
        let mut prev = f64::INFINITY;
        for &d in &[64, 128, 256, 512] {
            let c = build_clock(d, window / d as f64).unwrap();
            // physical width one coarse grid step: under-resolved at d = 64
            let probe = gaussian_probe(&c, 0.0, window / 64.0).unwrap();
            let r = c.commutator_residual(&probe).unwrap();
            assert!(r <= 1.1 * prev || r < 1e-12, "d={d}: {r} after {prev}");
            prev = r;
        }
    }
}
