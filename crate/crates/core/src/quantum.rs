//! Finite-dimensional quantum numerics: labeled spaces, normalized states,
//! Hermitian operators with a cached spectral decomposition, projectors,
//! Kronecker products and spectral time evolution.
//!
//! Units: ħ = 1 throughout.

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Name and dimension of a finite Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertLabel {
    name: String,
    dim: usize,
}

impl HilbertLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::contract("Hilbert space dimension must be at least 1"));
        }
        Ok(HilbertLabel { name: name.into(), dim })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Label of `self ⊗ other`; `self` is the slow (outer) index.
    pub fn product(&self, other: &HilbertLabel, cap: usize) -> Result<HilbertLabel> {
        let requested = self.dim.checked_mul(other.dim).ok_or(Error::Resource { requested: usize::MAX, cap })?;
        if requested > cap {
            return Err(Error::Resource { requested, cap });
        }
        Ok(HilbertLabel { name: format!("{}⊗{}", self.name, other.name), dim: requested })
    }

    pub(crate) fn ensure_same(&self, other: &HilbertLabel) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch { expected: self.to_string(), found: other.to_string() })
        }
    }
}

impl fmt::Display for HilbertLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.dim)
    }
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertLabel,
    amps: CVector,
}

impl StateVector {
    /// Wraps amplitudes that must already have unit norm (within `norm` tolerance).
    pub fn new(space: HilbertLabel, amps: CVector) -> Result<Self> {
        Self::new_with(space, amps, &Tolerances::default())
    }

    pub fn new_with(space: HilbertLabel, amps: CVector, tol: &Tolerances) -> Result<Self> {
        check_len(&space, amps.len())?;
        let norm = amps.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > tol.norm {
            return Err(Error::contract(format!(
                "state on {space} has norm {norm:.17}, expected 1 within {:e}",
                tol.norm
            )));
        }
        Ok(StateVector { space, amps })
    }

    /// Rescales raw amplitudes to unit norm.
    pub fn normalize(space: HilbertLabel, amps: CVector) -> Result<Self> {
        check_len(&space, amps.len())?;
        let norm = amps.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::contract(format!("cannot normalize a state of norm {norm}")));
        }
        Ok(StateVector { space, amps: amps.unscale(norm) })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(space: HilbertLabel, index: usize) -> Result<Self> {
        if index >= space.dim {
            return Err(Error::contract(format!("basis index {index} out of range for {space}")));
        }
        let mut amps = CVector::zeros(space.dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { space, amps })
    }

    pub fn space(&self) -> &HilbertLabel {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.space.ensure_same(&other.space)?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub(crate) fn from_parts_unchecked(space: HilbertLabel, amps: CVector) -> Self {
        debug_assert_eq!(space.dim, amps.len());
        StateVector { space, amps }
    }
}

fn check_len(space: &HilbertLabel, len: usize) -> Result<()> {
    if len != space.dim {
        return Err(Error::contract(format!("{len} amplitudes supplied for {space} of dimension {}", space.dim)));
    }
    Ok(())
}

/// Physical units attached to an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Energy,
    Time,
    Dimensionless,
}

impl Units {
    fn combine(self, other: Units) -> Result<Units> {
        match (self, other) {
            (Units::Dimensionless, u) | (u, Units::Dimensionless) => Ok(u),
            (a, b) => Err(Error::contract(format!(
                "tensor product of two dimensional operators ({a:?} ⊗ {b:?}) has no unit in this library"
            ))),
        }
    }
}

/// Eigen-decomposition `H = V diag(λ) V†` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvectors as columns, in the order of [`Spectrum::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// Coordinates of `amps` in the eigenbasis.
    pub fn coefficients(&self, amps: &CVector) -> CVector {
        self.vectors.ad_mul(amps)
    }

    /// `exp(-i H t)` applied to a state given by its eigenbasis coefficients.
    pub fn evolve_coefficients(&self, coeffs: &CVector, t: f64) -> CVector {
        let phased = CVector::from_iterator(
            coeffs.len(),
            coeffs.iter().zip(&self.values).map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t)),
        );
        &self.vectors * phased
    }

    fn compute(matrix: &CMatrix) -> Result<Spectrum> {
        let eig = matrix.clone().symmetric_eigen();
        let n = matrix.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical("eigendecomposition produced non-finite eigenvalues"));
        }
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(n, values.iter().map(|&v| Complex64::new(v, 0.0))));
        let rebuilt = &vectors * diag * vectors.adjoint();
        let err = max_abs(&(rebuilt - matrix));
        let scale = 1.0 + max_abs(matrix);
        if !(err <= 1e-9 * scale) {
            return Err(Error::numerical(format!(
                "eigendecomposition reconstruction error {err:e} exceeds {:e}",
                1e-9 * scale
            )));
        }
        Ok(Spectrum { values, vectors })
    }
}

/// Dense Hermitian operator with units and a lazily computed spectrum.
pub struct HermitianOperator {
    space: HilbertLabel,
    matrix: CMatrix,
    units: Units,
    spectrum: OnceLock<Arc<Spectrum>>,
}

impl HermitianOperator {
    pub fn new(space: HilbertLabel, matrix: CMatrix, units: Units) -> Result<Self> {
        Self::new_with(space, matrix, units, &Tolerances::default())
    }

    pub fn new_with(space: HilbertLabel, matrix: CMatrix, units: Units, tol: &Tolerances) -> Result<Self> {
        if matrix.nrows() != space.dim || matrix.ncols() != space.dim {
            return Err(Error::contract(format!("{}x{} matrix supplied for {space}", matrix.nrows(), matrix.ncols())));
        }
        if matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::contract("operator has non-finite entries"));
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > tol.hermitian {
            return Err(Error::contract(format!(
                "operator on {space} is not Hermitian: max |A - A†| = {dev:e} > {:e}",
                tol.hermitian
            )));
        }
        Ok(Self::from_parts_unchecked(space, matrix, units))
    }

    /// Real diagonal operator.
    pub fn diagonal(space: HilbertLabel, diag: &[f64], units: Units) -> Result<Self> {
        check_len(&space, diag.len())?;
        let m =
            CMatrix::from_diagonal(&CVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0))));
        Ok(Self::from_parts_unchecked(space, m, units))
    }

    pub fn identity(space: HilbertLabel) -> Self {
        let n = space.dim;
        Self::from_parts_unchecked(space, CMatrix::identity(n, n), Units::Dimensionless)
    }

    pub fn zero(space: HilbertLabel, units: Units) -> Self {
        let n = space.dim;
        Self::from_parts_unchecked(space, CMatrix::zeros(n, n), units)
    }

    pub(crate) fn from_parts_unchecked(space: HilbertLabel, matrix: CMatrix, units: Units) -> Self {
        HermitianOperator { space, matrix, units, spectrum: OnceLock::new() }
    }

    pub fn space(&self) -> &HilbertLabel {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn units(&self) -> Units {
        self.units
    }

    /// Same matrix, relabeled units.
    pub fn with_units(&self, units: Units) -> Self {
        Self::from_parts_unchecked(self.space.clone(), self.matrix.clone(), units)
    }

    /// `max_ij |A_ij|`.
    pub fn max_norm(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// Spectral decomposition, computed on first use and shared afterwards.
    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let computed = Arc::new(Spectrum::compute(&self.matrix)?);
        Ok(self.spectrum.get_or_init(|| computed))
    }

    /// `max |[self, other]|` entrywise.
    pub fn commutator_max_norm(&self, other: &HermitianOperator) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        let c = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Ok(max_abs(&c))
    }

    pub fn apply(&self, psi: &StateVector) -> Result<CVector> {
        self.space.ensure_same(&psi.space)?;
        Ok(&self.matrix * &psi.amps)
    }
}

impl Clone for HermitianOperator {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(Arc::clone(s));
        }
        HermitianOperator { space: self.space.clone(), matrix: self.matrix.clone(), units: self.units, spectrum }
    }
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianOperator")
            .field("space", &self.space)
            .field("units", &self.units)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.units == other.units && self.matrix == other.matrix
    }
}

/// Orthogonal projector: idempotent Hermitian operator with eigenvalues in {0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    op: HermitianOperator,
}

impl Projector {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        Self::new_with(op, &Tolerances::default())
    }

    pub fn new_with(op: HermitianOperator, tol: &Tolerances) -> Result<Self> {
        let m = op.matrix();
        let idem = max_abs(&(m * m - m));
        if idem > tol.projector {
            return Err(Error::contract(format!(
                "operator is not idempotent: max |P² - P| = {idem:e} > {:e}",
                tol.projector
            )));
        }
        let spec = op.spectrum()?;
        if let Some(bad) =
            spec.eigenvalues().iter().find(|&&v| v.abs() > tol.projector && (v - 1.0).abs() > tol.projector)
        {
            return Err(Error::contract(format!("projector has eigenvalue {bad} outside {{0, 1}}")));
        }
        Ok(Projector { op: op.with_units(Units::Dimensionless) })
    }

    /// `Σ |v⟩⟨v|` over the given orthonormal vectors.
    pub fn from_orthonormal(space: HilbertLabel, vectors: &[CVector]) -> Result<Self> {
        let n = space.dim;
        let mut m = CMatrix::zeros(n, n);
        for v in vectors {
            check_len(&space, v.len())?;
            m += v * v.adjoint();
        }
        // Symmetrize away rounding so the Hermitian check is exact.
        let m = (&m + m.adjoint()).unscale(2.0);
        Projector::new(HermitianOperator::from_parts_unchecked(space, m, Units::Dimensionless))
    }

    /// Projector onto a set of computational basis states.
    pub fn onto_basis(space: HilbertLabel, indices: &[usize]) -> Result<Self> {
        let mut diag = vec![0.0; space.dim];
        for &i in indices {
            *diag.get_mut(i).ok_or_else(|| Error::contract(format!("basis index {i} out of range for {space}")))? = 1.0;
        }
        Ok(Projector { op: HermitianOperator::diagonal(space, &diag, Units::Dimensionless)? })
    }

    pub fn zero(space: HilbertLabel) -> Self {
        Projector { op: HermitianOperator::zero(space, Units::Dimensionless) }
    }

    pub fn identity(space: HilbertLabel) -> Self {
        Projector { op: HermitianOperator::identity(space) }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn space(&self) -> &HilbertLabel {
        self.op.space()
    }

    pub fn rank(&self) -> usize {
        self.op.matrix().trace().re.round() as usize
    }
}

/// Kronecker product with the left operand as the slow index.
pub trait TensorProduct: Sized {
    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self>;
}

impl TensorProduct for StateVector {
    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let space = self.space.product(&other.space, cap)?;
        Ok(StateVector { space, amps: self.amps.kronecker(&other.amps) })
    }
}

impl TensorProduct for HermitianOperator {
    fn tensor_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let space = self.space.product(&other.space, cap)?;
        let units = self.units.combine(other.units)?;
        Ok(HermitianOperator::from_parts_unchecked(space, self.matrix.kronecker(&other.matrix), units))
    }
}

/// `a ⊗ b` under the default joint-dimension cap.
pub fn tensor_product<T: TensorProduct>(a: &T, b: &T) -> Result<T> {
    a.tensor_capped(b, Tolerances::default().max_joint_dim)
}

/// `exp(-i H t) |ψ0⟩`, using the operator's cached spectrum.
pub fn evolve(psi0: &StateVector, h: &HermitianOperator, t: f64) -> Result<StateVector> {
    if h.units() != Units::Energy {
        return Err(Error::contract(format!("evolution requires an energy operator, got {:?}", h.units())));
    }
    h.space().ensure_same(psi0.space())?;
    let spec = h.spectrum()?;
    let out = spec.evolve_coefficients(&spec.coefficients(psi0.amplitudes()), t);
    Ok(StateVector::from_parts_unchecked(psi0.space().clone(), out))
}

/// `Re ⟨ψ|A|ψ⟩`, rejecting a non-negligible imaginary residual.
pub fn expectation(psi: &StateVector, a: &HermitianOperator) -> Result<f64> {
    expectation_with(psi, a, &Tolerances::default())
}

pub fn expectation_with(psi: &StateVector, a: &HermitianOperator, tol: &Tolerances) -> Result<f64> {
    a.space().ensure_same(psi.space())?;
    let v = psi.amps.dotc(&(&a.matrix * &psi.amps));
    let bound = tol.expectation_imag * (1.0 + a.max_norm());
    if v.im.abs() > bound {
        return Err(Error::numerical(format!("expectation value has imaginary part {:e} > {bound:e}", v.im)));
    }
    Ok(v.re)
}

/// Standard deviation `sqrt(⟨A²⟩ - ⟨A⟩²)` on `psi`.
pub fn uncertainty(psi: &StateVector, a: &HermitianOperator) -> Result<f64> {
    a.space().ensure_same(psi.space())?;
    let av = &a.matrix * &psi.amps;
    let mean = psi.amps.dotc(&av).re;
    let second = av.norm_squared();
    Ok((second - mean * mean).max(0.0).sqrt())
}

/// `max_ij |A_ij|`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// `max_ij |A_ij - conj(A_ji)|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit() -> HilbertLabel {
        HilbertLabel::new("q", 2).unwrap()
    }

    fn sigma_x() -> HermitianOperator {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        HermitianOperator::new(qubit(), m, Units::Energy).unwrap()
    }

    fn sigma_z() -> HermitianOperator {
        HermitianOperator::diagonal(qubit(), &[1.0, -1.0], Units::Energy).unwrap()
    }

    fn plus() -> StateVector {
        StateVector::new(qubit(), CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)])).unwrap()
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(HilbertLabel::new("x", 0), Err(Error::Contract(_))));
    }

    #[test]
    fn unnormalized_state_rejected_but_normalizable() {
        let raw = CVector::from_vec(vec![c(3., 0.), c(0., 4.)]);
        assert!(StateVector::new(qubit(), raw.clone()).is_err());
        let s = StateVector::normalize(qubit(), raw).unwrap();
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-15);
        assert_eq!(s.amplitudes()[1], c(0., 0.8));
    }

    #[test]
    fn basis_tensor_bookkeeping() {
        let a = StateVector::basis(qubit(), 0).unwrap();
        let b = StateVector::basis(qubit(), 1).unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        assert_eq!(ab.dim(), 4);
        let expected = StateVector::basis(ab.space().clone(), 1).unwrap();
        assert_eq!(ab.amplitudes(), expected.amplitudes());
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = HermitianOperator::identity(qubit());
        let i4 = tensor_product(&i2, &i2).unwrap();
        assert_eq!(i4.matrix(), &CMatrix::identity(4, 4));
        assert_eq!(i4.units(), Units::Dimensionless);
    }

    #[test]
    fn sigma_z_tensor_projector_eigenvalue() {
        let p0 = Projector::onto_basis(qubit(), &[0]).unwrap();
        let op = tensor_product(&sigma_z(), p0.operator()).unwrap();
        let s00 =
            tensor_product(&StateVector::basis(qubit(), 0).unwrap(), &StateVector::basis(qubit(), 0).unwrap()).unwrap();
        let applied = op.apply(&s00).unwrap();
        assert_eq!(applied, s00.amplitudes().clone());
        assert_eq!(expectation(&s00, &op).unwrap(), 1.0);
    }

    #[test]
    fn tensor_cap_is_a_resource_error() {
        let big = HilbertLabel::new("big", 1 << 12).unwrap();
        let a = StateVector::basis(big.clone(), 0).unwrap();
        let err = a.tensor_capped(&a, 1 << 20).unwrap_err();
        assert_eq!(err, Error::Resource { requested: 1 << 24, cap: 1 << 20 });
    }

    #[test]
    fn two_dimensional_units_do_not_combine() {
        let t = sigma_z().with_units(Units::Time);
        assert!(matches!(tensor_product(&t, &sigma_z()), Err(Error::Contract(_))));
    }

    #[test]
    fn evolve_plus_under_sigma_z() {
        let out = evolve(&plus(), &sigma_z(), FRAC_PI_4).unwrap();
        let a = out.amplitudes();
        let e = Complex64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
        assert_abs_diff_eq!((a[0] - e).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((a[1] - e.conj()).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let psi = StateVector::normalize(qubit(), CVector::from_vec(vec![c(0.3, 0.1), c(-0.2, 0.9)])).unwrap();
        let out = evolve(&psi, &sigma_x(), 0.0).unwrap();
        assert_abs_diff_eq!((out.amplitudes() - psi.amplitudes()).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn evolve_matches_taylor_series() {
        // exp(-i σx t) by a 60-term Taylor series, independent of the eigensolver.
        let t = FRAC_PI_4;
        let h = sigma_x();
        let a = h.matrix() * c(0., -t);
        let mut term = CMatrix::identity(2, 2);
        let mut u = CMatrix::identity(2, 2);
        for k in 1..60 {
            term = &term * &a / c(k as f64, 0.);
            u += &term;
        }
        let psi0 = StateVector::basis(qubit(), 0).unwrap();
        let series = &u * psi0.amplitudes();
        let out = evolve(&psi0, &h, t).unwrap();
        assert_abs_diff_eq!((out.amplitudes() - &series).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((series[0] - c(FRAC_PI_4.cos(), 0.)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((series[1] - c(0., -FRAC_PI_4.sin())).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn evolve_requires_energy_units() {
        let t = sigma_z().with_units(Units::Time);
        assert!(matches!(evolve(&plus(), &t, 1.0), Err(Error::Contract(_))));
    }

    #[test]
    fn expectation_examples() {
        let zero = StateVector::basis(qubit(), 0).unwrap();
        assert_eq!(expectation(&zero, &sigma_z()).unwrap(), 1.0);
        assert_abs_diff_eq!(expectation(&plus(), &sigma_z()).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_space_mismatch() {
        let other = HilbertLabel::new("r", 2).unwrap();
        let psi = StateVector::basis(other, 0).unwrap();
        assert!(matches!(expectation(&psi, &sigma_z()), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(HermitianOperator::new(qubit(), m, Units::Energy), Err(Error::Contract(_))));
    }

    #[test]
    fn projector_checks() {
        assert!(Projector::new(sigma_z().with_units(Units::Dimensionless)).is_err());
        let half = HermitianOperator::diagonal(qubit(), &[0.5, 0.0], Units::Dimensionless).unwrap();
        assert!(Projector::new(half).is_err());
        let v = CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.), c(0., FRAC_1_SQRT_2)]);
        let p = Projector::from_orthonormal(qubit(), &[v]).unwrap();
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn spectrum_is_cached_and_shared_by_clones() {
        let h = sigma_x();
        let first = h.spectrum().unwrap() as *const Spectrum;
        assert_eq!(first, h.spectrum().unwrap() as *const Spectrum);
        let h2 = h.clone();
        assert_eq!(first, h2.spectrum().unwrap() as *const Spectrum);
        assert_eq!(h.spectrum().unwrap().eigenvalues(), &[-1.0, 1.0]);
    }
}
