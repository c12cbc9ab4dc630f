//! Seeded scenario generators: randomized boundary-clean suites, the oracle
//! corpus, the Rabi qubit and a chiral-lattice wavepacket.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::clock::{build_clock, ClockRegister};
use crate::error::{Error, Result};
use crate::events::{uncertainty_report, EventSpec};
use crate::history::{build_history_with, HistoryState};
use crate::quantum::{evolve, CMatrix, CVector, HermitianOperator, HilbertLabel, Projector, StateVector, Units};
use crate::report::EventReport;
use crate::tolerance::Tolerances;

/// A fully specified clock, system, initial state and event.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub clock: ClockRegister,
    pub hs: HermitianOperator,
    pub psi0: StateVector,
    pub event: EventSpec,
}

impl Scenario {
    pub fn history(&self) -> Result<HistoryState> {
        self.history_with(&Tolerances::default())
    }

    pub fn history_with(&self, tol: &Tolerances) -> Result<HistoryState> {
        build_history_with(&self.clock, &self.hs, &self.psi0, tol)
    }

    pub fn report(&self, tol: &Tolerances) -> Result<EventReport> {
        uncertainty_report(&self.history_with(tol)?, &self.event, tol)
    }
}

pub fn system_space(dim: usize) -> Result<HilbertLabel> {
    HilbertLabel::new("system", dim)
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Hermitian part of a complex Gaussian matrix, rescaled to spectral norm `norm`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize, norm: f64) -> Result<HermitianOperator> {
    let a = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let raw = HermitianOperator::new(system_space(dim)?, h.clone(), Units::Energy)?;
    let current = spectral_norm(&raw)?;
    if current == 0.0 {
        return Ok(raw);
    }
    HermitianOperator::new(system_space(dim)?, h * Complex64::new(norm / current, 0.0), Units::Energy)
}

/// `max |λ|` over the spectrum.
pub fn spectral_norm(h: &HermitianOperator) -> Result<f64> {
    Ok(h.spectrum()?.eigenvalues().iter().fold(0.0_f64, |m, v| m.max(v.abs())))
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Result<StateVector> {
    let v = CVector::from_fn(dim, |_, _| gaussian_complex(rng));
    StateVector::normalize(system_space(dim)?, v)
}

fn random_orthonormal(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<CVector> {
    let a = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    let q = a.qr().q();
    (0..count).map(|j| q.column(j).into_owned()).collect()
}

/// Vector orthogonal to both `a` and `b` in `C³`: `conj(a × b)`.
fn orthogonal_to_pair(a: &CVector, b: &CVector) -> CVector {
    let x = CVector::from_vec(vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]);
    x.map(|z| z.conj())
}

/// Outcome of the boundary-clean construction before any numerics.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Candidate {
    Accepted(Scenario),
    /// `‖Hs‖·dt` exceeded the resolution gate.
    RejectedResolution {
        norm_dt: f64,
    },
}

/// One random qubit (`dim = 2`) or qutrit (`dim = 3`) scenario whose event
/// probability vanishes at both ends of the window.
///
/// The window `T` and the state `ψ(-T/2)` are chosen so that `Π ψ(±T/2) = 0`:
/// a qubit uses one full period `2π/gap` and starts orthogonal to the event;
/// a rank-1 qutrit starts orthogonal to both `Π` and `e^{iHT}Π`; a rank-2
/// qutrit event `1 - |m⟩⟨m|` starts at `m`, a superposition of two
/// eigenvectors, over their beat period.
pub fn random_clean_scenario(rng: &mut ChaCha8Rng, dim: usize, d: usize, max_norm_dt: f64) -> Result<Candidate> {
    if !(dim == 2 || dim == 3) {
        return Err(Error::contract(format!("clean scenarios support dim 2 or 3, got {dim}")));
    }
    let norm = rng.random_range(1.0..5.0);
    let hs = random_hermitian(rng, dim, norm)?;
    let spec = hs.spectrum()?;
    let (w, v) = (spec.eigenvalues().to_vec(), spec.eigenvectors().clone());
    let space = system_space(dim)?;
    let (label, projector, window, start) = if dim == 2 {
        let n = random_state(rng, 2)?.into_amplitudes();
        let perp = CVector::from_vec(vec![-n[1].conj(), n[0].conj()]);
        ("rank1", Projector::from_orthonormal(space.clone(), &[n])?, 2.0 * std::f64::consts::PI / (w[1] - w[0]), perp)
    } else if rng.random::<f64>() < 0.5 {
        let n = random_state(rng, 3)?;
        let window = rng.random_range(0.5..1.5) * 2.0 * std::f64::consts::PI / (w[2] - w[0]);
        let back = evolve(&n, &hs, -window)?;
        let start = orthogonal_to_pair(n.amplitudes(), back.amplitudes());
        ("rank1", Projector::from_orthonormal(space.clone(), &[n.into_amplitudes()])?, window, start)
    } else {
        let i = rng.random_range(0..3usize);
        let j = (i + rng.random_range(1..3usize)) % 3;
        let c = random_state(rng, 2)?.into_amplitudes();
        let m = v.column(i) * c[0] + v.column(j) * c[1];
        let comp: Vec<CVector> = orthonormal_complement(&m);
        (
            "rank2",
            Projector::from_orthonormal(space.clone(), &comp)?,
            2.0 * std::f64::consts::PI / (w[i] - w[j]).abs(),
            m,
        )
    };
    let dt = window / d as f64;
    let norm_dt = norm * dt;
    if norm_dt > max_norm_dt {
        return Ok(Candidate::RejectedResolution { norm_dt });
    }
    let start = StateVector::normalize(space, start)?;
    let psi0 = evolve(&start, &hs, window / 2.0)?;
    Ok(Candidate::Accepted(Scenario {
        name: format!("dim{dim}-{label}"),
        clock: build_clock(d, dt)?,
        hs,
        psi0,
        event: EventSpec::new(label, projector),
    }))
}

/// Orthonormal basis of the complement of a unit vector in `C³`.
fn orthonormal_complement(m: &CVector) -> Vec<CVector> {
    let n = m.len();
    let mut basis: Vec<CVector> = vec![m.normalize()];
    let mut out = Vec::new();
    for e in 0..n {
        let mut x = CVector::from_fn(n, |r, _| Complex64::new(if r == e { 1.0 } else { 0.0 }, 0.0));
        for b in &basis {
            x -= b * b.dotc(&x);
        }
        if x.norm() > 1e-6 {
            let x = x.normalize();
            basis.push(x.clone());
            out.push(x);
        }
        if out.len() == n - 1 {
            break;
        }
    }
    out
}

/// Accepted reports of a randomized suite plus rejection counts.
#[derive(Debug, Clone)]
pub struct CleanSuite {
    pub accepted: Vec<(Scenario, EventReport)>,
    pub rejected_resolution: usize,
    pub rejected_boundary: usize,
}

impl CleanSuite {
    pub fn worst_conditional(&self) -> Option<&EventReport> {
        self.accepted.iter().map(|(_, r)| r).min_by(|a, b| a.product_conditional.total_cmp(&b.product_conditional))
    }
}

/// Alternating qubit and qutrit scenarios until `trials` boundary-clean
/// events have been collected (at most `20·trials` attempts).
pub fn clean_suite(seed: u64, trials: usize, d: usize, tol: &Tolerances) -> Result<CleanSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = CleanSuite { accepted: Vec::with_capacity(trials), rejected_resolution: 0, rejected_boundary: 0 };
    let mut attempts = 0;
    while suite.accepted.len() < trials {
        attempts += 1;
        if attempts > 20 * trials.max(1) {
            return Err(Error::numerical(format!(
                "only {} of {trials} clean scenarios after {} attempts",
                suite.accepted.len(),
                attempts - 1
            )));
        }
        let dim = if suite.accepted.len() % 2 == 0 { 2 } else { 3 };
        match random_clean_scenario(&mut rng, dim, d, 0.05)? {
            Candidate::RejectedResolution { .. } => suite.rejected_resolution += 1,
            Candidate::Accepted(sc) => {
                let report = sc.report(tol)?;
                if report.boundary_clean() {
                    suite.accepted.push((sc, report));
                } else {
                    suite.rejected_boundary += 1;
                }
            }
        }
    }
    Ok(suite)
}

/// Twenty-five small scenarios (clock `d ∈ {8, 16, 32}`, system dimension
/// 2 to 4) for oracle comparison; ten of the events commute with `Hs`.
pub fn oracle_corpus(seed: u64) -> Result<Vec<Scenario>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..25)
        .map(|i| {
            let d = [8, 16, 32][i % 3];
            let dim = 2 + (i / 3) % 3;
            let dt = rng.random_range(0.05..0.5);
            let norm = rng.random_range(0.5..3.0);
            let hs = random_hermitian(&mut rng, dim, norm)?;
            let psi0 = random_state(&mut rng, dim)?;
            let rank = rng.random_range(1..dim);
            let commuting = i % 5 < 2;
            let vectors = if commuting {
                let v = hs.spectrum()?.eigenvectors().clone();
                (0..rank).map(|j| v.column(j).into_owned()).collect()
            } else {
                random_orthonormal(&mut rng, dim, rank)
            };
            Ok(Scenario {
                name: format!("corpus-{i:02}"),
                clock: build_clock(d, dt)?,
                psi0,
                event: EventSpec::new(
                    if commuting { "commuting" } else { "generic" },
                    Projector::from_orthonormal(system_space(dim)?, &vectors)?,
                ),
                hs,
            })
        })
        .collect()
}

/// `σx` qubit starting in `|0⟩`, event `|1⟩⟨1|`.
pub fn rabi(d: usize, dt: f64) -> Result<Scenario> {
    let space = system_space(2)?;
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    let hs = HermitianOperator::new(space.clone(), CMatrix::from_row_slice(2, 2, &[o, l, l, o]), Units::Energy)?;
    Ok(Scenario {
        name: "rabi".into(),
        clock: build_clock(d, dt)?,
        hs,
        psi0: StateVector::basis(space.clone(), 0)?,
        event: EventSpec::new("excited", Projector::onto_basis(space, &[1])?),
    })
}

/// Wavepacket on a ring of `sites` sites (`x = -sites/2 .. sites/2 - 1`) with
/// linear dispersion `E = k`, so it moves at unit speed. The packet
/// `exp(-x²/(4σ²) + i k0 x)` is centered on a single-site detector at `x = 0`
/// at `t = 0`, the middle of the clock window.
pub fn lattice_photon(d: usize, dt: f64, sites: usize, sigma: f64, k0: f64) -> Result<Scenario> {
    // momentum operator of the ring: the Fourier-conjugate generator with unit spacing
    let ring = build_clock(sites, 1.0)?;
    let space = system_space(sites)?;
    let hs = HermitianOperator::new(space.clone(), ring.hc().matrix().clone(), Units::Energy)?;
    let half = (sites / 2) as f64;
    let amps = CVector::from_fn(sites, |j, _| {
        let x = j as f64 - half;
        Complex64::from_polar((-x * x / (4.0 * sigma * sigma)).exp(), k0 * x)
    });
    Ok(Scenario {
        name: "lattice-photon".into(),
        clock: build_clock(d, dt)?,
        hs,
        psi0: StateVector::normalize(space.clone(), amps)?,
        event: EventSpec::new("detector", Projector::onto_basis(space, &[sites / 2])?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_construction_vanishes_at_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = 0;
        for k in 0..40 {
            let dim = 2 + k % 2;
            if let Candidate::Accepted(sc) = random_clean_scenario(&mut rng, dim, 64, 1.0).unwrap() {
                let h = sc.history().unwrap();
                let pi = sc.event.projector().matrix();
                let first = pi * CVector::from_column_slice(h.slice(0));
                let end = evolve(&sc.psi0, &sc.hs, sc.clock.total_time() / 2.0).unwrap();
                let last = pi * end.amplitudes();
                assert!(first.norm() < 1e-9 && last.norm() < 1e-9, "{}", sc.name);
                seen += 1;
            }
        }
        assert!(seen > 30);
    }

    #[test]
    fn random_hermitian_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 3, 4.0).unwrap();
        assert!((spectral_norm(&h).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn corpus_is_reproducible_and_small() {
        let a = oracle_corpus(5).unwrap();
        let b = oracle_corpus(5).unwrap();
        assert_eq!(a.len(), 25);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.hs, y.hs);
            assert_eq!(x.psi0, y.psi0);
            assert!(x.clock.d() <= 32 && x.hs.dim() <= 4);
        }
        assert_eq!(a.iter().filter(|s| s.event.label == "commuting").count(), 10);
    }

    #[test]
    fn lattice_photon_hamiltonian_is_ring_momentum() {
        let sc = lattice_photon(64, 0.25, 32, 3.0, 1.0).unwrap();
        let eig = sc.hs.spectrum().unwrap().eigenvalues().to_vec();
        let dk = 2.0 * std::f64::consts::PI / 32.0;
        assert!((eig[0] + std::f64::consts::PI).abs() < 1e-10);
        assert!((eig[31] - (std::f64::consts::PI - dk)).abs() < 1e-10);
    }
}
