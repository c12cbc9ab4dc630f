//! Central tolerance record.
//!
//! Every threshold used by the library lives here so that a discretization
//! study can tighten or loosen them together. Scenario files may override any
//! field; omitted fields keep their defaults.

use serde::{Deserialize, Serialize};

/// Numerical thresholds in effect for a computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Allowed deviation of a state norm from 1.
    pub norm: f64,
    /// Allowed `max |A - A†|` for Hermitian operators.
    pub hermitian: f64,
    /// Allowed `max |P² - P|` and eigenvalue distance from {0, 1} for projectors.
    pub projector: f64,
    /// Relative bound on the imaginary residual of an expectation value.
    pub expectation_imag: f64,
    /// `max |[Π, Hs]|` below which the event is treated as commuting.
    pub commuting_gate: f64,
    /// Event probability below which conditioning is refused.
    pub p_floor: f64,
    /// Fraction of the time grid (per side) considered the boundary region.
    pub edge_fraction: f64,
    /// Conditional mass in the boundary region above which an event is flagged.
    pub edge_mass: f64,
    /// Largest joint clock-system dimension any constructor will allocate.
    pub max_joint_dim: usize,
    /// Largest joint dimension the dense oracle will form matrices for.
    pub oracle_max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm: 1e-12,
            hermitian: 1e-12,
            projector: 1e-10,
            expectation_imag: 1e-10,
            commuting_gate: 1e-10,
            p_floor: 1e-12,
            edge_fraction: 0.05,
            edge_mass: 0.01,
            max_joint_dim: 1 << 20,
            oracle_max_dim: 1 << 11,
        }
    }
}
