//! Conditional time and energy of quantum events in a clock-system history state.
//!
//! A finite clock register with Fourier-conjugate `Tc`/`Hc` is entangled with a
//! system into `|Ψ⟩⟩ = d^{-1/2} Σ_k |t_k⟩ ⊗ e^{-iHs t_k}|ψ0⟩`. Conditioning on a
//! system projector `Π` gives the distribution of clock readings at which the
//! event happens, its RMSE `Δt_ev`, and an event energy spread `ΔE_ev`.
//!
//! ```
//! use qevent_core::{build_history, uncertainty_report, scenarios, Tolerances};
//!
//! let sc = scenarios::rabi(256, 0.05).unwrap();
//! let h = build_history(&sc.clock, &sc.hs, &sc.psi0).unwrap();
//! let r = uncertainty_report(&h, &sc.event, &Tolerances::default()).unwrap();
//! assert!(r.product_conditional >= r.robertson_conditional);
//! ```
//!
//! Units: ħ = 1 throughout.

// `!(x > y)` is used on purpose so that NaN fails every guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clock;
pub mod error;
pub mod events;
pub mod history;
pub mod oracle;
pub mod photon;
pub mod quantum;
pub mod report;
pub mod scenarios;
pub mod tolerance;

pub use num_complex::Complex64;

pub use clock::{build_clock, gaussian_probe, reference_commutator_residual, ClockRegister};
pub use error::{Error, Result};
pub use events::{
    commutator_norm, condition_on_event, conditional_energy_clock, conditional_energy_commuting,
    joint_time_distribution, time_statistics, uncertainty_report, Conditioned, EventSpec, TimeStats,
};
pub use history::{build_history, build_history_with, EnergyEquality, HistoryState};
pub use photon::{
    arrival_distribution, frequency_event_report, photon_energy_statistics, time_bandwidth_report, to_time_domain,
    ArrivalEvent, FrequencyEventReport, FrequencyGrid, PhotonEnergy, SpectralAmplitude, TimeBandwidthReport,
};
pub use quantum::{
    evolve, expectation, tensor_product, uncertainty, CMatrix, CVector, HermitianOperator, HilbertLabel, Projector,
    StateVector, TensorProduct, Units,
};
pub use report::{EnergyPath, EnergyStats, EventReport};
pub use tolerance::Tolerances;
