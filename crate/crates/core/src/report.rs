//! Plain result records shared by the structured event path and the dense oracle.

use serde::{Deserialize, Serialize};

/// Conditional energy mean and RMSE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyStats {
    #[serde(rename = "E_mean")]
    pub e_mean: f64,
    #[serde(rename = "E_std")]
    pub e_std: f64,
}

/// Which conditional-energy definition produced `E_mean`/`E_std`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyPath {
    /// `Π Hs Π` moments; valid when `[Π, Hs] = 0`.
    Commuting,
    /// Moments of `Hπ = Hc ⊗ Π` on the history state.
    Clock,
}

/// Conditional event-time and event-energy statistics with both
/// uncertainty products and their bounds. Units: ħ = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventReport {
    pub label: String,
    /// `P_ev = p(Π)`, probability that the event happens anywhere in the window.
    pub p_event: f64,
    /// Bayes factor `αT = 1/p(Π)`.
    #[serde(rename = "alpha_T")]
    pub alpha_t: f64,
    pub p_t_given_event: Vec<f64>,
    pub t_mean: f64,
    pub t_std: f64,
    #[serde(rename = "E_mean")]
    pub e_mean: f64,
    #[serde(rename = "E_std")]
    pub e_std: f64,
    pub energy_path: EnergyPath,
    /// `[Π, Hs] = 0` within the commuting gate.
    pub commuting: bool,
    /// `max |[Π, Hs]|`.
    pub commutator_norm: f64,
    /// Clock-path moments; always computed.
    pub clock_energy: EnergyStats,
    /// System-path moments; present when the commuting gate passes.
    pub system_energy: Option<EnergyStats>,
    /// Unconditioned `ΔHs` on the initial state.
    pub delta_hs: f64,
    pub product_conditional: f64,
    pub bound_conditional: f64,
    pub margin_conditional: f64,
    pub product_unconditional: f64,
    pub bound_unconditional: f64,
    pub margin_unconditional: f64,
    /// `αT |⟨[Tπ, Hπ]⟩| / 2` with the finite-clock commutator; a rigorous
    /// lower bound on `product_conditional`.
    pub robertson_conditional: f64,
    /// `√αT |⟨[Tπ, 1 ⊗ Hs]⟩| / 2`; a rigorous lower bound on `product_unconditional`.
    pub robertson_unconditional: f64,
    /// `⟨Tπ⟩²(1 - p)/p²`, the amount by which `αT ΔTπ²` exceeds `Δt_ev²`
    /// when the time origin is not centered on the event.
    pub time_centering_gap: f64,
    /// Conditional mass in the outer boundary region of the grid.
    pub boundary_mass: f64,
    pub warnings: Vec<String>,
}

impl EventReport {
    pub fn boundary_clean(&self) -> bool {
        !self.warnings.iter().any(|w| w.starts_with(BOUNDARY_WARNING))
    }
}

pub(crate) const BOUNDARY_WARNING: &str = "boundary";

/// Fraction of `p` in the first and last `ceil(edge_fraction·len)` entries.
pub fn boundary_mass(p: &[f64], edge_fraction: f64) -> f64 {
    let n = p.len();
    let edge = ((edge_fraction * n as f64).ceil() as usize).min(n / 2);
    p[..edge].iter().sum::<f64>() + p[n - edge..].iter().sum::<f64>()
}

pub(crate) fn boundary_warning(mass: f64, edge_fraction: f64, limit: f64) -> Option<String> {
    (mass > limit).then(|| {
        format!(
            "{BOUNDARY_WARNING}: {:.3}% of the conditional mass lies in the outer {:.0}% of the grid (limit {:.1}%)",
            100.0 * mass,
            100.0 * edge_fraction,
            100.0 * limit
        )
    })
}
