//! Uncertainty relations for a pair of qubit observables.
//!
//! For a single qubit the variance product splits exactly as
//!
//! ```text
//! (ΔA)²(ΔB)² = |⟨[A,B]⟩/2i|² + |⟨{Ǎ,B̌}⟩/2|² + (M/8)·[ξ(A,A)ξ(B,B) − ξ(A,B)²]
//! ```
//!
//! so the Schrödinger bound is saturated by pure states, and dropping the
//! (non-negative) anticommutator term yields a Heisenberg-type bound that
//! still carries the mixedness. The Robertson, Schrödinger, entropic and
//! sum relations are provided alongside as baselines.

mod entropic;
mod estimator;

pub use entropic::{
    complementarity_c, entropy_of_measurement, eur_check, outcome_probabilities, EurOutcome,
};
pub use estimator::{
    estimate_mixedness, estimate_mixedness_from_counts, measure_for_estimate, sample_shots,
    simulate_shots, EstimatorCounts, MeasurementCounts, ObservableRecord, ShotEstimate,
};

use serde::{Deserialize, Serialize};

use crate::pauli::{xi_gram, PauliObservable};
use crate::state::{self, QubitState};

/// Robertson bound |⟨[A,B]⟩/2i|².
pub fn rur_bound(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    state::commutator_term(s, a, b)
}

/// Schrödinger bound: Robertson term plus the squared symmetrized covariance.
pub fn sur_bound(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    state::commutator_term(s, a, b) + state::anticommutator_term(s, a, b)
}

/// The mixedness term (M/8)·[ξ(A,A)ξ(B,B) − ξ(A,B)²].
pub fn equality_remainder(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    0.125 * state::mixedness(s) * xi_gram(a, b)
}

pub fn variance_product(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    state::variance(s, a) * state::variance(s, b)
}

/// Variance product minus the Schrödinger bound minus the mixedness term.
///
/// Zero up to rounding for every state and pair of observables.
pub fn check_equality(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    variance_product(s, a, b) - sur_bound(s, a, b) - equality_remainder(s, a, b)
}

/// Heisenberg-type bound: Robertson term plus the mixedness term.
pub fn eq19_bound(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    rur_bound(s, a, b) + equality_remainder(s, a, b)
}

/// Returns `((ΔA)² + (ΔB)², ½ Δ(A+B)²)`.
pub fn sum_relation(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> (f64, f64) {
    let lhs = state::variance(s, a) + state::variance(s, b);
    let bound = 0.5 * state::variance(s, &(*a + *b));
    (lhs, bound)
}

/// Every variance-type quantity and bound for one (state, A, B) triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    #[serde(rename = "varA")]
    pub var_a: f64,
    #[serde(rename = "varB")]
    pub var_b: f64,
    pub product: f64,
    pub rur_bound: f64,
    pub sur_bound: f64,
    pub eq19_bound: f64,
    pub remainder: f64,
    pub equality_residual: f64,
    pub sum_lhs: f64,
    pub sum_bound: f64,
    /// `None` when either observable has a degenerate spectrum.
    pub entropy_sum: Option<f64>,
    pub entropy_bound: Option<f64>,
}

impl RelationReport {
    pub fn compute(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> Self {
        let var_a = state::variance(s, a);
        let var_b = state::variance(s, b);
        let product = var_a * var_b;
        let rur = rur_bound(s, a, b);
        let anti = state::anticommutator_term(s, a, b);
        let remainder = equality_remainder(s, a, b);
        let (sum_lhs, sum_bound) = sum_relation(s, a, b);
        let eur = eur_check(s, a, b).ok();
        Self {
            var_a,
            var_b,
            product,
            rur_bound: rur,
            sur_bound: rur + anti,
            eq19_bound: rur + remainder,
            remainder,
            equality_residual: product - (rur + anti) - remainder,
            sum_lhs,
            sum_bound,
            entropy_sum: eur.map(|e| e.entropy_sum),
            entropy_bound: eur.map(|e| e.bound),
        }
    }
}
