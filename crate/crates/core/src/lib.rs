//! Variance-based uncertainty relations for a single qubit.
//!
//! For any qubit state ρ and Hermitian observables A, B the variance
//! product splits exactly into a commutator term, a symmetrized covariance
//! term and a term proportional to the mixedness M = 1 − tr(ρ²). This crate
//! evaluates that decomposition, inverts it into a mixedness meter (exact
//! and from finite measurement shots), and studies the tightness of the
//! resulting Heisenberg-type bound on a feedback-controlled, damped qubit.
//!
//! Modules:
//! - [`state`], [`pauli`], [`general`]: Bloch-representation states,
//!   observables and d-dimensional density matrices.
//! - [`closed_form`]: expanded polynomial forms of the single-qubit moments.
//! - [`relations`]: Robertson, Schrödinger, entropic and sum relations, the
//!   equality residual and the mixedness estimator.
//! - [`feedback`]: the feedback master equation, its closed-form solution and
//!   an RK4 integrator.
//! - [`tightness`]: tightness ratios and parameter sweeps.

pub mod closed_form;
pub mod error;
pub mod feedback;
pub mod general;
pub mod pauli;
pub mod relations;
pub mod state;
pub mod tightness;
pub mod tolerances;

pub use error::{Error, Result};
pub use general::{mixedness_general, random_density_matrix, GeneralState};
pub use pauli::{decompose_observable, max_abs_diff, xi, Mat2, PauliObservable};
pub use state::{
    anticommutator_term, bloch_to_matrix, commutator_term, expectation, matrix_to_bloch, mixedness,
    random_qubit_state, variance, BlochVector, QubitState, StateKind,
};
