//! Numerical thresholds shared across the crate.
//!
//! Representation invariants are exact-algebra checks and use
//! [`REPRESENTATION`]; positivity is looser because eigenvalues of nearly
//! pure states sit at the rounding floor; integrator comparisons carry
//! discretization error and get [`INTEGRATOR`].

/// Hermiticity, unit trace, Bloch-ball membership, round trips.
pub const REPRESENTATION: f64 = 1e-12;

/// Lowest eigenvalue accepted for a density matrix.
pub const POSITIVITY: f64 = -1e-10;

/// Agreement between the RK4 trajectory and the closed-form solution.
pub const INTEGRATOR: f64 = 1e-6;

/// Integration aborts once an eigenvalue falls below minus this value.
pub const POSITIVITY_LOST: f64 = 1e-6;

/// Residual allowed for the variance equality and the derived bounds.
pub const RELATION: f64 = 1e-10;

/// Minimum Gram determinant of the traceless parts for the mixedness estimator.
pub const ESTIMATOR_DENOMINATOR: f64 = 1e-9;

/// Smallest eigenvalue gap counted as a nondegenerate spectrum.
pub const SPECTRAL_GAP: f64 = 1e-9;

/// Tightness ratios are undefined below this denominator.
pub const TIGHTNESS_DENOMINATOR: f64 = 1e-12;

/// Slack for the ordering and lower-bound checks on tightness values.
pub const TIGHTNESS_ORDER: f64 = 1e-9;

/// Largest step accepted by the fixed-step integrator.
pub const MAX_STEP: f64 = 1e-2;

/// Default integration step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Below this feedback strength the closed-form coherence uses its limit.
pub const SMALL_LAMBDA: f64 = 1e-6;
