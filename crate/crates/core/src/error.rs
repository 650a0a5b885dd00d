use thiserror::Error;

/// Errors raised by the state, relation, dynamics and tightness layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Bloch vector norm squared {norm_sq} exceeds 1")]
    BlochNormExceeded { norm_sq: f64 },
    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("dimension {0} is not supported, need d >= 2")]
    BadDimension(usize),
    #[error("matrix shapes do not agree ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("mixing weight {0} outside [0, 1]")]
    BadWeight(f64),
    #[error("observable has a degenerate spectrum")]
    DegenerateSpectrum,
    #[error("observables are collinear on the Bloch sphere; the mixedness estimator is undefined")]
    CollinearObservables,
    #[error("measurement record is empty or inconsistent: {0}")]
    BadCounts(String),
    #[error("shots must be at least 1")]
    NoShots,
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("feedback strength must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("invalid feedback parameters: {0}")]
    InvalidParams(String),
    #[error("the closed-form solution requires zero Rabi drive (omega = {0})")]
    DrivenAnalytic(f64),
    #[error("step size {0} outside (0, 1e-2]")]
    StepTooLarge(f64),
    #[error("positivity lost during integration at t = {t} (min eigenvalue {min_eigenvalue:e})")]
    PositivityLost { t: f64, min_eigenvalue: f64 },
    #[error("invalid sweep grid: {0}")]
    BadGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
