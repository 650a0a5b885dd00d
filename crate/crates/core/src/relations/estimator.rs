//! Mixedness from variances and expectations, exactly and from finite shots.
//!
//! Rearranging the variance equality gives
//! `M = 8[(ΔA)²(ΔB)² − |⟨[A,B]⟩/2i|² − (⟨{A,B}⟩/2 − ⟨A⟩⟨B⟩)²] / [ξ(A,A)ξ(B,B) − ξ(A,B)²]`.
//!
//! The finite-shot pathway measures four two-outcome observables: A, B,
//! C = (AB + BA)/2 for the symmetrized moment, and K = [A,B]/2i for the
//! commutator moment. Any of C or K that is a multiple of the identity has
//! an exactly known expectation and is not measured.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{commutator_observable, symmetrized_product, xi_gram, PauliObservable};
use crate::state::{self, QubitState};
use crate::tolerances;

use super::entropic::outcome_probabilities;

fn gram_checked(a: &PauliObservable, b: &PauliObservable) -> Result<f64> {
    let gram = xi_gram(a, b);
    if gram <= tolerances::ESTIMATOR_DENOMINATOR {
        return Err(Error::CollinearObservables);
    }
    Ok(gram)
}

/// Exact mixedness from the moments of A and B.
pub fn estimate_mixedness(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> Result<f64> {
    let gram = gram_checked(a, b)?;
    let numerator = state::variance(s, a) * state::variance(s, b)
        - state::commutator_term(s, a, b)
        - state::anticommutator_term(s, a, b);
    Ok(8.0 * numerator / gram)
}

/// Outcome tallies of a projective measurement of a nondegenerate observable.
///
/// `counts[0]` belongs to the larger eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCounts {
    pub observable: PauliObservable,
    pub eigenvalues: (f64, f64),
    pub counts: [u64; 2],
    pub shots: u64,
}

impl MeasurementCounts {
    pub fn new(observable: PauliObservable, counts: [u64; 2]) -> Result<Self> {
        if observable.is_degenerate() {
            return Err(Error::DegenerateSpectrum);
        }
        let shots = counts[0]
            .checked_add(counts[1])
            .ok_or_else(|| Error::BadCounts("count overflow".into()))?;
        if shots == 0 {
            return Err(Error::NoShots);
        }
        Ok(Self {
            observable,
            eigenvalues: observable.eigenvalues(),
            counts,
            shots,
        })
    }

    /// Relative frequency of the larger eigenvalue.
    pub fn frequency(&self) -> f64 {
        self.counts[0] as f64 / self.shots as f64
    }

    pub fn gap(&self) -> f64 {
        self.eigenvalues.0 - self.eigenvalues.1
    }

    pub fn mean(&self) -> f64 {
        let f = self.frequency();
        self.eigenvalues.0 * f + self.eigenvalues.1 * (1.0 - f)
    }

    /// ⟨O²⟩ from the spectrum and the observed frequencies.
    pub fn second_moment(&self) -> f64 {
        let f = self.frequency();
        self.eigenvalues.0.powi(2) * f + self.eigenvalues.1.powi(2) * (1.0 - f)
    }

    pub fn variance(&self) -> f64 {
        (self.second_moment() - self.mean().powi(2)).max(0.0)
    }

    /// Binomial variance of the estimated frequency.
    fn frequency_variance(&self) -> f64 {
        let f = self.frequency();
        f * (1.0 - f) / self.shots as f64
    }

    fn matches(&self, o: &PauliObservable) -> bool {
        self.observable
            .coefficients()
            .iter()
            .zip(o.coefficients())
            .all(|(x, y)| (x - y).abs() <= tolerances::REPRESENTATION * (1.0 + y.abs()))
    }
}

pub fn sample_shots<R: Rng + ?Sized>(
    rng: &mut R,
    s: &QubitState,
    o: &PauliObservable,
    shots: u64,
) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let (p_plus, _) = outcome_probabilities(s, o)?;
    // The tally of i.i.d. two-outcome draws is binomial; sample it directly.
    let plus = Binomial::new(shots, p_plus)
        .expect("probability clamped to [0, 1]")
        .sample(rng);
    MeasurementCounts::new(*o, [plus, shots - plus])
}

pub fn simulate_shots(
    s: &QubitState,
    o: &PauliObservable,
    shots: u64,
    seed: u64,
) -> Result<MeasurementCounts> {
    sample_shots(&mut ChaCha8Rng::seed_from_u64(seed), s, o, shots)
}

/// Either an exactly known expectation (identity multiples) or measured tallies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ObservableRecord {
    Exact(f64),
    Counts(MeasurementCounts),
}

impl ObservableRecord {
    fn mean(&self) -> f64 {
        match self {
            Self::Exact(v) => *v,
            Self::Counts(c) => c.mean(),
        }
    }

    /// Returns (derivative of the mean w.r.t. frequency, frequency variance).
    fn sensitivity(&self) -> (f64, f64) {
        match self {
            Self::Exact(_) => (0.0, 0.0),
            Self::Counts(c) => (c.gap(), c.frequency_variance()),
        }
    }

    fn check(&self, expected: &PauliObservable, label: &str) -> Result<()> {
        match self {
            Self::Exact(v) => {
                if !expected.is_degenerate() {
                    return Err(Error::BadCounts(format!("{label} must be measured")));
                }
                if (v - expected.identity).abs() > tolerances::REPRESENTATION * (1.0 + v.abs()) {
                    return Err(Error::BadCounts(format!("{label} exact value mismatch")));
                }
                Ok(())
            }
            Self::Counts(c) => {
                if c.matches(expected) {
                    Ok(())
                } else {
                    Err(Error::BadCounts(format!("{label} observable mismatch")))
                }
            }
        }
    }
}

/// Everything the finite-shot estimator consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorCounts {
    pub a: MeasurementCounts,
    pub b: MeasurementCounts,
    /// C = (AB + BA)/2.
    pub symmetrized: ObservableRecord,
    /// K = [A, B]/2i.
    pub commutator: ObservableRecord,
}

fn record<R: Rng + ?Sized>(
    rng: &mut R,
    s: &QubitState,
    o: &PauliObservable,
    shots: u64,
) -> Result<ObservableRecord> {
    if o.is_degenerate() {
        Ok(ObservableRecord::Exact(o.identity))
    } else {
        sample_shots(rng, s, o, shots).map(ObservableRecord::Counts)
    }
}

/// Measures A, B, C and K with `shots` each.
///
/// Each observable draws from its own ChaCha stream of `seed`, so the four
/// records are independent and the result is reproducible.
pub fn measure_for_estimate(
    s: &QubitState,
    a: &PauliObservable,
    b: &PauliObservable,
    shots: u64,
    seed: u64,
) -> Result<EstimatorCounts> {
    gram_checked(a, b)?;
    let stream = |index: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        rng
    };
    Ok(EstimatorCounts {
        a: sample_shots(&mut stream(0), s, a, shots)?,
        b: sample_shots(&mut stream(1), s, b, shots)?,
        symmetrized: record(&mut stream(2), s, &symmetrized_product(a, b), shots)?,
        commutator: record(&mut stream(3), s, &commutator_observable(a, b), shots)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub estimate: f64,
    /// First-order (delta-method) standard error from the binomial variances.
    pub std_error: f64,
}

/// Plugs empirical moments into the mixedness formula.
pub fn estimate_mixedness_from_counts(
    a: &PauliObservable,
    b: &PauliObservable,
    counts: &EstimatorCounts,
) -> Result<ShotEstimate> {
    let gram = gram_checked(a, b)?;
    ObservableRecord::Counts(counts.a).check(a, "A")?;
    ObservableRecord::Counts(counts.b).check(b, "B")?;
    counts
        .symmetrized
        .check(&symmetrized_product(a, b), "(AB+BA)/2")?;
    counts
        .commutator
        .check(&commutator_observable(a, b), "[A,B]/2i")?;

    let (mean_a, mean_b) = (counts.a.mean(), counts.b.mean());
    let (var_a, var_b) = (counts.a.variance(), counts.b.variance());
    let mean_c = counts.symmetrized.mean();
    let mean_k = counts.commutator.mean();
    let covariance = mean_c - mean_a * mean_b;
    let numerator = var_a * var_b - mean_k * mean_k - covariance * covariance;
    let scale = 8.0 / gram;

    // Var(A) = gap² f (1 − f), so d Var(A)/df = gap² (1 − 2f).
    let (gap_a, fvar_a) = (counts.a.gap(), counts.a.frequency_variance());
    let (gap_b, fvar_b) = (counts.b.gap(), counts.b.frequency_variance());
    let (fa, fb) = (counts.a.frequency(), counts.b.frequency());
    let d_a = gap_a * gap_a * (1.0 - 2.0 * fa) * var_b + 2.0 * covariance * mean_b * gap_a;
    let d_b = gap_b * gap_b * (1.0 - 2.0 * fb) * var_a + 2.0 * covariance * mean_a * gap_b;
    let (gap_c, fvar_c) = counts.symmetrized.sensitivity();
    let d_c = -2.0 * covariance * gap_c;
    let (gap_k, fvar_k) = counts.commutator.sensitivity();
    let d_k = -2.0 * mean_k * gap_k;
    let variance =
        d_a * d_a * fvar_a + d_b * d_b * fvar_b + d_c * d_c * fvar_c + d_k * d_k * fvar_k;

    Ok(ShotEstimate {
        estimate: scale * numerator,
        std_error: scale * variance.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::BlochVector;
    use approx::assert_abs_diff_eq;

    const SX: PauliObservable = PauliObservable::sigma_x();
    const SZ: PauliObservable = PauliObservable::sigma_z();

    fn exact_counts(s: &QubitState, o: &PauliObservable, shots: u64) -> MeasurementCounts {
        let (p, _) = outcome_probabilities(s, o).unwrap();
        let plus = (p * shots as f64).round() as u64;
        MeasurementCounts::new(*o, [plus, shots - plus]).unwrap()
    }

    fn exact_record(s: &QubitState, o: &PauliObservable, shots: u64) -> ObservableRecord {
        if o.is_degenerate() {
            ObservableRecord::Exact(o.identity)
        } else {
            ObservableRecord::Counts(exact_counts(s, o, shots))
        }
    }

    #[test]
    fn exact_estimator_examples() {
        assert_abs_diff_eq!(
            estimate_mixedness(&QubitState::maximally_mixed(), &SX, &SZ).unwrap(),
            0.5
        );
        assert_abs_diff_eq!(
            estimate_mixedness(&QubitState::ground(), &SX, &SZ).unwrap(),
            0.0
        );
        let collinear = PauliObservable::new(2.0, 0.0, 0.0, 1.0);
        assert_eq!(
            estimate_mixedness(&QubitState::maximally_mixed(), &SX, &collinear),
            Err(Error::CollinearObservables)
        );
    }

    #[test]
    fn shots_on_an_eigenstate_are_deterministic() {
        let c = simulate_shots(&QubitState::ground(), &SZ, 1000, 99).unwrap();
        assert_eq!(c.counts, [1000, 0]);
        assert_eq!(c.shots, 1000);
    }

    #[test]
    fn shots_follow_binomial_statistics() {
        let c = simulate_shots(&QubitState::maximally_mixed(), &SZ, 1_000_000, 4).unwrap();
        for n in c.counts {
            assert!((n as f64 - 500_000.0).abs() < 3.0 * 500.0, "{n}");
        }
        assert_eq!(
            simulate_shots(&QubitState::maximally_mixed(), &SZ, 1000, 4),
            simulate_shots(&QubitState::maximally_mixed(), &SZ, 1000, 4)
        );
    }

    #[test]
    fn shots_reject_degenerate_and_empty() {
        let s = QubitState::ground();
        assert_eq!(
            simulate_shots(&s, &PauliObservable::identity(), 10, 0),
            Err(Error::DegenerateSpectrum)
        );
        assert_eq!(simulate_shots(&s, &SZ, 0, 0), Err(Error::NoShots));
    }

    #[test]
    fn exact_moment_limit_recovers_mixedness() {
        let shots = 1_000_000_000;
        let s: QubitState = BlochVector::new(0.3, -0.2, 0.4).unwrap().into();
        let a = PauliObservable::new(0.5, 1.0, -0.3, 0.2);
        let b = PauliObservable::new(-1.0, 0.2, 0.7, -0.4);
        let counts = EstimatorCounts {
            a: exact_counts(&s, &a, shots),
            b: exact_counts(&s, &b, shots),
            symmetrized: exact_record(&s, &symmetrized_product(&a, &b), shots),
            commutator: exact_record(&s, &commutator_observable(&a, &b), shots),
        };
        let est = estimate_mixedness_from_counts(&a, &b, &counts).unwrap();
        assert_abs_diff_eq!(est.estimate, state::mixedness(&s), epsilon = 1e-4);
    }

    #[test]
    fn identity_symmetrized_observable_is_not_measured() {
        let counts =
            measure_for_estimate(&QubitState::maximally_mixed(), &SX, &SZ, 1000, 1).unwrap();
        assert_eq!(counts.symmetrized, ObservableRecord::Exact(0.0));
        assert!(matches!(counts.commutator, ObservableRecord::Counts(_)));
    }

    #[test]
    fn maximally_mixed_estimate_within_three_sigma() {
        let s = QubitState::maximally_mixed();
        let counts = measure_for_estimate(&s, &SX, &SZ, 1_000_000, 17).unwrap();
        let est = estimate_mixedness_from_counts(&SX, &SZ, &counts).unwrap();
        assert!(est.std_error > 0.0);
        assert!((est.estimate - 0.5).abs() < 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn mismatched_records_are_rejected() {
        let s = QubitState::maximally_mixed();
        let counts = measure_for_estimate(&s, &SX, &SZ, 100, 1).unwrap();
        let other = PauliObservable::sigma_y();
        assert!(matches!(
            estimate_mixedness_from_counts(&other, &SZ, &counts),
            Err(Error::BadCounts(_))
        ));
        assert_eq!(
            measure_for_estimate(&s, &SX, &SX.scaled(2.0), 100, 1),
            Err(Error::CollinearObservables)
        );
    }
}
