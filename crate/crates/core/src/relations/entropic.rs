//! Shannon entropy of projective measurements and the Kraus-type entropic bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliObservable;
use crate::state::{expectation, QubitState};
use crate::tolerances;

fn unit_axis(o: &PauliObservable) -> Result<[f64; 3]> {
    if o.is_degenerate() {
        return Err(Error::DegenerateSpectrum);
    }
    let r = o.axis_norm();
    let [x, y, z] = o.axis();
    Ok([x / r, y / r, z / r])
}

/// Probabilities of the (larger, smaller) eigenvalue outcomes, tr(ρ P±).
pub fn outcome_probabilities(s: &QubitState, o: &PauliObservable) -> Result<(f64, f64)> {
    let [x, y, z] = unit_axis(o)?;
    let projector = PauliObservable::new(0.5 * x, 0.5 * y, 0.5 * z, 0.5);
    let plus = expectation(s, &projector).clamp(0.0, 1.0);
    Ok((plus, 1.0 - plus))
}

fn shannon_bits(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// H(O) in bits, in [0, 1] for a qubit.
pub fn entropy_of_measurement(s: &QubitState, o: &PauliObservable) -> Result<f64> {
    let (p, q) = outcome_probabilities(s, o)?;
    Ok(shannon_bits(p) + shannon_bits(q))
}

/// c = max over eigenvector pairs of |⟨ψ_a|φ_b⟩|², which for qubits is
/// (1 + |â·b̂|)/2.
pub fn complementarity_c(a: &PauliObservable, b: &PauliObservable) -> Result<f64> {
    let ua = unit_axis(a)?;
    let ub = unit_axis(b)?;
    let cos = ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2];
    Ok((0.5 * (1.0 + cos.abs())).clamp(0.5, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EurOutcome {
    /// H(A) + H(B).
    pub entropy_sum: f64,
    /// log₂(1/c).
    pub bound: f64,
    /// Set when c = 1 (shared eigenbasis); ratios against `bound` are undefined.
    pub zero_bound: bool,
}

pub fn eur_check(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> Result<EurOutcome> {
    let c = complementarity_c(a, b)?;
    let entropy_sum = entropy_of_measurement(s, a)? + entropy_of_measurement(s, b)?;
    let zero_bound = c >= 1.0 - tolerances::REPRESENTATION;
    let bound = if zero_bound { 0.0 } else { -c.log2() };
    Ok(EurOutcome {
        entropy_sum,
        bound,
        zero_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    const SX: PauliObservable = PauliObservable::sigma_x();
    const SZ: PauliObservable = PauliObservable::sigma_z();

    /// Max squared overlap from numerically diagonalized matrices.
    fn overlap_oracle(a: &PauliObservable, b: &PauliObservable) -> f64 {
        let ea = a.matrix().symmetric_eigen().eigenvectors;
        let eb = b.matrix().symmetric_eigen().eigenvectors;
        let mut best: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let v: Complex64 = ea.column(i).dotc(&eb.column(j));
                best = best.max(v.norm_sqr());
            }
        }
        best
    }

    #[test]
    fn entropy_examples() {
        let g = QubitState::ground();
        assert_abs_diff_eq!(entropy_of_measurement(&g, &SZ).unwrap(), 0.0);
        assert_abs_diff_eq!(entropy_of_measurement(&g, &SX).unwrap(), 1.0);
        let o = PauliObservable::new(0.3, -1.1, 0.5, 4.0);
        assert_abs_diff_eq!(
            entropy_of_measurement(&QubitState::maximally_mixed(), &o).unwrap(),
            1.0
        );
        assert_eq!(
            entropy_of_measurement(&g, &PauliObservable::identity()),
            Err(Error::DegenerateSpectrum)
        );
    }

    #[test]
    fn complementarity_examples() {
        assert_abs_diff_eq!(complementarity_c(&SX, &SZ).unwrap(), 0.5);
        assert_abs_diff_eq!(complementarity_c(&SZ, &SZ.shifted(3.0)).unwrap(), 1.0);
        let h = PauliObservable::new(
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
        );
        let expected = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert_abs_diff_eq!(
            complementarity_c(&SZ, &h).unwrap(),
            expected,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(overlap_oracle(&SZ, &h), expected, epsilon = 1e-12);
    }

    #[test]
    fn complementarity_matches_eigenvector_oracle() {
        let pairs = [
            (
                PauliObservable::new(0.4, -1.0, 0.3, 2.0),
                PauliObservable::new(1.2, 0.5, -0.7, -1.0),
            ),
            (
                PauliObservable::new(0.0, 1.0, 1.0, 0.0),
                PauliObservable::new(-2.0, 0.1, 0.0, 5.0),
            ),
            (
                PauliObservable::new(3.0, 0.0, 0.0, 0.0),
                PauliObservable::new(-1.0, 0.0, 0.0, 0.0),
            ),
        ];
        for (a, b) in pairs {
            assert_abs_diff_eq!(
                complementarity_c(&a, &b).unwrap(),
                overlap_oracle(&a, &b),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn eur_examples() {
        let e = eur_check(&QubitState::maximally_mixed(), &SX, &SZ).unwrap();
        assert_abs_diff_eq!(e.entropy_sum, 2.0);
        assert_abs_diff_eq!(e.bound, 1.0);
        assert!(!e.zero_bound);

        let e = eur_check(&QubitState::ground(), &SZ, &SZ.shifted(1.0)).unwrap();
        assert!(e.zero_bound);
        assert_eq!(e.bound, 0.0);

        let e = eur_check(&QubitState::ground(), &SX, &SZ).unwrap();
        assert_abs_diff_eq!(e.entropy_sum, 1.0);
        assert_abs_diff_eq!(e.bound, 1.0);
    }
}
