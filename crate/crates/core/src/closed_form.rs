//! Expanded Bloch-coordinate expressions for the moments of two qubit observables.
//!
//! These are polynomial in (px, py, pz) and the Pauli coefficients and never
//! build a matrix, so they serve as an independent route against the
//! trace-based functions in [`crate::state`] and [`crate::pauli`].

use crate::pauli::PauliObservable;
use crate::state::BlochVector;

/// (1 − |p|²)/2.
pub fn mixedness(p: &BlochVector) -> f64 {
    0.5 * (1.0 - p.px * p.px - p.py * p.py - p.pz * p.pz)
}

pub fn variance(p: &BlochVector, o: &PauliObservable) -> f64 {
    let BlochVector { px, py, pz } = *p;
    let [a1, a2, a3] = o.axis();
    (1.0 - px * px) * a1 * a1 + (1.0 - py * py) * a2 * a2 + (1.0 - pz * pz) * a3 * a3
        - 2.0 * (py * pz * a2 * a3 + px * a1 * (py * a2 + pz * a3))
}

pub fn commutator_term(p: &BlochVector, a: &PauliObservable, b: &PauliObservable) -> f64 {
    let BlochVector { px, py, pz } = *p;
    let [a1, a2, a3] = a.axis();
    let [b1, b2, b3] = b.axis();
    let v = px * (a3 * b2 - a2 * b3) + py * (a1 * b3 - a3 * b1) + pz * (a2 * b1 - a1 * b2);
    v * v
}

/// The symmetrized covariance before squaring; linear in the b coefficients.
pub fn anticommutator_unsquared(p: &BlochVector, a: &PauliObservable, b: &PauliObservable) -> f64 {
    let BlochVector { px, py, pz } = *p;
    let [a1, a2, a3] = a.axis();
    let [b1, b2, b3] = b.axis();
    ((px * px - 1.0) * a1 + px * (py * a2 + pz * a3)) * b1
        + (px * py * a1 + (py * py - 1.0) * a2 + py * pz * a3) * b2
        + (px * pz * a1 + py * pz * a2 + (pz * pz - 1.0) * a3) * b3
}

pub fn anticommutator_term(p: &BlochVector, a: &PauliObservable, b: &PauliObservable) -> f64 {
    anticommutator_unsquared(p, a, b).powi(2)
}

pub fn trace(o: &PauliObservable) -> f64 {
    2.0 * o.identity
}

pub fn trace_square(o: &PauliObservable) -> f64 {
    let [a1, a2, a3, a4] = o.coefficients();
    2.0 * a1 * a1 + 2.0 * a2 * a2 + 2.0 * a3 * a3 + 2.0 * a4 * a4
}

pub fn trace_product(a: &PauliObservable, b: &PauliObservable) -> f64 {
    let [a1, a2, a3, a4] = a.coefficients();
    let [b1, b2, b3, b4] = b.coefficients();
    2.0 * a1 * b1 + 2.0 * a2 * b2 + 2.0 * a3 * b3 + 2.0 * a4 * b4
}

/// ξ from the coefficient traces: 4 (a⃗ · b⃗) over the traceless parts.
pub fn xi(a: &PauliObservable, b: &PauliObservable) -> f64 {
    2.0 * trace_product(a, b) - trace(a) * trace(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{self, QubitState};
    use approx::assert_abs_diff_eq;

    #[test]
    fn matches_trace_route_on_a_fixed_triple() {
        let p = BlochVector::new(0.2, -0.5, 0.6).unwrap();
        let s = QubitState::from(p);
        let a = PauliObservable::new(1.5, -0.3, 0.7, 2.0);
        let b = PauliObservable::new(-0.4, 2.2, 1.1, -1.0);
        assert_abs_diff_eq!(variance(&p, &a), state::variance(&s, &a), epsilon = 1e-13);
        assert_abs_diff_eq!(
            commutator_term(&p, &a, &b),
            state::commutator_term(&s, &a, &b),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            anticommutator_term(&p, &a, &b),
            state::anticommutator_term(&s, &a, &b),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(mixedness(&p), state::mixedness(&s), epsilon = 1e-15);
        assert_abs_diff_eq!(xi(&a, &b), crate::pauli::xi(&a, &b), epsilon = 1e-13);
    }

    #[test]
    fn unsquared_anticommutator_is_not_the_moment() {
        // The linear expression is the covariance up to sign; only its square is the term.
        let p = BlochVector::new(0.6, 0.0, 0.0).unwrap();
        let a = PauliObservable::sigma_x();
        let b = PauliObservable::new(1.0, 0.0, 1.0, 0.0);
        assert_abs_diff_eq!(anticommutator_unsquared(&p, &a, &b), -0.64, epsilon = 1e-15);
    }
}
