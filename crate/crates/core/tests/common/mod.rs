//! Independent 2×2 complex arithmetic for cross-checking the library.
//!
//! Nothing here calls into the crate's matrix or moment code: states and
//! observables are expanded by hand from their coefficients.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type M = [[C; 2]; 2];

pub fn mul(a: &M, b: &M) -> M {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &M, b: &M) -> M {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn sub(a: &M, b: &M) -> M {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn tr(a: &M) -> C {
    a[0][0] + a[1][1]
}

/// (I + p·σ)/2 written out entrywise.
pub fn rho(p: [f64; 3]) -> M {
    [
        [
            C::new((1.0 + p[2]) / 2.0, 0.0),
            C::new(p[0] / 2.0, -p[1] / 2.0),
        ],
        [
            C::new(p[0] / 2.0, p[1] / 2.0),
            C::new((1.0 - p[2]) / 2.0, 0.0),
        ],
    ]
}

/// a1 σx + a2 σy + a3 σz + a4 I written out entrywise.
pub fn obs(a: [f64; 4]) -> M {
    [
        [C::new(a[3] + a[2], 0.0), C::new(a[0], -a[1])],
        [C::new(a[0], a[1]), C::new(a[3] - a[2], 0.0)],
    ]
}

pub fn expect(r: &M, o: &M) -> f64 {
    tr(&mul(r, o)).re
}

pub fn variance(r: &M, o: &M) -> f64 {
    expect(r, &mul(o, o)) - expect(r, o).powi(2)
}

pub fn commutator_term(r: &M, a: &M, b: &M) -> f64 {
    let c = sub(&mul(a, b), &mul(b, a));
    let v = tr(&mul(r, &c)) / C::new(0.0, 2.0);
    v.re * v.re
}

/// (⟨AB + BA⟩/2 − ⟨A⟩⟨B⟩)², using the un-centred operators.
pub fn anticommutator_term(r: &M, a: &M, b: &M) -> f64 {
    let sym = add(&mul(a, b), &mul(b, a));
    let v = 0.5 * expect(r, &sym) - expect(r, a) * expect(r, b);
    v * v
}

pub fn purity(r: &M) -> f64 {
    tr(&mul(r, r)).re
}

pub fn xi(a: &M, b: &M) -> f64 {
    2.0 * tr(&mul(a, b)).re - tr(a).re * tr(b).re
}

/// Both sides of the variance equality, computed independently.
pub fn equality_sides(p: [f64; 3], a: [f64; 4], b: [f64; 4]) -> (f64, f64) {
    let (r, am, bm) = (rho(p), obs(a), obs(b));
    let lhs = variance(&r, &am) * variance(&r, &bm);
    let gram = xi(&am, &am) * xi(&bm, &bm) - xi(&am, &bm).powi(2);
    let rhs = commutator_term(&r, &am, &bm)
        + anticommutator_term(&r, &am, &bm)
        + (1.0 - purity(&r)) * gram / 8.0;
    (lhs, rhs)
}
