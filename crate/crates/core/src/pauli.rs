//! Hermitian qubit observables in the {σx, σy, σz, I} basis.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances;

pub type Mat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, ONE)
}

pub fn sigma_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// Lowering operator |0⟩⟨1|, with index 0 the ground state.
pub fn sigma_minus() -> Mat2 {
    Mat2::new(ZERO, ONE, ZERO, ZERO)
}

/// Raising operator |1⟩⟨0|.
pub fn sigma_plus() -> Mat2 {
    Mat2::new(ZERO, ZERO, ONE, ZERO)
}

pub(crate) fn trace(m: &Mat2) -> Complex64 {
    m[(0, 0)] + m[(1, 1)]
}

/// Largest elementwise |m - m†|.
pub(crate) fn hermiticity_defect(m: &Mat2) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest elementwise |a - b|.
pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A single-qubit observable `x σx + y σy + z σz + c I` with real coefficients.
///
/// Real coefficients make the matrix Hermitian by construction.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PauliObservable {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub identity: f64,
}

impl PauliObservable {
    pub const fn new(x: f64, y: f64, z: f64, identity: f64) -> Self {
        Self { x, y, z, identity }
    }

    pub const fn sigma_x() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub const fn sigma_y() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0)
    }

    pub const fn sigma_z() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0, 1.0)
    }

    pub fn from_coefficients(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.x, self.y, self.z, self.identity]
    }

    /// Coefficients of the traceless part.
    pub fn axis(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Length of the traceless part; the eigenvalues are `identity ± axis_norm`.
    pub fn axis_norm(&self) -> f64 {
        let [x, y, z] = self.axis();
        (x * x + y * y + z * z).sqrt()
    }

    /// Eigenvalues ordered (larger, smaller).
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.axis_norm();
        (self.identity + r, self.identity - r)
    }

    pub fn is_degenerate(&self) -> bool {
        2.0 * self.axis_norm() <= tolerances::SPECTRAL_GAP
    }

    pub fn matrix(&self) -> Mat2 {
        let c = |v: f64| Complex64::new(v, 0.0);
        Mat2::new(
            c(self.identity + self.z),
            Complex64::new(self.x, -self.y),
            Complex64::new(self.x, self.y),
            c(self.identity - self.z),
        )
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(
            self.x * factor,
            self.y * factor,
            self.z * factor,
            self.identity * factor,
        )
    }

    pub fn shifted(&self, offset: f64) -> Self {
        Self::new(self.x, self.y, self.z, self.identity + offset)
    }
}

impl std::ops::Add for PauliObservable {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
            self.identity + rhs.identity,
        )
    }
}

/// Expands a Hermitian 2×2 matrix over {σx, σy, σz, I}.
pub fn decompose_observable(m: &Mat2) -> Result<PauliObservable> {
    let deviation = hermiticity_defect(m);
    if deviation > tolerances::REPRESENTATION {
        return Err(Error::NotHermitian { deviation });
    }
    let half_trace_with = |p: &Mat2| 0.5 * trace(&(m * p)).re;
    Ok(PauliObservable::new(
        half_trace_with(&sigma_x()),
        half_trace_with(&sigma_y()),
        half_trace_with(&sigma_z()),
        0.5 * trace(m).re,
    ))
}

/// ξ(R, S) = 2 tr(RS) − tr(R) tr(S).
pub fn xi(r: &PauliObservable, s: &PauliObservable) -> f64 {
    let (rm, sm) = (r.matrix(), s.matrix());
    2.0 * trace(&(rm * sm)).re - trace(&rm).re * trace(&sm).re
}

/// ξ(A,A) ξ(B,B) − ξ(A,B)², the Gram determinant weighting the mixedness term.
pub fn xi_gram(a: &PauliObservable, b: &PauliObservable) -> f64 {
    let ab = xi(a, b);
    xi(a, a) * xi(b, b) - ab * ab
}

/// The observable (AB + BA)/2.
pub fn symmetrized_product(a: &PauliObservable, b: &PauliObservable) -> PauliObservable {
    let (am, bm) = (a.matrix(), b.matrix());
    let sym = (am * bm + bm * am) * Complex64::new(0.5, 0.0);
    // Exact Hermitian up to rounding; symmetrize before decomposing.
    let sym = (sym + sym.adjoint()) * Complex64::new(0.5, 0.0);
    decompose_observable(&sym).expect("symmetrized product of Hermitian matrices is Hermitian")
}

/// The observable [A, B]/(2i), whose expectation enters the Robertson bound.
pub fn commutator_observable(a: &PauliObservable, b: &PauliObservable) -> PauliObservable {
    let (am, bm) = (a.matrix(), b.matrix());
    let k = (am * bm - bm * am) * Complex64::new(0.0, -0.5);
    let k = (k + k.adjoint()) * Complex64::new(0.5, 0.0);
    decompose_observable(&k).expect("[A,B]/2i is Hermitian")
}
