//! Single-qubit density matrices in the Bloch representation.
//!
//! The Bloch vector is the stored representation; the 2×2 matrix
//! `(I + px σx + py σy + pz σz)/2` is rebuilt on demand. Expectation values
//! and the commutator/anticommutator moments are evaluated as matrix traces.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{self, hermiticity_defect, trace, Mat2, PauliObservable};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl BlochVector {
    /// Checked constructor; rejects vectors outside the unit ball.
    pub fn new(px: f64, py: f64, pz: f64) -> Result<Self> {
        let v = Self { px, py, pz };
        let norm_sq = v.norm_sq();
        if !norm_sq.is_finite() || norm_sq > 1.0 + tolerances::REPRESENTATION {
            return Err(Error::BlochNormExceeded { norm_sq });
        }
        Ok(v)
    }

    pub fn norm_sq(&self) -> f64 {
        self.px * self.px + self.py * self.py + self.pz * self.pz
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.px, self.py, self.pz]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    bloch: BlochVector,
}

impl QubitState {
    pub fn bloch(&self) -> BlochVector {
        self.bloch
    }

    pub fn matrix(&self) -> Mat2 {
        let BlochVector { px, py, pz } = self.bloch;
        Mat2::new(
            Complex64::new(0.5 * (1.0 + pz), 0.0),
            Complex64::new(0.5 * px, -0.5 * py),
            Complex64::new(0.5 * px, 0.5 * py),
            Complex64::new(0.5 * (1.0 - pz), 0.0),
        )
    }

    pub fn maximally_mixed() -> Self {
        Self {
            bloch: BlochVector::default(),
        }
    }

    /// |0⟩⟨0|, the +1 eigenstate of σz.
    pub fn ground() -> Self {
        Self {
            bloch: BlochVector {
                px: 0.0,
                py: 0.0,
                pz: 1.0,
            },
        }
    }

    /// |1⟩⟨1|.
    pub fn excited() -> Self {
        Self {
            bloch: BlochVector {
                px: 0.0,
                py: 0.0,
                pz: -1.0,
            },
        }
    }

    /// Eigenvalues (1 ± |p|)/2, larger first.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.bloch.norm();
        (0.5 * (1.0 + r), 0.5 * (1.0 - r))
    }

    pub fn expectation(&self, o: &PauliObservable) -> f64 {
        expectation(self, o)
    }

    pub fn variance(&self, o: &PauliObservable) -> f64 {
        variance(self, o)
    }

    pub fn mixedness(&self) -> f64 {
        mixedness(self)
    }
}

impl From<BlochVector> for QubitState {
    fn from(bloch: BlochVector) -> Self {
        bloch_to_matrix(bloch)
    }
}

pub fn bloch_to_matrix(bloch: BlochVector) -> QubitState {
    QubitState { bloch }
}

/// Eigenvalues of a Hermitian 2×2 matrix, smaller first.
pub(crate) fn hermitian_eigenvalues(m: &Mat2) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let off = m[(0, 1)].norm();
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + off * off).sqrt();
    (mean - radius, mean + radius)
}

/// Recovers p_k = tr(m σ_k) from a density matrix.
pub fn matrix_to_bloch(m: &Mat2) -> Result<BlochVector> {
    let deviation = hermiticity_defect(m);
    if deviation > tolerances::REPRESENTATION {
        return Err(Error::NotHermitian { deviation });
    }
    let tr = trace(m).re;
    if (tr - 1.0).abs() > tolerances::REPRESENTATION {
        return Err(Error::TraceNotOne { trace: tr });
    }
    let (min_eigenvalue, _) = hermitian_eigenvalues(m);
    if min_eigenvalue < tolerances::POSITIVITY {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    let px = trace(&(m * pauli::sigma_x())).re;
    let py = trace(&(m * pauli::sigma_y())).re;
    let pz = trace(&(m * pauli::sigma_z())).re;
    // Positivity within -1e-10 admits |p| up to 1 + 2e-10; pull it back onto the ball.
    let norm = (px * px + py * py + pz * pz).sqrt();
    let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    Ok(BlochVector {
        px: px * scale,
        py: py * scale,
        pz: pz * scale,
    })
}

impl TryFrom<&Mat2> for QubitState {
    type Error = Error;

    fn try_from(m: &Mat2) -> Result<Self> {
        matrix_to_bloch(m).map(bloch_to_matrix)
    }
}

/// tr(ρ O).
pub fn expectation(s: &QubitState, o: &PauliObservable) -> f64 {
    trace(&(s.matrix() * o.matrix())).re
}

fn centered(s: &QubitState, o: &PauliObservable) -> Mat2 {
    o.shifted(-expectation(s, o)).matrix()
}

/// Clamps rounding noise in a variance-like quantity to zero.
///
/// Anything more negative than the representation tolerance (scaled by the
/// observable's size) is an arithmetic bug, not noise.
fn clamp_nonnegative(value: f64, scale: f64) -> f64 {
    if value >= 0.0 {
        return value;
    }
    let floor = -tolerances::REPRESENTATION * scale.max(1.0);
    assert!(
        value >= floor,
        "internal consistency: variance {value:e} below {floor:e}"
    );
    0.0
}

/// ⟨O²⟩ − ⟨O⟩², evaluated as ⟨Ǒ²⟩ with Ǒ = O − ⟨O⟩I.
pub fn variance(s: &QubitState, o: &PauliObservable) -> f64 {
    let c = centered(s, o);
    let v = trace(&(s.matrix() * c * c)).re;
    clamp_nonnegative(v, o.axis_norm().powi(2))
}

/// |⟨[A, B]⟩ / 2i|².
pub fn commutator_term(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    let (am, bm) = (a.matrix(), b.matrix());
    let value = trace(&(s.matrix() * (am * bm - bm * am))) / Complex64::new(0.0, 2.0);
    value.re * value.re
}

/// |½⟨{Ǎ, B̌}⟩|² with Ǒ = O − ⟨O⟩I.
pub fn anticommutator_term(s: &QubitState, a: &PauliObservable, b: &PauliObservable) -> f64 {
    let (ac, bc) = (centered(s, a), centered(s, b));
    let value = 0.5 * trace(&(s.matrix() * (ac * bc + bc * ac))).re;
    value * value
}

/// M = 1 − tr(ρ²).
pub fn mixedness(s: &QubitState) -> f64 {
    let purity: f64 = s.matrix().iter().map(|z| z.norm_sqr()).sum();
    1.0 - purity
}

fn uniform_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Pure: uniform on the Bloch sphere. Mixed: uniform over the Bloch ball.
pub fn sample_qubit_state<R: Rng + ?Sized>(rng: &mut R, kind: StateKind) -> QubitState {
    let [x, y, z] = uniform_direction(rng);
    let r = match kind {
        StateKind::Pure => 1.0,
        StateKind::Mixed => rng.random::<f64>().cbrt(),
    };
    QubitState {
        bloch: BlochVector {
            px: r * x,
            py: r * y,
            pz: r * z,
        },
    }
}

pub fn random_qubit_state(seed: u64, kind: StateKind) -> QubitState {
    sample_qubit_state(&mut ChaCha8Rng::seed_from_u64(seed), kind)
}
