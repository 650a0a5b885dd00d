//! Density matrices in arbitrary dimension, used for the convexity of mixedness.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralState {
    matrix: DMatrix<Complex64>,
}

impl GeneralState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = matrix.nrows();
        if d != matrix.ncols() {
            return Err(Error::DimensionMismatch(d, matrix.ncols()));
        }
        if d == 0 {
            return Err(Error::BadDimension(0));
        }
        let deviation = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > tolerances::REPRESENTATION {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tolerances::REPRESENTATION {
            return Err(Error::TraceNotOne { trace });
        }
        let state = Self { matrix };
        let min_eigenvalue = state.min_eigenvalue();
        if min_eigenvalue < tolerances::POSITIVITY {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(state)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension(dim));
        }
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        Ok(Self {
            matrix: DMatrix::from_diagonal_element(dim, dim, w),
        })
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) nonzero vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || norm_sq == 0.0 {
            return Err(Error::BadDimension(amplitudes.len()));
        }
        let d = amplitudes.len();
        let matrix = DMatrix::from_fn(d, d, |i, j| amplitudes[i] * amplitudes[j].conj() / norm_sq);
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// x ρ_A + (1 − x) ρ_B.
    pub fn mix(a: &Self, b: &Self, x: f64) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(a.dim(), b.dim()));
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::BadWeight(x));
        }
        let matrix = &a.matrix * Complex64::new(x, 0.0) + &b.matrix * Complex64::new(1.0 - x, 0.0);
        Ok(Self { matrix })
    }
}

/// 1 − tr(ρ²), in [0, (d−1)/d].
pub fn mixedness_general(g: &GeneralState) -> f64 {
    1.0 - g.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// Ginibre-ensemble density matrix G G† / tr(G G†).
pub fn sample_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<GeneralState> {
    if dim < 2 {
        return Err(Error::BadDimension(dim));
    }
    // Standard complex Gaussian: real and imaginary parts each with variance 1/2.
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(normal.sample(rng), normal.sample(rng))
    });
    let mut w = &g * g.adjoint();
    let tr = w.trace().re;
    w /= Complex64::new(tr, 0.0);
    // G G† is Hermitian in exact arithmetic; remove the rounding asymmetry.
    let w = (&w + w.adjoint()) * Complex64::new(0.5, 0.0);
    GeneralState::new(w)
}

pub fn random_density_matrix(seed: u64, dim: usize) -> Result<GeneralState> {
    sample_density_matrix(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}
