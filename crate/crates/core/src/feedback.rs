//! A resonantly driven, damped qubit under homodyne-mediated feedback.
//!
//! Rates are in units of the effective damping Γ = g²/κ, which is set to 1.
//! The generator is
//!
//! ```text
//! dρ/dt = −i[Ωσx + (σ₊F + Fσ₋)/2, ρ] + D(σ₋ − iF)ρ,   F = λσx
//! ```
//!
//! with `D(O)ρ = OρO† − (O†Oρ + ρO†O)/2`. Matrices use the computational
//! basis with index 0 the ground state |0⟩ and index 1 the excited state |1⟩,
//! so σ₋ = |0⟩⟨1|. The excited population ρ₁₁ is `m[(1,1)]` and the coherence
//! ρ₁₂ = ⟨1|ρ|0⟩ is `m[(1,0)]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{self, trace, Mat2};
use crate::state::{bloch_to_matrix, hermitian_eigenvalues, BlochVector, QubitState};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackParams {
    /// Rabi frequency Ω.
    pub omega: f64,
    /// Feedback strength λ in F = λσx.
    pub lambda: f64,
    /// Initial state cos(α)|0⟩ + sin(α)|1⟩.
    pub alpha: f64,
}

impl FeedbackParams {
    pub fn new(omega: f64, lambda: f64, alpha: f64) -> Result<Self> {
        if !(omega.is_finite() && lambda.is_finite() && alpha.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if omega < 0.0 {
            return Err(Error::InvalidParams(format!("omega = {omega} < 0")));
        }
        if lambda < 0.0 {
            return Err(Error::InvalidParams(format!("lambda = {lambda} < 0")));
        }
        Ok(Self {
            omega,
            lambda,
            alpha,
        })
    }

    /// Undriven model, the setting of the closed-form solution.
    pub fn undriven(lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(0.0, lambda, alpha)
    }

    fn require_undriven(&self) -> Result<()> {
        if self.omega != 0.0 {
            return Err(Error::DrivenAnalytic(self.omega));
        }
        Ok(())
    }

    pub fn feedback_operator(&self) -> Mat2 {
        pauli::sigma_x() * c(self.lambda)
    }

    /// Ωσx + (σ₊F + Fσ₋)/2.
    pub fn hamiltonian(&self) -> Mat2 {
        let f = self.feedback_operator();
        pauli::sigma_x() * c(self.omega)
            + (pauli::sigma_plus() * f + f * pauli::sigma_minus()) * c(0.5)
    }

    /// σ₋ − iF.
    pub fn jump_operator(&self) -> Mat2 {
        pauli::sigma_minus() - self.feedback_operator() * Complex64::i()
    }
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// D(O)ρ = OρO† − (O†Oρ + ρO†O)/2.
pub fn dissipator(o: &Mat2, rho: &Mat2) -> Mat2 {
    let od = o.adjoint();
    let odo = od * o;
    o * rho * od - (odo * rho + rho * odo) * c(0.5)
}

fn commutator_rhs(h: &Mat2, rho: &Mat2) -> Mat2 {
    (h * rho - rho * h) * -Complex64::i()
}

/// Right-hand side of the feedback master equation.
pub fn master_rhs(rho: &Mat2, p: &FeedbackParams) -> Mat2 {
    commutator_rhs(&p.hamiltonian(), rho) + dissipator(&p.jump_operator(), rho)
}

/// Driven decay without feedback: −i[Ωσx, ρ] + D(σ₋)ρ.
pub fn driven_decay_rhs(rho: &Mat2, omega: f64) -> Mat2 {
    commutator_rhs(&(pauli::sigma_x() * c(omega)), rho) + dissipator(&pauli::sigma_minus(), rho)
}

/// Projector onto cos(α)|0⟩ + sin(α)|1⟩.
pub fn initial_matrix(alpha: f64) -> Mat2 {
    let (s, co) = alpha.sin_cos();
    Mat2::new(c(co * co), c(co * s), c(co * s), c(s * s))
}

/// (ρ₁₁, ρ₁₂): excited population and ⟨1|ρ|0⟩.
pub fn elements(m: &Mat2) -> (f64, Complex64) {
    (m[(1, 1)].re, m[(1, 0)])
}

fn from_elements(rho11: f64, rho12: Complex64) -> Mat2 {
    Mat2::new(c(1.0 - rho11), rho12.conj(), rho12, c(rho11))
}

/// Closed-form (ρ₁₁, ρ₁₂) of the undriven model, valid for any real t.
pub fn analytic_elements(p: &FeedbackParams, t: f64) -> (f64, Complex64) {
    let l2 = p.lambda * p.lambda;
    let k = 1.0 + 2.0 * l2;
    let cos2a = (2.0 * p.alpha).cos();
    let sin2a = (2.0 * p.alpha).sin();
    // e^{−kt}[1 + 2e^{kt}λ² − k cos2α] / 2k, with the growing exponential cancelled.
    let rho11 = ((-k * t).exp() * (1.0 - k * cos2a) + 2.0 * l2) / (2.0 * k);
    let envelope = (-0.5 * t).exp() * 0.5 * sin2a;
    let rho12 = if p.lambda <= tolerances::SMALL_LAMBDA {
        Complex64::new(envelope, 0.0)
    } else {
        // (λ − i + i e^{−2tλ²}) / λ = 1 + i·expm1(−2tλ²)/λ
        envelope * Complex64::new(1.0, (-2.0 * t * l2).exp_m1() / p.lambda)
    };
    (rho11, rho12)
}

pub fn analytic_matrix(p: &FeedbackParams, t: f64) -> Mat2 {
    let (rho11, rho12) = analytic_elements(p, t);
    from_elements(rho11, rho12)
}

/// ρ(t) from the closed-form solution; requires Ω = 0.
pub fn analytic_state(p: &FeedbackParams, t: f64) -> Result<QubitState> {
    p.require_undriven()?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(state_from_evolved(&analytic_matrix(p, t)))
}

/// Bloch vector of a Hermitian unit-trace matrix, pulled onto the ball when
/// rounding pushes it just outside.
fn state_from_evolved(m: &Mat2) -> QubitState {
    let px = 2.0 * m[(1, 0)].re;
    let py = 2.0 * m[(1, 0)].im;
    let pz = (m[(0, 0)] - m[(1, 1)]).re;
    let norm = (px * px + py * py + pz * pz).sqrt();
    let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    bloch_to_matrix(BlochVector {
        px: px * scale,
        py: py * scale,
        pz: pz * scale,
    })
}

/// Diagonal state with ρ₁₁ = λ²/(1 + 2λ²); requires Ω = 0.
///
/// At λ = 0 this is the ground state, the endpoint of pure decay.
pub fn steady_state(p: &FeedbackParams) -> Result<QubitState> {
    p.require_undriven()?;
    let l2 = p.lambda * p.lambda;
    let rho11 = l2 / (1.0 + 2.0 * l2);
    Ok(state_from_evolved(&from_elements(
        rho11,
        Complex64::new(0.0, 0.0),
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QubitState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &QubitState)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h <= tolerances::MAX_STEP) {
        return Err(Error::StepTooLarge(h));
    }
    Ok(())
}

fn rk4_step(rho: &Mat2, p: &FeedbackParams, h: f64) -> Mat2 {
    let hc = c(h);
    let k1 = master_rhs(rho, p);
    let k2 = master_rhs(&(rho + k1 * (hc * 0.5)), p);
    let k3 = master_rhs(&(rho + k2 * (hc * 0.5)), p);
    let k4 = master_rhs(&(rho + k3 * hc), p);
    rho + (k1 + (k2 + k3) * c(2.0) + k4) * (hc / 6.0)
}

/// Re-hermitize and renormalize the trace.
fn clean(rho: &Mat2) -> Mat2 {
    let h = (rho + rho.adjoint()) * c(0.5);
    let tr = trace(&h).re;
    h * c(1.0 / tr)
}

fn check_positive(rho: &Mat2, t: f64) -> Result<()> {
    let (min_eigenvalue, _) = hermitian_eigenvalues(rho);
    if min_eigenvalue < -tolerances::POSITIVITY_LOST {
        return Err(Error::PositivityLost { t, min_eigenvalue });
    }
    Ok(())
}

/// Number of uniform steps of size at most `h` covering `span`.
fn step_count(span: f64, h: f64) -> usize {
    ((span / h) - 1e-9).ceil().max(1.0) as usize
}

/// Output times of [`integrate`]: `0, dt, …, t_end` with `dt ≤ h`.
pub fn step_times(t_end: f64, h: f64) -> Result<Vec<f64>> {
    check_step(h)?;
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::NonPositiveTime(t_end));
    }
    let n = step_count(t_end, h);
    let dt = t_end / n as f64;
    Ok((0..=n).map(|k| k as f64 * dt).collect())
}

/// Fixed-step RK4 from the pure initial state of angle α.
///
/// The step is shrunk, if needed, so that a whole number of steps ends
/// exactly at `t_end`. Every step is stored.
pub fn integrate(p: &FeedbackParams, t_end: f64, h: f64) -> Result<Trajectory> {
    let times = step_times(t_end, h)?;
    let mut rho = initial_matrix(p.alpha);
    let mut states = Vec::with_capacity(times.len());
    states.push(state_from_evolved(&rho));
    for w in times.windows(2) {
        rho = clean(&rk4_step(&rho, p, w[1] - w[0]));
        check_positive(&rho, w[1])?;
        states.push(state_from_evolved(&rho));
    }
    Ok(Trajectory { times, states })
}

/// RK4 states at the requested (non-decreasing, non-negative) times.
pub fn evolve_to(p: &FeedbackParams, times: &[f64], h: f64) -> Result<Vec<QubitState>> {
    check_step(h)?;
    let mut rho = initial_matrix(p.alpha);
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target.is_nan() || target < now {
            return Err(Error::InvalidParams(format!(
                "times must be non-decreasing and non-negative, got {target} after {now}"
            )));
        }
        let span = target - now;
        if span > 0.0 {
            let n = step_count(span, h);
            let dt = span / n as f64;
            for k in 1..=n {
                rho = clean(&rk4_step(&rho, p, dt));
                check_positive(&rho, now + k as f64 * dt)?;
            }
        }
        now = target;
        out.push(state_from_evolved(&rho));
    }
    Ok(out)
}
