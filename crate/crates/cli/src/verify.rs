//! The invariant suite behind `verify`.
//!
//! Each check reports its worst residual over the sampled inputs; a check
//! passes when that residual is at most its tolerance. For inequalities the
//! residual is the largest violation (bound minus left side), so negative
//! values mean every sample held with room to spare.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;

use num_complex::Complex64;
use qubit_uncertainty::feedback::{
    analytic_matrix, analytic_state, driven_decay_rhs, integrate, master_rhs, steady_state,
    FeedbackParams,
};
use qubit_uncertainty::general::sample_density_matrix;
use qubit_uncertainty::pauli::xi_gram;
use qubit_uncertainty::relations::{
    check_equality, eq19_bound, equality_remainder, estimate_mixedness,
    estimate_mixedness_from_counts, eur_check, measure_for_estimate, rur_bound, sum_relation,
    sur_bound, variance_product,
};
use qubit_uncertainty::state::sample_qubit_state;
use qubit_uncertainty::tightness::{
    ti1, ti1_analytic_alpha_pi4, ti1_analytic_lambda1, TightnessPoint,
};
use qubit_uncertainty::{
    anticommutator_term, closed_form, commutator_term, decompose_observable, matrix_to_bloch,
    max_abs_diff, mixedness, mixedness_general, variance, BlochVector, Error, GeneralState, Mat2,
    PauliObservable, QubitState, StateKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{emit_json, sink};
use crate::{Context, Failure, Format};

const SX: PauliObservable = PauliObservable::sigma_x();
const SZ: PauliObservable = PauliObservable::sigma_z();

#[derive(Debug, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub property: &'static str,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

struct Suite {
    seed: u64,
    samples: usize,
    checks: Vec<Check>,
}

impl Suite {
    /// A fresh generator per property, so adding a check never shifts the others.
    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.checks.len() as u64);
        rng
    }

    fn record(
        &mut self,
        module: &'static str,
        property: &'static str,
        samples: usize,
        tolerance: f64,
        residual: f64,
    ) {
        self.checks.push(Check {
            module,
            property,
            samples,
            // Adding zero turns a -0.0 residual into 0.0.
            max_residual: residual + 0.0,
            tolerance,
            passed: residual <= tolerance,
        });
    }

    /// Runs `f` on `n` draws and records the worst residual.
    fn sample(
        &mut self,
        module: &'static str,
        property: &'static str,
        n: usize,
        tolerance: f64,
        mut f: impl FnMut(&mut ChaCha8Rng) -> f64,
    ) {
        let mut rng = self.rng();
        let worst = (0..n)
            .map(|_| f(&mut rng))
            .fold(f64::NEG_INFINITY, f64::max);
        self.record(module, property, n, tolerance, worst);
    }
}

fn state(rng: &mut ChaCha8Rng) -> QubitState {
    sample_qubit_state(rng, StateKind::Mixed)
}

fn pure_state(rng: &mut ChaCha8Rng) -> QubitState {
    sample_qubit_state(rng, StateKind::Pure)
}

fn observable(rng: &mut ChaCha8Rng, range: f64) -> PauliObservable {
    PauliObservable::from_coefficients(std::array::from_fn(|_| rng.random_range(-range..range)))
}

/// A pair whose Bloch parts are far from collinear.
fn independent_pair(rng: &mut ChaCha8Rng) -> (PauliObservable, PauliObservable) {
    loop {
        let (a, b) = (observable(rng, 1.0), observable(rng, 1.0));
        if xi_gram(&a, &b) > 0.5 {
            return (a, b);
        }
    }
}

fn trace_of(m: &Mat2) -> f64 {
    (m[(0, 0)] + m[(1, 1)]).re
}

fn qubit_core(suite: &mut Suite) {
    let n = suite.samples;
    suite.sample("qubit_core", "bloch_round_trip", n, 1e-12, |rng| {
        let p = state(rng).bloch();
        let back = matrix_to_bloch(&QubitState::from(p).matrix()).expect("valid state");
        p.as_array()
            .iter()
            .zip(back.as_array())
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max)
    });
    suite.sample("qubit_core", "observable_round_trip", n, 1e-12, |rng| {
        let mut draw = || rng.random_range(-1.0..1.0);
        let (d0, d1, re, im) = (draw(), draw(), draw(), draw());
        let m = Mat2::new(
            Complex64::new(d0, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
            Complex64::new(d1, 0.0),
        );
        max_abs_diff(&decompose_observable(&m).expect("Hermitian").matrix(), &m)
    });
    suite.sample("qubit_core", "variance_shift_invariance", n, 1e-12, |rng| {
        let (s, o) = (state(rng), observable(rng, 1.0));
        let c = rng.random_range(-10.0..10.0);
        (variance(&s, &o.shifted(c)) - variance(&s, &o)).abs()
    });
    suite.sample("qubit_core", "mixedness_definition", n, 1e-12, |rng| {
        let s = state(rng);
        let m = s.matrix();
        (mixedness(&s) - (1.0 - trace_of(&(m * m)))).abs()
    });
    suite.sample(
        "qubit_core",
        "closed_forms_match_matrices",
        n,
        1e-12,
        |rng| {
            let (s, a, b) = (state(rng), observable(rng, 1.0), observable(rng, 1.0));
            let p = s.bloch();
            let unsquared = closed_form::anticommutator_unsquared(&p, &a, &b);
            [
                (closed_form::variance(&p, &a) - variance(&s, &a)).abs(),
                (closed_form::commutator_term(&p, &a, &b) - commutator_term(&s, &a, &b)).abs(),
                (unsquared * unsquared - anticommutator_term(&s, &a, &b)).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        },
    );
    suite.sample("qubit_core", "trace_identities", n, 1e-12, |rng| {
        let (a, b) = (observable(rng, 1.0), observable(rng, 1.0));
        let (am, bm) = (a.matrix(), b.matrix());
        [
            (closed_form::trace(&a) - trace_of(&am)).abs(),
            (closed_form::trace_square(&a) - trace_of(&(am * am))).abs(),
            (closed_form::trace_product(&a, &b) - trace_of(&(am * bm))).abs(),
            (closed_form::xi(&a, &b)
                - (2.0 * trace_of(&(am * bm)) - trace_of(&am) * trace_of(&bm)))
            .abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    });
    for (dim, name) in [
        (2, "mixedness_convexity_d2"),
        (3, "mixedness_convexity_d3"),
        (4, "mixedness_convexity_d4"),
    ] {
        suite.sample("qubit_core", name, n, 1e-12, |rng| {
            let a = sample_density_matrix(rng, dim).expect("dim >= 2");
            let b = sample_density_matrix(rng, dim).expect("dim >= 2");
            let x = rng.random_range(0.0..=1.0);
            let mix = GeneralState::mix(&a, &b, x).expect("x in [0, 1]");
            x * mixedness_general(&a) + (1.0 - x) * mixedness_general(&b) - mixedness_general(&mix)
        });
    }
    suite.sample("qubit_core", "gram_non_negative", n, 1e-12, |rng| {
        -xi_gram(&observable(rng, 1.0), &observable(rng, 1.0))
    });
}

fn relations(suite: &mut Suite) {
    let n = suite.samples;
    suite.sample("relations", "equality_residual", 10 * n, 1e-10, |rng| {
        let (s, a, b) = (state(rng), observable(rng, 5.0), observable(rng, 5.0));
        check_equality(&s, &a, &b).abs()
    });
    suite.sample("relations", "bound_chain", n, 1e-10, |rng| {
        let (s, a, b) = (state(rng), observable(rng, 5.0), observable(rng, 5.0));
        let (product, sur) = (variance_product(&s, &a, &b), sur_bound(&s, &a, &b));
        (sur - product)
            .max(rur_bound(&s, &a, &b) - sur)
            .max(eq19_bound(&s, &a, &b) - product)
    });
    suite.sample("relations", "remainder_non_negative", n, 1e-12, |rng| {
        -equality_remainder(&state(rng), &observable(rng, 1.0), &observable(rng, 1.0))
    });
    suite.sample(
        "relations",
        "remainder_zero_for_pure_states",
        n,
        1e-12,
        |rng| {
            equality_remainder(
                &pure_state(rng),
                &observable(rng, 1.0),
                &observable(rng, 1.0),
            )
            .abs()
        },
    );
    suite.sample("relations", "pure_states_saturate_sur", n, 1e-10, |rng| {
        let (s, a, b) = (pure_state(rng), observable(rng, 5.0), observable(rng, 5.0));
        (variance_product(&s, &a, &b) - sur_bound(&s, &a, &b)).abs()
    });
    suite.sample(
        "relations",
        "estimator_exact_and_pair_independent",
        n,
        1e-10,
        |rng| {
            let s = state(rng);
            let (a, b) = independent_pair(rng);
            let reference = estimate_mixedness(&s, &SX, &SZ).expect("independent pair");
            let other = estimate_mixedness(&s, &a, &b).expect("independent pair");
            (reference - mixedness(&s))
                .abs()
                .max((other - reference).abs())
        },
    );
    suite.sample(
        "relations",
        "estimator_rejects_collinear_pairs",
        n,
        0.0,
        |rng| {
            let a = observable(rng, 1.0);
            let b = a
                .scaled(rng.random_range(-3.0..3.0))
                .shifted(rng.random_range(-3.0..3.0));
            match estimate_mixedness(&state(rng), &a, &b) {
                Err(Error::CollinearObservables) => 0.0,
                _ => 1.0,
            }
        },
    );
    // The delta-method error should fall tenfold between 10^4 and 10^6 shots;
    // the residual is |log2(ratio / 10)|, so a factor of two maps to 1.
    let generic: QubitState = BlochVector::new(0.3, -0.2, 0.4)
        .expect("inside ball")
        .into();
    let seeds = n.clamp(1, 20);
    let base = suite.seed;
    suite.sample("relations", "estimator_error_scaling", seeds, 1.0, |rng| {
        let seed = base.wrapping_add(rng.random::<u32>() as u64);
        let se = |shots| {
            let counts = measure_for_estimate(&generic, &SX, &SZ, shots, seed).expect("valid");
            estimate_mixedness_from_counts(&SX, &SZ, &counts)
                .expect("valid")
                .std_error
        };
        (se(10_000) / se(1_000_000) / 10.0).log2().abs()
    });
    suite.sample("relations", "entropic_relation_mub", n, 1e-10, |rng| {
        let eur = eur_check(&state(rng), &SX, &SZ).expect("nondegenerate");
        1.0 - eur.entropy_sum
    });
    suite.sample("relations", "entropic_relation_random", n, 1e-10, |rng| {
        let (s, (a, b)) = (state(rng), independent_pair(rng));
        let eur = eur_check(&s, &a, &b).expect("nondegenerate");
        eur.bound - eur.entropy_sum
    });
    suite.sample("relations", "sum_relation", 10 * n, 1e-10, |rng| {
        let (lhs, bound) = sum_relation(&state(rng), &observable(rng, 5.0), &observable(rng, 5.0));
        bound - lhs
    });
}

fn random_params(rng: &mut ChaCha8Rng) -> FeedbackParams {
    FeedbackParams::new(
        rng.random_range(0.0..3.0),
        rng.random_range(0.0..1.0),
        rng.random_range(0.0..PI),
    )
    .expect("valid ranges")
}

fn max_deviation(p: &FeedbackParams, h: f64) -> f64 {
    integrate(p, 5.0, h)
        .expect("stable step")
        .iter()
        .map(|(t, s)| max_abs_diff(&s.matrix(), &analytic_matrix(p, t)))
        .fold(0.0, f64::max)
}

fn feedback_sim(suite: &mut Suite) {
    let n = suite.samples;
    suite.sample("feedback_sim", "generator_traceless", n, 1e-12, |rng| {
        let (s, p) = (state(rng), random_params(rng));
        let d = master_rhs(&s.matrix(), &p);
        (d[(0, 0)] + d[(1, 1)]).norm()
    });
    suite.sample("feedback_sim", "zero_feedback_reduction", n, 1e-12, |rng| {
        let (s, omega) = (state(rng), rng.random_range(0.0..3.0));
        let p = FeedbackParams::new(omega, 0.0, 0.0).expect("valid");
        max_abs_diff(
            &master_rhs(&s.matrix(), &p),
            &driven_decay_rhs(&s.matrix(), omega),
        )
    });

    // Central differences of the closed form against the generator on
    // (α, λ, t) ∈ [0, π] × [0.1, 1] × [0, 5]; one-sided at t = 0.
    let delta = 1e-6;
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for i in 0..=8 {
        for j in 0..=6 {
            let p = FeedbackParams::undriven(0.1 + 0.15 * j as f64, PI * i as f64 / 8.0)
                .expect("valid");
            for k in 0..=20 {
                let t = 0.25 * k as f64;
                let c = |v: f64| Complex64::new(v, 0.0);
                let derivative = if k == 0 {
                    (analytic_matrix(&p, delta) * c(4.0)
                        - analytic_matrix(&p, 2.0 * delta)
                        - analytic_matrix(&p, 0.0) * c(3.0))
                        / c(2.0 * delta)
                } else {
                    (analytic_matrix(&p, t + delta) - analytic_matrix(&p, t - delta))
                        / c(2.0 * delta)
                };
                worst = worst.max(max_abs_diff(
                    &derivative,
                    &master_rhs(&analytic_matrix(&p, t), &p),
                ));
                points += 1;
            }
        }
    }
    suite.record(
        "feedback_sim",
        "analytic_solves_master_equation",
        points,
        1e-5,
        worst,
    );

    // Halving h should cut the error about sixteenfold; residual |log2(ratio/16)|.
    // Steps are coarse enough that the error stays well above rounding.
    let mut worst: f64 = 0.0;
    let cases = [(1.0, FRAC_PI_4), (0.5, 1.0), (0.2, FRAC_PI_2)];
    for (lambda, alpha) in cases {
        let p = FeedbackParams::undriven(lambda, alpha).expect("valid");
        let ratio = max_deviation(&p, 1e-2) / max_deviation(&p, 5e-3);
        worst = worst.max((ratio / 16.0).log2().abs());
    }
    suite.record("feedback_sim", "rk4_fourth_order", cases.len(), 1.0, worst);

    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for omega in [0.0, 0.5, 2.0] {
        for lambda in [0.0, 0.5, 1.0] {
            for alpha in [0.0, FRAC_PI_4, FRAC_PI_2, 2.5] {
                let p = FeedbackParams::new(omega, lambda, alpha).expect("valid");
                let residual = match integrate(&p, 5.0, 1e-2) {
                    Ok(traj) => traj
                        .iter()
                        .map(|(_, s)| {
                            let m = s.matrix();
                            (-s.eigenvalues().1).max((trace_of(&m) - 1.0).abs() - 1e-9)
                        })
                        .fold(f64::NEG_INFINITY, f64::max),
                    Err(_) => f64::INFINITY,
                };
                worst = worst.max(residual);
                count += 1;
            }
        }
    }
    suite.record("feedback_sim", "trajectory_positivity", count, 1e-8, worst);

    suite.sample("feedback_sim", "initial_state_pure", n, 1e-12, |rng| {
        let p = FeedbackParams::undriven(rng.random_range(0.0..1.0), rng.random_range(0.0..PI))
            .expect("valid");
        analytic_state(&p, 0.0).expect("t = 0").mixedness().abs()
    });
    suite.sample(
        "feedback_sim",
        "steady_state_is_fixed_point",
        n,
        1e-10,
        |rng| {
            let p = FeedbackParams::undriven(rng.random_range(0.0..1.0), 0.0).expect("valid");
            let s = steady_state(&p).expect("undriven");
            master_rhs(&s.matrix(), &p)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        },
    );
}

fn tightness(suite: &mut Suite) {
    let n = suite.samples;
    suite.sample(
        "tightness",
        "ti1_is_one_plus_covariance_ratio",
        n,
        1e-10,
        |rng| {
            let (s, a, b) = (state(rng), observable(rng, 1.0), observable(rng, 1.0));
            let bound = eq19_bound(&s, &a, &b);
            match ti1(&s, &a, &b) {
                Some(v) => {
                    let expected = 1.0 + anticommutator_term(&s, &a, &b) / bound;
                    (v - expected).abs() / expected.max(1.0)
                }
                None => 0.0,
            }
        },
    );
    suite.sample("tightness", "ratios_at_least_one", n, 1e-9, |rng| {
        let (s, a, b) = (state(rng), observable(rng, 1.0), observable(rng, 1.0));
        let point = TightnessPoint::evaluate(0.0, 0.0, 0.0, &s, &a, &b);
        [point.ti1, point.ti2, point.ti3]
            .into_iter()
            .flatten()
            .map(|v| 1.0 - v)
            .fold(f64::NEG_INFINITY, f64::max)
    });

    let steps = 50;
    let mut worst: f64 = 0.0;
    for i in 1..=steps {
        for k in 1..=steps {
            let t = 3.0 * k as f64 / steps as f64;
            let alpha = PI * i as f64 / (steps + 1) as f64;
            let p = FeedbackParams::undriven(1.0, alpha).expect("valid");
            if let Some(v) = ti1(&analytic_state(&p, t).expect("t > 0"), &SX, &SZ) {
                worst = worst.max((v - ti1_analytic_lambda1(alpha, t).expect("t > 0")).abs());
            }
            let lambda = i as f64 / steps as f64;
            let p = FeedbackParams::undriven(lambda, FRAC_PI_4).expect("valid");
            if let Some(v) = ti1(&analytic_state(&p, t).expect("t > 0"), &SX, &SZ) {
                worst = worst.max((v - ti1_analytic_alpha_pi4(lambda, t).expect("t > 0")).abs());
            }
        }
    }
    suite.record(
        "tightness",
        "printed_formulas_match_pipeline",
        2 * steps * steps,
        1e-9,
        worst,
    );

    suite.sample("tightness", "ti1_scale_shift_invariance", n, 1e-10, |rng| {
        let (s, a, b) = (state(rng), observable(rng, 1.0), observable(rng, 1.0));
        let base = match ti1(&s, &a, &b) {
            Some(v) if eq19_bound(&s, &a, &b) > 1e-4 => v,
            _ => return 0.0,
        };
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let c = sign * rng.random_range(0.25..4.0);
        let d = rng.random_range(-5.0..5.0);
        let moved_a = ti1(&s, &a.scaled(c).shifted(d), &b).unwrap_or(f64::INFINITY);
        let moved_b = ti1(&s, &a, &b.scaled(c).shifted(d)).unwrap_or(f64::INFINITY);
        (moved_a - base).abs().max((moved_b - base).abs()) / base.max(1.0)
    });
}

pub fn run_suite(seed: u64, samples: usize) -> Vec<Check> {
    let mut suite = Suite {
        seed,
        samples,
        checks: Vec::new(),
    };
    qubit_core(&mut suite);
    relations(&mut suite);
    feedback_sim(&mut suite);
    tightness(&mut suite);
    suite.checks
}

#[derive(Serialize)]
struct Summary<'a> {
    seed: u64,
    samples: usize,
    passed: bool,
    checks: &'a [Check],
}

pub fn run(ctx: &Context, samples: usize) -> Result<(), Failure> {
    if samples == 0 {
        return Err(Failure::Config("--samples must be at least 1".into()));
    }
    let checks = run_suite(ctx.seed, samples);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.property)
        .collect();
    match ctx.format {
        Some(Format::Json) => emit_json(
            ctx,
            &Summary {
                seed: ctx.seed,
                samples,
                passed: failed.is_empty(),
                checks: &checks,
            },
        )?,
        Some(Format::Csv) => return Err(Failure::Config("verify writes text or JSON".into())),
        None => {
            let mut w = sink(ctx.output.as_deref())?;
            writeln!(
                w,
                "{:<14} {:<38} {:>8} {:>13} {:>9}  status",
                "module", "property", "samples", "max_residual", "tolerance"
            )?;
            for c in &checks {
                writeln!(
                    w,
                    "{:<14} {:<38} {:>8} {:>13.3e} {:>9.0e}  {}",
                    c.module,
                    c.property,
                    c.samples,
                    c.max_residual,
                    c.tolerance,
                    if c.passed { "ok" } else { "FAIL" }
                )?;
            }
            writeln!(
                w,
                "coverage: {} properties, {} failed",
                checks.len(),
                failed.len()
            )?;
            w.flush()?;
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "properties failed: {}",
            failed.join(", ")
        )))
    }
}
