use std::f64::consts::FRAC_PI_4;
use std::io::Write;
use std::path::PathBuf;

use qubit_uncertainty::feedback::{
    analytic_state, elements, integrate, step_times, FeedbackParams,
};
use qubit_uncertainty::relations::{
    estimate_mixedness, estimate_mixedness_from_counts, measure_for_estimate, RelationReport,
};
use qubit_uncertainty::tightness::{
    ordering_summary, sweep as run_sweep, GridAxis, OrderingSummary, SweepGrid, SweepSource,
};
use qubit_uncertainty::{max_abs_diff, mixedness, BlochVector, Error, PauliObservable, QubitState};
use serde::Serialize;

use crate::output::{emit_json, sink, write_csv, write_json};
use crate::{Context, Failure, Format, PairArgs, SimulateArgs, Source, SweepArgs};

fn finite(name: &str, values: &[f64]) -> Result<(), Failure> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Failure::Config(format!("{name}: {v} is not finite"))),
        None => Ok(()),
    }
}

fn parse_pair(pair: &PairArgs) -> Result<(QubitState, PauliObservable, PauliObservable), Failure> {
    finite("--bloch", &pair.bloch)?;
    finite("--obs-a", &pair.obs_a)?;
    finite("--obs-b", &pair.obs_b)?;
    let [x, y, z] = pair.bloch;
    Ok((
        BlochVector::new(x, y, z)?.into(),
        PauliObservable::from_coefficients(pair.obs_a),
        PauliObservable::from_coefficients(pair.obs_b),
    ))
}

#[derive(Serialize)]
struct ReportOutput {
    #[serde(flatten)]
    report: RelationReport,
    mixedness: f64,
    mixedness_estimate: Option<f64>,
    mixedness_estimate_reason: Option<&'static str>,
}

pub fn report(ctx: &Context, pair: &PairArgs) -> Result<(), Failure> {
    let (s, a, b) = parse_pair(pair)?;
    let (estimate, reason) = match estimate_mixedness(&s, &a, &b) {
        Ok(v) => (Some(v), None),
        Err(Error::CollinearObservables) => (None, Some("collinear")),
        Err(e) => return Err(e.into()),
    };
    let out = ReportOutput {
        report: RelationReport::compute(&s, &a, &b),
        mixedness: mixedness(&s),
        mixedness_estimate: estimate,
        mixedness_estimate_reason: reason,
    };
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(ctx, &out),
        Format::Csv => {
            let value = serde_json::to_value(&out).expect("report serializes");
            let fields = value.as_object().expect("report is an object");
            let header: Vec<&str> = fields.keys().map(String::as_str).collect();
            let row: Vec<String> = fields
                .values()
                .map(|v| match v {
                    serde_json::Value::Null => String::new(),
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            let mut w = sink(ctx.output.as_deref())?;
            let mut out = csv::Writer::from_writer(&mut *w);
            out.write_record(&header).map_err(anyhow::Error::from)?;
            out.write_record(&row).map_err(anyhow::Error::from)?;
            out.flush()?;
            Ok(())
        }
    }
}

const SIMULATE_HEADER: [&str; 5] = ["t", "rho11", "re_rho12", "im_rho12", "mixedness"];
const SIMULATE_BOTH_EXTRA: [&str; 2] = ["rho11_numeric", "max_abs_dev"];

#[derive(Serialize)]
struct SimulateRow {
    t: f64,
    rho11: f64,
    re_rho12: f64,
    im_rho12: f64,
    mixedness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho11_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_dev: Option<f64>,
}

impl SimulateRow {
    fn cells(&self) -> Vec<Option<f64>> {
        let mut cells = vec![
            Some(self.t),
            Some(self.rho11),
            Some(self.re_rho12),
            Some(self.im_rho12),
            Some(self.mixedness),
        ];
        if self.max_abs_dev.is_some() {
            cells.extend([self.rho11_numeric, self.max_abs_dev]);
        }
        cells
    }
}

fn row(t: f64, s: &QubitState) -> SimulateRow {
    let (rho11, rho12) = elements(&s.matrix());
    SimulateRow {
        t,
        rho11,
        re_rho12: rho12.re,
        im_rho12: rho12.im,
        mixedness: s.mixedness(),
        rho11_numeric: None,
        max_abs_dev: None,
    }
}

pub fn simulate(ctx: &Context, args: &SimulateArgs) -> Result<(), Failure> {
    finite(
        "simulation parameters",
        &[args.alpha, args.lambda, args.omega, args.t_end, args.step],
    )?;
    let params = FeedbackParams::new(args.omega, args.lambda, args.alpha)?;
    if args.source != Source::Numeric && args.omega != 0.0 {
        return Err(Failure::Config(format!(
            "the analytic solution needs --omega 0 (got {}); use --source numeric",
            args.omega
        )));
    }
    let analytic = || -> Result<Vec<SimulateRow>, Failure> {
        step_times(args.t_end, args.step)?
            .into_iter()
            .map(|t| Ok(row(t, &analytic_state(&params, t)?)))
            .collect()
    };
    let rows: Vec<SimulateRow> = match args.source {
        Source::Analytic => analytic()?,
        Source::Numeric => {
            let traj = integrate(&params, args.t_end, args.step)?;
            traj.iter().map(|(t, s)| row(t, s)).collect()
        }
        Source::Both => {
            let traj = integrate(&params, args.t_end, args.step)?;
            let mut rows = analytic()?;
            for (r, (_, numeric)) in rows.iter_mut().zip(traj.iter()) {
                let exact = analytic_state(&params, r.t)?;
                r.rho11_numeric = Some(elements(&numeric.matrix()).0);
                r.max_abs_dev = Some(max_abs_diff(&numeric.matrix(), &exact.matrix()));
            }
            rows
        }
    };
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Json => emit_json(ctx, &rows),
        Format::Csv => {
            let mut header = SIMULATE_HEADER.to_vec();
            if args.source == Source::Both {
                header.extend(SIMULATE_BOTH_EXTRA);
            }
            write_csv(
                &mut *sink(ctx.output.as_deref())?,
                &header,
                rows.iter().map(SimulateRow::cells),
            )
        }
    }
}

const SWEEP_HEADER: [&str; 6] = ["alpha", "lambda", "t", "ti1", "ti2", "ti3"];

#[derive(Serialize)]
struct SweepMeta {
    grid: SweepGrid,
    source: SweepSource,
    seed: u64,
    summary: OrderingSummary,
}

fn sweep_grid(args: &SweepArgs) -> Result<SweepGrid, Failure> {
    let optional: Vec<f64> = [args.alpha, args.lambda].into_iter().flatten().collect();
    finite("sweep parameters", &optional)?;
    finite("sweep parameters", &[args.omega, args.t_end])?;
    if args.steps == 0 {
        return Err(Failure::Config("--steps must be at least 1".into()));
    }
    if args.t_end <= 0.0 {
        return Err(Failure::Config(format!(
            "--t-end must be positive, got {}",
            args.t_end
        )));
    }
    let mut grid = if args.fig3 {
        SweepGrid::fig3(args.steps)
    } else {
        SweepGrid::fig2(args.steps)
    };
    grid.omega = args.omega;
    grid.t = GridAxis::open_closed(0.0, args.t_end, args.steps);
    if args.fig3 {
        grid.alpha = GridAxis::fixed(args.alpha.unwrap_or(FRAC_PI_4));
        if args.lambda.is_some() {
            return Err(Failure::Config("--lambda is swept by --fig3".into()));
        }
    } else {
        grid.lambda = GridAxis::fixed(args.lambda.unwrap_or(1.0));
        if args.alpha.is_some() {
            return Err(Failure::Config(
                "--alpha is swept by the (α, t) grid; use --fig3".into(),
            ));
        }
    }
    grid.validate()?;
    Ok(grid)
}

fn sidecar_path(output: &std::path::Path) -> PathBuf {
    output.with_extension("sidecar.json")
}

pub fn sweep(ctx: &Context, args: &SweepArgs) -> Result<(), Failure> {
    let grid = sweep_grid(args)?;
    let source = match args.source {
        Source::Analytic => SweepSource::Analytic,
        Source::Numeric => SweepSource::Numeric { step: args.step },
        Source::Both => {
            return Err(Failure::Config(
                "sweep takes --source analytic or numeric".into(),
            ))
        }
    };
    let points = run_sweep(&grid, source)?;
    let meta = SweepMeta {
        grid,
        source,
        seed: ctx.seed,
        summary: ordering_summary(&points),
    };
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct Full<'a> {
                #[serde(flatten)]
                meta: &'a SweepMeta,
                points: &'a [qubit_uncertainty::tightness::TightnessPoint],
            }
            emit_json(
                ctx,
                &Full {
                    meta: &meta,
                    points: &points,
                },
            )
        }
        Format::Csv => {
            let rows = points.iter().map(|p| {
                [
                    Some(p.alpha),
                    Some(p.lambda),
                    Some(p.t),
                    p.ti1,
                    p.ti2,
                    p.ti3,
                ]
            });
            write_csv(&mut *sink(ctx.output.as_deref())?, &SWEEP_HEADER, rows)?;
            match &ctx.output {
                Some(path) => write_json(&mut *sink(Some(&sidecar_path(path)))?, &meta),
                None => {
                    let mut err = std::io::stderr().lock();
                    serde_json::to_writer_pretty(&mut err, &meta).map_err(anyhow::Error::from)?;
                    writeln!(err)?;
                    Ok(())
                }
            }
        }
    }
}

#[derive(Serialize)]
struct EstimateOutput {
    shots: u64,
    estimate: f64,
    std_error: f64,
    true_mixedness: f64,
    /// Undefined when the propagated error vanishes.
    z_score: Option<f64>,
}

pub fn estimate(ctx: &Context, pair: &PairArgs, shots: u64) -> Result<(), Failure> {
    if ctx.format == Some(Format::Csv) {
        return Err(Failure::Config("estimate writes JSON only".into()));
    }
    let (s, a, b) = parse_pair(pair)?;
    if shots == 0 {
        return Err(Failure::Config("--shots must be at least 1".into()));
    }
    let counts =
        match measure_for_estimate(&s, &a, &b, shots, ctx.seed) {
            Err(Error::CollinearObservables) => return Err(Failure::Check(
                "collinear observables: the estimator is undefined when A and B share a Bloch axis"
                    .into(),
            )),
            other => other?,
        };
    let est = estimate_mixedness_from_counts(&a, &b, &counts)?;
    let truth = mixedness(&s);
    let out = EstimateOutput {
        shots,
        estimate: est.estimate,
        std_error: est.std_error,
        true_mixedness: truth,
        z_score: (est.std_error > 0.0).then(|| (est.estimate - truth) / est.std_error),
    };
    emit_json(ctx, &out)
}
