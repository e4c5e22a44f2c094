//! Sequential experiment execution and CSV output.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::experiment::config::{
    ExperimentConfig, ExperimentSpec, TwoPointSampler, DEFAULT_REL_TOLERANCE, DEFAULT_WEIGHT_TOLERANCE,
};
use crate::ModelRef;
use crate::rng::StreamSeed;
use crate::verify::{self, CountPmf};
use crate::Point;

/// CSV column order.
pub const COLUMNS: [&str; 11] = [
    "experiment_id",
    "check",
    "lhs",
    "rhs",
    "statistic",
    "threshold",
    "pass",
    "replicates",
    "wall_seconds",
    "seed",
    "error",
];

/// One check outcome. `pass` holds iff `statistic <= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment_id: String,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub replicates: u64,
    pub wall_seconds: f64,
    pub seed: u64,
    pub error: Option<String>,
}

impl ResultRow {
    fn csv_fields(&self, timings: bool) -> Vec<String> {
        vec![
            self.experiment_id.clone(),
            self.check.clone(),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.statistic.to_string(),
            self.threshold.to_string(),
            self.pass.to_string(),
            self.replicates.to_string(),
            if timings { format!("{:.3}", self.wall_seconds) } else { String::new() },
            self.seed.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Per-experiment seed: the master seed mixed with an FNV-1a hash of the
/// experiment id, so reordering experiments leaves their streams unchanged.
pub fn experiment_seed(master: u64, id: &str) -> StreamSeed {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    StreamSeed::new(master).child(h)
}

struct Row {
    check: String,
    lhs: f64,
    rhs: f64,
    statistic: f64,
    threshold: f64,
    replicates: u64,
}

impl Row {
    fn new(check: impl Into<String>, lhs: f64, rhs: f64, statistic: f64, threshold: f64, replicates: u64) -> Self {
        Row {
            check: check.into(),
            lhs,
            rhs,
            statistic,
            threshold,
            replicates,
        }
    }

    fn from_report(check: impl Into<String>, r: &verify::CheckReport, replicates: u64) -> Self {
        Row::new(check, r.lhs, r.rhs, r.z_score, r.z_crit, replicates)
    }
}

/// Runs every experiment in declared order. Experiment failures become
/// failed rows; only config problems abort.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let models = config.build_models()?;
    let mut rows = Vec::new();
    for spec in &config.experiments {
        let start = Instant::now();
        let seed = experiment_seed(config.seed, spec.id());
        let outcome = run_one(config, &models, spec, seed);
        let wall = start.elapsed().as_secs_f64();
        match outcome {
            Ok(list) => rows.extend(list.into_iter().map(|r| ResultRow {
                experiment_id: spec.id().to_string(),
                pass: r.statistic <= r.threshold,
                check: r.check,
                lhs: r.lhs,
                rhs: r.rhs,
                statistic: r.statistic,
                threshold: r.threshold,
                replicates: r.replicates,
                wall_seconds: wall,
                seed: config.seed,
                error: None,
            })),
            Err(e) => rows.push(ResultRow {
                experiment_id: spec.id().to_string(),
                check: "error".into(),
                lhs: f64::NAN,
                rhs: f64::NAN,
                statistic: f64::NAN,
                threshold: f64::NAN,
                pass: false,
                replicates: 0,
                wall_seconds: wall,
                seed: config.seed,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok(rows)
}

fn point(c: &[f64]) -> Result<Point> {
    Point::new(c)
}

fn run_one(
    config: &ExperimentConfig,
    models: &BTreeMap<String, ModelRef>,
    spec: &ExperimentSpec,
    seed: StreamSeed,
) -> Result<Vec<Row>> {
    let model = models
        .get(spec.model())
        .ok_or_else(|| Error::InvalidModel(format!("undefined model \"{}\"", spec.model())))?;
    let d = &config.defaults;
    match spec {
        ExperimentSpec::WeightsExact {
            x,
            y,
            expected,
            tolerance,
            ..
        } => {
            let tol = tolerance.unwrap_or(DEFAULT_WEIGHT_TOLERANCE);
            let sup = model
                .as_superposition()
                .ok_or_else(|| Error::InvalidModel("weights need a superposition model".into()))?;
            let x = point(x)?;
            let mut rows = Vec::new();
            let (weights, labels): (Vec<f64>, Vec<String>) = match y {
                None => {
                    let w = sup.mixture_weights(&x)?.into_inner();
                    let labels = (1..=w.len()).map(|j| format!("w{j}")).collect();
                    (w, labels)
                }
                Some(y) => {
                    let y = point(y)?;
                    let w = sup.two_point_weights(&x, &y)?;
                    let rho = model.product_density2(&x, &y)?;
                    let n = *w.normalizer();
                    rows.push(Row::new("normalizer", n, rho, ((n - rho) / rho).abs(), tol, 0));
                    let labels = ["w11", "w12", "w21", "w22"].map(String::from).to_vec();
                    (w.weights().to_vec(), labels)
                }
            };
            if weights.len() != expected.len() {
                return Err(Error::InvalidModel(format!(
                    "{} weights but {} expected values",
                    weights.len(),
                    expected.len()
                )));
            }
            let mut weight_rows: Vec<Row> = weights
                .iter()
                .zip(expected)
                .zip(labels)
                .map(|((w, e), l)| Row::new(l, *w, *e, (w - e).abs(), tol, 0))
                .collect();
            let sum: f64 = weights.iter().sum();
            weight_rows.push(Row::new("sum", sum, 1.0, (sum - 1.0).abs(), tol, 0));
            weight_rows.extend(rows);
            Ok(weight_rows)
        }
        ExperimentSpec::PalmVsOracle {
            x,
            statistic,
            reduced,
            sampler_draws,
            oracle_replicates,
            epsilon,
            reference_poisson_mean,
            tolerance,
            ..
        } => {
            let x = point(x)?;
            let stat = statistic.build()?;
            let oracle = verify::palm_weighting_oracle(
                model.as_ref(),
                &x,
                epsilon.unwrap_or(d.epsilon),
                *oracle_replicates,
                &*stat,
                seed.child(2),
                *reduced,
            )?;
            let (reference, draws) = match reference_poisson_mean {
                Some(mean) => (CountPmf::poisson(*mean)?, 0),
                None => {
                    let m = model.clone();
                    let reduced = *reduced;
                    let draw = move |rng: &mut crate::RngState| {
                        if reduced {
                            m.reduced_palm_sample(&x, rng)
                        } else {
                            m.palm_sample(&x, rng)
                        }
                    };
                    (verify::sampler_pmf(*sampler_draws, seed.child(1), &draw, &*stat)?, *sampler_draws)
                }
            };
            let tv = verify::tv_distance(&reference, &oracle.pmf)?;
            Ok(vec![Row::new(
                "tv",
                reference.mean(),
                oracle.pmf.mean(),
                tv,
                *tolerance,
                draws + oracle_replicates,
            )])
        }
        ExperimentSpec::TwoPointVsOracle {
            x,
            y,
            statistic,
            sampler,
            sampler_draws,
            oracle_replicates,
            epsilon,
            tolerance,
            ..
        } => {
            let (x, y) = (point(x)?, point(y)?);
            let stat = statistic.build()?;
            let oracle = verify::two_point_weighting_oracle(
                model.as_ref(),
                &x,
                &y,
                epsilon.unwrap_or(d.epsilon),
                *oracle_replicates,
                &*stat,
                seed.child(2),
                true,
            )?;
            let pmf = match sampler {
                TwoPointSampler::Direct => {
                    let m = model.clone();
                    let draw = move |rng: &mut crate::RngState| m.two_point_reduced_palm_sample(&x, &y, rng);
                    verify::sampler_pmf(*sampler_draws, seed.child(1), &draw, &*stat)?
                }
                TwoPointSampler::Chained => {
                    let sup = model
                        .as_superposition()
                        .ok_or_else(|| Error::InvalidModel("chained sampler needs a superposition".into()))?;
                    let draw = |rng: &mut crate::RngState| sup.chained_reduced_palm_sample(&x, &y, rng);
                    verify::sampler_pmf(*sampler_draws, seed.child(1), &draw, &*stat)?
                }
            };
            let tv = verify::tv_distance(&pmf, &oracle.pmf)?;
            Ok(vec![Row::new(
                "tv",
                pmf.mean(),
                oracle.pmf.mean(),
                tv,
                *tolerance,
                sampler_draws + oracle_replicates,
            )])
        }
        ExperimentSpec::Campbell {
            g,
            h,
            replicates,
            nodes_per_axis,
            z_crit,
            ..
        } => {
            let (g, h) = (g.build()?, h.build()?);
            let r = verify::campbell_check(
                model.as_ref(),
                &*g,
                &*h,
                *replicates,
                nodes_per_axis.unwrap_or(d.nodes_per_axis),
                seed,
                z_crit.unwrap_or(d.z_crit),
            )?;
            Ok(vec![Row::from_report("campbell_z", &r, *replicates)])
        }
        ExperimentSpec::LaplaceDerivative {
            f,
            g,
            replicates,
            t_step,
            nodes_per_axis,
            z_crit,
            expected,
            rel_tolerance,
            ..
        } => {
            let (f, g) = (f.build()?, g.build()?);
            let r = verify::laplace_derivative_check(
                model.as_ref(),
                &*f,
                &*g,
                t_step.unwrap_or(d.t_step),
                *replicates,
                nodes_per_axis.unwrap_or(d.nodes_per_axis),
                seed,
                z_crit.unwrap_or(d.z_crit),
            )?;
            let mut rows = vec![Row::from_report("derivative_z", &r, *replicates)];
            if let Some(e) = expected {
                let tol = rel_tolerance.unwrap_or(DEFAULT_REL_TOLERANCE);
                rows.push(Row::new("lhs_rel_err", r.lhs, *e, ((r.lhs - e) / e).abs(), tol, *replicates));
                rows.push(Row::new("rhs_rel_err", r.rhs, *e, ((r.rhs - e) / e).abs(), tol, *replicates));
            }
            Ok(rows)
        }
        ExperimentSpec::MomentConsistency {
            regions,
            replicates,
            nodes_per_axis,
            z_crit,
            ..
        } => {
            let z = z_crit.unwrap_or(d.z_crit);
            let nodes = nodes_per_axis.unwrap_or(d.nodes_per_axis);
            let mut rows = Vec::new();
            for (i, spec) in regions.iter().enumerate() {
                let region = spec.build()?;
                let s = seed.child(i as u64);
                let r = verify::first_moment_check(model.as_ref(), &region, *replicates, nodes, s.child(1), z)?;
                rows.push(Row::from_report(format!("first_moment[{i}]"), &r, *replicates));
                if model.has_product_density2() {
                    // Pair quadrature is quadratic in the node count.
                    let r = verify::factorial_moment_check(
                        model.as_ref(),
                        &region,
                        *replicates,
                        nodes.min(32),
                        s.child(2),
                        z,
                    )?;
                    rows.push(Row::from_report(format!("factorial_moment[{i}]"), &r, *replicates));
                }
            }
            Ok(rows)
        }
    }
}

/// Writes the header row and one line per result.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W, record_timings: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record(r.csv_fields(record_timings)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs a config and renders the CSV in memory.
pub fn run_to_csv(config: &ExperimentConfig) -> Result<(Vec<ResultRow>, Vec<u8>)> {
    let rows = run(config)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf, config.record_timings)?;
    Ok((rows, buf))
}
