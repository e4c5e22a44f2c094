//! Declarative experiment configuration.
//!
//! Configs are TOML documents: top-level run settings, a `[window]` table,
//! optional `[defaults]`, one `[models.<name>]` table per model and one
//! `[[experiments]]` entry per experiment. See the repository README for the
//! full grammar.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{BinomialModel, IntensitySurface, MixedPoissonModel, PoissonModel, ThomasClusterModel};
use crate::{ModelRef, SuperposedModel};
use crate::{Point, PointPattern, Region, Window};
use crate::verify::DEFAULT_Z_CRIT;

pub const DEFAULT_EPSILON: f64 = 0.02;
pub const DEFAULT_T_STEP: f64 = 1e-3;
pub const DEFAULT_NODES_PER_AXIS: usize = 64;
pub const DEFAULT_WEIGHT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_REL_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub record_timings: bool,
    pub window: WindowSpec,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default)]
    pub models: BTreeMap<String, ModelSpec>,
    #[serde(default)]
    pub experiments: Vec<ExperimentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Defaults {
    pub epsilon: f64,
    pub t_step: f64,
    pub z_crit: f64,
    pub nodes_per_axis: usize,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            epsilon: DEFAULT_EPSILON,
            t_step: DEFAULT_T_STEP,
            z_crit: DEFAULT_Z_CRIT,
            nodes_per_axis: DEFAULT_NODES_PER_AXIS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearIntensity {
    pub base: f64,
    pub gradient: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Homogeneous with `rate`, or inhomogeneous with a linear `intensity`
    /// and thinning `bound`.
    Poisson {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        intensity: Option<LinearIntensity>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<f64>,
    },
    Binomial {
        n: usize,
    },
    MixedPoisson {
        rate: f64,
        /// `[value, probability]` pairs.
        mixing: Vec<[f64; 2]>,
    },
    Thomas {
        parent_rate: f64,
        mean_offspring: f64,
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dilation: Option<f64>,
    },
    Superposition {
        components: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl RegionSpec {
    pub fn build(&self) -> Result<Region> {
        match self {
            RegionSpec::Ball { center, radius } => Region::ball(Point::new(center)?, *radius),
            RegionSpec::Box { lower, upper } => Region::new_box(Point::new(lower)?, Point::new(upper)?),
        }
    }
}

type Pattern = PointPattern;

/// Integer statistic of a pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StatisticSpec {
    /// Total number of atoms.
    Total,
    /// Atoms in a region.
    Count(RegionSpec),
}

impl StatisticSpec {
    pub fn build(&self) -> Result<Box<dyn Fn(&Pattern) -> usize + Sync>> {
        Ok(match self {
            StatisticSpec::Total => Box::new(|p: &Pattern| p.len()),
            StatisticSpec::Count(r) => {
                let region = r.build()?;
                Box::new(move |p: &Pattern| p.count_in(&region))
            }
        })
    }
}

/// Bounded function on the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PointFnSpec {
    Constant(f64),
    Indicator(RegionSpec),
    /// `height · exp(−|x − center|² / (2 sigma²))`.
    Gaussian {
        center: Vec<f64>,
        sigma: f64,
        #[serde(default = "unit_height")]
        height: f64,
    },
}

fn unit_height() -> f64 {
    1.0
}

impl PointFnSpec {
    pub fn build(&self) -> Result<Box<dyn Fn(&Point) -> f64 + Sync>> {
        Ok(match self {
            PointFnSpec::Constant(c) => {
                let c = *c;
                Box::new(move |_: &Point| c)
            }
            PointFnSpec::Indicator(r) => {
                let region = r.build()?;
                Box::new(move |x: &Point| if region.contains(x) { 1.0 } else { 0.0 })
            }
            PointFnSpec::Gaussian { center, sigma, height } => {
                let c = Point::new(center)?;
                let (s2, h) = (2.0 * sigma * sigma, *height);
                Box::new(move |x: &Point| h * (-x.distance_squared(&c) / s2).exp())
            }
        })
    }

    fn value_check(&self) -> Option<String> {
        match self {
            PointFnSpec::Constant(c) if !(*c >= 0.0) || !c.is_finite() => {
                Some(format!("constant {c} must be finite and >= 0"))
            }
            PointFnSpec::Gaussian { sigma, height, .. }
                if !(*sigma > 0.0) || !(*height >= 0.0) || !sigma.is_finite() || !height.is_finite() =>
            {
                Some(format!("gaussian needs sigma > 0 and height >= 0, got {sigma}, {height}"))
            }
            PointFnSpec::Gaussian { center, .. } if Point::new(center).is_err() => {
                Some(format!("gaussian center {center:?} is not a valid point"))
            }
            _ => None,
        }
    }
}

/// Bounded function of a pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PatternFnSpec {
    Constant(f64),
    /// `1{Φ(region) <= max}`; region defaults to the window.
    CountAtMost {
        max: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<RegionSpec>,
    },
    /// `exp(−rate · Φ(region))`; region defaults to the window.
    ExpCount {
        rate: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<RegionSpec>,
    },
}

impl PatternFnSpec {
    pub fn build(&self) -> Result<Box<dyn Fn(&Pattern) -> f64 + Sync>> {
        let count = |region: &Option<RegionSpec>| -> Result<Box<dyn Fn(&Pattern) -> usize + Sync>> {
            Ok(match region {
                None => Box::new(|p: &Pattern| p.len()),
                Some(r) => {
                    let r = r.build()?;
                    Box::new(move |p: &Pattern| p.count_in(&r))
                }
            })
        };
        Ok(match self {
            PatternFnSpec::Constant(c) => {
                let c = *c;
                Box::new(move |_: &Pattern| c)
            }
            PatternFnSpec::CountAtMost { max, region } => {
                let (max, n) = (*max, count(region)?);
                Box::new(move |p: &Pattern| if n(p) <= max { 1.0 } else { 0.0 })
            }
            PatternFnSpec::ExpCount { rate, region } => {
                let (rate, n) = (*rate, count(region)?);
                Box::new(move |p: &Pattern| (-rate * n(p) as f64).exp())
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoPointSampler {
    #[default]
    Direct,
    Chained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentSpec {
    /// Mixture weights at `x` (or two-point weights at `(x, y)`) against
    /// `expected`.
    WeightsExact {
        id: String,
        model: String,
        x: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<Vec<f64>>,
        expected: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
    },
    /// TV between the analytic Palm sampler (or a Poisson reference pmf)
    /// and the one-point weighting oracle.
    PalmVsOracle {
        id: String,
        model: String,
        x: Vec<f64>,
        statistic: StatisticSpec,
        #[serde(default)]
        reduced: bool,
        sampler_draws: u64,
        oracle_replicates: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reference_poisson_mean: Option<f64>,
        tolerance: f64,
    },
    /// TV between a two-point reduced Palm sampler and the two-point oracle.
    TwoPointVsOracle {
        id: String,
        model: String,
        x: Vec<f64>,
        y: Vec<f64>,
        statistic: StatisticSpec,
        #[serde(default)]
        sampler: TwoPointSampler,
        sampler_draws: u64,
        oracle_replicates: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
        tolerance: f64,
    },
    Campbell {
        id: String,
        model: String,
        g: PointFnSpec,
        h: PatternFnSpec,
        replicates: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes_per_axis: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z_crit: Option<f64>,
    },
    LaplaceDerivative {
        id: String,
        model: String,
        f: PointFnSpec,
        g: PointFnSpec,
        replicates: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_step: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes_per_axis: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z_crit: Option<f64>,
        /// Closed-form derivative, checked at `rel_tolerance`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rel_tolerance: Option<f64>,
    },
    MomentConsistency {
        id: String,
        model: String,
        regions: Vec<RegionSpec>,
        replicates: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nodes_per_axis: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z_crit: Option<f64>,
    },
}

impl ExperimentSpec {
    pub fn id(&self) -> &str {
        match self {
            ExperimentSpec::WeightsExact { id, .. }
            | ExperimentSpec::PalmVsOracle { id, .. }
            | ExperimentSpec::TwoPointVsOracle { id, .. }
            | ExperimentSpec::Campbell { id, .. }
            | ExperimentSpec::LaplaceDerivative { id, .. }
            | ExperimentSpec::MomentConsistency { id, .. } => id,
        }
    }

    pub fn model(&self) -> &str {
        match self {
            ExperimentSpec::WeightsExact { model, .. }
            | ExperimentSpec::PalmVsOracle { model, .. }
            | ExperimentSpec::TwoPointVsOracle { model, .. }
            | ExperimentSpec::Campbell { model, .. }
            | ExperimentSpec::LaplaceDerivative { model, .. }
            | ExperimentSpec::MomentConsistency { model, .. } => model,
        }
    }
}

impl ExperimentConfig {
    pub fn window(&self) -> Result<Window> {
        Window::new(Point::new(&self.window.lower)?, Point::new(&self.window.upper)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Builds every named model.
    pub fn build_models(&self) -> Result<BTreeMap<String, ModelRef>> {
        let window = self.window()?;
        let mut built = BTreeMap::new();
        let mut errors = Vec::new();
        for name in self.models.keys() {
            if let Err(e) = self.build_model(name, &window, &mut built, &mut Vec::new()) {
                errors.push(format!("model \"{name}\": {e}"));
            }
        }
        if errors.is_empty() {
            Ok(built)
        } else {
            Err(Error::Validation(errors))
        }
    }

    fn build_model(
        &self,
        name: &str,
        window: &Window,
        built: &mut BTreeMap<String, ModelRef>,
        stack: &mut Vec<String>,
    ) -> Result<ModelRef> {
        if let Some(m) = built.get(name) {
            return Ok(m.clone());
        }
        if stack.iter().any(|s| s == name) {
            return Err(Error::InvalidModel(format!("superposition cycle through \"{name}\"")));
        }
        let spec = self
            .models
            .get(name)
            .ok_or_else(|| Error::InvalidModel(format!("undefined model \"{name}\"")))?;
        let w = *window;
        let model: ModelRef = match spec {
            ModelSpec::Poisson {
                rate,
                intensity,
                bound,
            } => match (rate, intensity) {
                (Some(rate), None) => Arc::new(PoissonModel::homogeneous(w, *rate)?),
                (None, Some(lin)) => {
                    let bound = bound.ok_or_else(|| {
                        Error::InvalidModel("inhomogeneous Poisson needs `bound`".into())
                    })?;
                    if lin.gradient.len() != w.dim() {
                        return Err(Error::InvalidModel("gradient length must equal window dimension".into()));
                    }
                    Arc::new(PoissonModel::inhomogeneous(
                        w,
                        IntensitySurface::linear(lin.base, &lin.gradient),
                        bound,
                    )?)
                }
                _ => {
                    return Err(Error::InvalidModel(
                        "poisson needs exactly one of `rate` or `intensity`".into(),
                    ))
                }
            },
            ModelSpec::Binomial { n } => Arc::new(BinomialModel::uniform(w, *n)),
            ModelSpec::MixedPoisson { rate, mixing } => {
                let pairs: Vec<(f64, f64)> = mixing.iter().map(|m| (m[0], m[1])).collect();
                Arc::new(MixedPoissonModel::homogeneous(w, *rate, &pairs)?)
            }
            ModelSpec::Thomas {
                parent_rate,
                mean_offspring,
                sigma,
                dilation,
            } => Arc::new(ThomasClusterModel::with_dilation(
                w,
                *parent_rate,
                *mean_offspring,
                *sigma,
                dilation.unwrap_or(crate::models::THOMAS_DILATION),
            )?),
            ModelSpec::Superposition { components } => {
                stack.push(name.to_string());
                let parts = components
                    .iter()
                    .map(|c| self.build_model(c, window, built, stack))
                    .collect::<Result<Vec<_>>>();
                stack.pop();
                Arc::new(SuperposedModel::new(parts?)?)
            }
        };
        built.insert(name.to_string(), model.clone());
        Ok(model)
    }

    /// Semantic checks; reports every problem found.
    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        let window = match self.window() {
            Ok(w) => Some(w),
            Err(e) => {
                errors.push(format!("window: {e}"));
                None
            }
        };
        let d = &self.defaults;
        if !(d.epsilon > 0.0) {
            errors.push(format!("defaults.epsilon {} must be > 0", d.epsilon));
        }
        if !(d.t_step > 0.0) {
            errors.push(format!("defaults.t_step {} must be > 0", d.t_step));
        }
        if !(d.z_crit > 0.0) {
            errors.push(format!("defaults.z_crit {} must be > 0", d.z_crit));
        }
        if let Some(w) = &window {
            if let Err(Error::Validation(es)) = self.build_models() {
                errors.extend(es);
            }
            for e in &self.experiments {
                self.validate_experiment(e, w, &mut errors);
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.experiments {
            if !seen.insert(e.id()) {
                errors.push(format!("duplicate experiment id \"{}\"", e.id()));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errors))
        }
    }

    fn validate_experiment(&self, e: &ExperimentSpec, w: &Window, errors: &mut Vec<String>) {
        let id = e.id();
        let mut err = |msg: String| errors.push(format!("experiment \"{id}\": {msg}"));
        if !self.models.contains_key(e.model()) {
            err(format!("undefined model \"{}\"", e.model()));
        }
        let point_in = |c: &Vec<f64>| Point::new(c).ok().filter(|p| w.contains(p));
        let check_ball = |c: &Vec<f64>, eps: f64, err: &mut dyn FnMut(String)| match point_in(c) {
            None => err(format!("point {c:?} is not inside the window")),
            Some(p) => {
                if !(eps > 0.0) {
                    err(format!("epsilon {eps} must be > 0"));
                } else if !Region::ball(p, eps).map(|b| b.inside(w)).unwrap_or(false) {
                    err(format!("epsilon {eps} too large: ball around {c:?} leaves the window"));
                }
            }
        };
        let reps = |n: u64, name: &str, err: &mut dyn FnMut(String)| {
            if n == 0 {
                err(format!("{name} must be >= 1"));
            }
        };
        let region_ok = |r: &RegionSpec, err: &mut dyn FnMut(String)| {
            if let Err(e) = r.build() {
                err(e.to_string());
            }
        };
        let stat_ok = |s: &StatisticSpec, err: &mut dyn FnMut(String)| {
            if let StatisticSpec::Count(r) = s {
                region_ok(r, err)
            }
        };
        match e {
            ExperimentSpec::WeightsExact { x, y, expected, .. } => {
                if point_in(x).is_none() {
                    err(format!("point {x:?} is not inside the window"));
                }
                if let Some(y) = y {
                    if point_in(y).is_none() {
                        err(format!("point {y:?} is not inside the window"));
                    }
                    if expected.len() != 4 {
                        err("two-point weights need 4 expected values".into());
                    }
                }
            }
            ExperimentSpec::PalmVsOracle {
                x,
                statistic,
                sampler_draws,
                oracle_replicates,
                epsilon,
                tolerance,
                ..
            } => {
                check_ball(x, epsilon.unwrap_or(self.defaults.epsilon), &mut err);
                stat_ok(statistic, &mut err);
                reps(*sampler_draws, "sampler_draws", &mut err);
                reps(*oracle_replicates, "oracle_replicates", &mut err);
                if !(*tolerance > 0.0) {
                    err("tolerance must be > 0".into());
                }
            }
            ExperimentSpec::TwoPointVsOracle {
                x,
                y,
                statistic,
                sampler_draws,
                oracle_replicates,
                epsilon,
                tolerance,
                ..
            } => {
                let eps = epsilon.unwrap_or(self.defaults.epsilon);
                check_ball(x, eps, &mut err);
                check_ball(y, eps, &mut err);
                if let (Some(a), Some(b)) = (point_in(x), point_in(y)) {
                    if !(a.distance_squared(&b).sqrt() > 2.0 * eps) {
                        err("balls around x and y overlap".into());
                    }
                }
                stat_ok(statistic, &mut err);
                reps(*sampler_draws, "sampler_draws", &mut err);
                reps(*oracle_replicates, "oracle_replicates", &mut err);
                if !(*tolerance > 0.0) {
                    err("tolerance must be > 0".into());
                }
            }
            ExperimentSpec::Campbell { g, h, replicates, .. } => {
                reps(*replicates, "replicates", &mut err);
                if let Some(m) = g.value_check() {
                    err(m);
                }
                if let Err(e) = h.build() {
                    err(e.to_string());
                }
                if let PointFnSpec::Indicator(r) = g {
                    region_ok(r, &mut err);
                }
            }
            ExperimentSpec::LaplaceDerivative { f, g, replicates, t_step, .. } => {
                reps(*replicates, "replicates", &mut err);
                for spec in [f, g] {
                    if let Some(m) = spec.value_check() {
                        err(m);
                    }
                    if let PointFnSpec::Indicator(r) = spec {
                        region_ok(r, &mut err);
                    }
                }
                if let Some(t) = t_step {
                    if !(*t > 0.0) {
                        err(format!("t_step {t} must be > 0"));
                    }
                }
            }
            ExperimentSpec::MomentConsistency { regions, replicates, .. } => {
                reps(*replicates, "replicates", &mut err);
                if regions.is_empty() {
                    err("at least one region required".into());
                }
                for r in regions {
                    region_ok(r, &mut err);
                }
            }
        }
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
seed = 7

[window]
lower = [0.0, 0.0]
upper = [1.0, 1.0]

[models.phi1]
kind = "poisson"
rate = 2.0

[models.phi2]
kind = "poisson"
rate = 3.0

[models.sup]
kind = "superposition"
components = ["phi1", "phi2"]

[[experiments]]
kind = "weights_exact"
id = "w"
model = "sup"
x = [0.5, 0.5]
expected = [0.4, 0.6]
"#;

    #[test]
    fn minimal_config_round_trips() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.experiments.len(), 1);
        assert_eq!(c.defaults, Defaults::default());
        let again = parse_config(&c.to_toml().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn undefined_model_is_named() {
        let text = MINIMAL.replace("components = [\"phi1\", \"phi2\"]", "components = [\"phi1\", \"phi3\"]");
        match parse_config(&text) {
            Err(Error::Validation(es)) => assert!(es.iter().any(|e| e.contains("phi3")), "{es:?}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn validation_collects_every_problem() {
        let text = MINIMAL
            .replace("model = \"sup\"", "model = \"nope\"")
            .replace("x = [0.5, 0.5]", "x = [1.5, 0.5]")
            .replace("[window]", "[defaults]\nz_crit = -1.0\n\n[window]");
        match parse_config(&text) {
            Err(Error::Validation(es)) => {
                assert!(es.len() >= 3, "{es:?}");
                assert!(es.iter().any(|e| e.contains("nope")));
                assert!(es.iter().any(|e| e.contains("z_crit")));
                assert!(es.iter().any(|e| e.contains("not inside")));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_are_parse_errors() {
        assert!(matches!(parse_config("seed = "), Err(Error::Parse(_))));
        let unknown = MINIMAL.replace("seed = 7", "seed = 7\nbogus = 1");
        assert!(matches!(parse_config(&unknown), Err(Error::Parse(_))));
    }

    #[test]
    fn component_cycles_are_rejected() {
        let text = format!(
            "{MINIMAL}\n[models.loop]\nkind = \"superposition\"\ncomponents = [\"phi1\", \"loop\"]\n"
        );
        match parse_config(&text) {
            Err(Error::Validation(es)) => assert!(es.iter().any(|e| e.contains("loop")), "{es:?}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn oversized_epsilon_and_overlapping_balls() {
        let text = format!(
            r#"{MINIMAL}
[[experiments]]
kind = "two_point_vs_oracle"
id = "tp"
model = "sup"
x = [0.5, 0.5]
y = [0.52, 0.5]
statistic = "total"
sampler_draws = 10
oracle_replicates = 10
epsilon = 0.05
tolerance = 0.1

[[experiments]]
kind = "palm_vs_oracle"
id = "edge"
model = "sup"
x = [0.01, 0.5]
statistic = "total"
sampler_draws = 10
oracle_replicates = 10
tolerance = 0.1
"#
        );
        match parse_config(&text) {
            Err(Error::Validation(es)) => {
                assert!(es.iter().any(|e| e.contains("overlap")), "{es:?}");
                assert!(es.iter().any(|e| e.contains("too large")), "{es:?}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn gaussian_point_function() {
        let spec: PointFnSpec = toml::from_str::<toml::Table>("g = { gaussian = { center = [0.5, 0.5], sigma = 0.1 } }")
            .unwrap()["g"]
            .clone()
            .try_into()
            .unwrap();
        let g = spec.build().unwrap();
        assert_eq!(g(&Point::new(&[0.5, 0.5]).unwrap()), 1.0);
        let off = g(&Point::new(&[0.6, 0.5]).unwrap());
        assert!((off - (-0.5f64).exp()).abs() < 1e-12);
        let bad = PointFnSpec::Gaussian { center: vec![0.5], sigma: 0.0, height: 1.0 };
        assert!(bad.value_check().is_some());
    }
}
