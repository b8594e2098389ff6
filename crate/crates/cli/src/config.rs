//! Run configuration: a versioned JSON document.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use copolymer::coarse::{integer_ratio, DEFAULT_MC_CDF_SAMPLES};
use copolymer::discrete::EstimateMode;
use copolymer::model::{CouplingParams, DisorderKind, DisorderLaw, SlowlyVarying, TailShape, TailedRenewalLaw};

use crate::error::ConfigError;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest renewal table the runner will allocate.
pub const MAX_TABLE: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub model: ModelSpec,
    #[serde(default = "gaussian")]
    pub disorder: DisorderKind,
    pub params: ParamGrid,
    pub experiment: Experiment,
    #[serde(default)]
    pub output: OutputSpec,
}

fn gaussian() -> DisorderKind {
    DisorderKind::Gaussian
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub alpha: f64,
    #[serde(default = "unit_sv")]
    pub sv: SlowlyVarying,
    #[serde(default = "one")]
    pub period: usize,
    pub n_max: usize,
    #[serde(default)]
    pub shape: TailShape,
}

fn unit_sv() -> SlowlyVarying {
    SlowlyVarying::Constant { c: 1.0 }
}

fn one() -> usize {
    1
}

impl ModelSpec {
    pub fn constant(alpha: f64, n_max: usize) -> Self {
        Self {
            alpha,
            sv: unit_sv(),
            period: 1,
            n_max,
            shape: TailShape::Normalized,
        }
    }

    pub fn build(&self) -> copolymer::Result<TailedRenewalLaw> {
        TailedRenewalLaw::new(self.alpha, self.sv, self.n_max, self.period, self.shape)
    }

    pub fn horizon(&self) -> usize {
        self.n_max.saturating_mul(self.period)
    }

    pub fn label(&self) -> String {
        let sv = match self.sv {
            SlowlyVarying::Constant { c } => format!("const{c}"),
            SlowlyVarying::LogPower { a } => format!("logpow{a}"),
        };
        format!("a{}-{sv}-T{}", self.alpha, self.period)
    }
}

/// Cartesian grid of couplings; `lambda` varies slowest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamGrid {
    pub lambda: Vec<f64>,
    pub h: Vec<f64>,
}

impl ParamGrid {
    pub fn single(lambda: f64, h: f64) -> Self {
        Self {
            lambda: vec![lambda],
            h: vec![h],
        }
    }

    pub fn points(&self) -> Vec<CouplingParams> {
        self.lambda
            .iter()
            .flat_map(|&lambda| self.h.iter().map(move |&h| CouplingParams { lambda, h }))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Experiment {
    FreeEnergy(FreeEnergyExp),
    HcCurve(HcCurveExp),
    Collapse(CollapseExp),
    PipelineChain(PipelineChainExp),
    RegensetSample(RegensetExp),
    RnCheck(RnCheckExp),
    Validate(ValidateExp),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::FreeEnergy(_) => "free_energy",
            Experiment::HcCurve(_) => "hc_curve",
            Experiment::Collapse(_) => "collapse",
            Experiment::PipelineChain(_) => "pipeline_chain",
            Experiment::RegensetSample(_) => "regenset_sample",
            Experiment::RnCheck(_) => "rn_check",
            Experiment::Validate(_) => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeEnergyExp {
    pub n: usize,
    pub replicas: usize,
    #[serde(default = "replica_average")]
    pub mode: EstimateMode,
}

fn replica_average() -> EstimateMode {
    EstimateMode::ReplicaAverage
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HcCurveExp {
    pub n: usize,
    pub replicas: usize,
    pub resolution: f64,
    #[serde(default = "three")]
    pub k_sigma: f64,
    #[serde(default = "floor")]
    pub floor: f64,
    /// Allowed excursion of the bracket outside the analytic bounds, in units of λ.
    #[serde(default = "tolerance")]
    pub tolerance: f64,
}

fn three() -> f64 {
    3.0
}

fn floor() -> f64 {
    1e-4
}

fn tolerance() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollapseExp {
    pub t: f64,
    pub a_list: Vec<f64>,
    pub replicas: usize,
    /// Renewal laws to compare; the top-level model when absent.
    #[serde(default)]
    pub laws: Option<Vec<ModelSpec>>,
    pub continuum_cells_per_unit: f64,
    pub continuum_replicas: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineChainExp {
    pub a: f64,
    pub eps: f64,
    pub delta: f64,
    pub t: f64,
    pub subcells: usize,
    pub cells_per_block: usize,
    pub replicas: usize,
    #[serde(default = "mc_cdf")]
    pub mc_cdf_samples: usize,
}

fn mc_cdf() -> usize {
    DEFAULT_MC_CDF_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegensetExp {
    pub t: f64,
    pub eta: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RnCheckExp {
    pub eps: f64,
    pub n_list: Vec<usize>,
    pub ys: Vec<f64>,
    pub zs: Vec<f64>,
    pub kappa_ys: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Overwrite one entry of the inter-arrival table.
    CorruptKTable,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateExp {
    #[serde(default)]
    pub inject: Option<Fault>,
}

/// 1-based line of the first occurrence of `"seg"` for each segment of
/// `path`, each searched after the previous one.
pub fn locate(src: &str, path: &str) -> Option<usize> {
    let mut from = 0;
    for seg in path.split('.').filter(|s| !s.is_empty()) {
        let seg = seg.split('[').next().unwrap_or(seg);
        let key = format!("\"{seg}\"");
        from += src[from..].find(&key)?;
    }
    (from > 0 || src.starts_with('"')).then(|| src[..from].matches('\n').count() + 1)
}

fn anchored(src: &str, e: ConfigError) -> ConfigError {
    let line = locate(src, &e.path);
    e.at(line)
}

impl RunConfig {
    /// Parses and validates a configuration document.
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(src).map_err(|e| {
            let msg = e.to_string();
            let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
            let line = msg
                .strip_prefix("unknown field `")
                .and_then(|rest| rest.split('`').next())
                .and_then(|key| locate(src, key))
                .or(Some(e.line()).filter(|&l| l > 0));
            ConfigError::new("", msg).at(line)
        })?;
        cfg.validate().map_err(|e| anchored(src, e))?;
        Ok(cfg)
    }

    /// Field-level and cross-field checks, run before any computation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |path: &str, msg: String| Err(ConfigError::new(path, msg));
        if self.schema_version != SCHEMA_VERSION {
            return bad(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            );
        }
        check_model("model", &self.model)?;
        DisorderLaw::from_kind(self.disorder.clone()).map_err(|e| ConfigError::new("disorder", e.to_string()))?;
        if self.params.lambda.is_empty() || self.params.h.is_empty() {
            return bad("params", "lambda and h grids must be nonempty".into());
        }
        for (i, &l) in self.params.lambda.iter().enumerate() {
            if !(l >= 0.0 && l.is_finite()) {
                return bad("params.lambda", format!("entry {i} = {l} must be finite and >= 0"));
            }
        }
        for (i, &h) in self.params.h.iter().enumerate() {
            if !(h >= 0.0 && h.is_finite()) {
                return bad("params.h", format!("entry {i} = {h} must be finite and >= 0"));
            }
        }
        let horizon = self.model.horizon();
        match &self.experiment {
            Experiment::FreeEnergy(e) => {
                positive("experiment.n", e.n)?;
                positive("experiment.replicas", e.replicas)?;
                within_horizon("experiment.n", e.n, horizon)?;
            }
            Experiment::HcCurve(e) => {
                positive("experiment.n", e.n)?;
                positive("experiment.replicas", e.replicas)?;
                within_horizon("experiment.n", e.n, horizon)?;
                positive_f("experiment.resolution", e.resolution)?;
                positive_f("experiment.k_sigma", e.k_sigma)?;
                if !(e.floor >= 0.0 && e.tolerance >= 0.0) {
                    return bad("experiment.floor", "floor and tolerance must be >= 0".into());
                }
            }
            Experiment::Collapse(e) => {
                positive_f("experiment.t", e.t)?;
                positive("experiment.replicas", e.replicas)?;
                positive("experiment.continuum_replicas", e.continuum_replicas)?;
                positive_f("experiment.continuum_cells_per_unit", e.continuum_cells_per_unit)?;
                if e.a_list.is_empty() {
                    return bad("experiment.a_list", "must be nonempty".into());
                }
                for &a in &e.a_list {
                    if !(a > 0.0 && a <= 1.0) {
                        return bad("experiment.a_list", format!("entry {a} must lie in (0, 1]"));
                    }
                }
                let laws = e.laws.clone().unwrap_or_else(|| vec![self.model.clone()]);
                if laws.is_empty() {
                    return bad("experiment.laws", "must be nonempty when given".into());
                }
                let a_min = e.a_list.iter().cloned().fold(f64::INFINITY, f64::min);
                let need = (e.t / (a_min * a_min)).ceil() as usize;
                for (i, m) in laws.iter().enumerate() {
                    check_model(&format!("experiment.laws[{i}]"), m)?;
                    within_horizon("experiment.t", need, m.horizon())?;
                }
            }
            Experiment::PipelineChain(e) => {
                for (p, v) in [
                    ("experiment.a", e.a),
                    ("experiment.eps", e.eps),
                    ("experiment.delta", e.delta),
                    ("experiment.t", e.t),
                ] {
                    positive_f(p, v)?;
                }
                positive("experiment.subcells", e.subcells)?;
                positive("experiment.cells_per_block", e.cells_per_block)?;
                positive("experiment.replicas", e.replicas)?;
                let ratio = |path: &str, what: &'static str, x: f64| {
                    integer_ratio(what, x).map_err(|err| ConfigError::new(path, err.to_string()))
                };
                let b = ratio("experiment.eps", "eps/a^2", e.eps / (e.a * e.a))?;
                ratio("experiment.delta", "delta/eps", e.delta / e.eps)?;
                let j = ratio("experiment.t", "t/eps", e.t / e.eps)?;
                within_horizon("experiment.t", b * j, horizon)?;
            }
            Experiment::RegensetSample(e) => {
                positive_f("experiment.t", e.t)?;
                positive("experiment.samples", e.samples)?;
                if !(e.eta > 0.0 && e.eta <= e.t / 10.0) {
                    return bad("experiment.eta", format!("must lie in (0, t/10], got {}", e.eta));
                }
            }
            Experiment::RnCheck(e) => {
                positive_f("experiment.eps", e.eps)?;
                if e.n_list.is_empty() || e.zs.is_empty() || e.ys.is_empty() || e.kappa_ys.is_empty() {
                    return bad("experiment", "n_list, ys, zs and kappa_ys must be nonempty".into());
                }
                for &y in e.ys.iter().chain(&e.kappa_ys) {
                    if !(0.0..1.0).contains(&y) {
                        return bad("experiment.ys", format!("start point {y} must lie in [0, 1)"));
                    }
                }
                for &z in &e.zs {
                    if !(z >= 1.0 && z.is_finite()) {
                        return bad("experiment.zs", format!("return level {z} must be >= 1"));
                    }
                }
                let zmax = e.zs.iter().cloned().fold(0.0, f64::max);
                for &n in &e.n_list {
                    positive("experiment.n_list", n)?;
                    within_horizon(
                        "experiment.n_list",
                        (n as f64 * (zmax + e.eps)).ceil() as usize,
                        horizon,
                    )?;
                }
            }
            Experiment::Validate(_) => {}
        }
        Ok(())
    }

    pub fn disorder_law(&self) -> DisorderLaw {
        DisorderLaw::from_kind(self.disorder.clone()).expect("validated")
    }
}

fn check_model(path: &str, m: &ModelSpec) -> Result<(), ConfigError> {
    if !(m.alpha > 0.0 && m.alpha < 1.0) {
        return Err(ConfigError::new(
            format!("{path}.alpha"),
            format!("must lie in (0, 1), got {}", m.alpha),
        ));
    }
    if m.period == 0 {
        return Err(ConfigError::new(format!("{path}.period"), "must be a positive integer"));
    }
    if m.n_max < 100 {
        return Err(ConfigError::new(
            format!("{path}.n_max"),
            format!("must be at least 100, got {}", m.n_max),
        ));
    }
    Ok(())
}

fn positive(path: &str, v: usize) -> Result<(), ConfigError> {
    if v == 0 {
        return Err(ConfigError::new(path, "must be positive"));
    }
    Ok(())
}

fn positive_f(path: &str, v: f64) -> Result<(), ConfigError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(ConfigError::new(path, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

fn within_horizon(path: &str, need: usize, horizon: usize) -> Result<(), ConfigError> {
    if need > horizon {
        return Err(ConfigError::new(
            path,
            format!("requires a renewal table up to {need}, but n_max·period = {horizon}"),
        ));
    }
    Ok(())
}

/// Built-in configuration for each experiment, used when `--config` is absent.
pub fn default_config(experiment: &str) -> Option<RunConfig> {
    let base = |model: ModelSpec, params: ParamGrid, experiment: Experiment| RunConfig {
        schema_version: SCHEMA_VERSION,
        seed: 20_240_601,
        model,
        disorder: DisorderKind::Gaussian,
        params,
        experiment,
        output: OutputSpec::default(),
    };
    let half = |n_max| ModelSpec::constant(0.5, n_max);
    Some(match experiment {
        "free_energy" => base(
            half(4000),
            ParamGrid {
                lambda: vec![0.0, 1.0],
                h: vec![0.3, 2.0],
            },
            Experiment::FreeEnergy(FreeEnergyExp {
                n: 4000,
                replicas: 32,
                mode: EstimateMode::ReplicaAverage,
            }),
        ),
        "hc_curve" => base(
            half(4000),
            ParamGrid {
                lambda: vec![0.5, 1.0, 1.5],
                h: vec![0.0],
            },
            Experiment::HcCurve(HcCurveExp {
                n: 4000,
                replicas: 32,
                resolution: 0.02,
                k_sigma: 3.0,
                floor: floor(),
                tolerance: tolerance(),
            }),
        ),
        "collapse" => base(
            half(4000),
            ParamGrid::single(1.0, 0.4),
            Experiment::Collapse(CollapseExp {
                t: 200.0,
                a_list: vec![1.0, 0.5, 0.35, 0.25],
                replicas: 64,
                laws: Some(vec![
                    half(4000),
                    ModelSpec {
                        sv: SlowlyVarying::LogPower { a: 1.0 },
                        ..half(4000)
                    },
                ]),
                continuum_cells_per_unit: 4.0,
                continuum_replicas: 64,
            }),
        ),
        "pipeline_chain" => base(
            half(1000),
            ParamGrid::single(1.0, 0.4),
            Experiment::PipelineChain(PipelineChainExp {
                a: 0.25,
                eps: 0.0625,
                delta: 0.25,
                t: 50.0,
                subcells: 8,
                cells_per_block: 4,
                replicas: 16,
                mc_cdf_samples: DEFAULT_MC_CDF_SAMPLES,
            }),
        ),
        "regenset_sample" => base(
            half(1000),
            ParamGrid::single(1.0, 0.0),
            Experiment::RegensetSample(RegensetExp {
                t: 1.0,
                eta: 1e-3,
                samples: 100,
            }),
        ),
        "rn_check" => base(
            half(60_000),
            ParamGrid::single(1.0, 0.0),
            Experiment::RnCheck(RnCheckExp {
                eps: 0.2,
                n_list: vec![100, 1000, 10_000],
                ys: vec![0.0, 0.1, 0.3],
                zs: vec![1.0, 2.0, 5.0],
                kappa_ys: vec![0.05, 0.1, 0.2],
            }),
        ),
        "validate" => base(
            half(4000),
            ParamGrid::single(1.0, 0.4),
            Experiment::Validate(ValidateExp::default()),
        ),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAMES: [&str; 7] = [
        "free_energy",
        "hc_curve",
        "collapse",
        "pipeline_chain",
        "regenset_sample",
        "rn_check",
        "validate",
    ];

    #[test]
    fn defaults_round_trip_and_validate() {
        for name in NAMES {
            let cfg = default_config(name).unwrap();
            assert_eq!(cfg.experiment.name(), name);
            let text = serde_json::to_string_pretty(&cfg).unwrap();
            assert_eq!(RunConfig::parse(&text).unwrap(), cfg, "{name}");
        }
    }

    #[test]
    fn unknown_field_is_anchored() {
        let mut v = serde_json::to_value(default_config("free_energy").unwrap()).unwrap();
        v["experiment"]["replicaz"] = 3.into();
        let text = serde_json::to_string_pretty(&v).unwrap();
        let want = text.lines().position(|l| l.contains("replicaz")).unwrap() + 1;
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!(e.line, Some(want), "{e}");
        assert!(e.message.contains("replicaz"));
    }

    #[test]
    fn semantic_error_is_anchored() {
        let text = serde_json::to_string_pretty(&default_config("pipeline_chain").unwrap())
            .unwrap()
            .replace("\"delta\": 0.25", "\"delta\": 0.3");
        let want = text.lines().position(|l| l.contains("\"delta\"")).unwrap() + 1;
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!((e.line, e.path.as_str()), (Some(want), "experiment.delta"), "{e}");
    }

    #[test]
    fn syntax_error_has_line() {
        let e = RunConfig::parse("{\n  \"schema_version\": 1,\n  \"seed\": ,\n}").unwrap_err();
        assert_eq!(e.line, Some(3), "{e}");
    }

    #[test]
    fn wrong_version_rejected() {
        let text = serde_json::to_string_pretty(&default_config("validate").unwrap())
            .unwrap()
            .replace("\"schema_version\": 1", "\"schema_version\": 7");
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!((e.line, e.path.as_str()), (Some(2), "schema_version"));
    }

    #[test]
    fn grid_order() {
        let g = ParamGrid {
            lambda: vec![0.0, 1.0],
            h: vec![0.1, 0.2],
        };
        let p: Vec<(f64, f64)> = g.points().iter().map(|p| (p.lambda, p.h)).collect();
        assert_eq!(p, vec![(0.0, 0.1), (0.0, 0.2), (1.0, 0.1), (1.0, 0.2)]);
    }
}
