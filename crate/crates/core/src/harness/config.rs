//! Experiment configuration: a JSON document naming one experiment and its
//! parameters.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::error::HarnessError;
use crate::largedev::{FitMode, LinearConstraint};

const PROB_TOL: f64 = 1e-9;

/// Experiment names accepted in the `experiment` field.
pub const EXPERIMENTS: [&str; 7] = [
    "stein",
    "sanov",
    "chernoff",
    "divergence-props",
    "hot",
    "modelsel",
    "risk-alpha",
];

/// A complex matrix as rows of `[re, im]` pairs.
pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

/// Evenly spaced scalar grid `first, …, last`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub first: f64,
    pub last: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteinParams {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub eps: f64,
    pub n_list: Vec<usize>,
    #[serde(default)]
    pub fit_mode: FitMode,
    /// Allowed distance between the largest-`n` rate and the relative entropy.
    #[serde(default = "default_stein_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SanovParams {
    pub p: Vec<f64>,
    pub constraints: Vec<LinearConstraint>,
    pub n_list: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernoffParams {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub n_list: Vec<usize>,
    #[serde(default = "default_priors")]
    pub priors: Vec<[f64; 2]>,
    #[serde(default = "default_relative_tolerance")]
    pub relative_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergencePropsParams {
    #[serde(default = "default_commuting_trials")]
    pub commuting_trials: usize,
    #[serde(default = "default_noncommuting_trials")]
    pub noncommuting_trials: usize,
    #[serde(default = "default_commuting_trials")]
    pub invariance_trials: usize,
    #[serde(default = "default_min_dim")]
    pub min_dim: usize,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_invariance_alphas")]
    pub invariance_alphas: Vec<f64>,
    #[serde(default = "default_t_points")]
    pub t_points: usize,
    #[serde(default = "default_povm_outcomes")]
    pub povm_outcomes: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

/// Which measurement a `hot` experiment applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementSpec {
    Named(NamedMeasurement),
    Effects { effects: Vec<MatrixSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedMeasurement {
    /// Projective measurement in the eigenbasis of `sigma`.
    SigmaEigenbasis,
    /// Projective measurement in the eigenbasis of `rho`.
    RhoEigenbasis,
    Computational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HotParams {
    pub rho: MatrixSpec,
    pub sigma: MatrixSpec,
    #[serde(default = "default_measurement")]
    pub measurement: MeasurementSpec,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelselParams {
    pub true_dist: Vec<f64>,
    /// Grid of the one-parameter family `(θ, 1 − θ)`.
    pub grid: GridSpec,
    /// Finer grid for the WAIC / generalization comparison.
    #[serde(default)]
    pub waic_grid: Option<GridSpec>,
    /// Fixed distribution of the zero-parameter competitor.
    pub fixed: Vec<f64>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    pub selection_n: usize,
    pub selection_datasets: usize,
    pub waic_n: usize,
    pub waic_datasets: usize,
    #[serde(default = "default_selection_rate")]
    pub min_selection_rate: f64,
    #[serde(default = "default_sigmas")]
    pub sigmas: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskAlphaParams {
    pub grid: GridSpec,
    pub n: usize,
    pub alphas: Vec<f64>,
    #[serde(default = "default_perturbations")]
    pub perturbations: usize,
    #[serde(default = "default_perturbation_scale")]
    pub perturbation_scale: f64,
    #[serde(default = "default_slack")]
    pub slack: f64,
}

fn default_stein_tolerance() -> f64 {
    0.01
}
fn default_priors() -> Vec<[f64; 2]> {
    vec![[0.5, 0.5]]
}
fn default_relative_tolerance() -> f64 {
    0.05
}
fn default_commuting_trials() -> usize {
    100
}
fn default_noncommuting_trials() -> usize {
    200
}
fn default_min_dim() -> usize {
    2
}
fn default_max_dim() -> usize {
    8
}
fn default_alphas() -> Vec<f64> {
    vec![-1.0, -0.5, 0.0, 0.5, 1.0]
}
fn default_invariance_alphas() -> Vec<f64> {
    vec![-0.5, 0.0, 0.5]
}
fn default_t_points() -> usize {
    21
}
fn default_povm_outcomes() -> usize {
    3
}
fn default_tolerance() -> f64 {
    1e-9
}
fn default_measurement() -> MeasurementSpec {
    MeasurementSpec::Named(NamedMeasurement::SigmaEigenbasis)
}
fn default_beta() -> f64 {
    1.0
}
fn default_selection_rate() -> f64 {
    0.95
}
fn default_sigmas() -> f64 {
    3.0
}
fn default_perturbations() -> usize {
    50
}
fn default_perturbation_scale() -> f64 {
    0.01
}
fn default_slack() -> f64 {
    1e-12
}

/// Experiment-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameters {
    Stein(SteinParams),
    Sanov(SanovParams),
    Chernoff(ChernoffParams),
    DivergenceProps(DivergencePropsParams),
    Hot(HotParams),
    Modelsel(ModelselParams),
    RiskAlpha(RiskAlphaParams),
}

impl Parameters {
    pub fn experiment(&self) -> &'static str {
        match self {
            Parameters::Stein(_) => "stein",
            Parameters::Sanov(_) => "sanov",
            Parameters::Chernoff(_) => "chernoff",
            Parameters::DivergenceProps(_) => "divergence-props",
            Parameters::Hot(_) => "hot",
            Parameters::Modelsel(_) => "modelsel",
            Parameters::RiskAlpha(_) => "risk-alpha",
        }
    }

    fn to_value(&self) -> Value {
        let v = match self {
            Parameters::Stein(p) => serde_json::to_value(p),
            Parameters::Sanov(p) => serde_json::to_value(p),
            Parameters::Chernoff(p) => serde_json::to_value(p),
            Parameters::DivergenceProps(p) => serde_json::to_value(p),
            Parameters::Hot(p) => serde_json::to_value(p),
            Parameters::Modelsel(p) => serde_json::to_value(p),
            Parameters::RiskAlpha(p) => serde_json::to_value(p),
        };
        v.expect("parameter records serialize")
    }
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub parameters: Parameters,
    pub seed: u64,
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn experiment(&self) -> &'static str {
        self.parameters.experiment()
    }

    /// The configuration as a JSON value, defaults filled in.
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("experiment".into(), Value::from(self.experiment()));
        m.insert("parameters".into(), self.parameters.to_value());
        m.insert("seed".into(), Value::from(self.seed));
        if let Some(path) = &self.output_path {
            m.insert("output_path".into(), Value::from(path.clone()));
        }
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("config serializes")
    }
}

/// Required parameters of each experiment, for `list`.
pub fn required_parameters(experiment: &str) -> &'static [&'static str] {
    match experiment {
        "stein" => &["p", "q", "eps", "n_list"],
        "sanov" => &["p", "constraints", "n_list"],
        "chernoff" => &["p", "q", "n_list"],
        "divergence-props" => &[],
        "hot" => &["rho", "sigma"],
        "modelsel" => &[
            "true_dist",
            "grid",
            "fixed",
            "selection_n",
            "selection_datasets",
            "waic_n",
            "waic_datasets",
        ],
        "risk-alpha" => &["grid", "n", "alphas"],
        _ => &[],
    }
}

struct Issues(Vec<String>);

impl Issues {
    fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }

    fn probs(&mut self, field: &str, v: &[f64]) {
        if v.is_empty() {
            self.push(format!("parameters.{field}: probability array is empty"));
            return;
        }
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            self.push(format!("parameters.{field}: entries must be finite and nonnegative"));
            return;
        }
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > PROB_TOL {
            self.push(format!("parameters.{field}: probabilities sum to {s}, expected 1"));
        }
    }

    fn same_len(&mut self, a: &str, la: usize, b: &str, lb: usize) {
        if la != lb {
            self.push(format!("parameters.{a} has {la} entries but parameters.{b} has {lb}"));
        }
    }

    fn n_list(&mut self, v: &[usize], min_len: usize) {
        if v.len() < min_len {
            self.push(format!("parameters.n_list needs at least {min_len} entries"));
        }
        if v.contains(&0) {
            self.push("parameters.n_list: every n must be at least 1");
        }
    }

    fn positive(&mut self, field: &str, x: f64) {
        if !(x.is_finite() && x > 0.0) {
            self.push(format!("parameters.{field} must be positive, got {x}"));
        }
    }

    fn alphas(&mut self, field: &str, v: &[f64]) {
        if let Some(a) = v.iter().find(|a| !(-1.0..=1.0).contains(*a)) {
            self.push(format!("parameters.{field}: α = {a} outside [−1, 1]"));
        }
    }

    fn grid(&mut self, field: &str, g: &GridSpec) {
        if g.count == 0 {
            self.push(format!("parameters.{field}.count must be at least 1"));
        } else if g.count == 1 && g.first != g.last {
            self.push(format!("parameters.{field}: a one-point grid needs first == last"));
        } else if g.count > 1 && !(g.first < g.last) {
            self.push(format!("parameters.{field}: first must be below last"));
        }
        if !(g.first >= 0.0 && g.last <= 1.0) {
            self.push(format!("parameters.{field}: points must lie in [0, 1]"));
        }
    }

    fn matrix(&mut self, field: &str, m: &MatrixSpec) {
        let d = m.len();
        if d == 0 || m.iter().any(|r| r.len() != d) {
            self.push(format!("parameters.{field}: matrix must be square and nonempty"));
            return;
        }
        if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
            self.push(format!("parameters.{field}: matrix entries must be finite"));
        }
    }
}

fn validate(params: &Parameters, issues: &mut Issues) {
    match params {
        Parameters::Stein(p) => {
            issues.probs("p", &p.p);
            issues.probs("q", &p.q);
            issues.same_len("p", p.p.len(), "q", p.q.len());
            if !(p.eps > 0.0 && p.eps < 1.0) {
                issues.push(format!("parameters.eps must lie in (0, 1), got {}", p.eps));
            }
            issues.n_list(&p.n_list, 2);
            issues.positive("tolerance", p.tolerance);
        }
        Parameters::Sanov(p) => {
            issues.probs("p", &p.p);
            issues.n_list(&p.n_list, 1);
            if p.constraints.is_empty() {
                issues.push("parameters.constraints needs at least one constraint");
            }
            for (i, c) in p.constraints.iter().enumerate() {
                issues.same_len(
                    &format!("constraints[{i}].coefficients"),
                    c.coefficients.len(),
                    "p",
                    p.p.len(),
                );
            }
        }
        Parameters::Chernoff(p) => {
            issues.probs("p", &p.p);
            issues.probs("q", &p.q);
            issues.same_len("p", p.p.len(), "q", p.q.len());
            issues.n_list(&p.n_list, 2);
            if p.priors.is_empty() {
                issues.push("parameters.priors needs at least one prior pair");
            }
            for (i, pr) in p.priors.iter().enumerate() {
                issues.probs(&format!("priors[{i}]"), pr);
                if pr.iter().any(|x| *x <= 0.0) {
                    issues.push(format!("parameters.priors[{i}]: both priors must be positive"));
                }
            }
            issues.positive("relative_tolerance", p.relative_tolerance);
        }
        Parameters::DivergenceProps(p) => {
            if p.min_dim < 2 || p.max_dim < p.min_dim {
                issues.push("parameters.min_dim/max_dim must satisfy 2 ≤ min_dim ≤ max_dim");
            }
            issues.alphas("alphas", &p.alphas);
            issues.alphas("invariance_alphas", &p.invariance_alphas);
            if p.t_points < 2 {
                issues.push("parameters.t_points must be at least 2");
            }
            if p.povm_outcomes < 1 {
                issues.push("parameters.povm_outcomes must be at least 1");
            }
            issues.positive("tolerance", p.tolerance);
        }
        Parameters::Hot(p) => {
            issues.matrix("rho", &p.rho);
            issues.matrix("sigma", &p.sigma);
            if let MeasurementSpec::Effects { effects } = &p.measurement {
                if effects.is_empty() {
                    issues.push("parameters.measurement.effects must be nonempty");
                }
                for (i, e) in effects.iter().enumerate() {
                    issues.matrix(&format!("measurement.effects[{i}]"), e);
                }
            }
            issues.alphas("alphas", &p.alphas);
            issues.positive("tolerance", p.tolerance);
        }
        Parameters::Modelsel(p) => {
            issues.probs("true_dist", &p.true_dist);
            issues.probs("fixed", &p.fixed);
            if p.true_dist.len() != 2 || p.fixed.len() != 2 {
                issues.push("parameters.true_dist and parameters.fixed must be binary distributions");
            }
            issues.grid("grid", &p.grid);
            if let Some(g) = &p.waic_grid {
                issues.grid("waic_grid", g);
            }
            issues.positive("beta", p.beta);
            for (name, v) in [
                ("selection_n", p.selection_n),
                ("selection_datasets", p.selection_datasets),
                ("waic_n", p.waic_n),
            ] {
                if v == 0 {
                    issues.push(format!("parameters.{name} must be at least 1"));
                }
            }
            if p.waic_datasets < 2 {
                issues.push("parameters.waic_datasets must be at least 2");
            }
            issues.positive("sigmas", p.sigmas);
        }
        Parameters::RiskAlpha(p) => {
            issues.grid("grid", &p.grid);
            issues.alphas("alphas", &p.alphas);
            if p.alphas.is_empty() {
                issues.push("parameters.alphas must be nonempty");
            }
            if !(p.perturbation_scale.is_finite() && p.perturbation_scale >= 0.0) {
                issues.push("parameters.perturbation_scale must be nonnegative");
            }
            if !(p.slack.is_finite() && p.slack >= 0.0) {
                issues.push("parameters.slack must be nonnegative");
            }
        }
    }
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value, issues: &mut Issues) -> Option<T> {
    match serde_json::from_value(v) {
        Ok(t) => Some(t),
        Err(e) => {
            issues.push(format!("parameters: {e}"));
            None
        }
    }
}

/// Parses and validates a configuration document, reporting every problem found.
pub fn parse_config(text: &[u8]) -> Result<ExperimentConfig, HarnessError> {
    let raw: Value = serde_json::from_slice(text).map_err(|e| HarnessError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut issues = Issues(Vec::new());
    let Value::Object(mut top) = raw else {
        return Err(HarnessError::Invalid(vec![
            "configuration must be a JSON object".into()
        ]));
    };

    for key in top.keys() {
        if !["experiment", "parameters", "seed", "output_path"].contains(&key.as_str()) {
            issues.push(format!("unknown top-level field `{key}`"));
        }
    }

    let experiment = match top.remove("experiment") {
        Some(Value::String(s)) if EXPERIMENTS.contains(&s.as_str()) => Some(s),
        Some(Value::String(s)) => {
            issues.push(format!(
                "unknown experiment `{s}`; valid experiments are: {}",
                EXPERIMENTS.join(", ")
            ));
            None
        }
        Some(_) => {
            issues.push("experiment must be a string");
            None
        }
        None => {
            issues.push(format!(
                "missing field `experiment`; valid experiments are: {}",
                EXPERIMENTS.join(", ")
            ));
            None
        }
    };

    let seed = match top.remove("seed") {
        None => 0,
        Some(v) => v.as_u64().unwrap_or_else(|| {
            issues.push("seed must be an unsigned 64-bit integer");
            0
        }),
    };

    let output_path = match top.remove("output_path") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => {
            issues.push("output_path must be a string");
            None
        }
    };

    let params_value = match top.remove("parameters") {
        Some(v @ Value::Object(_)) => Some(v),
        Some(_) => {
            issues.push("parameters must be an object");
            None
        }
        None => {
            issues.push("missing field `parameters`");
            None
        }
    };

    let parameters = match (experiment.as_deref(), params_value) {
        (Some(name), Some(v)) => {
            let p = match name {
                "stein" => typed(v, &mut issues).map(Parameters::Stein),
                "sanov" => typed(v, &mut issues).map(Parameters::Sanov),
                "chernoff" => typed(v, &mut issues).map(Parameters::Chernoff),
                "divergence-props" => typed(v, &mut issues).map(Parameters::DivergenceProps),
                "hot" => typed(v, &mut issues).map(Parameters::Hot),
                "modelsel" => typed(v, &mut issues).map(Parameters::Modelsel),
                "risk-alpha" => typed(v, &mut issues).map(Parameters::RiskAlpha),
                _ => unreachable!("experiment name checked above"),
            };
            if let Some(p) = &p {
                validate(p, &mut issues);
            }
            p
        }
        _ => None,
    };

    match parameters {
        Some(parameters) if issues.0.is_empty() => Ok(ExperimentConfig {
            parameters,
            seed,
            output_path,
        }),
        _ => Err(HarnessError::Invalid(issues.0)),
    }
}
