//! Run configuration read from TOML (or from the `config` echo inside a JSON report).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dtnbif_core::experiments::plateau_mask;
use dtnbif_core::{BoundaryFunction, Domain, ProblemSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainChoice {
    Interval,
    Disk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub kind: DomainChoice,
    /// Number of boundary nodes on the disk.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

/// Interval weights are two node values; disk weights are trigonometric
/// polynomials `Σ a_n cos nθ + b_n sin nθ`, optionally forced to zero on arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Rows `[n, a_n, b_n]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<[f64; 3]>>,
    /// Arcs `[start, end]` in radians, taken counterclockwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plateaus: Vec<[f64; 2]>,
    #[serde(default = "default_plateau_width")]
    pub plateau_width: f64,
}

fn default_plateau_width() -> f64 {
    0.05
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormChoice {
    W,
    F,
    Sppr,
    Logistic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_form")]
    pub form: FormChoice,
}

fn default_p() -> f64 {
    2.0
}

fn default_form() -> FormChoice {
    FormChoice::W
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self { p: default_p(), form: default_form() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaConfig {
    /// Explicit λ samples; each command has its own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Lower end of the continuation window or the asymptotic fit window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    /// Number of log-spaced samples for the asymptotic fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default = "default_fractions")]
    pub lambda_fractions: Vec<f64>,
    #[serde(default = "default_multistart")]
    pub multistart: usize,
    #[serde(default)]
    pub with_stability: bool,
}

fn default_fractions() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 0.75]
}

fn default_multistart() -> usize {
    32
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            deltas: Vec::new(),
            lambda_fractions: default_fractions(),
            multistart: default_multistart(),
            with_stability: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default = "default_inits")]
    pub inits: usize,
}

fn default_inits() -> usize {
    64
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { inits: default_inits() }
    }
}

/// Newton residual scale and continuation step bounds. Step sizes are
/// fractions of `λ₁(g)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_newton")]
    pub newton: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_ds_init")]
    pub ds_init: f64,
    #[serde(default = "default_ds_max")]
    pub ds_max: f64,
    #[serde(default = "default_ds_min")]
    pub ds_min: f64,
    #[serde(default = "default_max_points")]
    pub max_points: usize,
    #[serde(default = "default_sup_max")]
    pub sup_max: f64,
}

fn default_newton() -> f64 {
    dtnbif_core::solve::RESIDUAL_RTOL
}
fn default_epsilon() -> f64 {
    1e-4
}
fn default_ds_init() -> f64 {
    0.01
}
fn default_ds_max() -> f64 {
    0.05
}
fn default_ds_min() -> f64 {
    1e-8
}
fn default_max_points() -> usize {
    5000
}
fn default_sup_max() -> f64 {
    1e6
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            newton: default_newton(),
            epsilon: default_epsilon(),
            ds_init: default_ds_init(),
            ds_max: default_ds_max(),
            ds_min: default_ds_min(),
            max_points: default_max_points(),
            sup_max: default_sup_max(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default)]
    pub seed: u64,
    /// Output directory; not echoed, since it does not affect results.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub run: RunSection,
    pub domain: DomainConfig,
    pub weight: WeightConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<WeightConfig>,
    #[serde(default)]
    pub problem: ProblemConfig,
    #[serde(default)]
    pub lambda: LambdaConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub probe: ProbeConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    /// Reads a TOML file, or the `config` member of a JSON report.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        let config: RunConfig = if path.extension().is_some_and(|e| e == "json") {
            let doc: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
            let inner = doc.get("config").cloned().unwrap_or(doc);
            serde_json::from_value(inner).map_err(|e| config_error(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.domain.kind {
            DomainChoice::Interval => {
                if self.domain.resolution.is_some_and(|m| m != 2) {
                    return Err(config_error("the interval has exactly two boundary nodes"));
                }
            }
            DomainChoice::Disk => match self.domain.resolution {
                Some(m) if m >= 8 && m % 2 == 0 => {}
                _ => return Err(config_error("disk resolution must be an even integer >= 8")),
            },
        }
        self.check_weight("weight", &self.weight)?;
        if let Some(f) = &self.f {
            self.check_weight("f", f)?;
        }
        if self.problem.form == FormChoice::F && self.f.is_none() {
            return Err(config_error("form = \"f\" needs an [f] section"));
        }
        if !(self.problem.p.is_finite() && self.problem.p > 1.0) {
            return Err(config_error(format!("p = {} must exceed 1", self.problem.p)));
        }
        if self.problem.form == FormChoice::Logistic && self.problem.p != 2.0 {
            return Err(config_error("the logistic form has p = 2"));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("newton", t.newton),
            ("epsilon", t.epsilon),
            ("ds_init", t.ds_init),
            ("ds_max", t.ds_max),
            ("ds_min", t.ds_min),
            ("sup_max", t.sup_max),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_error(format!("tolerance {name} = {v} must be positive")));
            }
        }
        if !(t.ds_min <= t.ds_init && t.ds_init <= t.ds_max) || t.max_points == 0 {
            return Err(config_error("continuation steps need ds_min <= ds_init <= ds_max and max_points > 0"));
        }
        let lambdas = self.lambda.values.iter().flatten();
        if lambdas.chain(&self.lambda.lo).chain(&self.lambda.hi).any(|x| !x.is_finite()) {
            return Err(config_error("λ values must be finite"));
        }
        if let (Some(lo), Some(hi)) = (self.lambda.lo, self.lambda.hi) {
            if !(lo < hi) {
                return Err(config_error("lambda.lo must be below lambda.hi"));
            }
        }
        if self.sweep.deltas.iter().chain(&self.sweep.lambda_fractions).any(|x| !x.is_finite()) {
            return Err(config_error("sweep values must be finite"));
        }
        Ok(())
    }

    fn check_weight(&self, name: &str, w: &WeightConfig) -> Result<(), CliError> {
        if !(w.plateau_width.is_finite() && w.plateau_width > 0.0) {
            return Err(config_error(format!("{name}.plateau_width must be positive")));
        }
        match self.domain.kind {
            DomainChoice::Interval => {
                let ok = w.values.as_ref().is_some_and(|v| v.len() == 2 && v.iter().all(|x| x.is_finite()));
                if !ok || w.modes.is_some() || !w.plateaus.is_empty() {
                    return Err(config_error(format!("{name}: the interval takes exactly two finite `values`")));
                }
            }
            DomainChoice::Disk => {
                let Some(modes) = &w.modes else {
                    return Err(config_error(format!("{name}: disk weights are given by `modes`")));
                };
                if w.values.is_some() {
                    return Err(config_error(format!("{name}: disk weights take `modes`, not `values`")));
                }
                for row in modes {
                    if row.iter().any(|x| !x.is_finite()) || row[0] < 0.0 || row[0].fract() != 0.0 {
                        return Err(config_error(format!("{name}: mode rows are [n, cos, sin] with integer n >= 0")));
                    }
                }
                if w.plateaus.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(config_error(format!("{name}: plateau arcs must be finite")));
                }
            }
        }
        Ok(())
    }

    pub fn build_domain(&self) -> Domain {
        match self.domain.kind {
            DomainChoice::Interval => Domain::interval(),
            DomainChoice::Disk => Domain::disk(self.domain.resolution.unwrap_or(0)).expect("validated resolution"),
        }
    }

    pub fn build_weight(&self, domain: &Domain, w: &WeightConfig) -> BoundaryFunction {
        if let Some(values) = &w.values {
            return BoundaryFunction::new(values.clone());
        }
        let modes = w.modes.clone().unwrap_or_default();
        let arcs: Vec<(f64, f64)> = w.plateaus.iter().map(|a| (a[0], a[1])).collect();
        domain.sample(|t| {
            let base: f64 = modes.iter().map(|m| m[1] * (m[0] * t).cos() + m[2] * (m[0] * t).sin()).sum();
            if arcs.is_empty() {
                base
            } else {
                base * plateau_mask(t, &arcs, w.plateau_width)
            }
        })
    }

    /// Problem for the configured form. For the logistic form the weight is `r`.
    pub fn build_spec(&self) -> dtnbif_core::Result<ProblemSpec> {
        let d = self.build_domain();
        let g = self.build_weight(&d, &self.weight);
        let p = self.problem.p;
        let spec = match self.problem.form {
            FormChoice::W => ProblemSpec::new(d, g, p)?,
            FormChoice::Sppr => ProblemSpec::sppr(d, g, p)?,
            FormChoice::Logistic => ProblemSpec::logistic(d, g)?,
            FormChoice::F => {
                let f = self.build_weight(&d, self.f.as_ref().expect("validated f section"));
                ProblemSpec::f_variant(d, g, f, p)?
            }
        };
        spec.with_residual_rtol(self.tolerances.newton)
    }

    pub fn step_options(&self, spec: &ProblemSpec) -> dtnbif_core::solve::StepOptions {
        let t = &self.tolerances;
        let l1 = spec.lambda1().max(1e-12);
        let mut opts = dtnbif_core::solve::StepOptions::for_problem(spec);
        opts.epsilon = t.epsilon;
        opts.ds_init = t.ds_init * l1;
        opts.ds_max = t.ds_max * l1;
        opts.ds_min = t.ds_min * l1;
        opts.max_points = t.max_points;
        opts.sup_max = t.sup_max;
        opts
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}
