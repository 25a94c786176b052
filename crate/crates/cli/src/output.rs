//! CSV and JSON writers. Every number is printed through [`fmt_num`] or
//! [`num`] so that files are byte-identical across runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use dtnbif_core::solve::SolutionPoint;
use dtnbif_core::spectral;
use dtnbif_core::ProblemSpec;

use crate::config::RunConfig;
use crate::CliError;

pub const BRANCH_HEADER: &str = "lambda,sup_norm,l2_norm,E,G,J,gamma1,mu2plus,membership,residual";
pub const DIAGRAM_HEADER: &str = "lambda,sup_norm";

/// 17 significant digits; `+inf`, `-inf` and `nan` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number, or the [`fmt_num`] sentinel string when not finite.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(fmt_num(x))
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// `μ₂⁺` at a positive point; `+∞` when the pencil has no second positive eigenvalue.
pub fn mu2_plus(spec: &ProblemSpec, pt: &SolutionPoint) -> f64 {
    if !pt.positive {
        return f64::NAN;
    }
    spectral::weighted_steklov_spectrum_h(spec.domain(), spec.g(), spec.h(), pt.lambda, &pt.w, spec.p())
        .map(|s| s.mu2_plus.unwrap_or(f64::INFINITY))
        .unwrap_or(f64::NAN)
}

pub fn branch_csv(spec: &ProblemSpec, points: &[SolutionPoint]) -> String {
    let mut out = String::new();
    out.push_str(BRANCH_HEADER);
    out.push('\n');
    for pt in points {
        let n = &pt.nehari;
        let fields = [
            fmt_num(pt.lambda),
            fmt_num(pt.sup_norm),
            fmt_num(pt.l2_norm(spec.domain())),
            fmt_num(n.e),
            fmt_num(n.g_val),
            fmt_num(n.j),
            fmt_num(pt.gamma1),
            fmt_num(mu2_plus(spec, pt)),
            n.membership.as_str().to_string(),
            fmt_num(pt.residual),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn diagram_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::new();
    out.push_str(DIAGRAM_HEADER);
    out.push('\n');
    for (l, s) in rows {
        let _ = writeln!(out, "{},{}", fmt_num(*l), fmt_num(*s));
    }
    out
}

/// JSON document shared by the report commands.
pub struct Report {
    command: &'static str,
    config: Value,
    pub records: Vec<Value>,
    pub verdict: Map<String, Value>,
    pub errors: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, config: &RunConfig) -> Self {
        Self {
            command,
            config: serde_json::to_value(config).expect("configuration serializes"),
            records: Vec::new(),
            verdict: Map::new(),
            errors: Vec::new(),
        }
    }

    pub fn fail(&mut self, err: impl std::fmt::Display) {
        self.errors.push(err.to_string());
    }

    pub fn incomplete(&self) -> bool {
        !self.errors.is_empty()
    }

    pub fn render(&self) -> String {
        let doc = json!({
            "command": self.command,
            "config": self.config,
            "records": self.records,
            "verdict": self.verdict,
            "incomplete": self.incomplete(),
            "errors": self.errors,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_num(-1.0 / 3.0), "-3.3333333333333331e-1");
        assert_eq!(fmt_num(f64::INFINITY), "+inf");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(num(f64::INFINITY), Value::String("+inf".into()));
    }
}
