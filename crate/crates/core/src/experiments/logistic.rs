//! Audits of the logistic problem `∂u/∂ν = λ r u (1 - u)`.
//!
//! With `∫r > 0` the large solutions `u > 1` form a branch over
//! `(0, λ₁(-r))`; with `∫r ≤ 0` no such solution should be found. On the
//! interval each λ is also checked against the exact two-node enumeration.

use serde::{Deserialize, Serialize};

use super::oracle1d::{oracle_1d, OracleForm, SolutionClass};
use crate::domain::{BoundaryFunction, Domain, DomainKind};
use crate::error::{Error, Result};
use crate::solve::{continue_branch, nonexistence_probe, to_logistic, LambdaWindow, ProblemSpec, StepOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogisticRegime {
    /// `∫r > 0`.
    LargeSolutionBranch,
    /// `∫r ≤ 0`.
    NoLargeSolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticSample {
    pub lambda: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub gamma1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticBranchAudit {
    /// `λ₁(-r)`.
    pub lambda1: f64,
    /// Branch samples at the requested λ values inside `(0, λ₁(-r))`.
    pub samples: Vec<LogisticSample>,
    pub all_above_one: bool,
    pub all_unstable: bool,
    /// `‖u - 1‖∞` at the ten branch points closest to `λ₁(-r)`, in increasing λ.
    pub endpoint_distances: Vec<f64>,
    pub endpoint_decreasing: bool,
    /// `max λ‖u_λ‖∞` over the branch in `(0, λ₁(-r))`.
    pub scaled_sup_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticProbe {
    pub lambda: f64,
    /// Solutions with `u > 1` at every node.
    pub findings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCrossCheck {
    pub lambda: f64,
    pub above_one: usize,
    pub below_one: usize,
    pub crossing_one: usize,
    /// Whether the branch point at this λ is one of the enumerated `u > 1` solutions.
    pub branch_matches: Option<bool>,
    /// Counts agree with the expected one-dimensional solution structure.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticReport {
    pub r_integral: f64,
    pub regime: LogisticRegime,
    pub branch: Option<LogisticBranchAudit>,
    pub probes: Vec<LogisticProbe>,
    pub oracle: Vec<OracleCrossCheck>,
}

/// Closed-form principal eigenvalue `(a + b)/(ab)` of a two-node weight (0 if the mean is nonnegative).
fn interval_lambda1(a: f64, b: f64) -> f64 {
    if a + b >= 0.0 {
        0.0
    } else {
        (a + b) / (a * b)
    }
}

pub fn logistic_scenarios(
    domain: &Domain,
    r: &BoundaryFunction,
    lambdas: &[f64],
    probe_inits: usize,
    seed: u64,
) -> Result<LogisticReport> {
    domain.check(r)?;
    if !r.changes_sign() {
        return Err(Error::WeightNotSignChanging);
    }
    if lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidArgument("logistic λ samples must be positive".into()));
    }
    let r_integral = domain.boundary_integral(r)?;
    let spec = ProblemSpec::logistic(domain.clone(), r.clone())?;
    let mut report = LogisticReport {
        r_integral,
        regime: if r_integral > 0.0 { LogisticRegime::LargeSolutionBranch } else { LogisticRegime::NoLargeSolution },
        branch: None,
        probes: Vec::new(),
        oracle: Vec::new(),
    };

    let mut branch_u: Vec<(f64, BoundaryFunction)> = Vec::new();
    if r_integral > 0.0 {
        let lambda1 = spec.lambda1();
        let opts = StepOptions::for_problem(&spec).with_targets(lambdas);
        let branch = continue_branch(&spec, LambdaWindow::standard(&spec), &opts)?;
        let inner = branch.restrict(0.0, lambda1);
        let views = to_logistic(&spec, &inner, r);
        let all_above_one = views.is_ok();
        let views = views.unwrap_or_default();
        let samples = inner
            .points
            .iter()
            .filter(|pt| lambdas.contains(&pt.lambda))
            .map(|pt| {
                let u = pt.w.values() / pt.lambda;
                LogisticSample { lambda: pt.lambda, u_min: 1.0 + u.min(), u_max: 1.0 + u.max(), gamma1: pt.gamma1 }
            })
            .collect();
        let mut near: Vec<(f64, f64)> = inner.points.iter().map(|pt| (pt.lambda, pt.sup_norm / pt.lambda)).collect();
        near.sort_by(|a, b| b.0.total_cmp(&a.0));
        near.truncate(10);
        near.reverse();
        let endpoint_distances: Vec<f64> = near.iter().map(|x| x.1).collect();
        branch_u = views.iter().map(|v| (v.lambda, v.trace.clone())).collect();
        report.branch = Some(LogisticBranchAudit {
            lambda1,
            samples,
            all_above_one,
            all_unstable: inner.points.iter().all(|pt| pt.gamma1 < 0.0),
            endpoint_decreasing: endpoint_distances.windows(2).all(|w| w[1] < w[0]),
            endpoint_distances,
            scaled_sup_max: views.iter().map(|v| v.lambda * v.sup_norm).fold(0.0, f64::max),
        });
    } else {
        for &lambda in lambdas {
            let rep = nonexistence_probe(&spec, lambda, probe_inits, seed);
            report.probes.push(LogisticProbe { lambda, findings: rep.findings.len() });
        }
    }

    if domain.kind() == DomainKind::Interval {
        let (r0, r1) = (r.as_slice()[0], r.as_slice()[1]);
        for &lambda in lambdas {
            let rep = oracle_1d(OracleForm::Logistic { r0, r1 }, lambda)?;
            let above = rep.count(SolutionClass::PositiveAboveOne);
            let below = rep.count(SolutionClass::PositiveBelowOne);
            let crossing = rep.count(SolutionClass::PositiveCrossingOne);
            let branch_matches = branch_u.iter().find(|(l, _)| *l == lambda).map(|(_, u)| {
                let (a, b) = (u.as_slice()[0], u.as_slice()[1]);
                rep.of_class(SolutionClass::PositiveAboveOne)
                    .any(|s| (s.left() - a).abs() <= 1e-8 * a && (s.right() - b).abs() <= 1e-8 * b)
            });
            let consistent = crossing == 0
                && if r0 + r1 > 0.0 {
                    let l1 = interval_lambda1(-r0, -r1);
                    if lambda < l1 {
                        above >= 1 && below == 0
                    } else if lambda > l1 {
                        above == 0 && below == 1
                    } else {
                        above == 0 && below == 0
                    }
                } else {
                    let l1 = interval_lambda1(r0, r1);
                    above == 0 && if lambda > l1 { below == 1 } else { below == 0 }
                };
            report.oracle.push(OracleCrossCheck {
                lambda,
                above_one: above,
                below_one: below,
                crossing_one: crossing,
                branch_matches,
                consistent,
            });
        }
    }
    Ok(report)
}
