//! Log-log fits of branch sup-norms against λ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solve::{to_logistic, to_sppr, Branch, ProblemSpec};
use crate::domain::BoundaryFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymptoticTarget {
    /// `‖v_λ‖∞` with `v = λ^{-1/(p-1)} w`.
    SpprV,
    /// `‖u_λ‖∞` with `u = 1 + v` (logistic branches).
    LogisticU,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsFit {
    pub lambdas: Vec<f64>,
    pub sup_norms: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the log data from the fitted line.
    pub residual: f64,
}

/// Least-squares line through `(log λ, log sup)`; needs 8 samples spanning a decade.
pub fn fit_power_law(lambdas: &[f64], sup_norms: &[f64]) -> Result<AsymptoticsFit> {
    if lambdas.len() != sup_norms.len() {
        return Err(Error::InvalidArgument("sample lengths differ".into()));
    }
    if lambdas.len() < 8 {
        return Err(Error::InsufficientSamples(format!("{} samples, need at least 8", lambdas.len())));
    }
    if lambdas.iter().chain(sup_norms).any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidArgument("log-log fit needs positive samples".into()));
    }
    let lo = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lambdas.iter().copied().fold(0.0, f64::max);
    if hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(Error::InsufficientSamples(format!("λ range [{lo}, {hi}] spans less than a decade")));
    }
    let x: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let y: Vec<f64> = sup_norms.iter().map(|s| s.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    Ok(AsymptoticsFit { lambdas: lambdas.to_vec(), sup_norms: sup_norms.to_vec(), slope, intercept, residual })
}

/// Fit over the branch points with `λ` in `[lo, hi]` (both positive).
pub fn asymptotics_fit(
    spec: &ProblemSpec,
    branch: &Branch,
    window: (f64, f64),
    target: AsymptoticTarget,
) -> Result<AsymptoticsFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!("window [{lo}, {hi}] must be positive and nonempty")));
    }
    let sub = branch.restrict(lo * (1.0 - 1e-12), hi * (1.0 + 1e-12));
    let views = match target {
        AsymptoticTarget::SpprV => to_sppr(spec, &sub)?,
        AsymptoticTarget::LogisticU => {
            let r: BoundaryFunction = spec.g().scale(-1.0);
            to_logistic(spec, &sub, &r)?
        }
    };
    let lambdas: Vec<f64> = views.iter().map(|v| v.lambda).collect();
    let sups: Vec<f64> = views.iter().map(|v| v.sup_norm).collect();
    fit_power_law(&lambdas, &sups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let lambdas: Vec<f64> = (0..10).map(|k| 1e-3 * 10f64.powf(k as f64 / 4.5)).collect();
        for p in [2.0, 3.0, 1.5] {
            let sups: Vec<f64> = lambdas.iter().map(|l| 0.7 * l.powf(-1.0 / (p - 1.0))).collect();
            let fit = fit_power_law(&lambdas, &sups).unwrap();
            assert!((fit.slope + 1.0 / (p - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn sample_requirements() {
        let l = [1.0, 2.0, 3.0];
        assert!(matches!(fit_power_law(&l, &l), Err(Error::InsufficientSamples(_))));
        let narrow: Vec<f64> = (1..=9).map(|k| k as f64).collect();
        assert!(matches!(fit_power_law(&narrow, &narrow), Err(Error::InsufficientSamples(_))));
    }
}
