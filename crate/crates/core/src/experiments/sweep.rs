//! δ-sweeps over the family `g_δ = g⁺ - δ g⁻`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::WeightFamily;
use super::oracle1d::{oracle_1d, OracleForm, SolutionClass};
use crate::domain::{BoundaryFunction, Domain, DomainKind};
use crate::error::{Error, Result};
use crate::solve::probe::random_positive_inits;
use crate::solve::{continue_branch, newton_iterate, Branch, LambdaWindow, ProblemSpec, StepOptions};
use crate::spectral;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// λ samples as fractions of `λ₁(g_δ)`.
    pub lambda_fractions: Vec<f64>,
    pub multistart: usize,
    pub seed: u64,
    /// Compute `γ₁` along each branch.
    pub with_stability: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { lambda_fractions: vec![0.0, 0.25, 0.5, 0.75], multistart: 32, seed: 0, with_stability: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniquenessSample {
    pub lambda: f64,
    /// Distinct positive solutions found (branch point plus multi-start).
    pub distinct_positive: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub delta: f64,
    pub lambda1: f64,
    /// Lower estimate of `C_δ`: largest sup-norm seen on the branch over
    /// `[0, λ₁)` and among the multi-start solutions.
    pub c_delta: f64,
    pub m_delta: f64,
    /// `max|φ₁ - mean φ₁|` for the H¹-normalized principal eigenfunction.
    pub phi1_flatness: f64,
    pub uniqueness: Vec<UniquenessSample>,
    pub branch: Branch,
}

impl SweepRecord {
    /// Largest distinct-solution count over the λ samples.
    pub fn max_distinct(&self) -> usize {
        self.uniqueness.iter().map(|u| u.distinct_positive).max().unwrap_or(0)
    }
}

/// Per-δ outcome; a failing δ does not stop the sweep.
pub type SweepResult = Vec<(f64, Result<SweepRecord>)>;

fn dedup_push(found: &mut Vec<BoundaryFunction>, w: BoundaryFunction) {
    let scale = w.sup_norm().max(1e-300);
    if !found.iter().any(|f| (f.values() - w.values()).amax() <= 1e-8 * scale.max(f.sup_norm())) {
        found.push(w);
    }
}

fn sweep_one(domain: &Domain, family: &WeightFamily, delta: f64, p: f64, opts: &SweepOptions) -> Result<SweepRecord> {
    let g = family.weight(delta)?;
    let spec = ProblemSpec::new(domain.clone(), g.clone(), p)?;
    let lambda1 = spec.lambda1();
    if !(lambda1 > 0.0) {
        return Err(Error::NoPositivePrincipalEigenvalue(spec.weight_integral()));
    }
    let samples: Vec<f64> = opts.lambda_fractions.iter().map(|f| f * lambda1).collect();
    let mut step = StepOptions::for_problem(&spec).with_targets(&samples);
    step.with_stability = opts.with_stability;
    let branch = continue_branch(&spec, LambdaWindow::standard(&spec), &step)?;
    let m_delta = spectral::m_delta(domain, family, delta, &branch)?;

    let mut c_delta = branch
        .points
        .iter()
        .filter(|pt| pt.lambda >= 0.0 && pt.lambda < lambda1)
        .map(|pt| pt.sup_norm)
        .fold(0.0, f64::max);
    let inits = random_positive_inits(&spec, opts.multistart, opts.seed);
    let mut uniqueness = Vec::with_capacity(samples.len());
    for &lambda in &samples {
        let mut found = Vec::new();
        if let Some(pt) = branch.points.iter().find(|pt| pt.lambda == lambda) {
            dedup_push(&mut found, pt.w.clone());
        }
        let starts: Vec<BoundaryFunction> = inits
            .par_iter()
            .filter_map(|init| newton_iterate(&spec, lambda, init).ok())
            .filter(|out| out.w.min() > 0.0)
            .map(|out| BoundaryFunction::from_vector(out.w))
            .collect();
        for w in starts {
            c_delta = c_delta.max(w.sup_norm());
            dedup_push(&mut found, w);
        }
        let mut distinct = found.len();
        if domain.kind() == DomainKind::Interval {
            if let Ok(rep) = oracle_1d(OracleForm::WForm { g0: g.as_slice()[0], g1: g.as_slice()[1], p }, lambda) {
                distinct = distinct.max(rep.count(SolutionClass::Positive));
            }
        }
        uniqueness.push(UniquenessSample { lambda, distinct_positive: distinct });
    }

    let phi = spec.phi1();
    let mean = domain.boundary_integral(phi)? / domain.weights().iter().sum::<f64>();
    let phi1_flatness = phi.values().add_scalar(-mean).amax();
    Ok(SweepRecord { delta, lambda1, c_delta, m_delta, phi1_flatness, uniqueness, branch })
}

/// Runs every δ independently (in parallel) and returns results in input order.
/// `deltas` must decrease strictly and stay above `δ₀`.
pub fn delta_sweep(
    domain: &Domain,
    family: &WeightFamily,
    deltas: &[f64],
    p: f64,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    if deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("δ list must be strictly decreasing".into()));
    }
    if let Some(&last) = deltas.last() {
        if !(last > family.delta0) {
            return Err(Error::DeltaBelowThreshold { delta: last, delta0: family.delta0 });
        }
    }
    Ok(deltas
        .par_iter()
        .map(|&delta| (delta, sweep_one(domain, family, delta, p, opts)))
        .collect())
}

/// Smallest sampled δ whose `m_δ` exceeds `p` (no claim that it is the theoretical threshold).
pub fn empirical_delta_bar(result: &SweepResult, p: f64) -> Option<f64> {
    result
        .iter()
        .filter_map(|(d, r)| r.as_ref().ok().filter(|rec| rec.m_delta > p).map(|_| *d))
        .fold(None, |best: Option<f64>, d| Some(best.map_or(d, |b| b.min(d))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_sweep_trends() {
        let d = Domain::interval();
        let fam = WeightFamily::new(&d, &BoundaryFunction::new(vec![1.0, -2.0])).unwrap();
        let deltas = [2.0, 1.0, 0.7, 0.55];
        let res = delta_sweep(&d, &fam, &deltas, 2.0, &SweepOptions::default()).unwrap();
        let recs: Vec<&SweepRecord> = res.iter().map(|(_, r)| r.as_ref().unwrap()).collect();
        for pair in recs.windows(2) {
            assert!(pair[1].lambda1 < pair[0].lambda1);
            assert!(pair[1].c_delta < pair[0].c_delta);
        }
        assert!(recs.iter().all(|r| r.m_delta.is_infinite() && r.max_distinct() == 1));
        assert!(delta_sweep(&d, &fam, &[1.0, 2.0], 2.0, &SweepOptions::default()).is_err());
    }
}
