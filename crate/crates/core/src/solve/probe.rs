//! Multi-start Newton search for positive solutions where none should exist.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::newton::newton_iterate;
use super::ProblemSpec;
use crate::domain::{BoundaryFunction, DomainKind};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeOutcome {
    Converged,
    CollapsedToZero,
    LeftPositiveCone,
    DampingExhausted,
    SingularJacobian,
    MaxIterations,
    Other,
}

impl ProbeOutcome {
    fn from_error(e: &Error) -> Self {
        match e {
            Error::CollapsedToZero => ProbeOutcome::CollapsedToZero,
            Error::LeftPositiveCone => ProbeOutcome::LeftPositiveCone,
            Error::DampingExhausted => ProbeOutcome::DampingExhausted,
            Error::SingularJacobian => ProbeOutcome::SingularJacobian,
            Error::MaxIterations(_) => ProbeOutcome::MaxIterations,
            _ => ProbeOutcome::Other,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub lambda: f64,
    /// Converged strictly positive solutions.
    pub findings: Vec<BoundaryFunction>,
    /// Outcome per initial state, in seed order.
    pub outcomes: Vec<ProbeOutcome>,
}

/// Seeded random positive traces: log-uniform amplitude times the exponential
/// of a random low-order trigonometric polynomial (disk) or of uniform node noise (interval).
pub fn random_positive_inits(spec: &ProblemSpec, n_inits: usize, seed: u64) -> Vec<BoundaryFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = spec.domain();
    (0..n_inits)
        .map(|_| {
            let amplitude = 10f64.powf(rng.gen_range(-2.0..2.0));
            match domain.kind() {
                DomainKind::Interval => {
                    BoundaryFunction::new((0..2).map(|_| amplitude * rng.gen_range(-1.0f64..1.0).exp()).collect())
                }
                DomainKind::UnitDisk => {
                    let coeffs: Vec<(f64, f64)> =
                        (0..4).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                    domain.sample(|t| {
                        let e: f64 = coeffs
                            .iter()
                            .enumerate()
                            .map(|(n, (a, b))| a * (n as f64 * t).cos() + b * (n as f64 * t).sin())
                            .sum();
                        amplitude * e.exp()
                    })
                }
            }
        })
        .collect()
}

/// Runs Newton from `n_inits` random positive traces and collects any
/// positive solution found. Distinct findings are deduplicated at `1e-8`.
pub fn nonexistence_probe(spec: &ProblemSpec, lambda: f64, n_inits: usize, seed: u64) -> ProbeReport {
    let inits = random_positive_inits(spec, n_inits, seed);
    let results: Vec<std::result::Result<DVector<f64>, Error>> = inits
        .par_iter()
        .map(|init| newton_iterate(spec, lambda, init).map(|out| out.w))
        .collect();
    let mut findings: Vec<BoundaryFunction> = Vec::new();
    let mut outcomes = Vec::with_capacity(results.len());
    for res in results {
        match res {
            Ok(w) if w.min() > 0.0 => {
                outcomes.push(ProbeOutcome::Converged);
                let scale = w.amax().max(1.0);
                if !findings.iter().any(|f| (f.values() - &w).amax() <= 1e-8 * scale) {
                    findings.push(BoundaryFunction::from_vector(w));
                }
            }
            Ok(_) => outcomes.push(ProbeOutcome::LeftPositiveCone),
            Err(e) => outcomes.push(ProbeOutcome::from_error(&e)),
        }
    }
    ProbeReport { lambda, findings, outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    #[test]
    fn no_solutions_beyond_principal_eigenvalue() {
        let spec = ProblemSpec::new(Domain::interval(), BoundaryFunction::new(vec![1.0, -2.0]), 2.0).unwrap();
        for factor in [1.0, 1.1, 2.0] {
            let rep = nonexistence_probe(&spec, factor * spec.lambda1(), 64, 7);
            assert!(rep.findings.is_empty(), "{factor}: {:?}", rep.findings);
            assert_eq!(rep.outcomes.len(), 64);
        }
    }

    #[test]
    fn finds_the_solution_inside_the_window() {
        let spec = ProblemSpec::new(Domain::interval(), BoundaryFunction::new(vec![1.0, -4.0]), 2.0).unwrap();
        let rep = nonexistence_probe(&spec, 0.0, 64, 3);
        assert_eq!(rep.findings.len(), 1);
    }

    #[test]
    fn deterministic_inits() {
        let spec = ProblemSpec::new(Domain::disk(16).unwrap(), Domain::disk(16).unwrap().sample(|t| t.cos() - 0.3), 2.0)
            .unwrap();
        assert_eq!(random_positive_inits(&spec, 5, 11), random_positive_inits(&spec, 5, 11));
        assert!(random_positive_inits(&spec, 5, 11).iter().all(|w| w.min() > 0.0));
    }
}
