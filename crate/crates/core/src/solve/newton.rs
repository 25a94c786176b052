//! Damped Newton iteration restricted to the positive cone.

use nalgebra::DVector;

use super::{ProblemSpec, SolutionPoint};
use crate::domain::BoundaryFunction;
use crate::error::{Error, Result};

pub const MAX_NEWTON_ITERS: usize = 100;
const MAX_HALVINGS: usize = 30;
const COLLAPSE: f64 = 1e-10;
/// The residual must also be small against the nonlinear term, and that term
/// must be resolvable next to `λ g w`, so that iterates drifting into the
/// trivial solution along `φ₁` are not accepted.
const NONLINEAR_RTOL: f64 = 1e-6;
const RESOLUTION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub w: DVector<f64>,
    pub iterations: usize,
}

/// Newton on the nodal residual, halving the step while the residual grows
/// or the iterate leaves the positive cone.
pub fn newton_iterate(spec: &ProblemSpec, lambda: f64, init: &BoundaryFunction) -> Result<NewtonOutcome> {
    spec.domain().check(init)?;
    if !(init.min() > 0.0) {
        return Err(Error::NonpositiveInit);
    }
    let mut w = init.values().clone();
    let mut r = spec.residual(lambda, &w);
    let mut rnorm = r.amax();
    for iterations in 0..=MAX_NEWTON_ITERS {
        if !rnorm.is_finite() {
            return Err(Error::DampingExhausted);
        }
        if rnorm <= spec.residual_tolerance(&w) && resolved(spec, lambda, &w, rnorm) {
            return Ok(NewtonOutcome { w, iterations });
        }
        if iterations == MAX_NEWTON_ITERS {
            break;
        }
        let step = spec
            .jacobian(lambda, &w)
            .lu()
            .solve(&(-&r))
            .filter(|s| s.iter().all(|x| x.is_finite()))
            .ok_or(Error::SingularJacobian)?;
        let mut t = 1.0;
        let mut left_cone = true;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = &w + &step * t;
            if trial.min() > 0.0 {
                left_cone = false;
                let rt = spec.residual(lambda, &trial);
                let nt = rt.amax();
                if nt < rnorm || nt <= spec.residual_tolerance(&trial) {
                    w = trial;
                    r = rt;
                    rnorm = nt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(if left_cone { Error::LeftPositiveCone } else { Error::DampingExhausted });
        }
        if w.amax() < COLLAPSE {
            return Err(Error::CollapsedToZero);
        }
    }
    Err(Error::MaxIterations(MAX_NEWTON_ITERS))
}

fn resolved(spec: &ProblemSpec, lambda: f64, w: &DVector<f64>, rnorm: f64) -> bool {
    let (g, h, p) = (spec.g().values(), spec.h().values(), spec.p());
    let nonlinear = w.iter().zip(h).map(|(x, h)| (h * x.abs().powf(p)).abs()).fold(0.0, f64::max);
    let linear = w.iter().zip(g).map(|(x, g)| (lambda * g * x).abs()).fold(0.0, f64::max);
    rnorm <= NONLINEAR_RTOL * nonlinear && nonlinear >= RESOLUTION * linear
}

/// Converged positive solution with full diagnostics (functionals and `γ₁`).
pub fn newton_solve(spec: &ProblemSpec, lambda: f64, init: &BoundaryFunction) -> Result<SolutionPoint> {
    let out = newton_iterate(spec, lambda, init)?;
    Ok(SolutionPoint::evaluate(spec, lambda, out.w, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use approx::assert_relative_eq;

    fn spec() -> ProblemSpec {
        ProblemSpec::new(Domain::interval(), BoundaryFunction::new(vec![1.0, -4.0]), 2.0).unwrap()
    }

    #[test]
    fn converges_to_closed_form() {
        let pt = newton_solve(&spec(), 0.0, &BoundaryFunction::new(vec![0.6, 0.3])).unwrap();
        assert_relative_eq!(pt.w.as_slice()[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(pt.w.as_slice()[1], 0.25, epsilon = 1e-12);
        assert!(pt.positive);
        assert!(pt.gamma1 < 0.0);
    }

    #[test]
    fn exact_init_needs_no_step() {
        let out = newton_iterate(&spec(), 0.0, &BoundaryFunction::new(vec![0.5, 0.25])).unwrap();
        assert!(out.iterations <= 1);
    }

    #[test]
    fn rejects_nonpositive_init() {
        assert!(matches!(
            newton_iterate(&spec(), 0.0, &BoundaryFunction::new(vec![0.5, 0.0])),
            Err(Error::NonpositiveInit)
        ));
    }
}
