//! Views of branch points as solutions of the sppr and logistic problems.

use nalgebra::DVector;

use super::{Branch, ProblemSpec};
use crate::domain::BoundaryFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TransformedPoint {
    pub lambda: f64,
    pub trace: BoundaryFunction,
    pub sup_norm: f64,
    /// Nodal residual of the transformed equation, relative to its term sizes.
    pub residual: f64,
}

fn positive_lambdas(branch: &Branch) -> Result<()> {
    match branch.points.iter().find(|pt| pt.lambda <= 0.0) {
        Some(pt) => Err(Error::NonpositiveLambdaPoint(pt.lambda)),
        None => Ok(()),
    }
}

/// `v = λ^{-1/(p-1)} w`, checked against `Λv = λ(g v + h v^p)`.
pub fn to_sppr(spec: &ProblemSpec, branch: &Branch) -> Result<Vec<TransformedPoint>> {
    positive_lambdas(branch)?;
    let p = spec.p();
    let (g, h) = (spec.g().values(), spec.h().values());
    Ok(branch
        .points
        .iter()
        .map(|pt| {
            let lambda = pt.lambda;
            let v = pt.w.values() * lambda.powf(-1.0 / (p - 1.0));
            let dv = spec.collocation() * &v;
            let r = DVector::from_iterator(
                v.len(),
                (0..v.len()).map(|i| dv[i] - lambda * (g[i] * v[i] + h[i] * v[i].abs().powf(p - 1.0) * v[i])),
            );
            let s = v.amax();
            TransformedPoint {
                lambda,
                residual: r.amax() / (1.0 + lambda * (s + s.powf(p)) * g.amax().max(h.amax())),
                sup_norm: s,
                trace: BoundaryFunction::from_vector(v),
            }
        })
        .collect())
}

/// `u = 1 + v` for a branch solved with `g = -r`, `p = 2`, checked against
/// `Λu = λ r u (1 - u)`. Fails if any `u` is not strictly above one.
pub fn to_logistic(spec: &ProblemSpec, branch: &Branch, r: &BoundaryFunction) -> Result<Vec<TransformedPoint>> {
    spec.domain().check(r)?;
    if spec.p() != 2.0 || (spec.g().values() + r.values()).amax() != 0.0 || spec.f().is_some() {
        return Err(Error::InvalidArgument("logistic view needs a branch solved with g = -r and p = 2".into()));
    }
    let views = to_sppr(spec, branch)?;
    views
        .into_iter()
        .map(|view| {
            let lambda = view.lambda;
            let u = view.trace.values().add_scalar(1.0);
            let min = u.min();
            if !(min > 1.0) {
                return Err(Error::UNotAboveOne(min));
            }
            let du = spec.collocation() * &u;
            let res = DVector::from_iterator(
                u.len(),
                (0..u.len()).map(|i| du[i] - lambda * r.values()[i] * u[i] * (1.0 - u[i])),
            );
            let s = u.amax();
            Ok(TransformedPoint {
                lambda,
                residual: res.amax() / (1.0 + lambda * r.values().amax() * s * s),
                sup_norm: s,
                trace: BoundaryFunction::from_vector(u),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::solve::{continue_branch, LambdaWindow, StepOptions};
    use approx::assert_relative_eq;

    #[test]
    fn scaling_and_residuals() {
        let r = BoundaryFunction::new(vec![-1.0, 4.0]);
        let spec = ProblemSpec::logistic(Domain::interval(), r.clone()).unwrap();
        let opts = StepOptions::for_problem(&spec).with_targets(&[0.5, 0.1]);
        let branch = continue_branch(&spec, LambdaWindow::standard(&spec), &opts).unwrap();
        assert!(matches!(to_sppr(&spec, &branch), Err(Error::NonpositiveLambdaPoint(_))));
        let inner = branch.restrict(0.0, f64::INFINITY);
        let v = to_sppr(&spec, &inner).unwrap();
        let half = v.iter().find(|pt| pt.lambda == 0.5).unwrap();
        let w = &inner.points.iter().find(|pt| pt.lambda == 0.5).unwrap().w;
        assert_relative_eq!(half.trace.as_slice()[0], 2.0 * w.as_slice()[0], max_relative = 1e-15);
        assert!(v.iter().all(|pt| pt.residual < 1e-9));
        let u = to_logistic(&spec, &inner, &r).unwrap();
        assert!(u.iter().all(|pt| pt.trace.min() > 1.0 && pt.residual < 1e-9));
    }
}
