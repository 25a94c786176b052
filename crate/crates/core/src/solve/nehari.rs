//! Energy functionals, the fibering projection and Nehari-manifold descent.

use nalgebra::{Cholesky, DVector, Dyn};
use serde::{Deserialize, Serialize};

use super::newton::newton_iterate;
use super::{ProblemSpec, SolutionPoint};
use crate::domain::BoundaryFunction;
use crate::error::{Error, Result};

const MANIFOLD_TOL: f64 = 1e-8;
const GRADIENT_TOL: f64 = 1e-10;
const MAX_DESCENT_ITERS: usize = 20_000;
const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    #[serde(rename = "N-minus")]
    NMinus,
    #[serde(rename = "N-plus")]
    NPlus,
    #[serde(rename = "N-zero")]
    NZero,
    #[serde(rename = "off-manifold")]
    OffManifold,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::NMinus => "N-minus",
            Membership::NPlus => "N-plus",
            Membership::NZero => "N-zero",
            Membership::OffManifold => "off-manifold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NehariDiagnostics {
    /// `E = ∫|∇W|² - λ∫g w²`.
    pub e: f64,
    /// `G = ∫h |w|^{p+1}`.
    pub g_val: f64,
    /// `J = E/2 - G/(p+1)`.
    pub j: f64,
    /// Stationary fibering scale `(E/G)^{1/(p-1)}`; NaN when `E` or `G` is not positive.
    pub t_projection: f64,
    pub membership: Membership,
}

pub fn functionals(spec: &ProblemSpec, lambda: f64, w: &BoundaryFunction) -> NehariDiagnostics {
    let p = spec.p();
    let v = w.values();
    if v.iter().all(|&x| x == 0.0) {
        return NehariDiagnostics { e: 0.0, g_val: 0.0, j: 0.0, t_projection: f64::NAN, membership: Membership::OffManifold };
    }
    let q = spec.domain().weights();
    let (g, h) = (spec.g().values(), spec.h().values());
    let mut weighted_sq = 0.0;
    let mut g_val = 0.0;
    for i in 0..v.len() {
        weighted_sq += q[i] * g[i] * v[i] * v[i];
        g_val += q[i] * h[i] * v[i].abs().powf(p + 1.0);
    }
    let e = spec.dtn().form(v, v) - lambda * weighted_sq;
    let j = 0.5 * e - g_val / (p + 1.0);
    let t_projection = fibering_scale(e, g_val, p).unwrap_or(f64::NAN);
    let membership = if (e - g_val).abs() <= MANIFOLD_TOL * (1.0 + e.abs()) {
        let second = (1.0 - p) * e;
        if second < 0.0 {
            Membership::NMinus
        } else if second > 0.0 {
            Membership::NPlus
        } else {
            Membership::NZero
        }
    } else {
        Membership::OffManifold
    };
    NehariDiagnostics { e, g_val, j, t_projection, membership }
}

/// Gradient of `J` in the Euclidean node coordinates (`Q` times the residual).
pub fn j_gradient(spec: &ProblemSpec, lambda: f64, w: &BoundaryFunction) -> DVector<f64> {
    let r = spec.residual(lambda, w.values());
    DVector::from_iterator(r.len(), r.iter().zip(spec.domain().weights()).map(|(a, q)| a * q))
}

/// Maximizer `t₀ = (E/G)^{1/(p-1)}` of `t ↦ J(tw)`.
pub fn fibering_scale(e: f64, g: f64, p: f64) -> Result<f64> {
    if e > 0.0 && g > 0.0 {
        Ok((e / g).powf(1.0 / (p - 1.0)))
    } else {
        Err(Error::NonpositiveEOrG { e, g })
    }
}

pub fn nehari_project(spec: &ProblemSpec, lambda: f64, w: &BoundaryFunction) -> Result<BoundaryFunction> {
    let d = functionals(spec, lambda, w);
    Ok(w.scale(fibering_scale(d.e, d.g_val, spec.p())?))
}

fn check_window(spec: &ProblemSpec, lambda: f64) -> Result<()> {
    let lambda1 = spec.lambda1();
    if spec.weight_integral() >= 0.0 || !(0.0..lambda1).contains(&lambda) {
        return Err(Error::LambdaOutOfRange { lambda, range: format!("[0, {lambda1})") });
    }
    Ok(())
}

/// Minimizer of `J` over the Nehari set by preconditioned gradient descent
/// with fibering projection and nodewise absolute value, then Newton-polished.
/// The default initial state is `φ₁(g)`.
pub fn minimize_nehari(spec: &ProblemSpec, lambda: f64, init: Option<&BoundaryFunction>) -> Result<SolutionPoint> {
    check_window(spec, lambda)?;
    let start = init.unwrap_or(spec.phi1());
    spec.domain().check(start)?;
    let start = start.map(f64::abs);
    let d0 = functionals(spec, lambda, &start);
    if !(d0.e > 0.0 && d0.g_val > 0.0) {
        return Err(Error::InitNotProjectable { e: d0.e, g: d0.g_val });
    }
    let mut w = nehari_project(spec, lambda, &start)?;

    let mut metric = spec.dtn().matrix().clone();
    for (i, q) in spec.domain().weights().iter().enumerate() {
        metric[(i, i)] += q;
    }
    let chol: Cholesky<f64, Dyn> = Cholesky::new(metric.clone()).expect("Λ + Q is positive definite");

    let p = spec.p();
    let mut alpha = 1.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_DESCENT_ITERS {
        iterations += 1;
        let grad = j_gradient(spec, lambda, &w);
        let dir = chol.solve(&grad);
        let pw = &metric * w.values();
        let coef = w.values().dot(&grad) / w.values().dot(&pw);
        let tangent = &dir - w.values() * coef;
        let gnorm_sq = tangent.dot(&(&metric * &tangent)).max(0.0);
        let scale = w.values().dot(&pw).sqrt().max(1.0);
        if gnorm_sq.sqrt() <= GRADIENT_TOL * scale.powf(p) {
            converged = true;
            break;
        }
        let j0 = functionals(spec, lambda, &w).j;
        let mut accepted = false;
        while alpha > 1e-16 {
            let trial = BoundaryFunction::from_vector((w.values() - &tangent * alpha).map(f64::abs));
            if let Ok(next) = nehari_project(spec, lambda, &trial) {
                if functionals(spec, lambda, &next).j <= j0 - ARMIJO * alpha * gnorm_sq {
                    w = next;
                    alpha = (alpha * 1.5).min(1e6);
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    match newton_iterate(spec, lambda, &w) {
        Ok(out) => Ok(SolutionPoint::evaluate(spec, lambda, out.w, true)),
        Err(e) if converged => Err(e),
        Err(_) => Err(Error::MaxIterations(iterations)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use approx::assert_relative_eq;

    fn interval_spec(g0: f64, g1: f64, p: f64) -> ProblemSpec {
        ProblemSpec::new(Domain::interval(), BoundaryFunction::new(vec![g0, g1]), p).unwrap()
    }

    #[test]
    fn functional_values() {
        let spec = interval_spec(1.0, -2.0, 2.0);
        let d = functionals(&spec, 0.5, &BoundaryFunction::new(vec![0.0, 1.0]));
        assert_relative_eq!(d.e, 2.0, epsilon = 1e-14);
        assert_relative_eq!(d.g_val, -2.0, epsilon = 1e-14);
        assert_relative_eq!(d.j, 5.0 / 3.0, epsilon = 1e-14);
        let zero = functionals(&spec, 0.5, &BoundaryFunction::new(vec![0.0, 0.0]));
        assert_eq!((zero.e, zero.g_val, zero.j), (0.0, 0.0, 0.0));
        assert_eq!(zero.membership, Membership::OffManifold);
    }

    #[test]
    fn fibering_scales() {
        assert_relative_eq!(fibering_scale(2.0, 1.0, 2.0).unwrap(), 2.0);
        assert_relative_eq!(fibering_scale(3.0, 3.0, 2.0).unwrap(), 1.0);
        assert_relative_eq!(fibering_scale(2.0, 1.0, 3.0).unwrap(), 2f64.sqrt());
        assert!(matches!(fibering_scale(-1.0, 1.0, 2.0), Err(Error::NonpositiveEOrG { .. })));
    }

    #[test]
    fn projection_lands_on_nehari_minus() {
        let spec = interval_spec(1.0, -4.0, 2.0);
        let w = nehari_project(&spec, 0.1, &BoundaryFunction::new(vec![1.0, 0.1])).unwrap();
        let d = functionals(&spec, 0.1, &w);
        assert_eq!(d.membership, Membership::NMinus);
        assert_relative_eq!(d.t_projection, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn minimizer_near_closed_form() {
        let spec = interval_spec(1.0, -4.0, 2.0);
        let pt = minimize_nehari(&spec, 1e-6, None).unwrap();
        assert!((pt.w.as_slice()[0] - 0.5).abs() < 1e-5);
        assert!((pt.w.as_slice()[1] - 0.25).abs() < 1e-5);
        assert_eq!(pt.nehari.membership, Membership::NMinus);
        assert!(pt.nehari.j > 0.0);
        assert!(minimize_nehari(&spec, spec.lambda1(), None).is_err());
    }
}
