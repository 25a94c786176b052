//! Positive solutions of `Λw = λ g w + h w^p` on the boundary nodes.
//!
//! All solvers work with the `w` unknown. The sppr and logistic problems are
//! views of the same solutions (`w = λ^{1/(p-1)} v`, `u = 1 + v`, `g = -r`),
//! produced by [`transform`].

pub mod continuation;
pub mod nehari;
pub mod newton;
pub mod probe;
pub mod transform;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::domain::{BoundaryFunction, Domain};
use crate::dtn::{assemble_dtn, DtnOperator};
use crate::error::{Error, Result};
use crate::spectral::{self, EigenPair};

pub use continuation::{continue_branch, Bifurcation, Branch, Direction, LambdaWindow, StepOptions, Termination};
pub use nehari::{fibering_scale, functionals, j_gradient, minimize_nehari, nehari_project, Membership, NehariDiagnostics};
pub use newton::{newton_iterate, newton_solve, NewtonOutcome};
pub use probe::{nonexistence_probe, ProbeOutcome, ProbeReport};
pub use transform::{to_logistic, to_sppr, TransformedPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    WForm,
    FForm,
    SpprForm,
    Logistic,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::WForm => "w-form",
            Form::FForm => "f-form",
            Form::SpprForm => "sppr-form",
            Form::Logistic => "logistic",
        }
    }
}

/// Relative convergence scale `1e-11·(‖w‖∞ + ‖w‖∞^p)` shared by all correctors.
pub const RESIDUAL_RTOL: f64 = 1e-11;

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    domain: Domain,
    p: f64,
    g: BoundaryFunction,
    f: Option<BoundaryFunction>,
    form: Form,
    dtn: DtnOperator,
    collocation: DMatrix<f64>,
    principal: EigenPair,
    residual_rtol: f64,
}

impl ProblemSpec {
    /// `Λw = λ g w + g w^p`.
    pub fn new(domain: Domain, g: BoundaryFunction, p: f64) -> Result<Self> {
        Self::build(domain, g, None, p, Form::WForm)
    }

    /// `Λw = λ g w + f w^p`.
    pub fn f_variant(domain: Domain, g: BoundaryFunction, f: BoundaryFunction, p: f64) -> Result<Self> {
        domain.check(&f)?;
        Self::build(domain, g, Some(f), p, Form::FForm)
    }

    /// Same solutions as [`ProblemSpec::new`], reported as `v = λ^{-1/(p-1)} w`.
    pub fn sppr(domain: Domain, g: BoundaryFunction, p: f64) -> Result<Self> {
        Self::build(domain, g, None, p, Form::SpprForm)
    }

    /// Logistic problem `∂u/∂ν = λ r u (1 - u)`, solved through `g = -r`, `p = 2`.
    pub fn logistic(domain: Domain, r: BoundaryFunction) -> Result<Self> {
        let g = r.scale(-1.0);
        Self::build(domain, g, None, 2.0, Form::Logistic)
    }

    fn build(domain: Domain, g: BoundaryFunction, f: Option<BoundaryFunction>, p: f64, form: Form) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        domain.check(&g)?;
        let principal = spectral::principal_eigenvalue(&domain, &g)?;
        let dtn = assemble_dtn(&domain);
        let collocation = dtn.collocation();
        Ok(Self { domain, p, g, f, form, dtn, collocation, principal, residual_rtol: RESIDUAL_RTOL })
    }

    /// Replaces the default relative residual scale [`RESIDUAL_RTOL`].
    pub fn with_residual_rtol(mut self, rtol: f64) -> Result<Self> {
        if !(rtol.is_finite() && rtol > 0.0) {
            return Err(Error::InvalidArgument(format!("residual tolerance {rtol} must be positive")));
        }
        self.residual_rtol = rtol;
        Ok(self)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn g(&self) -> &BoundaryFunction {
        &self.g
    }

    pub fn f(&self) -> Option<&BoundaryFunction> {
        self.f.as_ref()
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Coefficient of the superlinear term (`f` for the f-variant, else `g`).
    pub fn h(&self) -> &BoundaryFunction {
        self.f.as_ref().unwrap_or(&self.g)
    }

    pub fn dtn(&self) -> &DtnOperator {
        &self.dtn
    }

    pub fn collocation(&self) -> &DMatrix<f64> {
        &self.collocation
    }

    /// `λ₁(g)`, zero when `∫g ≥ 0`.
    pub fn lambda1(&self) -> f64 {
        self.principal.value
    }

    pub fn phi1(&self) -> &BoundaryFunction {
        &self.principal.eigenfunction
    }

    pub fn principal(&self) -> &EigenPair {
        &self.principal
    }

    pub fn weight_integral(&self) -> f64 {
        self.domain.integrate(self.g.values())
    }

    fn power(&self, w: &DVector<f64>) -> DVector<f64> {
        let p = self.p;
        w.map(|x| x.abs().powf(p - 1.0) * x)
    }

    /// Collocation residual `Λw - λ g w - h |w|^{p-1} w`.
    pub fn residual(&self, lambda: f64, w: &DVector<f64>) -> DVector<f64> {
        let mut r = &self.collocation * w;
        let pw = self.power(w);
        for i in 0..w.len() {
            r[i] -= lambda * self.g.values()[i] * w[i] + self.h().values()[i] * pw[i];
        }
        r
    }

    /// Derivative of [`ProblemSpec::residual`] in `w`.
    pub fn jacobian(&self, lambda: f64, w: &DVector<f64>) -> DMatrix<f64> {
        let mut j = self.collocation.clone();
        let p = self.p;
        for i in 0..w.len() {
            j[(i, i)] -= lambda * self.g.values()[i] + p * self.h().values()[i] * w[i].abs().powf(p - 1.0);
        }
        j
    }

    pub fn residual_tolerance(&self, w: &DVector<f64>) -> f64 {
        let s = w.amax();
        self.residual_rtol * (s + s.powf(self.p))
    }

    /// `|∫(λ g w + h w^p)|`, which vanishes for solutions since `∫Λw = 0`.
    pub fn conservation_defect(&self, lambda: f64, w: &DVector<f64>) -> f64 {
        let pw = self.power(w);
        let flux = DVector::from_iterator(
            w.len(),
            (0..w.len()).map(|i| lambda * self.g.values()[i] * w[i] + self.h().values()[i] * pw[i]),
        );
        self.domain.integrate(&flux).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPoint {
    pub lambda: f64,
    pub w: BoundaryFunction,
    /// `‖Λw - λgw - hw^p‖∞`.
    pub residual: f64,
    /// `γ₁(λ, w)`; NaN if the root search failed.
    pub gamma1: f64,
    pub nehari: NehariDiagnostics,
    pub sup_norm: f64,
    pub positive: bool,
}

impl SolutionPoint {
    /// Diagnostics for a converged trace.
    pub fn evaluate(spec: &ProblemSpec, lambda: f64, w: DVector<f64>, with_stability: bool) -> Self {
        let residual = spec.residual(lambda, &w).amax();
        let trace = BoundaryFunction::from_vector(w);
        let nehari = functionals(spec, lambda, &trace);
        let gamma1 = if with_stability {
            spectral::gamma1_weighted(spec.domain(), spec.g(), spec.h(), lambda, &trace, spec.p())
                .map(|pair| pair.value)
                .unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        Self {
            lambda,
            residual,
            gamma1,
            nehari,
            sup_norm: trace.sup_norm(),
            positive: trace.min() > 0.0,
            w: trace,
        }
    }

    /// Boundary L² norm `(∫w²)^{1/2}`.
    pub fn l2_norm(&self, domain: &Domain) -> f64 {
        domain.inner(self.w.values(), self.w.values()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_exponent_and_weight() {
        let d = Domain::interval();
        let g = BoundaryFunction::new(vec![1.0, -2.0]);
        assert!(matches!(ProblemSpec::new(d.clone(), g.clone(), 1.0), Err(Error::InvalidExponent(_))));
        assert!(matches!(
            ProblemSpec::new(d.clone(), BoundaryFunction::new(vec![1.0, 1.0]), 2.0),
            Err(Error::WeightNotSignChanging)
        ));
        let spec = ProblemSpec::logistic(d, BoundaryFunction::new(vec![-1.0, 4.0])).unwrap();
        assert_eq!(spec.g().as_slice(), &[1.0, -4.0]);
        assert_eq!(spec.p(), 2.0);
    }

    #[test]
    fn closed_form_solution_has_zero_residual() {
        let spec = ProblemSpec::new(Domain::interval(), BoundaryFunction::new(vec![1.0, -4.0]), 2.0).unwrap();
        let w = DVector::from_vec(vec![0.5, 0.25]);
        assert!(spec.residual(0.0, &w).amax() < 1e-15);
        assert!(spec.conservation_defect(0.0, &w) < 1e-15);
    }
}
