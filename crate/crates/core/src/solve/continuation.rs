//! Pseudo-arclength continuation of the positive branch bifurcating from `(λ₁(g), 0)`.
//!
//! Arclength is measured in `‖(Δw, Δλ)‖² = Δλ² + ‖Δw‖²/M`. The first point is
//! pinned by its amplitude along `φ₁`, later points by the usual secant
//! predictor and bordered Newton corrector.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{ProblemSpec, SolutionPoint};
use crate::domain::BoundaryFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Subcritical,
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    LambdaBelowWindow,
    LambdaAboveWindow,
    SupNormLimit,
    StepUnderflow,
    MaxPoints,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaWindow {
    pub lo: f64,
    pub hi: f64,
}

impl LambdaWindow {
    /// `(-0.05 λ₁, 2 λ₁)`.
    pub fn standard(spec: &ProblemSpec) -> Self {
        let l1 = spec.lambda1();
        Self { lo: -0.05 * l1, hi: 2.0 * l1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOptions {
    /// Seed amplitude along the sup-normalized `φ₁`.
    pub epsilon: f64,
    pub ds_init: f64,
    pub ds_max: f64,
    pub ds_min: f64,
    pub max_points: usize,
    pub sup_max: f64,
    pub max_corrector_iters: usize,
    /// λ values at which a point is inserted exactly when the branch crosses them.
    pub targets: Vec<f64>,
    /// Compute `γ₁` for every point.
    pub with_stability: bool,
}

impl StepOptions {
    /// Step bounds proportional to `λ₁`.
    pub fn for_problem(spec: &ProblemSpec) -> Self {
        let l1 = spec.lambda1().max(1e-12);
        Self {
            epsilon: 1e-4,
            ds_init: 0.01 * l1,
            ds_max: 0.05 * l1,
            ds_min: 1e-8 * l1,
            max_points: 5000,
            sup_max: 1e6,
            max_corrector_iters: 10,
            targets: Vec::new(),
            with_stability: true,
        }
    }

    pub fn with_targets(mut self, targets: &[f64]) -> Self {
        self.targets = targets.to_vec();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bifurcation {
    pub lambda: f64,
    /// `φ₁(g)`, H¹-normalized.
    pub tangent: BoundaryFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub p: f64,
    pub bifurcation: Bifurcation,
    pub direction: Direction,
    pub termination: Termination,
    pub points: Vec<SolutionPoint>,
    /// Cumulative arclength of each point from the bifurcation point.
    pub arclength: Vec<f64>,
}

impl Branch {
    pub fn lambda_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), pt| (lo.min(pt.lambda), hi.max(pt.lambda)))
    }

    /// Point whose λ is closest to `lambda`.
    pub fn nearest(&self, lambda: f64) -> Option<&SolutionPoint> {
        self.points.iter().min_by(|a, b| (a.lambda - lambda).abs().total_cmp(&(b.lambda - lambda).abs()))
    }

    /// Largest sup-norm on the branch.
    pub fn max_sup_norm(&self) -> f64 {
        self.points.iter().map(|pt| pt.sup_norm).fold(0.0, f64::max)
    }

    /// Sub-branch with `lo < λ < hi`, order preserved.
    pub fn restrict(&self, lo: f64, hi: f64) -> Branch {
        let keep: Vec<usize> = (0..self.points.len())
            .filter(|&i| self.points[i].lambda > lo && self.points[i].lambda < hi)
            .collect();
        Branch {
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
            arclength: keep.iter().map(|&i| self.arclength[i]).collect(),
            ..self.clone_header()
        }
    }

    fn clone_header(&self) -> Branch {
        Branch {
            p: self.p,
            bifurcation: self.bifurcation.clone(),
            direction: self.direction,
            termination: self.termination,
            points: Vec::new(),
            arclength: Vec::new(),
        }
    }
}

struct Corrected {
    w: DVector<f64>,
    lambda: f64,
    iterations: usize,
}

/// Newton on `F(w, λ) = 0`, `c_w·w + c_λ λ = target`.
fn bordered_corrector(
    spec: &ProblemSpec,
    mut w: DVector<f64>,
    mut lambda: f64,
    c_w: &DVector<f64>,
    c_lambda: f64,
    target: f64,
    max_iters: usize,
) -> Option<Corrected> {
    let m = w.len();
    let g = spec.g().values();
    for iterations in 0..=max_iters {
        let r = spec.residual(lambda, &w);
        let constraint = c_w.dot(&w) + c_lambda * lambda - target;
        let scale = 1.0 + target.abs() + c_w.amax() * w.amax();
        if r.amax() <= spec.residual_tolerance(&w) && constraint.abs() <= 1e-12 * scale {
            return (w.min() > 0.0).then_some(Corrected { w, lambda, iterations });
        }
        if iterations == max_iters || !r.amax().is_finite() {
            return None;
        }
        let jw = spec.jacobian(lambda, &w);
        let mut big = DMatrix::zeros(m + 1, m + 1);
        big.view_mut((0, 0), (m, m)).copy_from(&jw);
        for i in 0..m {
            big[(i, m)] = -g[i] * w[i];
            big[(m, i)] = c_w[i];
        }
        big[(m, m)] = c_lambda;
        let mut rhs = DVector::zeros(m + 1);
        rhs.rows_mut(0, m).copy_from(&(-&r));
        rhs[m] = -constraint;
        let delta = big.lu().solve(&rhs)?;
        if delta.iter().any(|x| !x.is_finite()) {
            return None;
        }
        w += delta.rows(0, m);
        lambda += delta[m];
    }
    None
}

fn weighted_norm(dw: &DVector<f64>, dl: f64) -> f64 {
    (dl * dl + dw.norm_squared() / dw.len() as f64).sqrt()
}

/// Traces the positive branch from `(λ₁(g), 0)` until it leaves `window`,
/// blows up, or the step size underflows.
pub fn continue_branch(spec: &ProblemSpec, window: LambdaWindow, opts: &StepOptions) -> Result<Branch> {
    let lambda1 = spec.lambda1();
    if !(lambda1 > 0.0) {
        return Err(Error::NoPositivePrincipalEigenvalue(spec.weight_integral()));
    }
    let p = spec.p();
    let m = spec.domain().len();
    let phi = spec.phi1().values() / spec.phi1().sup_norm();
    let domain = spec.domain();
    let hphi = DVector::from_iterator(m, (0..m).map(|i| spec.h().values()[i] * phi[i].powf(p + 1.0)));
    let gphi = DVector::from_iterator(m, (0..m).map(|i| spec.g().values()[i] * phi[i] * phi[i]));
    let kappa = domain.integrate(&hphi) / domain.integrate(&gphi);

    // Seed pinned by amplitude along φ₁.
    let eps = opts.epsilon;
    let phi_q = DVector::from_iterator(m, (0..m).map(|i| phi[i] * domain.weights()[i]));
    let c_seed = &phi_q / phi_q.dot(&phi);
    let seed = bordered_corrector(
        spec,
        &phi * eps,
        lambda1 - kappa * eps.powf(p - 1.0),
        &c_seed,
        0.0,
        eps,
        30,
    )
    .ok_or(Error::CorrectorDivergence)?;

    let direction = if seed.lambda < lambda1 { Direction::Subcritical } else { Direction::Supercritical };
    let mut branch = Branch {
        p,
        bifurcation: Bifurcation { lambda: lambda1, tangent: spec.phi1().clone() },
        direction,
        termination: Termination::MaxPoints,
        points: Vec::new(),
        arclength: Vec::new(),
    };

    let mut prev_w = DVector::zeros(m);
    let mut prev_l = lambda1;
    let mut cur_w = seed.w;
    let mut cur_l = seed.lambda;
    let mut s = weighted_norm(&cur_w, cur_l - lambda1);
    branch.points.push(SolutionPoint::evaluate(spec, cur_l, cur_w.clone(), opts.with_stability));
    branch.arclength.push(s);

    let mut ds = opts.ds_init;
    loop {
        if let Some(t) = stop_reason(&branch, window, opts) {
            branch.termination = t;
            break;
        }
        let dw = &cur_w - &prev_w;
        let dl = cur_l - prev_l;
        let norm = weighted_norm(&dw, dl);
        let (tw, tl) = (dw / norm, dl / norm);
        let c_w = &tw / m as f64;
        let corrected = loop {
            let pw = &cur_w + &tw * ds;
            let pl = cur_l + tl * ds;
            let target = c_w.dot(&pw) + tl * pl;
            match bordered_corrector(spec, pw, pl, &c_w, tl, target, opts.max_corrector_iters) {
                Some(c) => break Some(c),
                None => {
                    ds *= 0.5;
                    if ds < opts.ds_min {
                        break None;
                    }
                }
            }
        };
        let Some(next) = corrected else {
            branch.termination = Termination::StepUnderflow;
            break;
        };
        insert_targets(spec, opts, &mut branch, (&cur_w, cur_l), (&next.w, next.lambda), s);
        let step = weighted_norm(&(&next.w - &cur_w), next.lambda - cur_l);
        s += step;
        prev_w = std::mem::replace(&mut cur_w, next.w);
        prev_l = std::mem::replace(&mut cur_l, next.lambda);
        branch.points.push(SolutionPoint::evaluate(spec, cur_l, cur_w.clone(), opts.with_stability));
        branch.arclength.push(s);
        if next.iterations <= 4 {
            ds = (ds * 1.5).min(opts.ds_max);
        }
    }
    Ok(branch)
}

fn stop_reason(branch: &Branch, window: LambdaWindow, opts: &StepOptions) -> Option<Termination> {
    let last = branch.points.last()?;
    if last.lambda < window.lo {
        Some(Termination::LambdaBelowWindow)
    } else if last.lambda > window.hi {
        Some(Termination::LambdaAboveWindow)
    } else if last.sup_norm > opts.sup_max {
        Some(Termination::SupNormLimit)
    } else if branch.points.len() >= opts.max_points {
        Some(Termination::MaxPoints)
    } else {
        None
    }
}

/// Inserts exact-λ points for every target strictly crossed by the step `a → b`.
fn insert_targets(
    spec: &ProblemSpec,
    opts: &StepOptions,
    branch: &mut Branch,
    a: (&DVector<f64>, f64),
    b: (&DVector<f64>, f64),
    s_start: f64,
) {
    let (lo, hi) = if a.1 < b.1 { (a.1, b.1) } else { (b.1, a.1) };
    let mut crossed: Vec<f64> = opts.targets.iter().copied().filter(|&t| t > lo && t < hi).collect();
    crossed.sort_by(|x, y| (x - a.1).abs().total_cmp(&(y - a.1).abs()));
    let m = a.0.len();
    for target in crossed {
        let theta = (target - a.1) / (b.1 - a.1);
        let init = a.0 + (b.0 - a.0) * theta;
        if let Some(c) = bordered_corrector(spec, init, target, &DVector::zeros(m), 1.0, target, 30) {
            let ds = weighted_norm(&(&c.w - a.0), c.lambda - a.1);
            branch.points.push(SolutionPoint::evaluate(spec, c.lambda, c.w, opts.with_stability));
            branch.arclength.push(s_start + ds);
        }
    }
}
