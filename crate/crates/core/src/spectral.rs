//! Eigenvalue problems built on the DtN reduction.
//!
//! * `Λφ = λ g φ`: principal eigenvalues `0` and `λ₁(g)`.
//! * `-ΔΦ = σΦ`, `∂Φ/∂ν = λ g Φ`: the smallest `σ₁(λ)`.
//! * `-Δφ = γφ`, `∂φ/∂ν = (λg + p h w^{p-1})φ + γφ`: the smallest `γ₁(λ, w)`.
//! * `(Λ - λg)φ = μ h w^{p-1} φ`: the weighted pencil with `μ₁^±`, `μ₂^+`.
//!
//! The Helmholtz problems are solved by locating the root of
//! `β(s) = λ_min(DtN_s - diag(...))`, which is strictly decreasing in `s`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::domain::{BoundaryFunction, Domain, DomainKind, Point};
use crate::dtn::{assemble_dtn, assemble_helmholtz_dtn, h1_norm_sq, Extension};
use crate::error::{Error, Result};
use crate::experiments::WeightFamily;
use crate::linalg::{self, ShiftedPencil};
pub use crate::linalg::cosine_similarity;
use crate::solve::Branch;

/// Reduced-pencil shift used for the weighted spectrum; lies between `μ₁^-` and `μ₁^+ = 1`.
pub const MU_SHIFT: f64 = 0.5;
const MU_ZERO_TOL: f64 = 1e-9;
const ROOT_WIDTH: f64 = 1e-12;
const POLISH_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    H1,
    BoundaryL2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub eigenfunction: BoundaryFunction,
    pub normalization: Normalization,
    /// Relative nodal defect of the eigen-equation.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuSpectrum {
    /// Finite pencil eigenvalues, ascending.
    pub mu_values: Vec<f64>,
    /// Whether the eigenfunction of the matching entry has one strict sign.
    pub principal: Vec<bool>,
    /// Largest nonpositive eigenvalue (`-∞` when none exists).
    pub mu1_minus: f64,
    /// Smallest positive eigenvalue.
    pub mu1_plus: f64,
    pub mu1_plus_eigenfunction: BoundaryFunction,
    pub mu2_plus: Option<f64>,
}

impl MuSpectrum {
    /// Distance from `x` to the nearest computed eigenvalue.
    pub fn distance_to(&self, x: f64) -> f64 {
        self.mu_values.iter().map(|m| (m - x).abs()).fold(f64::INFINITY, f64::min)
    }
}

fn require_sign_change(g: &BoundaryFunction) -> Result<()> {
    if g.changes_sign() {
        Ok(())
    } else {
        Err(Error::WeightNotSignChanging)
    }
}

/// `diag(q_i v_i)`.
fn weighted_mass(domain: &Domain, v: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        v.len(),
        v.iter().zip(domain.weights()).map(|(a, q)| a * q),
    ))
}

fn inv_sqrt_weights(domain: &Domain) -> DVector<f64> {
    DVector::from_iterator(domain.len(), domain.weights().iter().map(|q| 1.0 / q.sqrt()))
}

fn is_strictly_signed(v: &DVector<f64>) -> bool {
    let scale = v.amax();
    scale > 0.0 && (v.iter().all(|&x| x > 1e-12 * scale) || v.iter().all(|&x| x < -1e-12 * scale))
}

fn normalize_boundary_l2(domain: &Domain, v: &mut DVector<f64>) {
    let n = domain.inner(v, v).sqrt();
    if n > 0.0 {
        *v /= n;
    }
}

fn domain_volume(domain: &Domain) -> f64 {
    match domain.kind() {
        DomainKind::Interval => 1.0,
        DomainKind::UnitDisk => std::f64::consts::PI,
    }
}

/// Relative nodal defect `‖Dφ - c∘φ‖∞ / ‖φ‖∞` for a collocation operator.
fn defect(d: &DMatrix<f64>, c: &DVector<f64>, phi: &DVector<f64>) -> f64 {
    let r = d * phi - c.component_mul(phi);
    r.amax() / phi.amax().max(f64::MIN_POSITIVE)
}

/// Principal eigen-pair of `Λφ = λ g φ`.
///
/// For `∫g ≥ 0` the only nonnegative principal eigenvalue is 0; that pair
/// (constant eigenfunction) is returned. Use [`positive_principal_eigenvalue`]
/// to treat that case as an error.
pub fn principal_eigenvalue(domain: &Domain, g: &BoundaryFunction) -> Result<EigenPair> {
    match positive_principal_eigenvalue(domain, g) {
        Err(Error::NoPositivePrincipalEigenvalue(_)) => Ok(EigenPair {
            value: 0.0,
            eigenfunction: domain.constant(1.0 / domain_volume(domain).sqrt()),
            normalization: Normalization::H1,
            residual: 0.0,
        }),
        other => other,
    }
}

pub fn positive_principal_eigenvalue(domain: &Domain, g: &BoundaryFunction) -> Result<EigenPair> {
    domain.check(g)?;
    require_sign_change(g)?;
    let integral = domain.boundary_integral(g)?;
    if integral >= 0.0 {
        return Err(Error::NoPositivePrincipalEigenvalue(integral));
    }
    let dtn = assemble_dtn(domain);
    let a = dtn.matrix();
    let b = weighted_mass(domain, g.values());
    let pencil = principal_pencil(a, &b)?;
    let top = pencil.len() - 1;
    let lambda1 = pencil.mu(top).ok_or(Error::NoPositivePrincipalEigenvalue(integral))?;
    let mut phi = pencil.eigenvector(top);
    linalg::sign_fix(&mut phi);
    if !is_strictly_signed(&phi) {
        return Err(Error::EigenfunctionSignChange);
    }
    let trace = BoundaryFunction::from_vector(phi.clone());
    phi /= h1_norm_sq(domain, &dtn, &trace)?.sqrt();
    let residual = defect(&dtn.collocation(), &(g.values() * lambda1), &phi);
    Ok(EigenPair {
        value: lambda1,
        eigenfunction: BoundaryFunction::from_vector(phi),
        normalization: Normalization::H1,
        residual,
    })
}

/// Reduction of `Λφ = λ Bφ` with a shift inside `(0, λ₁)`, re-centred at `λ₁/2`.
fn principal_pencil(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<ShiftedPencil> {
    let mut sigma = 1.0;
    let mut found = None;
    for _ in 0..500 {
        if let Some(p) = ShiftedPencil::new(a, b, sigma) {
            found = Some(p);
            break;
        }
        sigma *= 0.25;
    }
    let first = found.ok_or(Error::PencilNotPositiveDefinite(sigma))?;
    let top = first.len() - 1;
    let estimate = first.mu(top).ok_or(Error::PencilNotPositiveDefinite(sigma))?;
    Ok(ShiftedPencil::new(a, b, 0.5 * estimate).unwrap_or(first))
}

/// All finite eigenvalues of `Λφ = λ g φ` in ascending order (requires `∫g < 0`).
pub fn pencil_eigenvalues(domain: &Domain, g: &BoundaryFunction) -> Result<Vec<f64>> {
    domain.check(g)?;
    require_sign_change(g)?;
    let integral = domain.boundary_integral(g)?;
    if integral >= 0.0 {
        return Err(Error::NoPositivePrincipalEigenvalue(integral));
    }
    let b = weighted_mass(domain, g.values());
    let pencil = principal_pencil(assemble_dtn(domain).matrix(), &b)?;
    let mut out: Vec<f64> = (0..pencil.len()).filter_map(|i| pencil.mu(i)).collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Root of a strictly decreasing function: doubling bracket from 0, bisection,
/// one finite-difference Newton polish kept only if it stays in the bracket.
fn decreasing_root(f: impl Fn(f64) -> Result<f64>, upper: f64, what: &str) -> Result<f64> {
    let f0 = f(0.0)?;
    if f0 == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi);
    if f0 > 0.0 {
        lo = 0.0;
        let mut step = 1.0;
        loop {
            let s = f64::min(step, upper);
            if f(s)? <= 0.0 {
                hi = s;
                break;
            }
            if s >= upper {
                return Err(Error::RootNotBracketed(format!(
                    "{what}: still positive at the Dirichlet guard {upper}"
                )));
            }
            lo = s;
            step *= 2.0;
        }
    } else {
        hi = 0.0;
        let mut step = 1.0;
        let mut bracketed = None;
        for _ in 0..60 {
            let s = -step;
            if f(s)? >= 0.0 {
                bracketed = Some(s);
                break;
            }
            hi = s;
            step *= 2.0;
        }
        lo = bracketed.ok_or_else(|| Error::RootNotBracketed(format!("{what}: negative down to {}", -step)))?;
    }
    for _ in 0..300 {
        if hi - lo <= ROOT_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let fs = f(s)?;
    let h = POLISH_STEP * s.abs().max(1.0);
    if s + h < upper {
        let slope = (f(s + h)? - f(s - h)?) / (2.0 * h);
        if slope < 0.0 {
            let polished = s - fs / slope;
            if polished >= lo && polished <= hi && f(polished)?.abs() <= fs.abs() {
                return Ok(polished);
            }
        }
    }
    Ok(s)
}

/// `λ_min` of `S·DtN_s·S - diag(c) - shift·s·I` with `S = Q^{-1/2}`, plus its eigenvector in node values.
fn helmholtz_min_eigen(
    domain: &Domain,
    s: f64,
    c: &DVector<f64>,
    spectral_shift: bool,
) -> Result<(f64, DVector<f64>)> {
    let op = assemble_helmholtz_dtn(domain, s)?;
    let scale = inv_sqrt_weights(domain);
    let mut m = linalg::diag_scale(op.matrix(), &scale);
    for i in 0..m.nrows() {
        m[(i, i)] -= c[i] + if spectral_shift { s } else { 0.0 };
    }
    let (value, y) = linalg::min_eigen(&m);
    Ok((value, y.component_mul(&scale)))
}

/// `σ₁(λ)` with its boundary-L²-normalized positive eigenfunction.
pub fn sigma1(domain: &Domain, g: &BoundaryFunction, lambda: f64) -> Result<EigenPair> {
    domain.check(g)?;
    require_sign_change(g)?;
    let c = g.values() * lambda;
    let upper = domain.first_dirichlet_eigenvalue() - 2.0 * crate::dtn::DIRICHLET_GUARD;
    let root = decreasing_root(|s| Ok(helmholtz_min_eigen(domain, s, &c, false)?.0), upper, "sigma1")?;
    let (_, mut phi) = helmholtz_min_eigen(domain, root, &c, false)?;
    finish_helmholtz_pair(domain, root, &c, &mut phi, false)
}

fn finish_helmholtz_pair(
    domain: &Domain,
    value: f64,
    c: &DVector<f64>,
    phi: &mut DVector<f64>,
    spectral_shift: bool,
) -> Result<EigenPair> {
    linalg::sign_fix(phi);
    if !is_strictly_signed(phi) {
        return Err(Error::EigenfunctionSignChange);
    }
    normalize_boundary_l2(domain, phi);
    let d = assemble_helmholtz_dtn(domain, value)?.collocation();
    let shifted = if spectral_shift { c.add_scalar(value) } else { c.clone() };
    Ok(EigenPair {
        value,
        residual: defect(&d, &shifted, phi),
        eigenfunction: BoundaryFunction::from_vector(phi.clone()),
        normalization: Normalization::BoundaryL2,
    })
}

/// Linearization weight `λg + p h |w|^{p-1}`.
fn linearized_weight(g: &BoundaryFunction, h: &BoundaryFunction, lambda: f64, w: &BoundaryFunction, p: f64) -> DVector<f64> {
    DVector::from_iterator(
        g.len(),
        (0..g.len()).map(|i| lambda * g.values()[i] + p * h.values()[i] * w.values()[i].abs().powf(p - 1.0)),
    )
}

/// `γ₁(λ, w)` for the problem with nonlinearity `g w^p`.
pub fn gamma1(domain: &Domain, g: &BoundaryFunction, lambda: f64, w: &BoundaryFunction, p: f64) -> Result<EigenPair> {
    gamma1_weighted(domain, g, g, lambda, w, p)
}

/// `γ₁` for the nonlinearity `h w^p` (the f-variant uses `h = f`).
pub fn gamma1_weighted(
    domain: &Domain,
    g: &BoundaryFunction,
    h: &BoundaryFunction,
    lambda: f64,
    w: &BoundaryFunction,
    p: f64,
) -> Result<EigenPair> {
    domain.check(g)?;
    domain.check(h)?;
    domain.check(w)?;
    let c = linearized_weight(g, h, lambda, w, p);
    let upper = domain.first_dirichlet_eigenvalue() - 2.0 * crate::dtn::DIRICHLET_GUARD;
    let root = decreasing_root(|s| Ok(helmholtz_min_eigen(domain, s, &c, true)?.0), upper, "gamma1")?;
    let (_, mut phi) = helmholtz_min_eigen(domain, root, &c, true)?;
    finish_helmholtz_pair(domain, root, &c, &mut phi, true)
}

/// Interior-quadrature evaluation of
/// `-∫_Ω h''(W)|∇W|²Φ / (∫_Ω h(W)Φ + ∫_∂Ω h(w)φ)`, `h(t) = λt + t^p`,
/// where `W` is the harmonic extension of `w` and `Φ` the Helmholtz extension
/// of the `γ₁` eigenfunction. Equals `γ₁` for solutions of the `g w^p` problem.
pub fn gamma1_quotient(domain: &Domain, lambda: f64, w: &BoundaryFunction, p: f64, pair: &EigenPair) -> Result<f64> {
    let big_w = Extension::harmonic(domain, w)?;
    let big_phi = Extension::helmholtz(domain, &pair.eigenfunction, pair.value)?;
    let h = |t: f64| lambda * t + t.max(0.0).powf(p);
    let h2 = |t: f64| p * (p - 1.0) * t.max(0.0).powf(p - 2.0);
    let (mut num, mut den) = (0.0, 0.0);
    let mut accumulate = |pt: Point, weight: f64| -> Result<()> {
        let wv = big_w.value(pt)?;
        let fv = big_phi.value(pt)?;
        num += weight * h2(wv) * big_w.gradient_sq(pt)? * fv;
        den += weight * h(wv) * fv;
        Ok(())
    };
    match domain.kind() {
        DomainKind::Interval => {
            let (xs, ws) = linalg::gauss_legendre(64);
            for (x, q) in xs.iter().zip(&ws) {
                accumulate(Point::Interval(*x), *q)?;
            }
        }
        DomainKind::UnitDisk => {
            let (rs, ws) = linalg::gauss_legendre(48);
            let n_theta = 4 * domain.len();
            let dt = 2.0 * std::f64::consts::PI / n_theta as f64;
            for (r, q) in rs.iter().zip(&ws) {
                for k in 0..n_theta {
                    accumulate(Point::polar(*r, k as f64 * dt), q * r * dt)?;
                }
            }
        }
    }
    let boundary: f64 = domain.inner(&w.values().map(h), pair.eigenfunction.values());
    Ok(-num / (den + boundary))
}

/// Spectrum of `(Λ - λg)φ = μ g w^{p-1} φ` at a positive solution `w`.
pub fn weighted_steklov_spectrum(
    domain: &Domain,
    g: &BoundaryFunction,
    lambda: f64,
    w: &BoundaryFunction,
    p: f64,
) -> Result<MuSpectrum> {
    weighted_steklov_spectrum_h(domain, g, g, lambda, w, p)
}

/// Weighted spectrum with right-hand weight `h w^{p-1}`.
pub fn weighted_steklov_spectrum_h(
    domain: &Domain,
    g: &BoundaryFunction,
    h: &BoundaryFunction,
    lambda: f64,
    w: &BoundaryFunction,
    p: f64,
) -> Result<MuSpectrum> {
    domain.check(g)?;
    domain.check(h)?;
    domain.check(w)?;
    let a = assemble_dtn(domain).matrix() - weighted_mass(domain, &(g.values() * lambda));
    let rhs = DVector::from_iterator(
        w.len(),
        (0..w.len()).map(|i| h.values()[i] * w.values()[i].abs().powf(p - 1.0)),
    );
    let b = weighted_mass(domain, &rhs);
    let pencil = ShiftedPencil::new(&a, &b, MU_SHIFT).ok_or_else(|| {
        let scale = inv_sqrt_weights(domain);
        let c = linalg::diag_scale(&(&a - &b * MU_SHIFT), &scale);
        Error::PencilNotPositiveDefinite(linalg::min_eigen(&c).0)
    })?;
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..pencil.len())
        .filter_map(|i| pencil.mu(i).map(|mu| (mu, pencil.eigenvector(i))))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mu_values: Vec<f64> = pairs.iter().map(|(m, _)| *m).collect();
    let principal = pairs.iter().map(|(_, v)| is_strictly_signed(v)).collect();
    let mu1_minus = mu_values.iter().copied().filter(|&m| m <= MU_ZERO_TOL).fold(f64::NEG_INFINITY, f64::max);
    let positive: Vec<usize> = (0..pairs.len()).filter(|&i| mu_values[i] > MU_ZERO_TOL).collect();
    let first = *positive.first().ok_or(Error::PencilNotPositiveDefinite(f64::NAN))?;
    let mut phi = pairs[first].1.clone();
    linalg::sign_fix(&mut phi);
    normalize_boundary_l2(domain, &mut phi);
    Ok(MuSpectrum {
        mu1_minus,
        mu1_plus: mu_values[first],
        mu1_plus_eigenfunction: BoundaryFunction::from_vector(phi),
        mu2_plus: positive.get(1).map(|&i| mu_values[i]),
        mu_values,
        principal,
    })
}

/// Minimum of `μ₂^+` over the branch samples with `λ ∈ [0, λ₁(g_δ))`; `+∞` when absent everywhere.
pub fn m_delta(domain: &Domain, family: &WeightFamily, delta: f64, branch: &Branch) -> Result<f64> {
    let g = family.weight(delta)?;
    let lambda1 = principal_eigenvalue(domain, &g)?.value;
    let mut seen = false;
    let mut best = f64::INFINITY;
    for point in branch.points.iter().filter(|pt| pt.lambda >= 0.0 && pt.lambda < lambda1) {
        if !point.positive {
            continue;
        }
        seen = true;
        let spectrum = weighted_steklov_spectrum(domain, &g, point.lambda, &point.w, branch.p)?;
        if let Some(m) = spectrum.mu2_plus {
            best = best.min(m);
        }
    }
    if seen {
        Ok(best)
    } else {
        Err(Error::EmptyBranch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Shooting oracle for σ₁ on (0,1): φ(x) = cos kx - (λg₀/k) sin kx solves
    /// -φ'' = sφ with -φ'(0) = λg₀φ(0); the root of φ'(1) - λg₁φ(1) in s is σ.
    fn interval_sigma_defect(g0: f64, g1: f64, lambda: f64, s: f64) -> f64 {
        if s > 0.0 {
            let k = s.sqrt();
            let a = -lambda * g0 / k;
            let phi = (k).cos() + a * (k).sin();
            let dphi = -k * (k).sin() + a * k * (k).cos();
            dphi - lambda * g1 * phi
        } else {
            let k = (-s).sqrt().max(1e-300);
            let a = -lambda * g0 / k;
            let phi = (k).cosh() + a * (k).sinh();
            let dphi = k * (k).sinh() + a * k * (k).cosh();
            dphi - lambda * g1 * phi
        }
    }

    fn oracle_root(g0: f64, g1: f64, lambda: f64, lo: f64, hi: f64) -> f64 {
        let (mut a, mut b) = (lo, hi);
        let fa = interval_sigma_defect(g0, g1, lambda, a);
        assert!(fa * interval_sigma_defect(g0, g1, lambda, b) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (interval_sigma_defect(g0, g1, lambda, m) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn interval_principal_closed_form() {
        let d = Domain::interval();
        let pair = principal_eigenvalue(&d, &BoundaryFunction::new(vec![1.0, -2.0])).unwrap();
        assert_relative_eq!(pair.value, 0.5, epsilon = 1e-13);
        let v = pair.eigenfunction.as_slice();
        assert_relative_eq!(v[1] / v[0], 0.5, epsilon = 1e-12);
        assert!(pair.residual < 1e-12);
        let swapped = principal_eigenvalue(&d, &BoundaryFunction::new(vec![-2.0, 1.0])).unwrap();
        assert_relative_eq!(swapped.value, 0.5, epsilon = 1e-13);
    }

    #[test]
    fn nonnegative_mean_gives_zero() {
        let d = Domain::interval();
        let g = BoundaryFunction::new(vec![2.0, -1.0]);
        let pair = principal_eigenvalue(&d, &g).unwrap();
        assert_eq!(pair.value, 0.0);
        assert_eq!(pair.eigenfunction.as_slice(), &[1.0, 1.0]);
        assert!(matches!(
            positive_principal_eigenvalue(&d, &g),
            Err(Error::NoPositivePrincipalEigenvalue(_))
        ));
        assert!(matches!(
            principal_eigenvalue(&d, &BoundaryFunction::new(vec![1.0, 2.0])),
            Err(Error::WeightNotSignChanging)
        ));
    }

    #[test]
    fn disk_principal_pair_is_positive_and_h1_normalized() {
        let d = Domain::disk(32).unwrap();
        let g = d.sample(|t| t.cos() - 0.4);
        let pair = principal_eigenvalue(&d, &g).unwrap();
        assert!(pair.value > 0.0);
        assert!(pair.eigenfunction.min() > 0.0);
        let norm = h1_norm_sq(&d, &assemble_dtn(&d), &pair.eigenfunction).unwrap();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-12);
        assert!(pair.residual < 1e-9);
        let all = pencil_eigenvalues(&d, &g).unwrap();
        let next = all.iter().copied().filter(|&l| l > pair.value + 1e-9).fold(f64::INFINITY, f64::min);
        assert!(next - pair.value > 1e-6);
    }

    #[test]
    fn sigma1_matches_shooting_oracle() {
        let d = Domain::interval();
        let g = BoundaryFunction::new(vec![1.0, -2.0]);
        let pair = sigma1(&d, &g, 0.25).unwrap();
        assert!(pair.value > 0.0);
        let oracle = oracle_root(1.0, -2.0, 0.25, 1e-9, 9.0);
        assert_relative_eq!(pair.value, oracle, epsilon = 1e-10);
        let neg = sigma1(&d, &g, 0.75).unwrap();
        let oracle = oracle_root(1.0, -2.0, 0.75, -5.0, -1e-9);
        assert!(neg.value < 0.0);
        assert_relative_eq!(neg.value, oracle, epsilon = 1e-10);
    }

    #[test]
    fn sigma1_anchors() {
        for d in [Domain::interval(), Domain::disk(16).unwrap()] {
            let g = if d.is_interval() {
                BoundaryFunction::new(vec![1.0, -3.0])
            } else {
                d.sample(|t| t.cos() - 0.3)
            };
            let lambda1 = principal_eigenvalue(&d, &g).unwrap().value;
            assert!(sigma1(&d, &g, 0.0).unwrap().value.abs() < 1e-8);
            assert!(sigma1(&d, &g, lambda1).unwrap().value.abs() < 1e-8);
            assert!(sigma1(&d, &g, 0.5 * lambda1).unwrap().value > 0.0);
            assert!(sigma1(&d, &g, 1.5 * lambda1).unwrap().value < 0.0);
        }
    }

    #[test]
    fn gamma1_negative_at_closed_form_solution() {
        let d = Domain::interval();
        let g = BoundaryFunction::new(vec![1.0, -4.0]);
        let w = BoundaryFunction::new(vec![0.5, 0.25]);
        let pair = gamma1(&d, &g, 0.0, &w, 2.0).unwrap();
        assert!(pair.value < 0.0);
        assert!(pair.residual < 1e-8);
        let q = gamma1_quotient(&d, 0.0, &w, 2.0, &pair).unwrap();
        assert_relative_eq!(q, pair.value, max_relative = 1e-4);
    }

    #[test]
    fn mu_spectrum_at_closed_form_solution() {
        let d = Domain::interval();
        let g = BoundaryFunction::new(vec![1.0, -4.0]);
        let w = BoundaryFunction::new(vec![0.5, 0.25]);
        let spec = weighted_steklov_spectrum(&d, &g, 0.0, &w, 2.0).unwrap();
        assert_relative_eq!(spec.mu1_plus, 1.0, epsilon = 1e-10);
        assert!(spec.mu1_minus.abs() < 1e-10);
        assert!(spec.mu2_plus.is_none());
        assert!(linalg::cosine_similarity(spec.mu1_plus_eigenfunction.values(), w.values()) > 1.0 - 1e-10);
    }
}
