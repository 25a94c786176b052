//! Exhaustive real solutions of the two-node system on the interval.
//!
//! Harmonic functions on `(0,1)` are linear, `u = c x + d`, so a solution is
//! fixed by its endpoint values `(a, b) = (d, c + d)` and the boundary
//! conditions become two scalar equations:
//!
//! * w-form: `a - b = λ g₀ a + g₀ a^p`, `b - a = λ g₁ b + g₁ b^p`;
//! * logistic: `a - b = λ r₀ a (1 - a)`, `b - a = λ r₁ b (1 - b)`.
//!
//! Solutions are enumerated by Newton from a dense seed grid and, for `p = 2`,
//! by eliminating `b` to get a quartic in `a` whose roots come from a
//! companion matrix.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GRID_SEEDS: usize = 400;
pub const DEDUP_RADIUS: f64 = 1e-8;
const POLISH_TOL: f64 = 1e-18;
const ACCEPT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum OracleForm {
    WForm { g0: f64, g1: f64, p: f64 },
    Logistic { r0: f64, r1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionClass {
    Zero,
    ConstantOne,
    /// Positive, nonconstant, below one at both ends (logistic).
    PositiveBelowOne,
    /// Positive, above one at both ends (logistic).
    PositiveAboveOne,
    /// Positive with one end below and the other above one (logistic).
    PositiveCrossingOne,
    /// Positive (w-form).
    Positive,
    SignChanging,
    NotPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    /// Intercept `d = u(0)`.
    pub d: f64,
    /// Slope `c = u(1) - u(0)`.
    pub c: f64,
    pub class: SolutionClass,
    /// Largest absolute defect of the two equations.
    pub defect: f64,
}

impl OracleSolution {
    pub fn left(&self) -> f64 {
        self.d
    }

    pub fn right(&self) -> f64 {
        self.c + self.d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oracle1DReport {
    pub lambda: f64,
    pub form: OracleForm,
    pub solutions: Vec<OracleSolution>,
}

impl Oracle1DReport {
    pub fn count(&self, class: SolutionClass) -> usize {
        self.solutions.iter().filter(|s| s.class == class).count()
    }

    pub fn of_class(&self, class: SolutionClass) -> impl Iterator<Item = &OracleSolution> {
        self.solutions.iter().filter(move |s| s.class == class)
    }
}

struct System {
    form: OracleForm,
    lambda: f64,
    /// Restrict to the closed nonnegative quadrant (non-integer `p`).
    quadrant: bool,
}

impl System {
    fn new(form: OracleForm, lambda: f64) -> Result<Self> {
        let quadrant = match form {
            OracleForm::Logistic { .. } => false,
            OracleForm::WForm { p, .. } => {
                if !(p.is_finite() && p > 1.0) {
                    return Err(Error::InvalidExponent(p));
                }
                if (p - p.round()).abs() < 1e-12 {
                    false
                } else if (2..=12).any(|q| {
                    let x = p * q as f64;
                    (x - x.round()).abs() < 1e-9
                }) {
                    true
                } else {
                    return Err(Error::UnsupportedExponent(p));
                }
            }
        };
        Ok(Self { form, lambda, quadrant })
    }

    fn pow(&self, x: f64, e: f64) -> f64 {
        if self.quadrant {
            x.max(0.0).powf(e)
        } else if (e - e.round()).abs() < 1e-12 {
            x.powi(e.round() as i32)
        } else {
            x.abs().powf(e).copysign(x)
        }
    }

    /// Equation values and their Jacobian; also the size of the largest term for scaling.
    fn eval(&self, a: f64, b: f64) -> ([f64; 2], [[f64; 2]; 2], f64) {
        let l = self.lambda;
        match self.form {
            OracleForm::WForm { g0, g1, p } => {
                let (ap, bp) = (self.pow(a, p), self.pow(b, p));
                let (ad, bd) = (p * self.pow(a, p - 1.0), p * self.pow(b, p - 1.0));
                let f = [a - b - l * g0 * a - g0 * ap, b - a - l * g1 * b - g1 * bp];
                let j = [[1.0 - l * g0 - g0 * ad, -1.0], [-1.0, 1.0 - l * g1 - g1 * bd]];
                let size = [a, b, l * g0 * a, l * g1 * b, g0 * ap, g1 * bp].iter().fold(1.0f64, |m, x| m.max(x.abs()));
                (f, j, size)
            }
            OracleForm::Logistic { r0, r1 } => {
                let f = [a - b - l * r0 * a * (1.0 - a), b - a - l * r1 * b * (1.0 - b)];
                let j = [[1.0 - l * r0 * (1.0 - 2.0 * a), -1.0], [-1.0, 1.0 - l * r1 * (1.0 - 2.0 * b)]];
                let size = [a, b, l * r0 * a * a, l * r1 * b * b].iter().fold(1.0f64, |m, x| m.max(x.abs()));
                (f, j, size)
            }
        }
    }

    fn defect(&self, a: f64, b: f64) -> (f64, f64) {
        let (f, _, size) = self.eval(a, b);
        (f[0].abs().max(f[1].abs()), size)
    }

    /// 2D Newton polish; `None` if it does not settle on an accepted root.
    fn polish(&self, mut a: f64, mut b: f64) -> Option<(f64, f64)> {
        // Stepping continues past a small defect so that roots of even
        // multiplicity, where Newton is only linear, still converge.
        for _ in 0..200 {
            let (f, j, size) = self.eval(a, b);
            if f[0].abs().max(f[1].abs()) <= POLISH_TOL * size {
                break;
            }
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            let da = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
            let db = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
            a -= da;
            b -= db;
            if !(a.is_finite() && b.is_finite()) || (self.quadrant && (a < 0.0 || b < 0.0)) {
                return None;
            }
            if da.abs().max(db.abs()) <= 1e-16 * a.abs().max(b.abs()).max(1.0) {
                break;
            }
        }
        let (def, size) = self.defect(a, b);
        (def <= ACCEPT_TOL * size).then_some((a, b))
    }

    fn classify(&self, a: f64, b: f64) -> SolutionClass {
        let tiny = DEDUP_RADIUS;
        if a.abs() <= tiny && b.abs() <= tiny {
            return SolutionClass::Zero;
        }
        if a > 0.0 && b > 0.0 {
            return match self.form {
                OracleForm::WForm { .. } => SolutionClass::Positive,
                OracleForm::Logistic { .. } => {
                    if (a - 1.0).abs() <= tiny && (b - 1.0).abs() <= tiny {
                        SolutionClass::ConstantOne
                    } else if a < 1.0 && b < 1.0 {
                        SolutionClass::PositiveBelowOne
                    } else if a > 1.0 && b > 1.0 {
                        SolutionClass::PositiveAboveOne
                    } else {
                        SolutionClass::PositiveCrossingOne
                    }
                }
            };
        }
        if a * b < 0.0 {
            SolutionClass::SignChanging
        } else {
            SolutionClass::NotPositive
        }
    }

    fn report(&self, mut roots: Vec<(f64, f64)>) -> Oracle1DReport {
        roots.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut unique: Vec<(f64, f64)> = Vec::new();
        for (a, b) in roots {
            let dup = unique.iter().any(|&(u, v)| {
                let scale = 1.0f64.max(u.abs()).max(v.abs());
                (u - a).abs() <= DEDUP_RADIUS * scale && (v - b).abs() <= DEDUP_RADIUS * scale
            });
            if !dup {
                unique.push((a, b));
            }
        }
        let solutions = unique
            .into_iter()
            .map(|(a, b)| OracleSolution { d: a, c: b - a, class: self.classify(a, b), defect: self.defect(a, b).0 })
            .collect();
        Oracle1DReport { lambda: self.lambda, form: self.form, solutions }
    }

    fn box_half_width(&self) -> f64 {
        2.0 + 4.0 / if self.lambda > 0.0 { self.lambda } else { 1.0 }
    }

    fn grid_roots(&self) -> Vec<(f64, f64)> {
        let big = self.box_half_width();
        let lo = if self.quadrant { 0.0 } else { -big };
        let h = (big - lo) / (GRID_SEEDS - 1) as f64;
        (0..GRID_SEEDS)
            .into_par_iter()
            .flat_map_iter(|i| {
                let a = lo + i as f64 * h;
                (0..GRID_SEEDS).filter_map(move |k| self.polish(a, lo + k as f64 * h))
            })
            .collect()
    }

    /// Roots via elimination (`p = 2` only): `b = β₁a + β₂a²` from the first
    /// equation, substituted into `γ₁b - a + γ₂b² = 0`.
    fn resultant_roots(&self) -> Result<Vec<(f64, f64)>> {
        let l = self.lambda;
        let (b1, b2, c1, c2) = match self.form {
            OracleForm::WForm { g0, g1, p } => {
                if p != 2.0 {
                    return Err(Error::UnsupportedExponent(p));
                }
                (1.0 - l * g0, -g0, 1.0 - l * g1, -g1)
            }
            OracleForm::Logistic { r0, r1 } => (1.0 - l * r0, l * r0, 1.0 - l * r1, l * r1),
        };
        // a·(k1 + k2 a + k3 a² + k4 a³) = 0
        let k = [c1 * b1 - 1.0, c1 * b2 + c2 * b1 * b1, 2.0 * c2 * b1 * b2, c2 * b2 * b2];
        let mut roots = vec![0.0];
        roots.extend(real_polynomial_roots(&k));
        Ok(roots
            .into_iter()
            .filter_map(|a| self.polish(a, b1 * a + b2 * a * a))
            .collect())
    }
}

/// Real roots of `k[0] + k[1] x + ... + k[n] x^n` from companion-matrix eigenvalues.
fn real_polynomial_roots(k: &[f64]) -> Vec<f64> {
    let scale = k.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut deg = k.len() - 1;
    while deg > 0 && k[deg].abs() <= 1e-300f64.max(1e-15 * scale) {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = k[deg];
    let mut comp = DMatrix::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -k[i] / lead;
    }
    comp.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect()
}

/// Grid-seeded enumeration, merged with the elimination roots when `p = 2`.
pub fn oracle_1d(form: OracleForm, lambda: f64) -> Result<Oracle1DReport> {
    let sys = System::new(form, lambda)?;
    let mut roots = sys.grid_roots();
    if let Ok(extra) = sys.resultant_roots() {
        roots.extend(extra);
    }
    Ok(sys.report(roots))
}

/// Grid-seeded enumeration only.
pub fn oracle_1d_grid(form: OracleForm, lambda: f64) -> Result<Oracle1DReport> {
    let sys = System::new(form, lambda)?;
    Ok(sys.report(sys.grid_roots()))
}

/// Elimination-based enumeration (`p = 2` and the logistic form).
pub fn oracle_1d_resultant(form: OracleForm, lambda: f64) -> Result<Oracle1DReport> {
    let sys = System::new(form, lambda)?;
    Ok(sys.report(sys.resultant_roots()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn logistic_constants_present() {
        let rep = oracle_1d(OracleForm::Logistic { r0: -1.0, r1: 4.0 }, 0.3).unwrap();
        assert_eq!(rep.count(SolutionClass::Zero), 1);
        assert_eq!(rep.count(SolutionClass::ConstantOne), 1);
        assert_eq!(rep.count(SolutionClass::PositiveCrossingOne), 0);
        for s in &rep.solutions {
            assert!(s.defect <= 1e-12 * (1.0 + s.d.abs().max(s.right().abs()).powi(2) * 4.0 * 0.3));
        }
    }

    #[test]
    fn logistic_small_lambda_scaling() {
        let lambda = 1e-3;
        let rep = oracle_1d(OracleForm::Logistic { r0: -1.0, r1: 4.0 }, lambda).unwrap();
        let above: Vec<_> = rep.of_class(SolutionClass::PositiveAboveOne).collect();
        assert_eq!(above.len(), 1);
        assert!((lambda * above[0].left() - 0.5).abs() < 5e-3);
        assert!((lambda * above[0].right() - 0.25).abs() < 5e-3);
    }

    #[test]
    fn w_form_closed_form() {
        let rep = oracle_1d(OracleForm::WForm { g0: 1.0, g1: -4.0, p: 2.0 }, 0.0).unwrap();
        let pos: Vec<_> = rep.of_class(SolutionClass::Positive).collect();
        assert_eq!(pos.len(), 1);
        assert_relative_eq!(pos[0].left(), 0.5, epsilon = 1e-13);
        assert_relative_eq!(pos[0].right(), 0.25, epsilon = 1e-13);
    }

    #[test]
    fn exponents() {
        assert!(oracle_1d_grid(OracleForm::WForm { g0: 1.0, g1: -3.0, p: 1.5 }, 0.2).is_ok());
        assert!(matches!(
            oracle_1d(OracleForm::WForm { g0: 1.0, g1: -3.0, p: std::f64::consts::PI }, 0.2),
            Err(Error::UnsupportedExponent(_))
        ));
        assert!(oracle_1d_resultant(OracleForm::WForm { g0: 1.0, g1: -3.0, p: 3.0 }, 0.2).is_err());
    }

    #[test]
    fn grid_and_elimination_agree() {
        let form = OracleForm::Logistic { r0: -2.0, r1: 3.0 };
        let a = oracle_1d_grid(form, 0.7).unwrap();
        let b = oracle_1d_resultant(form, 0.7).unwrap();
        assert_eq!(a.solutions.len(), b.solutions.len());
        for (x, y) in a.solutions.iter().zip(&b.solutions) {
            assert!((x.d - y.d).abs() < 1e-8 && (x.c - y.c).abs() < 1e-8);
        }
    }
}
