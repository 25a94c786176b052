//! Dirichlet-to-Neumann operators and harmonic / Helmholtz extensions.
//!
//! Every operator is stored with the boundary quadrature absorbed, i.e. the
//! stored matrix is `Q·D` where `D` maps node values to outward normal
//! derivatives at the nodes and `Q = diag(weights)`. For `s = 0` this makes
//! `<w, Q D w>` the Dirichlet energy of the harmonic extension and keeps all
//! pencils built on top of it symmetric.

use nalgebra::{DMatrix, DVector};

use crate::bessel;
use crate::domain::{fourier_analyze, BoundaryFunction, Domain, DomainKind, FourierCoefficients, Point};
use crate::error::{Error, Result};

/// Distance from a Dirichlet eigenvalue inside which the Helmholtz map is rejected.
pub const DIRICHLET_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DtnOperator {
    matrix: DMatrix<f64>,
    weights: DVector<f64>,
    s: f64,
}

impl DtnOperator {
    /// Quadrature-weighted symmetric matrix `Q·D`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Collocation matrix `D` (node values to normal derivatives).
    pub fn collocation(&self) -> DMatrix<f64> {
        let mut d = self.matrix.clone();
        for (i, q) in self.weights.iter().enumerate() {
            d.row_mut(i).scale_mut(1.0 / q);
        }
        d
    }

    pub fn parameter(&self) -> f64 {
        self.s
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Outward normal derivative of the extension at the nodes.
    pub fn apply(&self, w: &BoundaryFunction) -> Result<BoundaryFunction> {
        if w.len() != self.len() {
            return Err(Error::ShapeMismatch { expected: self.len(), got: w.len() });
        }
        Ok(BoundaryFunction::from_vector(self.apply_vec(w.values())))
    }

    pub(crate) fn apply_vec(&self, w: &DVector<f64>) -> DVector<f64> {
        (&self.matrix * w).component_div(&self.weights)
    }

    /// `<a, Q D b>`.
    pub(crate) fn form(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&(&self.matrix * b))
    }
}

/// Harmonic DtN map `Λ` (s = 0).
pub fn assemble_dtn(domain: &Domain) -> DtnOperator {
    assemble_helmholtz_dtn(domain, 0.0).expect("s = 0 lies below every Dirichlet eigenvalue")
}

/// DtN map of `-Δφ = sφ`; `s` must stay below the first Dirichlet eigenvalue.
pub fn assemble_helmholtz_dtn(domain: &Domain, s: f64) -> Result<DtnOperator> {
    let limit = domain.first_dirichlet_eigenvalue();
    if !s.is_finite() || s >= limit - DIRICHLET_GUARD {
        return Err(Error::SOutOfValidityRange { s, limit });
    }
    let weights = DVector::from_column_slice(domain.weights());
    let collocation = match domain.kind() {
        DomainKind::Interval => interval_matrix(s),
        DomainKind::UnitDisk => disk_matrix(domain.len(), s),
    };
    let mut matrix = collocation;
    for (i, q) in weights.iter().enumerate() {
        matrix.row_mut(i).scale_mut(*q);
    }
    // exact symmetry (rounding only)
    let matrix = (&matrix + matrix.transpose()) * 0.5;
    Ok(DtnOperator { matrix, weights, s })
}

fn interval_matrix(s: f64) -> DMatrix<f64> {
    if s == 0.0 {
        return DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
    }
    let k = s.abs().sqrt();
    let (diag, off) = if s > 0.0 { (k * k.cos() / k.sin(), k / k.sin()) } else { (k / k.tanh(), k / k.sinh()) };
    DMatrix::from_row_slice(2, 2, &[diag, -off, -off, diag])
}

fn disk_matrix(m: usize, s: f64) -> DMatrix<f64> {
    let half = m / 2;
    let mult = bessel::dtn_multipliers(half, s);
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let first_row: Vec<f64> = (0..m)
        .map(|d| {
            let t = d as f64 * h;
            let mut acc = mult[0] + mult[half] * (half as f64 * t).cos();
            for (n, mn) in mult.iter().enumerate().take(half).skip(1) {
                acc += 2.0 * mn * (n as f64 * t).cos();
            }
            acc / m as f64
        })
        .collect();
    DMatrix::from_fn(m, m, |i, j| first_row[(i + m - j) % m])
}

pub fn boundary_integral(domain: &Domain, bf: &BoundaryFunction) -> Result<f64> {
    domain.boundary_integral(bf)
}

/// `∫_Ω |∇W|²` of the harmonic extension `W` of `w`, as `<w, Λ w>`.
pub fn dirichlet_energy(dtn: &DtnOperator, w: &BoundaryFunction) -> Result<f64> {
    if dtn.parameter() != 0.0 {
        return Err(Error::NotHarmonic(dtn.parameter()));
    }
    if w.len() != dtn.len() {
        return Err(Error::ShapeMismatch { expected: dtn.len(), got: w.len() });
    }
    Ok(dtn.form(w.values(), w.values()).max(0.0))
}

/// Interior extension of a trace solving `-ΔΦ = sΦ` (harmonic for `s = 0`).
#[derive(Debug, Clone)]
pub struct Extension {
    s: f64,
    repr: ExtensionRepr,
}

#[derive(Debug, Clone)]
enum ExtensionRepr {
    Interval { left: f64, right: f64 },
    Disk(FourierCoefficients),
}

impl Extension {
    pub fn harmonic(domain: &Domain, trace: &BoundaryFunction) -> Result<Self> {
        Self::helmholtz(domain, trace, 0.0)
    }

    pub fn helmholtz(domain: &Domain, trace: &BoundaryFunction, s: f64) -> Result<Self> {
        domain.check(trace)?;
        let limit = domain.first_dirichlet_eigenvalue();
        if s >= limit - DIRICHLET_GUARD {
            return Err(Error::SOutOfValidityRange { s, limit });
        }
        let repr = match domain.kind() {
            DomainKind::Interval => {
                ExtensionRepr::Interval { left: trace.as_slice()[0], right: trace.as_slice()[1] }
            }
            DomainKind::UnitDisk => ExtensionRepr::Disk(fourier_analyze(domain.nodes(), trace.as_slice())),
        };
        Ok(Self { s, repr })
    }

    fn check_point(&self, point: Point) -> Result<()> {
        let inside = match (&self.repr, point) {
            (ExtensionRepr::Interval { .. }, Point::Interval(x)) => x > 0.0 && x < 1.0,
            (ExtensionRepr::Disk(_), Point::Polar { r, .. }) => (0.0..1.0).contains(&r),
            _ => false,
        };
        if inside {
            Ok(())
        } else {
            Err(Error::PointOutsideDomain)
        }
    }

    pub fn value(&self, point: Point) -> Result<f64> {
        self.check_point(point)?;
        Ok(match (&self.repr, point) {
            (ExtensionRepr::Interval { left, right }, Point::Interval(x)) => {
                let (a, b) = interval_profiles(self.s, x);
                left * a + right * b
            }
            (ExtensionRepr::Disk(c), Point::Polar { r, theta }) => (0..c.modes())
                .map(|n| {
                    let t = n as f64 * theta;
                    bessel::radial_profile(n, self.s, r) * (c.cos[n] * t.cos() + c.sin[n] * t.sin())
                })
                .sum(),
            _ => unreachable!(),
        })
    }

    /// `|∇Φ|²` at an interior point.
    pub fn gradient_sq(&self, point: Point) -> Result<f64> {
        self.check_point(point)?;
        Ok(match (&self.repr, point) {
            (ExtensionRepr::Interval { left, right }, Point::Interval(x)) => {
                let (da, db) = interval_profile_derivatives(self.s, x);
                (left * da + right * db).powi(2)
            }
            (ExtensionRepr::Disk(c), Point::Polar { r, theta }) => {
                let (mut radial, mut angular) = (0.0, 0.0);
                for n in 0..c.modes() {
                    let t = n as f64 * theta;
                    let (ct, st) = (t.cos(), t.sin());
                    radial += bessel::radial_profile_derivative(n, self.s, r) * (c.cos[n] * ct + c.sin[n] * st);
                    if n > 0 && r > 0.0 {
                        angular += n as f64 / r
                            * bessel::radial_profile(n, self.s, r)
                            * (-c.cos[n] * st + c.sin[n] * ct);
                    }
                }
                radial * radial + angular * angular
            }
            _ => unreachable!(),
        })
    }
}

/// Profiles multiplying the left/right boundary values on the interval.
fn interval_profiles(s: f64, x: f64) -> (f64, f64) {
    if s == 0.0 {
        return (1.0 - x, x);
    }
    let k = s.abs().sqrt();
    if s > 0.0 {
        ((k * (1.0 - x)).sin() / k.sin(), (k * x).sin() / k.sin())
    } else {
        ((k * (1.0 - x)).sinh() / k.sinh(), (k * x).sinh() / k.sinh())
    }
}

fn interval_profile_derivatives(s: f64, x: f64) -> (f64, f64) {
    if s == 0.0 {
        return (-1.0, 1.0);
    }
    let k = s.abs().sqrt();
    if s > 0.0 {
        (-k * (k * (1.0 - x)).cos() / k.sin(), k * (k * x).cos() / k.sin())
    } else {
        (-k * (k * (1.0 - x)).cosh() / k.sinh(), k * (k * x).cosh() / k.sinh())
    }
}

pub fn harmonic_extension_eval(domain: &Domain, trace: &BoundaryFunction, point: Point) -> Result<f64> {
    Extension::harmonic(domain, trace)?.value(point)
}

/// `∫_Ω W²` for the harmonic extension, mode by mode.
pub fn volume_l2_norm_sq(domain: &Domain, trace: &BoundaryFunction) -> Result<f64> {
    domain.check(trace)?;
    let v = trace.as_slice();
    Ok(match domain.kind() {
        DomainKind::Interval => (v[0] * v[0] + v[0] * v[1] + v[1] * v[1]) / 3.0,
        DomainKind::UnitDisk => {
            let c = fourier_analyze(domain.nodes(), v);
            let pi = std::f64::consts::PI;
            let mut total = c.cos[0] * c.cos[0] * pi;
            for n in 1..c.modes() {
                total += (c.cos[n] * c.cos[n] + c.sin[n] * c.sin[n]) * pi / (2.0 * n as f64 + 2.0);
            }
            total
        }
    })
}

/// H¹(Ω) norm squared of the harmonic extension.
pub fn h1_norm_sq(domain: &Domain, dtn: &DtnOperator, trace: &BoundaryFunction) -> Result<f64> {
    Ok(dirichlet_energy(dtn, trace)? + volume_l2_norm_sq(domain, trace)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn min_eig(m: &DMatrix<f64>) -> f64 {
        m.clone().symmetric_eigen().eigenvalues.min()
    }

    #[test]
    fn interval_harmonic_matrix() {
        let d = Domain::interval();
        let l = assemble_dtn(&d);
        assert_eq!(l.matrix(), &DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        // u = c + d x has outward derivatives (-d, d)
        let out = l.apply(&BoundaryFunction::new(vec![2.0, 5.0])).unwrap();
        assert_eq!(out.as_slice(), &[-3.0, 3.0]);
    }

    #[test]
    fn interval_helmholtz_closed_forms() {
        let d = Domain::interval();
        let near = assemble_helmholtz_dtn(&d, 1e-8).unwrap();
        let exact = assemble_dtn(&d);
        assert!((near.matrix() - exact.matrix()).amax() < 1e-6);
        let quarter = assemble_helmholtz_dtn(&d, PI * PI / 4.0).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[0.0, -PI / 2.0, -PI / 2.0, 0.0]);
        assert!((quarter.matrix() - expect).amax() < 1e-14);
        assert!(matches!(
            assemble_helmholtz_dtn(&d, PI * PI),
            Err(Error::SOutOfValidityRange { .. })
        ));
        assert!(assemble_helmholtz_dtn(&d, PI * PI - 5e-7).is_err());
    }

    #[test]
    fn interval_helmholtz_matches_ode_solution() {
        // Φ = cos(kx) has Φ(0)=1, Φ(1)=cos k, outward derivatives (0, -k sin k)
        let d = Domain::interval();
        for &s in &[0.7, 3.0, -2.5] {
            let op = assemble_helmholtz_dtn(&d, s).unwrap();
            let k = f64::abs(s).sqrt();
            let (trace, flux) = if s > 0.0 {
                (vec![1.0, k.cos()], vec![0.0, -k * k.sin()])
            } else {
                (vec![1.0, k.cosh()], vec![0.0, k * k.sinh()])
            };
            let out = op.apply(&BoundaryFunction::new(trace)).unwrap();
            assert_relative_eq!(out.as_slice()[0], flux[0], epsilon = 1e-13);
            assert_relative_eq!(out.as_slice()[1], flux[1], epsilon = 1e-13);
        }
    }

    #[test]
    fn disk_modes() {
        let d = Domain::disk(16).unwrap();
        let l = assemble_dtn(&d);
        let c = l.apply(&d.constant(3.0)).unwrap();
        assert!(c.sup_norm() < 1e-13);
        for k in 1..8 {
            let w = d.sample(|t| (k as f64 * t).cos());
            let out = l.apply(&w).unwrap();
            assert!((out.values() - w.values() * k as f64).amax() < 1e-12 * k as f64);
        }
        // Nyquist mode carries multiplier M/2
        let nyq = d.sample(|t| (8.0 * t).cos());
        let out = l.apply(&nyq).unwrap();
        assert!((out.values() - nyq.values() * 8.0).amax() < 1e-11);
    }

    #[test]
    fn disk_helmholtz_constant_trace() {
        let d = Domain::disk(16).unwrap();
        let op = assemble_helmholtz_dtn(&d, -2.0).unwrap();
        let out = op.apply(&d.constant(1.0)).unwrap();
        let k = 2f64.sqrt();
        let expect = k * bessel::bessel_i(1, k) / bessel::bessel_i(0, k);
        assert!(expect > 0.0);
        for v in out.as_slice() {
            assert_relative_eq!(*v, expect, max_relative = 1e-12);
        }
        assert!(assemble_helmholtz_dtn(&d, 5.8).is_err());
    }

    #[test]
    fn harmonic_operator_is_symmetric_psd_with_constant_kernel() {
        let d = Domain::disk(32).unwrap();
        let l = assemble_dtn(&d);
        let m = l.matrix();
        assert!((m - m.transpose()).amax() < 1e-12);
        for i in 0..d.len() {
            assert!(m.row(i).sum().abs() < 1e-12);
        }
        let eig = m.clone().symmetric_eigen().eigenvalues;
        let mut sorted: Vec<f64> = eig.iter().copied().collect();
        sorted.sort_by(f64::total_cmp);
        assert!(sorted[0].abs() < 1e-12);
        assert!(sorted[1] > 1e-3);
    }

    #[test]
    fn helmholtz_operator_decreasing_in_s() {
        for d in [Domain::interval(), Domain::disk(24).unwrap()] {
            let grid = [-6.0, -1.0, 0.0, 0.8, 2.0, 4.5];
            for pair in grid.windows(2) {
                let a = assemble_helmholtz_dtn(&d, pair[0]).unwrap();
                let b = assemble_helmholtz_dtn(&d, pair[1]).unwrap();
                assert!(min_eig(&(a.matrix() - b.matrix())) >= -1e-10);
            }
        }
    }

    #[test]
    fn energies_and_volume_norms() {
        let i = Domain::interval();
        let li = assemble_dtn(&i);
        assert_relative_eq!(dirichlet_energy(&li, &BoundaryFunction::new(vec![0.0, 1.0])).unwrap(), 1.0);
        assert_eq!(dirichlet_energy(&li, &i.constant(4.0)).unwrap(), 0.0);
        assert_relative_eq!(volume_l2_norm_sq(&i, &i.constant(1.0)).unwrap(), 1.0);
        assert_relative_eq!(volume_l2_norm_sq(&i, &BoundaryFunction::new(vec![0.0, 1.0])).unwrap(), 1.0 / 3.0);

        let d = Domain::disk(16).unwrap();
        let ld = assemble_dtn(&d);
        let cos = d.sample(f64::cos);
        assert_relative_eq!(dirichlet_energy(&ld, &cos).unwrap(), PI, max_relative = 1e-13);
        assert!(dirichlet_energy(&ld, &d.constant(2.0)).unwrap() < 1e-12);
        assert_relative_eq!(volume_l2_norm_sq(&d, &cos).unwrap(), PI / 4.0, max_relative = 1e-13);
        let h = assemble_helmholtz_dtn(&d, 1.0).unwrap();
        assert!(matches!(dirichlet_energy(&h, &cos), Err(Error::NotHarmonic(_))));
    }

    #[test]
    fn extension_values() {
        let i = Domain::interval();
        assert_relative_eq!(
            harmonic_extension_eval(&i, &BoundaryFunction::new(vec![0.0, 1.0]), Point::Interval(0.5)).unwrap(),
            0.5
        );
        assert!(matches!(
            harmonic_extension_eval(&i, &i.constant(1.0), Point::Interval(1.0)),
            Err(Error::PointOutsideDomain)
        ));
        let d = Domain::disk(16).unwrap();
        assert_relative_eq!(
            harmonic_extension_eval(&d, &d.constant(2.5), Point::polar(0.7, 1.1)).unwrap(),
            2.5,
            epsilon = 1e-13
        );
        assert_relative_eq!(
            harmonic_extension_eval(&d, &d.sample(f64::cos), Point::polar(0.5, 0.0)).unwrap(),
            0.5,
            epsilon = 1e-13
        );
        assert!(harmonic_extension_eval(&d, &d.constant(1.0), Point::cartesian(0.8, 0.8)).is_err());
    }

    #[test]
    fn helmholtz_extension_solves_interior_equation() {
        // -ΔΦ = sΦ checked by a five-point Laplacian in polar coordinates
        let d = Domain::disk(16).unwrap();
        let trace = d.sample(|t| 1.0 + 0.3 * t.cos() + 0.2 * (2.0 * t).sin());
        let s = 1.3;
        let ext = Extension::helmholtz(&d, &trace, s).unwrap();
        let (r, th, h) = (0.5, 0.4, 1e-3);
        let f = |r: f64, t: f64| ext.value(Point::polar(r, t)).unwrap();
        let frr = (f(r + h, th) - 2.0 * f(r, th) + f(r - h, th)) / (h * h);
        let fr = (f(r + h, th) - f(r - h, th)) / (2.0 * h);
        let ftt = (f(r, th + h) - 2.0 * f(r, th) + f(r, th - h)) / (h * h);
        let lap = frr + fr / r + ftt / (r * r);
        assert_relative_eq!(-lap, s * f(r, th), max_relative = 1e-5);
    }
}
