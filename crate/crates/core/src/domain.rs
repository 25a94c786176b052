//! Geometry and boundary discretization.
//!
//! The interval `(0,1)` has the two-point boundary `{0, 1}` with unit
//! weights, so every boundary integral is the sum of the endpoint values.
//! The unit disk carries `M` equispaced angular collocation nodes with the
//! trapezoidal weights `2π/M`, exact for trigonometric polynomials of degree
//! below `M/2`.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Interval,
    UnitDisk,
}

impl DomainKind {
    /// Ambient space dimension N.
    pub fn dimension(self) -> usize {
        match self {
            DomainKind::Interval => 1,
            DomainKind::UnitDisk => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Interval => "interval",
            DomainKind::UnitDisk => "unit-disk",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    /// x-coordinates (interval) or angles (disk).
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Domain {
    pub fn build(kind: DomainKind, resolution: usize) -> Result<Self> {
        match kind {
            DomainKind::Interval => {
                if resolution != 2 {
                    return Err(Error::ResolutionTooSmall {
                        kind: kind.name(),
                        resolution,
                        requirement: "M = 2",
                    });
                }
                Ok(Self { kind, nodes: vec![0.0, 1.0], weights: vec![1.0, 1.0] })
            }
            DomainKind::UnitDisk => {
                if resolution < 8 || resolution % 2 != 0 {
                    return Err(Error::ResolutionTooSmall {
                        kind: kind.name(),
                        resolution,
                        requirement: "even M >= 8",
                    });
                }
                let h = 2.0 * PI / resolution as f64;
                let nodes = (0..resolution).map(|k| k as f64 * h).collect();
                Ok(Self { kind, nodes, weights: vec![h; resolution] })
            }
        }
    }

    pub fn interval() -> Self {
        Self::build(DomainKind::Interval, 2).expect("two-point interval is always valid")
    }

    pub fn disk(resolution: usize) -> Result<Self> {
        Self::build(DomainKind::UnitDisk, resolution)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_interval(&self) -> bool {
        self.kind == DomainKind::Interval
    }

    /// First Dirichlet eigenvalue of `-Δ` on the domain.
    pub fn first_dirichlet_eigenvalue(&self) -> f64 {
        match self.kind {
            DomainKind::Interval => PI * PI,
            DomainKind::UnitDisk => crate::bessel::J0_FIRST_ZERO * crate::bessel::J0_FIRST_ZERO,
        }
    }

    /// Trace sampled from a function of the node coordinate (x or θ).
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> BoundaryFunction {
        BoundaryFunction::new(self.nodes.iter().map(|&t| f(t)).collect())
    }

    pub fn constant(&self, c: f64) -> BoundaryFunction {
        BoundaryFunction::new(vec![c; self.len()])
    }

    pub(crate) fn check(&self, bf: &BoundaryFunction) -> Result<()> {
        if bf.len() != self.len() {
            return Err(Error::ShapeMismatch { expected: self.len(), got: bf.len() });
        }
        Ok(())
    }

    /// Boundary quadrature `sum_k q_k f_k`.
    pub fn boundary_integral(&self, bf: &BoundaryFunction) -> Result<f64> {
        self.check(bf)?;
        Ok(self.integrate(bf.values()))
    }

    pub(crate) fn integrate(&self, values: &DVector<f64>) -> f64 {
        values.iter().zip(&self.weights).map(|(v, q)| v * q).sum()
    }

    /// Quadrature inner product `<a, Q b>`.
    pub(crate) fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.iter().zip(b.iter()).zip(&self.weights).map(|((x, y), q)| x * y * q).sum()
    }
}

/// Real cosine/sine coefficients of a disk trace:
/// `w(θ) = sum_{n=0}^{M/2} a_n cos nθ + b_n sin nθ`, with `b_0 = b_{M/2} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FourierCoefficients {
    pub fn synthesize(&self, theta: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(n, (a, b))| {
                let t = n as f64 * theta;
                a * t.cos() + b * t.sin()
            })
            .sum()
    }

    pub fn modes(&self) -> usize {
        self.cos.len()
    }
}

/// A real trace on the boundary nodes of a [`Domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    values: DVector<f64>,
}

impl BoundaryFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values: DVector::from_vec(values) }
    }

    pub fn from_vector(values: DVector<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.values.as_slice()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.amax()
    }

    pub fn min(&self) -> f64 {
        self.values.min()
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { values: self.values.map(f) }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { values: &self.values * c }
    }

    pub fn positive_part(&self) -> Self {
        self.map(|v| v.max(0.0))
    }

    pub fn negative_part(&self) -> Self {
        self.map(|v| (-v).max(0.0))
    }

    pub fn changes_sign(&self) -> bool {
        self.values.iter().any(|&v| v > 0.0) && self.values.iter().any(|&v| v < 0.0)
    }

    /// Fourier view for disk traces; `None` on the interval.
    pub fn fourier(&self, domain: &Domain) -> Result<Option<FourierCoefficients>> {
        domain.check(self)?;
        if domain.kind() != DomainKind::UnitDisk {
            return Ok(None);
        }
        Ok(Some(fourier_analyze(domain.nodes(), self.values.as_slice())))
    }

    pub fn from_fourier(domain: &Domain, coeffs: &FourierCoefficients) -> Self {
        domain.sample(|t| coeffs.synthesize(t))
    }
}

pub(crate) fn fourier_analyze(thetas: &[f64], values: &[f64]) -> FourierCoefficients {
    let m = values.len();
    let half = m / 2;
    let mut cos = vec![0.0; half + 1];
    let mut sin = vec![0.0; half + 1];
    for n in 0..=half {
        let (mut a, mut b) = (0.0, 0.0);
        for (t, v) in thetas.iter().zip(values) {
            let arg = n as f64 * t;
            a += v * arg.cos();
            b += v * arg.sin();
        }
        let scale = if n == 0 || n == half { 1.0 } else { 2.0 } / m as f64;
        cos[n] = a * scale;
        sin[n] = if n == 0 || n == half { 0.0 } else { b * scale };
    }
    FourierCoefficients { cos, sin }
}

/// Interior evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Interval(f64),
    /// Polar coordinates `(r, θ)` in the unit disk.
    Polar { r: f64, theta: f64 },
}

impl Point {
    pub fn polar(r: f64, theta: f64) -> Self {
        Point::Polar { r, theta }
    }

    pub fn cartesian(x: f64, y: f64) -> Self {
        Point::Polar { r: x.hypot(y), theta: y.atan2(x) }
    }
}
