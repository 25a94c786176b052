//! Boundary-reduced numerics for Laplace problems with indefinite
//! superlinear boundary conditions `∂w/∂ν = λ g w + h w^p` on the interval
//! and the unit disk.

pub mod bessel;
pub mod domain;
pub mod dtn;
pub mod error;
pub mod experiments;
mod linalg;
pub mod solve;
pub mod spectral;

pub use domain::{BoundaryFunction, Domain, DomainKind, FourierCoefficients, Point};
pub use dtn::{assemble_dtn, assemble_helmholtz_dtn, DtnOperator, Extension};
pub use error::{Error, Result};
pub use solve::{Branch, Form, ProblemSpec, SolutionPoint};
pub use spectral::{EigenPair, MuSpectrum, Normalization};
