use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("resolution {resolution} too small or invalid for {kind} (need {requirement})")]
    ResolutionTooSmall {
        kind: &'static str,
        resolution: usize,
        requirement: &'static str,
    },
    #[error("shape mismatch: expected {expected} boundary values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("Helmholtz parameter {s} outside validity range (must stay below {limit} minus guard)")]
    SOutOfValidityRange { s: f64, limit: f64 },
    #[error("point lies outside the open domain")]
    PointOutsideDomain,
    #[error("DtN operator has s = {0}, harmonic (s = 0) operator required")]
    NotHarmonic(f64),

    #[error("weight does not change sign on the boundary nodes")]
    WeightNotSignChanging,
    #[error("no positive principal eigenvalue: boundary integral of the weight is {0} >= 0")]
    NoPositivePrincipalEigenvalue(f64),
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("pencil form not positive definite (smallest eigenvalue {0})")]
    PencilNotPositiveDefinite(f64),
    #[error("principal eigenfunction is not of one strict sign")]
    EigenfunctionSignChange,
    #[error("empty branch")]
    EmptyBranch,

    #[error("exponent p = {0} is not admissible")]
    InvalidExponent(f64),
    #[error("parameter lambda = {lambda} outside the admissible range {range}")]
    LambdaOutOfRange { lambda: f64, range: String },
    #[error("initial state cannot be projected onto the Nehari manifold (E = {e}, G = {g})")]
    InitNotProjectable { e: f64, g: f64 },
    #[error("nonpositive E or G in fibering projection (E = {e}, G = {g})")]
    NonpositiveEOrG { e: f64, g: f64 },
    #[error("iteration limit {0} reached")]
    MaxIterations(usize),
    #[error("singular Jacobian")]
    SingularJacobian,
    #[error("iterate left the positive cone")]
    LeftPositiveCone,
    #[error("damped Newton step could not reduce the residual")]
    DampingExhausted,
    #[error("iterates collapsed to the trivial solution")]
    CollapsedToZero,
    #[error("initial state must be strictly positive")]
    NonpositiveInit,
    #[error("continuation corrector diverged")]
    CorrectorDivergence,
    #[error("continuation step size underflow")]
    StepUnderflow,
    #[error("branch point with nonpositive lambda = {0}")]
    NonpositiveLambdaPoint(f64),
    #[error("logistic trace not above one (min u = {0})")]
    UNotAboveOne(f64),

    #[error("delta = {delta} must exceed delta0 = {delta0}")]
    DeltaBelowThreshold { delta: f64, delta0: f64 },
    #[error("unsupported exponent p = {0} for the 1D enumeration")]
    UnsupportedExponent(f64),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("operation requires the interval domain")]
    RequiresInterval,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
