use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A_ij - conj(A_ji)| = {max_asymmetry:e} at ({row}, {col})")]
    NotHermitian { max_asymmetry: f64, row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadratic form is not positive definite (smallest eigenvalue {smallest:e})")]
    NotPositiveDefinite { smallest: f64 },

    #[error("eigenvalue {value} is degenerate: nearest other eigenvalue at distance {distance:e}")]
    DegenerateEigenvalue { value: f64, distance: f64 },

    #[error("eigenvalue {value} is simple, a degenerate level was expected")]
    NotDegenerate { value: f64 },

    #[error("requested {requested} eigenvalues but the eigenspace has dimension {found}")]
    EigenspaceMismatch { requested: usize, found: usize },

    #[error("vector is not orthogonal to the kernel: overlap {overlap:e}")]
    NotOrthogonal { overlap: f64 },

    #[error("symbol is not real: coefficient mismatch {mismatch:e} between {monomial} and its conjugate")]
    NonRealSymbol { mismatch: f64, monomial: String },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("rotation is not in SO(3): deviation {deviation:e}")]
    NotARotation { deviation: f64 },

    #[error("point is not a well: h(P) = {value:e}, |grad h(P)| = {gradient:e}")]
    NotAWell { value: f64, gradient: f64 },

    #[error("degenerate well: Hessian smallest eigenvalue {smallest:e}")]
    DegenerateWell { smallest: f64 },

    #[error("well candidate {index} rejected: {source}")]
    CandidateRejected { index: usize, source: Box<Error> },

    #[error("symbol is negative on the sphere: min h = {min:e} at ({x}, {y}, {z})")]
    NegativeSymbol { min: f64, x: f64, y: f64, z: f64 },

    #[error("zero state")]
    ZeroState,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("ill-conditioned least-squares problem (R diagonal ratio {ratio:e})")]
    IllConditioned { ratio: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}
