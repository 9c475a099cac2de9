use thiserror::Error;

/// Errors raised by the numerical layers of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function has a pole at {0}")]
    GammaPole(f64),
    #[error("pole encountered at s = {0}")]
    Pole(String),
    #[error("matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric (deviation {0:e})")]
    NotSkewSymmetric(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invalid product spec: {0}")]
    InvalidSpec(String),
    #[error("invalid hard-edge spec: {0}")]
    InvalidHardEdge(String),
    #[error("degenerate spectrum: gap {gap:e} below threshold {threshold:e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },
    #[error("rational function is not strictly proper (numerator degree {num}, pole count {den})")]
    ImproperRational { num: usize, den: usize },
    #[error("quadrature did not converge: last change {change:e}, tolerance {tolerance:e}")]
    NonConvergence { change: f64, tolerance: f64 },
    #[error("index {index} out of range 0..{bound}")]
    Index { index: usize, bound: usize },
    #[error("kernel is not antisymmetric (deviation {0:e})")]
    NotAntisymmetric(f64),
    #[error("non-finite input: {0}")]
    NonFinite(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular matrix: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
