use thiserror::Error;

/// Errors produced by the spinor engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinorError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("spinor is zero")]
    ZeroSpinor,

    #[error("vector is zero")]
    ZeroVector,

    #[error("numerical rank is ambiguous: spectral gap {gap:.3e} below required {required:.1e}")]
    IllConditionedRank { gap: f64, required: f64 },

    #[error("distribution is trivial: spinor has nullity 0")]
    EmptyDistribution,

    #[error("least-squares residual {residual:.3e} exceeds tolerance {tolerance:.1e} ({context})")]
    Residual {
        residual: f64,
        tolerance: f64,
        context: String,
    },

    #[error("component {index} of a real quantity has imaginary part {imag:.3e}")]
    ImaginaryResidue { index: usize, imag: f64 },

    #[error("spectrum mismatch: {0}")]
    SpectrumMismatch(String),

    #[error("no totally impure spinor exists in dimension {0}")]
    NoTotallyImpure(usize),

    #[error("nullity {nullity} is unreachable by tensor construction in dimension {n}: residual dimension {residual} admits no totally impure spinor")]
    UnreachableNullity {
        n: usize,
        nullity: usize,
        residual: usize,
    },

    #[error("internal verification failed: {0}")]
    InternalVerification(String),

    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),

    #[error("spinor does not lie in a single eigenspace of the Kaehler form (leakage {0:.3e})")]
    NotAnEigenspinor(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SpinorError {
    fn from(err: std::io::Error) -> Self {
        SpinorError::Io(err.to_string())
    }
}

pub type Result<T, E = SpinorError> = std::result::Result<T, E>;
