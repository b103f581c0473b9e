use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rotation axis is zero, no preferred direction")]
    ZeroAxis,
    #[error("quaternion {0} has no inverse")]
    Singular(String),
    #[error("cubic resolvent has no positive real root (coefficients {0:?})")]
    NoPositiveResolventRoot([f64; 4]),
    #[error("fundamental system is degenerate (|det| = {0:.3e})")]
    DegenerateBasis(f64),
    #[error("matrix is defective at eigenvalue {0}")]
    Defective(Complex64),
    #[error("matrix is diagonalizable, no Jordan form needed")]
    NotDefective,
    #[error("matrix is not anti-hermitian (deviation {0:.3e})")]
    NotAntiHermitian(f64),
    #[error("eigenstructure not supported: {0}")]
    UnsupportedStructure(String),
    #[error("first row of the system matrix is not [0, 1]")]
    NotCompanion,
    #[error("mode normalization is singular (E + sqrt(E^2 - |W|^2) = 0)")]
    ModeNormalizationSingular,
    #[error("complex W = {0} breaks time reversal")]
    TimeReversalBroken(Complex64),
    #[error("phase quaternion has norm {0}, expected 1")]
    NonUnitPhase(f64),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("matching system is singular (condition estimate {0:.3e})")]
    SingularMatching(f64),
    #[error("integration diverged at x = {0}")]
    Divergence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
