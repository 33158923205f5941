use thiserror::Error;

/// Errors raised by the exact and numeric engines.
///
/// Mathematical *failures* of an identity are never errors; they are
/// recorded in a [`crate::VerificationReport`]. These variants cover domain
/// violations and malformed input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-unit series: constant term is zero")]
    NonUnitSeries,
    #[error("composition requires positive valuation")]
    PositiveValuation,
    #[error("undefined: divisor sum of 0")]
    UndefinedDivisorSum,
    #[error("undefined harmonic: n must be at least 1")]
    UndefinedHarmonic,
    #[error("order too small: need order >= {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("nome out of range: {0}")]
    NomeOutOfRange(f64),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(f64),
    #[error("outside disc of convergence: x = {0}")]
    OutsideDisc(f64),
    #[error("slow convergence: partial sum {partial} after {terms} terms")]
    SlowConvergence { partial: f64, terms: usize },
    #[error("pole in parameter recurrence at k = {0}")]
    PoleInRecurrence(usize),
    #[error("modulus out of range: x = {0}")]
    ModulusOutOfRange(f64),
    #[error("outside convergence strip: |Im theta| = {im} >= {bound}")]
    OutsideStrip { im: f64, bound: f64 },
    #[error("pole of f")]
    PoleOfF,
    #[error("degenerate fit")]
    DegenerateFit,
    #[error("decay parameter must be positive: y = {0}")]
    InvalidDecay(f64),
    #[error("malformed series text at line {line}: {reason}")]
    MalformedSeries { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
