use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the spectral computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected a polynomial of degree {expected}, got degree {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,

    #[error("root polishing did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NonConvergence { iterations: usize, worst_residual: f64 },

    #[error("polynomial is not real: imaginary part {max_imag:e} exceeds tolerance")]
    NotRealPolynomial { max_imag: f64 },

    #[error("invalid parameter `{field}`: {constraint}")]
    InvalidParams {
        field: &'static str,
        constraint: &'static str,
    },

    #[error("leading coefficient in lambda vanishes; reduced root {reduced:?}")]
    DegenerateLeadingCoefficient { reduced: Option<Complex64> },

    #[error("no branch point lies in the absolute spectrum ({0})")]
    NoAbsoluteBranchPoint(String),

    #[error("complex branch point {lambda} has no conjugate partner")]
    MissingConjugate { lambda: Complex64 },

    #[error("absolute-spectrum continuation failed at weight {nu}")]
    StepFailure { nu: f64 },

    #[error("dispersion maximiser sits on the wavenumber window boundary |k| = {k_max}")]
    KWindowTooSmall { k_max: f64 },

    #[error("consumption exponent m = {m} is outside [0, 1)")]
    OutOfRange { m: f64 },

    #[error("discriminant {delta} is negative")]
    NegativeDiscriminant { delta: f64 },

    #[error("Morse indices at large Re(lambda) are ({plus}, {minus}), expected (2, 2)")]
    NotWellPosed { plus: usize, minus: usize },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
