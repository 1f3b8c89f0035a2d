use thiserror::Error;

use crate::expr::ParseError;

/// Errors produced anywhere in the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),

    #[error("denominator evaluates to zero in `{0}`")]
    ZeroDenominator(String),

    #[error("division by the zero polynomial in `{0}`")]
    ZeroPolynomialDivisor(String),

    #[error("line {line}: {message}")]
    ModelFile { line: usize, message: String },

    #[error("line {line}: undeclared symbol `{symbol}`")]
    UndeclaredSymbol { line: usize, symbol: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("mass matrix is singular: its determinant is identically zero")]
    SingularMassMatrix,

    #[error("{what} supports n <= {max}, got n = {n}")]
    UnsupportedDimension { what: &'static str, n: usize, max: usize },

    #[error("unknown built-in model `{0}`")]
    UnknownModel(String),

    #[error("parameter `{0}` has no value")]
    MissingParameter(String),

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("integration aborted at t = {t}: denominator magnitude {margin:e} below 1e-10")]
    IntegrationAborted { t: f64, margin: f64 },

    #[error("symbolic size budget exceeded: {what} has {terms} monomials (budget {budget})")]
    BudgetExceeded { what: String, terms: usize, budget: usize },

    #[error("degenerate trace: {0}")]
    DegenerateTrace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
