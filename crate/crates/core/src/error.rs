use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alpha = {alpha} is outside the valid range {range} for {class}")]
    AlphaOutOfRange {
        class: &'static str,
        alpha: f64,
        range: &'static str,
    },

    #[error("coefficients are not a feasible Carathéodory sequence (min Toeplitz eigenvalue {min_eigenvalue:e})")]
    InfeasibleInput { min_eigenvalue: f64 },

    #[error("index n = {n} is out of range for a sequence of length {len}")]
    IndexOutOfRange { n: usize, len: usize },

    #[error("need coefficients up to order {needed}, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("functional {functional} is not supported for {class}")]
    UnsupportedFunctional {
        class: String,
        functional: String,
    },

    #[error("polynomial operands live over different symbol sets: {left:?} vs {right:?}")]
    SymbolMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
