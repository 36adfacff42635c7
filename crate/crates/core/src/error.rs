use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Pauli character {ch:?} at position {pos}")]
    PauliChar { ch: char, pos: usize },
    #[error("Pauli string length {found}, expected {expected}")]
    PauliLength { expected: usize, found: usize },
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("state dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficient count {found}, expected one per term group ({expected})")]
    CoefficientCount { expected: usize, found: usize },
    #[error("requested {k} eigenpairs of a {dim}-dimensional operator")]
    TooManyEigenpairs { k: usize, dim: usize },
    #[error("eigensolver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("complex operators of dimension {0} exceed the dense solver limit")]
    ComplexIterative(usize),
    #[error("degeneracy pattern {found:?} does not match expected {expected}")]
    Degeneracy { expected: String, found: Vec<usize> },
    #[error("noise grid too coarse: dt {dt} ns exceeds 1/(8B) = {limit} ns")]
    NoiseGrid { dt: f64, limit: f64 },
    #[error("invalid time step {dt} ns for duration {duration} ns")]
    StepSize { dt: f64, duration: f64 },
    #[error("norm drift {drift:e} exceeds bound {bound:e}")]
    NormDrift { drift: f64, bound: f64 },
    #[error("bracket failure: {0}")]
    Bracket(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("unknown config key {key:?} for {subcommand}")]
    UnknownKey { key: String, subcommand: String },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("table parse error: {0}")]
    TableParse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable kind tag used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PauliChar { .. } | Error::PauliLength { .. } => "pauli_parse",
            Error::SizeMismatch { .. } | Error::DimensionMismatch { .. } => "dimension",
            Error::CoefficientCount { .. } => "coefficients",
            Error::TooManyEigenpairs { .. } => "eigenpairs",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NotHermitian(_) => "not_hermitian",
            Error::ComplexIterative(_) => "unsupported",
            Error::Degeneracy { .. } => "degeneracy",
            Error::NoiseGrid { .. } => "noise_grid",
            Error::StepSize { .. } => "step_size",
            Error::NormDrift { .. } => "norm_drift",
            Error::Bracket(_) => "bracket",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Config { .. } => "config",
            Error::UnknownKey { .. } => "unknown_key",
            Error::Grid(_) => "grid",
            Error::TableParse(_) => "table_parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
