use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M*| = {deviation:e} exceeds {limit:e}")]
    NonHermitian { deviation: f64, limit: f64 },
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("atom {index} has negative or non-real weight {weight}")]
    NegativeWeight { index: usize, weight: String },
    #[error("atom {index} has a weight that is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NonPsdWeight { index: usize, min_eig: f64 },
    #[error("Lévy measure has an atom at the origin (atom {0})")]
    AtomAtOrigin(usize),
    #[error("invalid Lévy–Khintchine parameters: {0}")]
    InvalidLkParams(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("grid spacing {spacing} does not resolve support diameter {diameter} (need at least 8 samples)")]
    UnderResolved { spacing: f64, diameter: f64 },
    #[error("symbol is not flagged bounded; multiplier undefined")]
    UnboundedSymbol,
    #[error("atom {index} at {location:?} lies outside the periodic box")]
    AtomOutOfBox { index: usize, location: Vec<f64> },
    #[error("input field is not nonnegative: component {component} has value {value:e}")]
    NegativeInput { component: usize, value: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration invalid: {0}")]
    ConfigInvalid(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::ConfigInvalid(e.to_string())
    }
}

impl Error {
    /// Errors that signal a failed mathematical hypothesis rather than a bad
    /// configuration or environment. The harness records these as failed
    /// checks instead of aborting.
    pub fn is_math(&self) -> bool {
        matches!(
            self,
            Error::NonHermitian { .. }
                | Error::NonFinite(_)
                | Error::NegativeWeight { .. }
                | Error::NonPsdWeight { .. }
                | Error::AtomAtOrigin(_)
                | Error::InvalidLkParams(_)
                | Error::UnboundedSymbol
                | Error::NegativeInput { .. }
        )
    }
}
