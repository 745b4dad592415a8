use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("operation requires {required} claims, model has {found} claims")]
    UnsupportedClaimLaw {
        required: &'static str,
        found: &'static str,
    },

    #[error("argument {value} outside domain: {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("no real root of kappa_1(alpha) = {0}")]
    NoRealRoot(f64),

    #[error("root bracket failed: {0}")]
    RootNotFound(String),

    #[error("double root at q = {0}; scale function undefined there")]
    DegenerateRoots(f64),

    #[error("pole of g at q = {0}")]
    Pole(f64),

    #[error("q = {0} lies on the branch cut [q+, q-]; use the cut data instead")]
    OnCut(f64),

    #[error("subgenerator matrix is singular")]
    SingularMatrix,

    #[error("quadrature tolerance not met: requested {requested:e}, estimated error {estimated:e}")]
    ToleranceNotMet { requested: f64, estimated: f64 },

    #[error("negative reserve ({0})")]
    InvalidReserve(f64),

    #[error("point ({u1}, {u2}) lies outside the solved grid")]
    OutOfFootprint { u1: f64, u2: f64 },

    #[error("point ({u1}, {u2}) is in the lower cone; use the one-dimensional formula")]
    LowerCone { u1: f64, u2: f64 },

    #[error("step-halving disagreement {estimated:e} exceeds tolerance {requested:e}")]
    GridTooCoarse { requested: f64, estimated: f64 },

    #[error("inversion did not settle: M and M+5 differ by {0:e}")]
    ConvergenceWarning(f64),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
