use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for {len} qubits")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("enumeration of 2^{dim} elements exceeds cap of {cap}")]
    CapExceeded { dim: usize, cap: u64 },

    #[error("basis rows are linearly dependent")]
    DependentRows,

    #[error("torus period must be even and at least 2, got {0}")]
    OddPeriod(usize),

    #[error("colex must be closed to be punctured")]
    NotClosed,

    #[error("colex validation failed: {0}")]
    Validation(String),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("code has k = {0} logical qubits; operation needs {1}")]
    LogicalCount(usize, &'static str),

    #[error("operators must be pure X-type or pure Z-type of the same kind")]
    MixedType,

    #[error("link {link} has color {actual}, expected {expected}")]
    WrongLinkColor { link: usize, actual: char, expected: char },

    #[error("face {face} has color pair {actual}, expected {expected}")]
    WrongFaceColor { face: usize, actual: String, expected: String },

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("weight congruence violated; transversal phase gate is not logical")]
    CongruenceViolated,

    #[error("probability {0} outside [0, 1/2)")]
    InvalidProbability(f64),

    #[error("{n} qubits exceeds the dense simulation cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },

    #[error("syndrome collision between distinct classes at weight {weight}: decoding radius {t} overstates the distance")]
    Collision { weight: usize, t: usize },
}
