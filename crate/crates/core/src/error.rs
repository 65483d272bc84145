//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by simulation, compilation, sampling and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameter set violates a documented invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A dense representation would exceed the configured qubit cap.
    #[error("dimension overflow: {n_qubits} qubits exceeds maximum of {max_qubits}")]
    DimensionOverflow { n_qubits: usize, max_qubits: usize },

    /// Gate refers to a qubit outside the register, repeats a qubit, or
    /// carries a non-finite angle.
    #[error("invalid gate: {0}")]
    InvalidGate(String),

    /// Circuit structure violation (e.g. a unitary gate after a measurement).
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    /// Measurements are handled by the sampling layer, not by unitary backends.
    #[error("measurement gates cannot be applied as unitaries")]
    MeasureNotUnitary,

    /// Kraus set fails the completeness relation sum(K^dag K) = I.
    #[error("Kraus operators are not trace preserving: max deviation {deviation:e}")]
    NonCptpKraus { deviation: f64 },

    /// Noise profile field out of range.
    #[error("invalid noise profile: {0}")]
    InvalidNoiseProfile(String),

    /// Probability vector malformed (negative entries or wrong total).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Sampling called with unusable arguments.
    #[error("invalid sampling request: {0}")]
    InvalidSampling(String),

    /// The exact-propagator trace failed to self-converge.
    #[error("oracle failed to converge after {doublings} substep doublings (residual {residual:e})")]
    OracleNotConverged { doublings: usize, residual: f64 },

    /// Emission requires a circuit already lowered to the native gate set.
    #[error("circuit contains non-native gates ({0}); lower it first")]
    UnloweredCircuit(String),

    /// Configuration document rejected; the message carries the field path.
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    /// Malformed result-table text.
    #[error("result parse error: {0}")]
    ResultParse(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
