//! One error type for the whole crate.
//!
//! Every failure carries enough context to act on, and maps onto the two
//! process exit classes the CLI promises: configuration mistakes (bad flags,
//! malformed files, unknown claim ids) exit with 1, runtime failures
//! (numerical breakdown, I/O during a run) exit with 2.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // --- configuration-class errors (exit code 1) ---
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid problem instance: {0}")]
    InvalidInstance(String),

    #[error("invalid Pauli error rates (q_x={qx}, q_y={qy}, q_z={qz}): {reason}")]
    InvalidNoiseRates { qx: f64, qy: f64, qz: f64, reason: String },

    #[error("subspace predicate selects no basis states: {0}")]
    EmptySubspace(String),

    #[error("unknown claim id `{given}`; valid ids: {valid}")]
    UnknownClaim { given: String, valid: String },

    #[error("ansatz expects {expected} parameters, got {got}")]
    WrongParameterCount { expected: usize, got: usize },

    #[error("operator dimension {got} does not match {expected} (n = {n} qubits)")]
    DimensionMismatch { expected: usize, got: usize, n: usize },

    #[error("{qubits} qubits exceed the supported size for {operation} (max {max})")]
    DimensionOverflow { qubits: usize, operation: String, max: usize },

    #[error("{context}: benchmark kind mismatch, expected {expected}, got {got}")]
    WrongBenchmarkKind { context: String, expected: String, got: String },

    // --- runtime-class errors (exit code 2) ---
    #[error("matrix is not Hermitian (max |A - A'| = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U U' - I| = {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("density matrix is not physical: {0}")]
    NonPhysical(String),

    #[error("cost denominator |{value:.3e}| below floor {floor:.1e}; the raw truncated cost is singular here")]
    SingularDenominator { value: f64, floor: f64 },

    #[error("target state is not normalized (norm = {norm})")]
    UnnormalizedTarget { norm: f64 },

    #[error("initial state has subspace weight {weight:.3e} after {attempts} resampling attempts")]
    VanishingSubspaceWeight { weight: f64, attempts: usize },

    #[error("gradient evaluation failed at parameter {index}: {source}")]
    GradientEvaluation {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("resume state does not match this configuration (saved hash {saved}, current {current})")]
    ResumeMismatch { saved: String, current: String },

    #[error("{stage} failed: {source}")]
    Runtime {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach the failing stage's name to a runtime-class error so the exit-2
    /// diagnostic says where a run broke. Configuration-class errors pass
    /// through untouched — they already name the offending field.
    pub fn at_stage(self, stage: &str) -> Error {
        if self.exit_code() == 2 {
            Error::Runtime { stage: stage.to_string(), source: Box::new(self) }
        } else {
            self
        }
    }
}

impl Error {
    /// Process exit code for the CLI: 1 for configuration-class errors,
    /// 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Parse { .. }
            | Error::InvalidGraph(_)
            | Error::InvalidInstance(_)
            | Error::InvalidNoiseRates { .. }
            | Error::EmptySubspace(_)
            | Error::UnknownClaim { .. }
            | Error::WrongParameterCount { .. }
            | Error::DimensionMismatch { .. }
            | Error::DimensionOverflow { .. }
            | Error::WrongBenchmarkKind { .. }
            | Error::ResumeMismatch { .. } => 1,
            Error::NonHermitian { .. }
            | Error::NonUnitary { .. }
            | Error::NonPhysical(_)
            | Error::SingularDenominator { .. }
            | Error::UnnormalizedTarget { .. }
            | Error::VanishingSubspaceWeight { .. }
            | Error::GradientEvaluation { .. }
            | Error::Runtime { .. }
            | Error::Io(_) => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_config_from_runtime() {
        assert_eq!(Error::Config("x".into()).exit_code(), 1);
        assert_eq!(
            Error::Parse { line: 3, message: "bad".into() }.exit_code(),
            1
        );
        assert_eq!(
            Error::UnknownClaim { given: "nope".into(), valid: "state-decay".into() }.exit_code(),
            1
        );
        assert_eq!(
            Error::SingularDenominator { value: 1e-14, floor: 1e-12 }.exit_code(),
            2
        );
        assert_eq!(Error::NonPhysical("trace 0.5".into()).exit_code(), 2);
        let io = Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, "gone"));
        assert_eq!(io.exit_code(), 2);
    }

    #[test]
    fn stage_wrapping_touches_only_runtime_errors() {
        let wrapped = Error::NonPhysical("trace 0.5".into()).at_stage("training seed 3");
        assert_eq!(wrapped.exit_code(), 2);
        assert!(wrapped.to_string().contains("training seed 3"));
        assert!(wrapped.to_string().contains("failed"));
        let config = Error::Config("bad field".into()).at_stage("training seed 3");
        assert_eq!(config.exit_code(), 1);
        assert!(!config.to_string().contains("training seed 3"));
    }

    #[test]
    fn messages_carry_context() {
        let e = Error::WrongParameterCount { expected: 20, got: 19 };
        assert!(e.to_string().contains("20"));
        assert!(e.to_string().contains("19"));
        let e = Error::UnknownClaim { given: "foo".into(), valid: "a, b".into() };
        assert!(e.to_string().contains("foo"));
        assert!(e.to_string().contains("a, b"));
    }
}
