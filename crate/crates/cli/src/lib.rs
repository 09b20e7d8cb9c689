//! Command-line harness around `qsl-core`: scenario ingestion, trajectory
//! tables, bound reports, and the self-checking dual-path comparison.

pub mod compare;
pub mod output;
pub mod schema;

use qsl_core::Error as CoreError;

/// Exit codes double as the CI contract.
pub mod exit_code {
    pub const OK: i32 = 0;
    /// Malformed scenario, unknown catalog entry, bad override.
    pub const SCHEMA: i32 = 2;
    /// A propagated state violated a trajectory invariant.
    pub const PROPAGATION: i32 = 3;
    /// The two propagation paths disagree beyond tolerance.
    pub const ORACLE_MISMATCH: i32 = 4;
    /// A trajectory exceeded a declared bound beyond tolerance.
    pub const BOUND_VIOLATION: i32 = 5;
}

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn schema(message: impl Into<String>) -> Self {
        Self {
            code: exit_code::SCHEMA,
            message: message.into(),
        }
    }

    pub fn io(message: impl std::fmt::Display) -> Self {
        Self {
            code: exit_code::SCHEMA,
            message: message.to_string(),
        }
    }

    pub fn from_core(err: CoreError) -> Self {
        let code = match &err {
            CoreError::InvariantViolation { .. } | CoreError::NegativePrefactor { .. } => {
                exit_code::PROPAGATION
            }
            _ => exit_code::SCHEMA,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for Failure {}

/// Quadrature panel count: `QSL_QUADRATURE_STEPS` or the default 1000.
pub fn quadrature_steps() -> usize {
    std::env::var("QSL_QUADRATURE_STEPS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(qsl_core::bounds::DEFAULT_QUADRATURE_STEPS)
}
