use alloc::string::String;
use core::fmt;

/// Errors reported by construction, bound evaluation, and propagation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not conform.
    DimensionMismatch { expected: usize, found: usize },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Matrix entries contain NaN or infinities.
    NonFinite,
    /// Hermiticity check failed; carries the largest entrywise deviation.
    NotHermitian { deviation: f64 },
    /// A density-matrix invariant failed (trace, positivity, hermiticity).
    NotDensityMatrix { reason: String },
    /// The generator is not a dephasing channel (commutator check failed).
    NotDephasing { commutator_norm: f64 },
    /// Dissipator prefactor evaluated to a negative value.
    NegativePrefactor { t: f64, value: f64 },
    /// Bound evaluation over a reversed time interval.
    ReversedInterval { t_start: f64, t_end: f64 },
    /// Parameter outside its admissible range.
    InvalidParameter { what: String },
    /// A propagated state violated an invariant beyond tolerance.
    InvariantViolation {
        step: usize,
        t: f64,
        what: String,
        value: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotSquare { rows, cols } => {
                write!(f, "square matrix required, got {rows}x{cols}")
            }
            Error::NonFinite => write!(f, "matrix entries must be finite"),
            Error::NotHermitian { deviation } => {
                write!(
                    f,
                    "matrix is not Hermitian (max |a - a\u{2020}| = {deviation:.3e})"
                )
            }
            Error::NotDensityMatrix { reason } => {
                write!(f, "not a valid density matrix: {reason}")
            }
            Error::NotDephasing { commutator_norm } => {
                write!(
                    f,
                    "generator is not a dephasing channel (commutator norm {commutator_norm:.3e})"
                )
            }
            Error::NegativePrefactor { t, value } => {
                write!(f, "dissipator prefactor is negative at t = {t}: {value}")
            }
            Error::ReversedInterval { t_start, t_end } => {
                write!(f, "reversed time interval [{t_start}, {t_end}]")
            }
            Error::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
            Error::InvariantViolation {
                step,
                t,
                what,
                value,
            } => {
                write!(
                    f,
                    "propagation aborted at step {step} (t = {t:.6}): {what} = {value:.3e} beyond tolerance"
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
