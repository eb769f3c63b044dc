//! Unified error type for the library, with a coarse classification used by
//! the CLI to pick exit codes.

use crate::jet::JetError;
use thiserror::Error;

/// How a failure should be classified at a process boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input: bad spec document, bad expression, bad arguments,
    /// out-of-domain evaluation point, dimension mismatch for an operation.
    InvalidInput,
    /// The immersion degenerates: area element below the regularity threshold.
    Regularity,
    /// A numerical failure during an otherwise well-posed computation.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid surface spec: {0}")]
    Spec(String),

    #[error("syntax error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("point ({u}, {v}) is outside the parameter disc of radius {radius}")]
    OutOfDomain { u: f64, v: f64, radius: f64 },

    #[error("operation requires an immersion into R^{expected}, surface has n = {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    Config(String),

    #[error("regularity failure at ({u}, {v}): area element {w:.3e} below threshold")]
    Regularity { u: f64, v: f64, w: f64 },

    #[error("{source} at ({u}, {v}){}", fmt_offset(.offset))]
    EvalDomain {
        source: JetError,
        u: f64,
        v: f64,
        offset: Option<usize>,
    },

    #[error("normal frame degenerates at ({u}, {v}): seed vectors span fewer than {needed} directions")]
    FrameDegeneracy { u: f64, v: f64, needed: usize },

    #[error("surface is not conformally parametrized at ({u}, {v}): defect {defect:.3e} exceeds {tol:.1e}")]
    NonConformal { u: f64, v: f64, defect: f64, tol: f64 },

    #[error("numerical failure: {0}")]
    Numerics(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Spec(_)
            | Error::Parse { .. }
            | Error::UnknownIdentifier { .. }
            | Error::OutOfDomain { .. }
            | Error::Dimension { .. }
            | Error::Config(_)
            | Error::Io(_) => ErrorClass::InvalidInput,
            Error::Regularity { .. } => ErrorClass::Regularity,
            Error::EvalDomain { .. }
            | Error::FrameDegeneracy { .. }
            | Error::NonConformal { .. }
            | Error::Numerics(_) => ErrorClass::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

fn fmt_offset(offset: &Option<usize>) -> String {
    match offset {
        Some(o) => format!(" (expression byte {o})"),
        None => String::new(),
    }
}
