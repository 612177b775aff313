//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Result`]. The variants
//! separate the three failure classes callers react to differently: bad
//! input (`InvalidSpec`, `ZeroIdeal`, `UnitIdeal`, `Unsupported`), data that
//! is fine but insufficient (`HorizonTooShort`, `NotStabilized`,
//! `TooFewPoints`, `GeneratorCapExceeded`), and violated internal
//! expectations (`Internal`).

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation that needs a nonzero ideal was handed the zero ideal.
    ZeroIdeal { op: &'static str },
    /// An operation that needs a proper ideal was handed the unit ideal.
    UnitIdeal { op: &'static str },
    /// A chain spec file failed to parse or validate.
    InvalidSpec(String),
    /// A variable index exceeds the ambient ring's bounds.
    IndexOutOfRange { row: u32, col: u32, rows: u32, width: Option<u32> },
    /// The ambient width is unbounded where a bounded one is required.
    UnboundedAmbient { op: &'static str },
    /// More materialized widths are needed than the horizon provides.
    HorizonTooShort { op: &'static str, needed: u32, got: u32 },
    /// A tail value did not become constant within the horizon.
    NotStabilized { what: String },
    /// A fit or estimate was asked for with too little data.
    TooFewPoints { op: &'static str, needed: usize, got: usize },
    /// The Taylor-complex oracle refuses ideals above its generator cap.
    GeneratorCapExceeded { generators: usize, cap: usize },
    /// A precondition on the kind of input (chain shape, field, ...) failed.
    Unsupported(String),
    /// An internal invariant was violated; indicates a bug, not bad input.
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroIdeal { op } => write!(f, "{op}: undefined for the zero ideal"),
            Error::UnitIdeal { op } => write!(f, "{op}: undefined for the unit ideal"),
            Error::InvalidSpec(msg) => write!(f, "invalid chain spec: {msg}"),
            Error::IndexOutOfRange { row, col, rows, width } => match width {
                Some(w) => write!(
                    f,
                    "variable x[{row},{col}] outside ambient ring ({rows} rows, width {w})"
                ),
                None => write!(f, "variable x[{row},{col}] outside ambient ring ({rows} rows)"),
            },
            Error::UnboundedAmbient { op } => {
                write!(f, "{op}: requires a bounded ambient width")
            }
            Error::HorizonTooShort { op, needed, got } => {
                write!(f, "{op}: needs width {needed} but horizon is {got}")
            }
            Error::NotStabilized { what } => {
                write!(f, "{what} did not stabilize within the horizon")
            }
            Error::TooFewPoints { op, needed, got } => {
                write!(f, "{op}: needs at least {needed} data points, got {got}")
            }
            Error::GeneratorCapExceeded { generators, cap } => {
                write!(f, "Taylor oracle: {generators} generators exceeds cap {cap}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported input: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
