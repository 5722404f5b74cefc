use thiserror::Error;

use crate::grid::GridDims;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid dimensions {a}x{b}x{c}: {reason}")]
    InvalidDims {
        a: usize,
        b: usize,
        c: usize,
        reason: &'static str,
    },

    #[error("cell ({x},{y},{z}) lies outside grid {dims}")]
    CellOutOfRange {
        x: usize,
        y: usize,
        z: usize,
        dims: GridDims,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimsMismatch { expected: GridDims, found: GridDims },

    #[error("simulation truncated after {steps} steps before reaching a fixed point")]
    Truncated { steps: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid {dims} exceeds the cell capacity of {cap}")]
    Capacity { dims: GridDims, cap: usize },

    #[error("missing ingredient: no {status} witness available for grid {dims}")]
    MissingIngredient { dims: GridDims, status: &'static str },

    #[error("construction failed for {dims}: {message}")]
    Construction { dims: GridDims, message: String },

    #[error("pattern rejected: {0}")]
    PatternRejected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
