//! Toolkit for the 3-neighbour bootstrap percolation process on `a × b × c`
//! grid graphs: simulation, lower bounds and classification, recursive and
//! periodic constructions of minimum percolating sets, and search oracles.

pub mod bounds;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod grid;
pub mod search;
pub mod textgrid;

pub use bounds::{classify, lower_bound, perfect_audit, perfect_precondition, Classification, Status};
pub use engine::{degree_pair_sum, percolate, step, surface_quantity, PercolationTrace, Simulator, DEFAULT_R};
pub use error::{Error, Result};
pub use grid::{neighbours, Cell, CellSet, GridDims, Transform};
