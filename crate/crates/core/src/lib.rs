//! Ball-sort and water-sort puzzles: configurations, exact deciders based on
//! top-border tables, special-case solvers for capacity two, instance
//! generators, empty-bin bounds and a brute-force reference search.
//!
//! Batch helpers in [`sweep`] run on rayon when the default `parallel` feature
//! is enabled and sequentially otherwise. Individual solves are always
//! single-threaded and deterministic.

mod arena;
pub mod bounds;
pub mod compressed;
pub mod error;
pub mod generators;
pub mod h2;
pub mod io;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod sweep;
pub mod topborder;

pub use error::{Error, Result};
pub use model::{Color, ColorSeq, Configuration, Instance, Move, Semantics};
pub use solver::{Certificate, SolveOptions, SolveReport};
pub use topborder::{DemandRule, TableContext, TopBorderTable};
