//! Exact tools for H-factor problems in graphs with small independence number.

pub mod absorb;
pub mod cli;
pub mod config;
pub mod embed;
pub mod error;
pub mod extremal;
pub mod factor;
pub mod graph;
pub mod invariants;
pub mod lp;
pub mod qgraph;
pub mod rational;
pub mod reduced;

pub use config::Caps;
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
