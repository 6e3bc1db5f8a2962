//! Bundled crossing minimization for circular (one-page) graph layouts.
//!
//! The crate decides whether a graph has a circular layout whose
//! crossings can be grouped into at most `k` bundled crossings, emits
//! checkable certificates, and computes genus-based variants of the
//! bundled crossing number by exhaustive rotation-system search.

pub mod arrangement;
pub mod assign;
pub mod budget;
pub mod bundling;
pub mod catalog;
pub mod circular;
pub mod error;
pub mod frames;
pub mod genus;
pub mod graph;
pub mod obstruction;
pub mod planarity;
pub mod render;
pub mod solver;
pub mod surface;

pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::{parse_graph, Graph};
