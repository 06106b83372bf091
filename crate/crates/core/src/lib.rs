//! Fair densest subgraph discovery on 2-colored graphs.
//!
//! The crate is organized around a handful of building blocks:
//!
//! * [`graph`]: the colored, weighted, undirected graph and the density,
//!   balance and fairness measures everything else is scored with.
//! * [`spectral`]: the fairness vector, the matrix-free projected operator
//!   `(I - ff^T) A (I - ff^T)` and a shifted power-iteration eigensolver.
//! * [`sweep`]: sweep rounding of an eigenvector into a dense node set
//!   (`SS`, `FSS`, `PS`, `FPS`).
//! * [`flow`]: exact densest subgraph through max-flow and the fair
//!   2-approximation that pads the densest set to balance (`2-DFSG`).
//! * [`oracle`]: exhaustive solvers for small instances.
//! * [`planted`]: planted fair dense subgraph instances and recovery checks.
//! * [`ingest`]: GML, Amazon JSON-lines and the plain edge-list format.
//! * [`report`]: Pareto fronts, normalized density, summaries and CSV output.

pub mod error;
pub mod flow;
pub mod graph;
pub mod ingest;
pub mod oracle;
pub mod planted;
pub mod report;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{balance, density, imbalance, induced_subgraph, Color, Coloring, LabeledGraph, NodeSet};
