//! Fractional revival in continuous-time quantum walks on weighted graphs.
//!
//! The walk on a graph with (weighted, symmetric) adjacency matrix `A` is
//! `U(t) = exp(-i t A)`. A vertex subset `K` has fractional revival at
//! time `tau` when `U(tau)` is block diagonal with respect to `K` and its
//! complement; it is *proper* when the `K x K` block `H` is not diagonal.
//!
//! - [`spectral`]: eigenvalue clustering and principal idempotents.
//! - [`partition`]: the minimal partition of the spectrum commuting with
//!   `K`, ratio conditions, and certified revival times.
//! - [`cospectral`]: fractional cospectrality of vertex pairs, checked by
//!   several independent routes.
//! - [`integer_revival`]: exact minimal times for integer-weighted pairs.
//! - [`constructions`]: graph families with known revival behaviour.
//! - [`report`]: whole-pipeline analyses as serializable reports.

pub mod constructions;
pub mod cospectral;
mod error;
pub mod exec;
pub mod graph;
pub mod integer_revival;
pub mod linalg;
pub mod partition;
pub mod poly;
pub mod rational;
pub mod report;
pub mod spectral;

pub use error::Error;
pub use exec::Execution;
pub use graph::WeightedGraph;
