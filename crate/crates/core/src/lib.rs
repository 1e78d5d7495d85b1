//! Divide-and-conquer k-core decomposition.
//!
//! The crate splits a graph at coreness thresholds, decomposes each part
//! independently with external information standing in for cut edges, and
//! merges the per-part results into the exact coreness of every node. A
//! simulated parameter-server loop measures the communication amount of
//! distributed execution without any real transport.
//!
//! - [`graph`]: CSR graph model, edge-list ingestion, induced subgraphs.
//! - [`generate`]: seeded Erdos-Renyi and preferential-attachment generators.
//! - [`oracle`]: exact peeling, the ground truth for everything else.
//! - [`hindex`]: the iterative node-index estimator and its lifted variant.
//! - [`divide`]: exact/rough division, planning, engines, merging.
//! - [`distsim`]: the pull/estimate/push/update simulator and its metrics.

pub mod distsim;
pub mod divide;
pub mod error;
pub mod generate;
pub mod graph;
pub mod hindex;
pub mod metrics;
pub mod oracle;

pub use error::{Error, Result};
