//! Contraction descents and subgraph extraction.
//!
//! Every public extraction re-checks its own output (pattern order,
//! minimum degree, connectivity) before returning; a failed check surfaces
//! as [`ExtractError::ExtractionFailed`].

mod kconn;
mod mader;
mod peel;
mod trace;

use thiserror::Error;

use crate::graph::{GraphError, VertexSet};
use crate::model::ModelError;

pub use kconn::{disjoint_k_connected_collection, k_connected_subgraph};
pub use mader::{dense_connected_minor, dense_connected_trace, mader_min_degree_minor, mader_trace};
pub use peel::{peel_dense_subset, peel_hypothesis_holds};
pub use trace::{ExtractionTrace, TraceOp, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("found only {} of {want} subgraphs", found.len())]
    Insufficient { found: Vec<VertexSet>, want: usize },
    #[error("trace replay diverged at step {step}")]
    ReplayMismatch { step: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
