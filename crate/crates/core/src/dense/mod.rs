//! Randomized construction of `(eps, t)`-dense minors.
//!
//! Branch sets are grown one at a time: a small random vertex sample that
//! touches most earlier branch sets and dominates most of what is left is
//! stitched together by short paths. Every builder ends by checking the
//! pattern with [`is_eps_t_dense`](crate::graph::is_eps_t_dense).

mod bipartite;
mod build;
mod connect;
mod dense_graph;
mod hitting;
mod params;

use thiserror::Error;

use crate::extract::ExtractError;
use crate::graph::GraphError;
use crate::model::ModelError;

pub use bipartite::{
    bipartite_random_contraction, build_dense_minor_bipartite, build_dense_minor_bipartite_with, BipartiteOutcome,
};
pub use build::{build_dense_minor, build_dense_minor_with, BuildOptions, BuildOutcome, RoundRecord};
pub use connect::{connect_within, DEFAULT_MAX_PATH_LEN};
pub use dense_graph::{build_dense_minor_in_dense_graph, dense_graph_hypothesis, low_nonneighbour_set};
pub use hitting::{
    hitting_hypothesis_holds, hitting_set_bullets, sample_hitting_set, undominated_limit, Bullets, HittingSetResult,
};
pub use params::{sample_size_hypothesis, smallest_sample_size, DensityParams, SampleSize};

/// Default number of rejection-sampling attempts per randomized step.
pub const DEFAULT_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenseError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no acceptable sample in {attempts} attempts (hypotheses held: {hypotheses_hold})")]
    AttemptsExhausted { attempts: usize, hypotheses_hold: bool },
    #[error("stitching path has {len} edges, more than {max}")]
    PathTooLong { len: usize, max: usize },
    #[error("host is disconnected")]
    DisconnectedHost,
    #[error("no room left after placing {placed} branch sets")]
    OutOfRoom { placed: usize },
    #[error("pattern has {nonedges} nonedges, more than allowed")]
    DensityNotMet { nonedges: usize },
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error(transparent)]
    Extraction(#[from] ExtractError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
