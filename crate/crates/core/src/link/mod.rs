//! Disjoint paths and what is built from them: Menger certificates,
//! linkages, knits, containers, models attached to a root set, and
//! wovenness checks.
//!
//! Every path system comes back as a [`PathFamily`] carrying its contract,
//! and every negative answer from a flow comes back as a [`Separation`].

mod container;
mod linkage;
mod menger;
mod paths;
mod rooted;
mod woven;

use thiserror::Error;

use crate::dense::DenseError;
use crate::graph::{GraphError, VertexCut};
use crate::model::ModelError;

pub use container::container;
pub use linkage::{find_linkage, knit_connect, ordered_path_through};
pub use menger::{combine_redundant, doubled_menger, menger, MengerOutcome};
pub use paths::{PathContract, PathFamily, Separation};
pub use rooted::{
    attached_hypotheses, attached_model_search, attached_model_search_with, find_separation_avoiding,
    rooted_from_minor, AttachedModel, SearchRoute,
};
pub use woven::{
    check_wovenness, find_woven_witness, realize_woven_from_dense_minor, weave, TripleRecord, WovenMode, WovenReport,
    WovenRequest, WovenVerdict, WovenWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate audit failed: {0}")]
    AuditFailed(String),
    #[error("infeasible: separation of order {}", .separation.order())]
    Infeasible { separation: Separation },
    #[error("hypothesis violated: {reason}")]
    HypothesisViolated {
        reason: String,
        separation: Option<Separation>,
    },
    #[error("flow on the union of the families fell short; the two families should make this impossible")]
    InternalInfeasible { separation: Separation },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("no linkage found")]
    LinkageFailed,
    #[error("not enough fresh neighbours outside the terminal set")]
    NeighborsUnavailable,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("graph is not {needed}-connected (cutset of size {})", .cut.cut.len())]
    NotConnected { needed: usize, cut: VertexCut },
    #[error("wovenness witness not found: {0}")]
    WovennessFailed(String),
    #[error("pattern has {nonedges} nonedges, too many for the density target")]
    DensityNotMet { nonedges: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dense(#[from] DenseError),
}
