//! Certified constructions around dense graph minors.
//!
//! Every construction in this crate returns a certificate (a [`MinorModel`],
//! a [`PathFamily`], a [`Separation`] or a plain vertex set) that the
//! matching auditor re-checks from scratch. Failures surface as typed
//! errors; an output that does not pass its own certificate is never
//! returned.
//!
//! * [`graph`]: representation, statistics, exact small-graph solvers,
//!   seeded generators.
//! * [`model`]: minor models and the predicates on them.
//! * [`extract`]: contraction descents for minimum degree and
//!   connectivity, dense-subset peeling, k-connected subgraphs.
//! * [`dense`]: randomized branch-set growth for `(eps, t)`-dense minors.
//! * [`link`]: Menger, linkages, knits, rooted models and wovenness.

pub mod dense;
pub mod extract;
pub mod graph;
pub mod link;
pub mod model;

pub use graph::{Caps, Graph, GraphError, Rational, Rng, Vertex, VertexSet};
pub use link::{PathFamily, Separation};
pub use model::MinorModel;
