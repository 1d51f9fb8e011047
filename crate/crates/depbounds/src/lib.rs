//! Fractional graph invariants and tail/correlation bounds for weakly
//! dependent random variables.
//!
//! The crate has three layers:
//!
//! * combinatorial data types and generators ([`hypergraph`], [`graph`],
//!   [`indep`]) together with a dense simplex engine ([`lp`]) that computes
//!   fractional matching and chromatic numbers exactly ([`invariants`]);
//! * closed-form bound evaluators ([`bounds`]) for Chernoff/KL, Bennett,
//!   Finner, Janson, and the random-graph absence bounds, all reported in
//!   log-space;
//! * ground-truth engines ([`oracle`], [`mc`]): exact enumeration of
//!   independence probabilities and product expectations on small instances,
//!   plus seeded, worker-count-independent Monte Carlo estimation.

pub mod bounds;
pub mod graph;
pub mod hypergraph;
pub mod indep;
pub mod invariants;
pub mod lp;
pub mod mc;
pub mod oracle;
pub mod probability;
pub mod rational;

pub use graph::{cycle_graph, DependencyGraph};
pub use hypergraph::{
    clique_hypergraph, degree_hypergraph, path_count_through_edge, path_hypergraph,
    triangle_hypergraph, EdgeClass, Hypergraph, Violation,
};
pub use indep::IndependenceSystem;
pub use invariants::{ChromaticCertificate, FractionalWeighting};
pub use probability::VertexProbabilities;
