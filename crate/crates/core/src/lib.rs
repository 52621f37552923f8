//! Structure- and semantics-preserving community detection for heterogeneous
//! multilayer networks.
//!
//! The pipeline decouples the analysis: communities are detected once per
//! layer ([`community`]), pairs of layers are coupled through a community
//! bipartite graph ([`meta`]) using one of four pairing algorithms
//! ([`pairing`]), and a left-to-right expression ([`expr`]) chains those
//! couplings into k-community tuples ([`compose`]). [`eval`] compares the
//! result with Louvain on the type-independent aggregate graph.

pub mod cli;
pub mod community;
pub mod compose;
pub mod error;
pub mod eval;
pub mod expr;
pub mod graph;
pub mod louvain;
pub mod meta;
pub mod mln;
pub mod pairing;
pub mod par;
pub mod synth;

pub use community::{CommunityAssignment, CommunityId, CommunityStats};
pub use compose::{evaluate_k_community, KCommunityResult, KCommunityTuple, LayerStore};
pub use error::{Error, Result};
pub use expr::{parse_expression, KCommunityExpression, StepCase};
pub use meta::{CommunityBipartiteGraph, Metric};
pub use mln::{MultilayerNetwork, MlnConfig};
pub use pairing::{Algorithm, Pairing};
