//! Constructive toolkit for Ramsey numbers of cycles versus complete
//! multipartite targets: exact small-case oracles, the clique lower-bound
//! constructions, a sublinear-expansion verifier and extractor, and the
//! adjuster/cycle-embedding pipelines built on top of them.

pub mod bits;
pub mod error;
pub mod format;
pub mod graph;
pub mod multipartite;
pub mod search;
pub mod seq;

pub use bits::VertexSet;
pub use error::{Error, Result};
pub use graph::{Cycle, Graph, Path};
pub use multipartite::{burr_graph, cliques_lower_bound_graph, complement_contains};
pub use multipartite::{Embedding, MultipartiteSpec};
pub use search::{Budget, SearchResult};
pub use seq::monotone_subsequence;
pub mod config;
pub mod expansion;
pub use config::ConstantsLedger;
