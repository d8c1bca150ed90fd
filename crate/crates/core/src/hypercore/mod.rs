//! Hypergraph data model: edges, target graphs, embeddings and the
//! progress measure.

mod edge;
mod embed;
mod index;
mod link;
mod overlap;
mod target;

use thiserror::Error;

pub use edge::{HEdge, Vertex, MAX_ARITY};
pub use embed::{enumerate_copies, for_each_copy, Embedding, Matcher};
pub use index::EdgeIndex;
pub use link::DoubleStar;
pub use overlap::{max_overlap, x_board, OverlapCopy, OverlapSearch, Slot};
pub use target::{
    format_edge_list, g_minus, hat_k23_3, hat_k24_3, k2t_plain, k2t_scaffold, k2t_target, lift,
    make_hat_k2l, make_k2t_s, parse_edge_list, path, target_by_name, triangle, TargetGraph,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperError {
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}
