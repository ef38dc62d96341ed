//! Edge-connectivity toolkit for directed multigraphs.
//!
//! Computes the (k+2)-edge-connected components of a k-edge-connected digraph
//! by combining local searches for minimal out-sets, edge sampling, good
//! partitions and a contraction-based (k+1)-ECC decomposition. A brute-force
//! oracle is included for verification.

pub mod decomposition;
pub mod digraph;
pub mod driver;
pub mod dsu;
pub mod flow;
pub mod format;
pub mod gen;
pub mod good_partition;
pub mod local_search;
pub mod oracle;
pub mod overlay;
pub mod partition;
pub mod rng;
pub mod scc;

pub use digraph::{CutSet, Digraph, EdgeId, GraphError, VertexId, VertexKind};
pub use driver::{compute_k2ecc, compute_partition_single, Mode};
pub use dsu::DisjointSets;
pub use local_search::MSetResult;
pub use overlay::ReversalOverlay;
pub use partition::Partition;
