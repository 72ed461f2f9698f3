//! Galois connections between 1-nested phylogenetic networks and circular split
//! systems, their weighted versions, and the BME(n, k) polytope vertices built
//! on them.

pub mod circular;
pub mod error;
pub mod io;
pub mod metrics;
pub mod network;
pub mod oracle;
pub mod pctree;
pub mod polytope;
pub mod random;
pub mod split;
pub mod verify;

pub use circular::{closure, ell, is_circular, is_outer_path, CircularSystem};
pub use error::{Error, Result};
pub use network::{network_poset_compare, NetworkStats, PhyloNetwork};
pub use pctree::{PcNode, PcTree};
pub use split::{CircularOrder, PosetRelation, Split, SplitSystem};
