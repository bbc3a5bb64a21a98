//! Write-efficient connectivity and biconnectivity oracles on a metered
//! asymmetric-memory model.

pub mod biconnectivity;
pub mod bounded;
pub mod cli;
pub mod cluster;
pub mod connectivity;
pub mod cost;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod ldd;
pub mod reference;

pub use cost::{AsymVec, CostMeter, CostReport};
pub use error::{Error, Result};
pub use graph::{Adjacency, Graph, NodeId};
