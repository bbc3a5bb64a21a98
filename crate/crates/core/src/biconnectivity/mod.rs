//! Biconnectivity: the BC labeling (linear writes) and the cluster-based
//! oracle (sublinear writes).

pub mod labeling;
pub mod local;
pub mod oracle;

pub use labeling::{
    build_bc_forest, build_bc_labeling, critical_edges, euler_forest, euler_low_high, BcLabeling, BctNode,
    EulerData,
};
pub use local::{LocalGraph, Outer, Side};
pub use oracle::{build_bcc_oracle, BccOracle};
