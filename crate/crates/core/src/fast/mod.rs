//! SAP driven by a depth-bounded shortest-path tree over the residual digraph.

mod digraph;
mod engine;
mod estree;

pub use digraph::ResidualDigraph;
pub use engine::{default_depth_limit, run_fast_sap, run_fast_sap_with, FastSap};
pub use estree::{EsTree, ValidationMode};
