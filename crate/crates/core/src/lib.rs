//! Online bipartite matching with replacements under the shortest-augmenting-path
//! (SAP) protocol.
//!
//! Servers are fixed up front; clients arrive one at a time together with all
//! their edges. After every arrival the crate maintains a maximum matching by
//! augmenting along a shortest augmenting path from the new client, and records
//! how many already-matched clients had to move.
//!
//! Besides the plain engine ([`run_sap`]) the crate contains:
//!
//! * [`flow`]: exact-rational balanced server flows (server "necessities"),
//!   computed by a peeling decomposition on top of an integer max-flow;
//! * [`fast`]: a SAP engine that keeps a depth-bounded shortest-path tree over
//!   the residual digraph and falls back to brute-force search for long paths;
//! * [`extensions`]: capacitated assignment, exact min-max-load maintenance and
//!   (1+ε)-approximate semi-matching;
//! * [`generators`], [`oracles`], [`io`] and [`harness`]: instance generators,
//!   independent reference implementations, the text formats and the
//!   verification / benchmark drivers behind the `sap` binary.

pub mod error;
pub mod extensions;
pub mod fast;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
pub mod matching;
pub mod oracles;
pub mod runlog;

pub use error::{Error, Result};
pub use flow::Rational;
pub use graph::{ArrivalInstance, BipartiteGraph};
pub use matching::{run_sap, AugPath, MatchState};
pub use runlog::{ArrivalRecord, FastStats, RunLog};
