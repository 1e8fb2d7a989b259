//! Balanced server flows.
//!
//! Every client emits one unit of flow to its neighbors; a server's load `α(s)`
//! is its inflow. In a balanced flow each client only sends to its least loaded
//! neighbors, and the resulting loads are unique. They are computed here by
//! repeatedly peeling off the client set with the largest `|K| / |N(K)|`,
//! using an integer max-flow as the feasibility test. All arithmetic is exact.

mod balanced;
mod maxflow;
mod ratio;

pub use balanced::{alpha_m, alpha_m_with, balanced_flow, matchable_clients, BalancedFlow, PeelLevel};
pub use maxflow::{max_flow, FlowNetwork, MaxFlow};
pub use ratio::{feasibility, max_ratio};

use num_rational::Ratio;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = Ratio<i64>;

pub(crate) fn rat(num: i64, den: i64) -> Rational {
    Ratio::new(num, den)
}
