// Server loads of the balanced fractional assignment, and the peel trace
// that produces them.
//
// ```text
// cargo run --example balanced_flow
// ```

use online_sap::flow::{balanced_flow, max_ratio};
use online_sap::BipartiteGraph;

pub fn run_example() -> online_sap::Result<()> {
    // Three clients share server 0; a fourth can use 0 or 1; two more use 1 or 2.
    let graph = BipartiteGraph::new(3, vec![vec![0], vec![0], vec![0], vec![0, 1], vec![1, 2], vec![1, 2]])?;
    let (ratio, tight) = max_ratio(&graph)?;
    println!("densest client set {tight:?} has ratio {ratio}");

    let flow = balanced_flow(&graph)?;
    flow.check_invariants(&graph)?;
    for (s, a) in flow.alpha.iter().enumerate() {
        println!("server {s}: load {a}");
    }
    for level in &flow.peel_trace {
        println!("peel at {}: clients {:?}, servers {:?}", level.lambda, level.clients, level.servers);
    }
    for (&(c, s), v) in &flow.x {
        println!("x({c}, {s}) = {v}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
