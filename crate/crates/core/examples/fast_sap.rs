// The depth-limited engine next to the plain one on a larger random graph.
//
// ```text
// cargo run --release --example fast_sap
// ```

use online_sap::fast::{default_depth_limit, run_fast_sap_with, ValidationMode};
use online_sap::generators::gen_random;
use online_sap::run_sap;

pub fn run_example() -> online_sap::Result<()> {
    let n = 1500;
    let inst = gen_random(n * 3 / 4, n, 3, 42)?;
    let (naive_state, naive) = run_sap(&inst)?;
    println!("n = {n}, matched {}, naive path edges {}", naive_state.matched_count(), naive.cum_path_edges());

    for h in [default_depth_limit(n), 4] {
        let (fast_state, fast) = run_fast_sap_with(&inst, Some(h), ValidationMode::Off)?;
        assert_eq!(naive_state.matched_count(), fast_state.matched_count());
        let stats = fast.fast.as_ref().expect("fast engine records stats");
        println!("h = {h}: path edges {}", fast.cum_path_edges());
        println!("  paths from the tree {}, by brute force {}", stats.tree_paths, stats.brute_force_paths);
        println!("  failed searches {}, pruned clients {}, pruned servers {}", stats.brute_force_failures, stats.pruned_clients, stats.pruned_servers);
        println!("  arc insertions {}, arc deletions {}", stats.arc_insertions, stats.arc_deletions);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
