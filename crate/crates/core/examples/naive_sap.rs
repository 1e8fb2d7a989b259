// Shortest augmenting paths on a chain that forces ever longer paths.
//
// ```text
// cargo run --example naive_sap
// ```

use online_sap::generators::gen_star_chain;
use online_sap::run_sap;

pub fn run_example() -> online_sap::Result<()> {
    let inst = gen_star_chain(5)?;
    let (state, log) = run_sap(&inst)?;
    println!("{} clients over {} servers", inst.client_count(), inst.server_count());
    for (t, r) in log.records().iter().enumerate() {
        if let Some(edges) = r.path_edges {
            println!("arrival {t:2}: client {:2} -> server {} via {edges} edges", r.client, state.server_of(r.client).unwrap());
        }
    }
    println!("matched {}, total replacements {}", state.matched_count(), log.cum_replacements());
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
