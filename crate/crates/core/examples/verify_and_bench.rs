// Invariant checks on one instance and a small replacement sweep.
//
// ```text
// cargo run --release --example verify_and_bench
// ```

use online_sap::generators::gen_star_chain;
use online_sap::harness::{bench, verify_instance};

pub fn run_example() -> online_sap::Result<()> {
    let report = verify_instance(&gen_star_chain(4)?, true)?;
    print!("{report}");
    assert!(report.all_passed());

    for row in bench(&[32, 64], 2, 3)? {
        println!(
            "n {:3} seed {}: replacements {:4}, path edges {:5}, n ln^2 n {:.0}",
            row.n, row.seed, row.total_replacements, row.total_path_edges, row.n_ln2_n
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
