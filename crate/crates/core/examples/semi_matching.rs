// Placing every client while each server stays within a slack factor of
// its balanced load.
//
// ```text
// cargo run --example semi_matching
// ```

use online_sap::extensions::run_semi_matching;
use online_sap::generators::gen_random_degrees;
use online_sap::Rational;

pub fn run_example() -> online_sap::Result<()> {
    let eps = Rational::new(1, 2);
    let inst = gen_random_degrees(6, 30, 1, 3, 3)?;
    let run = run_semi_matching(&inst, eps)?;

    let last = run.steps.last().expect("at least one arrival");
    for s in 0..inst.server_count() {
        println!("server {s}: load {}, balanced load {}, allowance {}", last.load[s], last.alpha[s], last.allowance[s]);
    }
    let longest = run.log.path_lengths().max().unwrap_or(0);
    println!("eps = {eps}: {} replacements, longest path {longest} edges", run.log.cum_replacements());
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
