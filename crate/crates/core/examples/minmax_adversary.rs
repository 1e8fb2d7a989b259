// Keeping the maximum load optimal against the staircase adversary.
//
// ```text
// cargo run --example minmax_adversary
// ```

use online_sap::extensions::run_minmax;
use online_sap::generators::{gen_minmax_adversary, minmax_adversary_layout};

pub fn run_example() -> online_sap::Result<()> {
    let l = 8;
    let inst = gen_minmax_adversary(l)?;
    let layout = minmax_adversary_layout(l)?;
    let run = run_minmax(&inst)?;

    for phase in &layout.phases {
        let reps: usize = run.log.records()[phase.arrivals.clone()].iter().map(|r| r.replacements).sum();
        println!(
            "phase {} ({:?}): arrivals {:?}, optimum {}, reassignments {reps}",
            phase.index,
            phase.kind,
            phase.arrivals,
            run.opt_history[phase.arrivals.end - 1]
        );
    }
    let profile = run.profile();
    println!("final loads {:?}, max {} = optimum {}", profile.load, profile.max_load, profile.opt);
    println!("total reassignments {}", run.log.cum_replacements());
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
