// Servers that accept several clients, handled through server copies.
//
// ```text
// cargo run --example capacitated
// ```

use online_sap::extensions::{run_capacitated, CopyMap};
use online_sap::generators::gen_random;

pub fn run_example() -> online_sap::Result<()> {
    let caps = vec![3, 1, 2, 1, 2];
    let inst = gen_random(5, 12, 2, 9)?.with_capacities(caps.clone())?;
    let copies = CopyMap::new(&caps)?;
    println!("{} servers expand to {} unit copies", caps.len(), copies.copy_count());

    let (state, log) = run_capacitated(&inst)?;
    for (s, cap) in caps.iter().enumerate() {
        println!("server {s}: {} of {cap} slots, clients {:?}", state.load(s), state.clients_of(s));
    }
    println!("placed {} of {} clients with {} replacements", state.matched_count(), inst.client_count(), log.cum_replacements());
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
