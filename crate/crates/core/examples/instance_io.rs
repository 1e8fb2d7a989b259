// Reading the text instance format and writing per-arrival telemetry.
//
// ```text
// cargo run --example instance_io
// ```

use online_sap::harness::{run, Engine, RunOptions};
use online_sap::io::{parse_instance, write_instance};

const TEXT: &str = "\
# two servers, four clients
servers 2
client 0 0
client 1 0 1
client 2 0
client 3 1
";

pub fn run_example() -> online_sap::Result<()> {
    let inst = parse_instance(TEXT)?;
    print!("canonical form:\n{}", write_instance(&inst));

    let opts = RunOptions { engine: Engine::Naive, analyze: true, ..RunOptions::default() };
    let outcome = run(&inst, &opts)?;
    let mut csv = Vec::new();
    outcome.write_csv(&mut csv)?;
    print!("telemetry:\n{}", String::from_utf8_lossy(&csv));

    match parse_instance("servers 2\nclient 0 7\n") {
        Err(e) => println!("rejected bad input: {e}"),
        Ok(_) => unreachable!("server 7 does not exist"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> online_sap::Result<()> {
    run_example()
}
