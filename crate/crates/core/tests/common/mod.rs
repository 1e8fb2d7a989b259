#![allow(dead_code)]

use std::io::Write;

use online_sap::extensions::CopyMap;
use online_sap::generators::gen_random_degrees;
use online_sap::oracles::hopcroft_karp_size;
use online_sap::{ArrivalInstance, BipartiteGraph};

/// Prints a result line straight to the terminal (bypassing the test
/// harness capture) so every outcome shows up in the run log.
pub fn report(label: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[acceptance] {label}: {verdict} ({detail})").unwrap();
    out.flush().unwrap();
}

/// Random instance family with sizes and server counts spread out by seed.
pub fn random_instance(seed: u64, max_n: usize, min_deg: usize, max_deg: usize) -> ArrivalInstance {
    let n = 2 + (seed as usize * 97 + 13) % (max_n - 1);
    let servers = (n * (40 + (seed as usize * 31) % 80) / 100).max(max_deg);
    gen_random_degrees(servers, n, min_deg, max_deg, seed).unwrap()
}

/// Smallest per-server load `b` at which every client with a neighbor fits,
/// found with Hopcroft–Karp on the graph with `b` copies per server.
pub fn oracle_opt(graph: &BipartiteGraph) -> usize {
    let servable = graph.adjacency.iter().filter(|n| !n.is_empty()).count();
    (0..=servable)
        .find(|&b| {
            if b == 0 {
                return servable == 0;
            }
            let map = CopyMap::new(&vec![b; graph.server_count]).unwrap();
            hopcroft_karp_size(&map.expand_graph(graph)) == servable
        })
        .unwrap()
}
