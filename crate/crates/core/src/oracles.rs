//! Reference implementations used only to validate the engines.
//!
//! Nothing here calls into the engines or the flow code; every routine builds
//! its own adjacency and traversal from the plain data it is given.

use std::collections::VecDeque;

use crate::flow::Rational;
use crate::graph::BipartiteGraph;
use crate::matching::MatchSnapshot;

/// Maximum matching size by Hopcroft–Karp phases.
pub fn hopcroft_karp_size(graph: &BipartiteGraph) -> usize {
    const NONE: usize = usize::MAX;
    let nc = graph.adjacency.len();
    let mut mate_c = vec![NONE; nc];
    let mut mate_s = vec![NONE; graph.server_count];
    let mut dist = vec![0usize; nc];
    let mut size = 0;

    loop {
        // Layered BFS from all free clients.
        let mut queue = VecDeque::new();
        for c in 0..nc {
            if mate_c[c] == NONE {
                dist[c] = 0;
                queue.push_back(c);
            } else {
                dist[c] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(c) = queue.pop_front() {
            for &s in &graph.adjacency[c] {
                let m = mate_s[s];
                if m == NONE {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[c] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            return size;
        }
        for c in 0..nc {
            if mate_c[c] == NONE && hk_dfs(c, graph, &mut mate_c, &mut mate_s, &mut dist) {
                size += 1;
            }
        }
    }
}

fn hk_dfs(
    c: usize,
    graph: &BipartiteGraph,
    mate_c: &mut [usize],
    mate_s: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &s in &graph.adjacency[c] {
        let m = mate_s[s];
        let ok = m == usize::MAX
            || (dist[m] == dist[c] + 1 && hk_dfs(m, graph, mate_c, mate_s, dist));
        if ok {
            mate_c[c] = s;
            mate_s[s] = c;
            return true;
        }
    }
    dist[c] = usize::MAX;
    false
}

/// Exact `max |K| / |N(K)|` over all nonempty client subsets, with the union of
/// all maximizers. Exponential in the number of clients.
pub fn brute_max_ratio(graph: &BipartiteGraph) -> (Rational, Vec<usize>) {
    let nc = graph.adjacency.len();
    assert!((1..=20).contains(&nc), "brute_max_ratio supports 1..=20 clients");
    assert!(graph.server_count <= 128, "brute_max_ratio supports at most 128 servers");
    let masks: Vec<u128> = graph
        .adjacency
        .iter()
        .map(|nbrs| nbrs.iter().fold(0u128, |m, &s| m | 1 << s))
        .collect();
    let mut nbhd = vec![0u128; 1 << nc];
    let mut best: Option<Rational> = None;
    let mut union = 0u32;
    for k in 1u32..1 << nc {
        let low = k.trailing_zeros() as usize;
        nbhd[k as usize] = nbhd[(k & (k - 1)) as usize] | masks[low];
        let n = nbhd[k as usize].count_ones() as i64;
        assert!(n > 0, "client with empty neighborhood");
        let r = Rational::new(k.count_ones() as i64, n);
        match best {
            Some(b) if r < b => {}
            Some(b) if r == b => union |= k,
            _ => {
                best = Some(r);
                union = k;
            }
        }
    }
    let set = (0..nc).filter(|&c| union >> c & 1 == 1).collect();
    (best.expect("at least one client"), set)
}

/// Balanced-flow loads via peeling driven by [`brute_max_ratio`].
pub fn oracle_balanced_flow(graph: &BipartiteGraph) -> Vec<Rational> {
    assert!(graph.adjacency.len() <= 16, "oracle_balanced_flow supports at most 16 clients");
    let mut alpha = vec![Rational::from_integer(0); graph.server_count];
    let mut server_gone = vec![false; graph.server_count];
    let mut left: Vec<usize> = (0..graph.adjacency.len()).collect();
    while !left.is_empty() {
        let sub = BipartiteGraph {
            server_count: graph.server_count,
            adjacency: left
                .iter()
                .map(|&c| graph.adjacency[c].iter().copied().filter(|&s| !server_gone[s]).collect())
                .collect(),
        };
        let (ratio, tight) = brute_max_ratio(&sub);
        for &i in &tight {
            for &s in &sub.adjacency[i] {
                alpha[s] = ratio;
                server_gone[s] = true;
            }
        }
        left = left
            .iter()
            .enumerate()
            .filter(|(i, _)| !tight.contains(i))
            .map(|(_, &c)| c)
            .collect();
    }
    alpha
}

/// Edge count of a shortest augmenting path from unmatched client `c`, by a
/// fresh BFS over the snapshot. A server is free when its load is below its
/// capacity.
pub fn oracle_shortest_aug_path(snap: &MatchSnapshot, c: usize) -> Option<usize> {
    let nc = snap.graph.adjacency.len();
    let ns = snap.graph.server_count;
    assert!(snap.server_of_client[c].is_none(), "client must be unmatched");
    let mut held: Vec<Vec<usize>> = vec![Vec::new(); ns];
    for (v, s) in snap.server_of_client.iter().enumerate() {
        if let Some(s) = *s {
            held[s].push(v);
        }
    }
    // Node ids: clients 0..nc, servers nc..nc+ns.
    let mut dist = vec![usize::MAX; nc + ns];
    dist[c] = 0;
    let mut queue = VecDeque::from([c]);
    while let Some(u) = queue.pop_front() {
        if u < nc {
            for &s in &snap.graph.adjacency[u] {
                if snap.server_of_client[u] == Some(s) || dist[nc + s] != usize::MAX {
                    continue;
                }
                dist[nc + s] = dist[u] + 1;
                if held[s].len() < snap.capacity[s] {
                    return Some(dist[nc + s]);
                }
                queue.push_back(nc + s);
            }
        } else {
            for &v in &held[u - nc] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    None
}

/// Edge count of a shortest augmenting tail from server `s`: an alternating
/// path that leaves `s` along a matched edge and ends at a server with spare
/// capacity. A server with spare capacity has a tail of length 0.
pub fn oracle_shortest_tail(snap: &MatchSnapshot, s: usize) -> Option<usize> {
    let ns = snap.graph.server_count;
    let mut held: Vec<Vec<usize>> = vec![Vec::new(); ns];
    for (v, t) in snap.server_of_client.iter().enumerate() {
        if let Some(t) = *t {
            held[t].push(v);
        }
    }
    let mut dist = vec![usize::MAX; ns];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if held[u].len() < snap.capacity[u] {
            return Some(dist[u]);
        }
        for &v in &held[u] {
            for &w in &snap.graph.adjacency[v] {
                if w != u && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 2;
                    queue.push_back(w);
                }
            }
        }
    }
    None
}
