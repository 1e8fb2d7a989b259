use num_traits::{Signed, Zero};

use super::maxflow::{max_flow, FlowNetwork, MaxFlow};
use super::{rat, Rational};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Network testing whether a server flow with every load at most `p/q` exists:
/// `source -> client` with capacity `q`, `client -> server` with capacity
/// `q·|C|`, `server -> sink` with capacity `p`.
///
/// Node layout: clients `0..|C|`, servers `|C|..|C|+|S|`, then source, sink.
pub(crate) struct FeasibilityNet {
    pub network: FlowNetwork,
    /// `(client, server, arc index)` for every edge.
    pub edge_arcs: Vec<(usize, usize, usize)>,
}

pub(crate) fn feasibility_network(graph: &BipartiteGraph, p: i64, q: i64) -> Result<FeasibilityNet> {
    let nc = graph.client_count();
    let ns = graph.server_count;
    let source = nc + ns;
    let sink = source + 1;
    let mut network = FlowNetwork::new(nc + ns + 2, source, sink)?;
    let wide = q.checked_mul(nc as i64).ok_or_else(|| Error::param("capacity overflow"))?;
    let mut edge_arcs = Vec::with_capacity(graph.adjacency.iter().map(Vec::len).sum());
    for c in 0..nc {
        network.add_arc(source, c, q)?;
        for &s in graph.neighbors(c) {
            let id = network.add_arc(c, nc + s, wide)?;
            edge_arcs.push((c, s, id));
        }
    }
    for s in 0..ns {
        network.add_arc(nc + s, sink, p)?;
    }
    Ok(FeasibilityNet { network, edge_arcs })
}

fn require_servable(graph: &BipartiteGraph) -> Result<()> {
    if let Some(c) = graph.first_isolated_client() {
        return Err(Error::param(format!("client {c} has no neighbors")));
    }
    Ok(())
}

fn solve(graph: &BipartiteGraph, lambda: Rational) -> Result<(bool, MaxFlow)> {
    let (p, q) = (*lambda.numer(), *lambda.denom());
    let net = feasibility_network(graph, p, q)?;
    let flow = max_flow(&net.network);
    Ok((flow.value == q * graph.client_count() as i64, flow))
}

/// Whether some server flow keeps every load at or below `lambda`.
pub fn feasibility(graph: &BipartiteGraph, lambda: Rational) -> Result<bool> {
    if !lambda.is_positive() {
        return Err(Error::param(format!("lambda must be positive, got {lambda}")));
    }
    require_servable(graph)?;
    Ok(solve(graph, lambda)?.0)
}

/// Largest `k` in `1..` for which `ok(k)` holds, given that `ok` is monotone
/// (true on a prefix). Returns 0 when `ok(1)` fails.
fn largest_true(mut ok: impl FnMut(i64) -> bool) -> i64 {
    if !ok(1) {
        return 0;
    }
    let mut lo = 1;
    let mut hi = 2;
    while ok(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smallest fraction with denominator at most `max_den` that satisfies the
/// monotone predicate `feasible`, found by Stern–Brocot descent with
/// galloping along runs of equal direction.
pub(crate) fn smallest_feasible_fraction(
    max_den: i64,
    mut feasible: impl FnMut(i64, i64) -> bool,
) -> (i64, i64) {
    // Invariant: a/b is infeasible (or 0/1), c/d is feasible (or 1/0), and the
    // two are Stern–Brocot neighbors.
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, 0i64);
    loop {
        let right = largest_true(|k| b + k * d <= max_den && !feasible(a + k * c, b + k * d));
        a += right * c;
        b += right * d;
        let left = largest_true(|k| d + k * b <= max_den && feasible(c + k * a, d + k * b));
        c += left * a;
        d += left * b;
        if right == 0 && left == 0 {
            return (c, d);
        }
    }
}

/// `max |K| / |N(K)|` over nonempty client sets, together with the
/// inclusion-maximal set attaining it.
pub fn max_ratio(graph: &BipartiteGraph) -> Result<(Rational, Vec<usize>)> {
    let nc = graph.client_count();
    if nc == 0 {
        return Err(Error::param("max_ratio needs at least one client"));
    }
    require_servable(graph)?;
    let ns = graph.server_count as i64;

    let mut failure = None;
    let (p, q) = smallest_feasible_fraction(ns, |p, q| match solve(graph, rat(p, q)) {
        Ok((ok, _)) => ok,
        Err(e) => {
            failure.get_or_insert(e);
            true
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let lambda = rat(p, q);

    // Just below lambda the network is infeasible, and the clients left on the
    // source side of the maximal min cut are exactly the union of all sets
    // attaining the maximum ratio.
    let below = lambda - rat(1, 2 * ns * ns * nc as i64);
    let (feasible_below, flow) = solve(graph, below)?;
    if feasible_below {
        return Err(Error::invariant(format!("{below} unexpectedly feasible below {lambda}")));
    }
    let tight: Vec<usize> = (0..nc).filter(|&c| flow.in_max_source_side(c)).collect();

    let mut nbhd: Vec<usize> = tight.iter().flat_map(|&c| graph.neighbors(c).iter().copied()).collect();
    nbhd.sort_unstable();
    nbhd.dedup();
    if tight.is_empty() || rat(tight.len() as i64, nbhd.len() as i64) != lambda {
        return Err(Error::invariant(format!(
            "tight set of size {} with {} neighbors does not attain {lambda}",
            tight.len(),
            nbhd.len()
        )));
    }
    debug_assert!(!(lambda - below).is_zero());
    Ok((lambda, tight))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(p: usize, q: usize) -> BipartiteGraph {
        BipartiteGraph::new(q, vec![(0..q).collect(); p]).unwrap()
    }

    #[test]
    fn complete_ten_by_twenty() {
        let g = complete(10, 20);
        assert!(feasibility(&g, rat(1, 2)).unwrap());
        assert!(!feasibility(&g, rat(1, 3)).unwrap());
        let (l, k) = max_ratio(&g).unwrap();
        assert_eq!(l, rat(1, 2));
        assert_eq!(k, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn complete_ten_by_ten() {
        let (l, k) = max_ratio(&complete(10, 10)).unwrap();
        assert_eq!(l, rat(1, 1));
        assert_eq!(k.len(), 10);
    }

    #[test]
    fn three_on_one_server() {
        let g = complete(3, 1);
        assert!(feasibility(&g, rat(3, 1)).unwrap());
        assert!(!feasibility(&g, rat(2, 1)).unwrap());
        assert_eq!(max_ratio(&g).unwrap(), (rat(3, 1), vec![0, 1, 2]));
    }

    #[test]
    fn two_components() {
        // K_{2,1} on server 0, K_{1,2} on servers 1,2.
        let g = BipartiteGraph::new(3, vec![vec![0], vec![0], vec![1, 2]]).unwrap();
        assert_eq!(max_ratio(&g).unwrap(), (rat(2, 1), vec![0, 1]));
    }

    #[test]
    fn errors() {
        let g = complete(2, 2);
        assert!(feasibility(&g, rat(0, 1)).is_err());
        assert!(feasibility(&g, rat(-1, 2)).is_err());
        let empty = BipartiteGraph::new(2, vec![]).unwrap();
        assert!(max_ratio(&empty).is_err());
        let isolated = BipartiteGraph::new(2, vec![vec![0], vec![]]).unwrap();
        assert!(max_ratio(&isolated).is_err());
    }

    #[test]
    fn stern_brocot_finds_every_small_fraction() {
        for den in 1..=7i64 {
            for num in 1..=15i64 {
                let target = rat(num, den);
                let (p, q) = smallest_feasible_fraction(7, |p, q| rat(p, q) >= target);
                assert_eq!(rat(p, q), target);
            }
        }
    }
}
