use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
}

/// Directed network with integer capacities and a designated source and sink.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<Arc>,
    source: usize,
    sink: usize,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= node_count || sink >= node_count || source == sink {
            return Err(Error::param(format!(
                "bad terminals {source}/{sink} for {node_count} nodes"
            )));
        }
        Ok(Self {
            node_count,
            arcs: Vec::new(),
            source,
            sink,
        })
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: i64) -> Result<usize> {
        if from >= self.node_count || to >= self.node_count {
            return Err(Error::param(format!("arc {from}->{to} out of range")));
        }
        if capacity < 0 {
            return Err(Error::param(format!("negative capacity on {from}->{to}")));
        }
        if to == self.source || from == self.sink {
            return Err(Error::param(format!(
                "arc {from}->{to} enters the source or leaves the sink"
            )));
        }
        self.arcs.push(Arc { from, to, capacity });
        Ok(self.arcs.len() - 1)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }
}

#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: i64,
    /// Flow on each arc, in insertion order.
    pub arc_flow: Vec<i64>,
    source_reachable: Vec<bool>,
    reaches_sink: Vec<bool>,
}

impl MaxFlow {
    /// Source side of the inclusion-minimal minimum cut: nodes reachable from
    /// the source in the residual network.
    pub fn min_cut_source_side(&self) -> Vec<usize> {
        (0..self.source_reachable.len())
            .filter(|&v| self.source_reachable[v])
            .collect()
    }

    /// Source side of the inclusion-maximal minimum cut: every node that
    /// cannot reach the sink in the residual network.
    pub fn max_cut_source_side(&self) -> Vec<usize> {
        (0..self.reaches_sink.len())
            .filter(|&v| !self.reaches_sink[v])
            .collect()
    }

    pub fn in_max_source_side(&self, v: usize) -> bool {
        !self.reaches_sink[v]
    }
}

struct Edge {
    to: usize,
    cap: i64,
}

/// Dinic's blocking-flow algorithm.
pub fn max_flow(network: &FlowNetwork) -> MaxFlow {
    let n = network.node_count;
    let mut edges: Vec<Edge> = Vec::with_capacity(network.arcs.len() * 2);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for arc in &network.arcs {
        adj[arc.from].push(edges.len());
        edges.push(Edge { to: arc.to, cap: arc.capacity });
        adj[arc.to].push(edges.len());
        edges.push(Edge { to: arc.from, cap: 0 });
    }
    let (s, t) = (network.source, network.sink);
    let mut value = 0i64;
    let mut level = vec![usize::MAX; n];
    let mut next = vec![0usize; n];
    loop {
        level.fill(usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &adj[u] {
                let v = edges[e].to;
                if edges[e].cap > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[t] == usize::MAX {
            break;
        }
        next.fill(0);
        loop {
            let pushed = augment(&mut edges, &adj, &level, &mut next, s, t, i64::MAX);
            if pushed == 0 {
                break;
            }
            value += pushed;
        }
    }

    let arc_flow = (0..network.arcs.len())
        .map(|i| edges[2 * i + 1].cap)
        .collect();

    let mut source_reachable = vec![false; n];
    source_reachable[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &e in &adj[u] {
            let v = edges[e].to;
            if edges[e].cap > 0 && !source_reachable[v] {
                source_reachable[v] = true;
                queue.push_back(v);
            }
        }
    }

    // v reaches the sink iff some residual path v -> t exists; walk backwards
    // from t over arcs u -> v with residual capacity.
    let mut reaches_sink = vec![false; n];
    reaches_sink[t] = true;
    let mut queue = VecDeque::from([t]);
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            let u = edges[e].to;
            if edges[e ^ 1].cap > 0 && !reaches_sink[u] {
                reaches_sink[u] = true;
                queue.push_back(u);
            }
        }
    }

    MaxFlow {
        value,
        arc_flow,
        source_reachable,
        reaches_sink,
    }
}

fn augment(
    edges: &mut [Edge],
    adj: &[Vec<usize>],
    level: &[usize],
    next: &mut [usize],
    u: usize,
    t: usize,
    limit: i64,
) -> i64 {
    if u == t {
        return limit;
    }
    while next[u] < adj[u].len() {
        let e = adj[u][next[u]];
        let v = edges[e].to;
        if edges[e].cap > 0 && level[v] == level[u] + 1 {
            let pushed = augment(edges, adj, level, next, v, t, limit.min(edges[e].cap));
            if pushed > 0 {
                edges[e].cap -= pushed;
                edges[e ^ 1].cap += pushed;
                return pushed;
            }
        }
        next[u] += 1;
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2, 0, 1).unwrap();
        net.add_arc(0, 1, 5).unwrap();
        assert_eq!(max_flow(&net).value, 5);
    }

    #[test]
    fn two_disjoint_unit_paths() {
        let mut net = FlowNetwork::new(4, 0, 3).unwrap();
        for mid in [1, 2] {
            net.add_arc(0, mid, 1).unwrap();
            net.add_arc(mid, 3, 1).unwrap();
        }
        let f = max_flow(&net);
        assert_eq!(f.value, 2);
        assert_eq!(f.arc_flow, vec![1, 1, 1, 1]);
    }

    #[test]
    fn rejects_malformed_arcs() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        assert!(net.add_arc(1, 0, 1).is_err());
        assert!(net.add_arc(2, 1, 1).is_err());
        assert!(net.add_arc(0, 1, -1).is_err());
        assert!(FlowNetwork::new(2, 0, 0).is_err());
    }

    #[test]
    fn minimal_and_maximal_cuts_differ_on_slack_node() {
        // 0 -> 1 -> 3 saturated at the first arc; node 2 hangs off the sink side
        // with nothing flowing through it.
        let mut net = FlowNetwork::new(4, 0, 3).unwrap();
        net.add_arc(0, 1, 1).unwrap();
        net.add_arc(1, 3, 5).unwrap();
        net.add_arc(2, 3, 0).unwrap();
        let f = max_flow(&net);
        assert_eq!(f.value, 1);
        assert_eq!(f.min_cut_source_side(), vec![0]);
        assert_eq!(f.max_cut_source_side(), vec![0, 2]);
    }

    fn cut_oracle(n: usize, arcs: &[(usize, usize, i64)]) -> i64 {
        // source 0, sink n-1; enumerate every subset of the inner nodes.
        let inner = n - 2;
        (0..1u32 << inner)
            .map(|mask| {
                let side = |v: usize| v == 0 || (v != n - 1 && mask >> (v - 1) & 1 == 1);
                arcs.iter()
                    .filter(|&&(a, b, _)| side(a) && !side(b))
                    .map(|&(_, _, c)| c)
                    .sum::<i64>()
            })
            .min()
            .unwrap()
    }

    proptest! {
        #[test]
        fn matches_exhaustive_cut_enumeration(
            n in 2usize..=8,
            raw in prop::collection::vec((0usize..8, 0usize..8, 0i64..6), 0..20),
        ) {
            let arcs: Vec<_> = raw
                .into_iter()
                .map(|(a, b, c)| (a % n, b % n, c))
                .filter(|&(a, b, _)| a != b && b != 0 && a != n - 1)
                .collect();
            let mut net = FlowNetwork::new(n, 0, n - 1).unwrap();
            for &(a, b, c) in &arcs {
                net.add_arc(a, b, c).unwrap();
            }
            let f = max_flow(&net);
            prop_assert_eq!(f.value, cut_oracle(n, &arcs));
            // Both cut sides really are minimum cuts.
            for side in [f.min_cut_source_side(), f.max_cut_source_side()] {
                let inside = |v: usize| side.contains(&v);
                let cut: i64 = arcs.iter().filter(|&&(a, b, _)| inside(a) && !inside(b)).map(|a| a.2).sum();
                prop_assert_eq!(cut, f.value);
            }
        }
    }
}
