use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::ArrivalInstance;
use crate::matching::MatchState;

/// Simple digraph with a designated sink and ordered adjacency in both
/// directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualDigraph {
    out: Vec<BTreeSet<usize>>,
    inn: Vec<BTreeSet<usize>>,
    sink: usize,
}

impl ResidualDigraph {
    pub fn new(node_count: usize, sink: usize) -> Result<Self> {
        if sink >= node_count {
            return Err(Error::param(format!("sink {sink} out of range for {node_count} nodes")));
        }
        Ok(Self {
            out: vec![BTreeSet::new(); node_count],
            inn: vec![BTreeSet::new(); node_count],
            sink,
        })
    }

    /// The initial digraph of an arrival run: clients `0..n`, servers
    /// `n..n+S`, sink `n+S`, and an arc to the sink from every vertex.
    pub fn for_instance(instance: &ArrivalInstance) -> Self {
        let nodes = instance.client_count() + instance.server_count() + 1;
        let mut g = Self::new(nodes, nodes - 1).expect("sink is the last node");
        for v in 0..nodes - 1 {
            g.add(v, nodes - 1);
        }
        g
    }

    /// Digraph a run would hold for `state`: unmatched edges client -> server,
    /// matched edges server -> client, free servers and not-yet-arrived
    /// clients -> sink.
    pub fn from_state(instance: &ArrivalInstance, state: &MatchState) -> Self {
        let n = instance.client_count();
        let mut g = Self::for_instance(instance);
        for c in 0..state.arrived_count() {
            g.remove(c, g.sink);
            for &s in instance.neighbors(c) {
                if state.server_of(c) == Some(s) {
                    g.add(n + s, c);
                } else {
                    g.add(c, n + s);
                }
            }
        }
        for s in 0..instance.server_count() {
            if !state.has_room(s) {
                g.remove(n + s, g.sink);
            }
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out[from].contains(&to)
    }

    pub fn out_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.inn[v]
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    /// Adds an arc; returns false if it was already present.
    pub(crate) fn add(&mut self, from: usize, to: usize) -> bool {
        let fresh = self.out[from].insert(to);
        self.inn[to].insert(from);
        fresh
    }

    /// Removes an arc; returns false if it was absent.
    pub(crate) fn remove(&mut self, from: usize, to: usize) -> bool {
        let had = self.out[from].remove(&to);
        self.inn[to].remove(&from);
        had
    }

    /// Drops every arc touching `v`.
    pub(crate) fn isolate(&mut self, v: usize) {
        for w in std::mem::take(&mut self.out[v]) {
            self.inn[w].remove(&v);
        }
        for w in std::mem::take(&mut self.inn[v]) {
            self.out[w].remove(&v);
        }
    }
}
