use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::digraph::ResidualDigraph;
use crate::error::{Error, Result};

/// How often the tree is checked against a fresh BFS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    Off,
    /// After every structural update.
    Every,
    /// After one in every `k` updates.
    Sampled(u32),
}

impl Default for ValidationMode {
    fn default() -> Self {
        if cfg!(debug_assertions) {
            ValidationMode::Every
        } else {
            ValidationMode::Sampled(64)
        }
    }
}

/// Shortest-path tree towards the sink, exact up to depth `h`.
///
/// Arcs may only be inserted when they shorten no distance; deletions raise
/// levels with a scan-and-raise repair. Nodes farther than `h` from the sink,
/// or cut off from it, sit at level [`EsTree::high`].
#[derive(Debug, Clone)]
pub struct EsTree {
    graph: ResidualDigraph,
    h: usize,
    level: Vec<usize>,
    parent: Vec<Option<usize>>,
    deleted: Vec<bool>,
    mode: ValidationMode,
    updates: u64,
    insertions: u64,
    deletions: u64,
}

impl EsTree {
    pub fn new(graph: ResidualDigraph, h: usize, mode: ValidationMode) -> Result<Self> {
        if h == 0 {
            return Err(Error::param("depth limit must be at least 1"));
        }
        let n = graph.node_count();
        let mut tree = Self {
            graph,
            h,
            level: vec![0; n],
            parent: vec![None; n],
            deleted: vec![false; n],
            mode,
            updates: 0,
            insertions: 0,
            deletions: 0,
        };
        tree.level = tree.bfs_levels();
        for v in 0..n {
            tree.parent[v] = tree.best_parent(v).map(|(_, w)| w);
        }
        Ok(tree)
    }

    pub fn depth_limit(&self) -> usize {
        self.h
    }

    /// Level assigned to nodes beyond the depth limit.
    pub fn high(&self) -> usize {
        self.h + 1
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn is_deleted(&self, v: usize) -> bool {
        self.deleted[v]
    }

    pub fn graph(&self) -> &ResidualDigraph {
        &self.graph
    }

    pub fn insertions(&self) -> u64 {
        self.insertions
    }

    pub fn deletions(&self) -> u64 {
        self.deletions
    }

    /// Inserts `from -> to`. Fails if the arc would shorten the distance of
    /// `from`, which the structure cannot absorb.
    pub fn insert_arc(&mut self, from: usize, to: usize) -> Result<()> {
        self.require_live(from)?;
        self.require_live(to)?;
        let via = (self.level[to] + 1).min(self.high());
        if self.level[from] > via {
            return Err(Error::invariant(format!(
                "inserting {from}->{to} would lower level {} to {via}",
                self.level[from]
            )));
        }
        if !self.graph.add(from, to) {
            return Err(Error::param(format!("arc {from}->{to} already present")));
        }
        self.insertions += 1;
        self.after_update()
    }

    pub fn delete_arc(&mut self, from: usize, to: usize) -> Result<()> {
        if !self.graph.remove(from, to) {
            return Err(Error::param(format!("arc {from}->{to} is not present")));
        }
        self.deletions += 1;
        if self.parent[from] == Some(to) {
            self.repair(from);
        }
        self.after_update()
    }

    /// Removes nodes that can no longer reach the sink, together with all
    /// their arcs.
    pub fn delete_nodes(&mut self, nodes: &[usize]) -> Result<()> {
        for &v in nodes {
            if self.level[v] != self.high() || v == self.graph.sink() {
                return Err(Error::invariant(format!("pruning node {v} at level {}", self.level[v])));
            }
        }
        for &v in nodes {
            self.deleted[v] = true;
            self.parent[v] = None;
            self.graph.isolate(v);
        }
        self.after_update()
    }

    fn require_live(&self, v: usize) -> Result<()> {
        if v >= self.deleted.len() || self.deleted[v] {
            return Err(Error::param(format!("node {v} is deleted or out of range")));
        }
        Ok(())
    }

    /// Lowest-level live out-neighbor, smallest index among ties.
    fn best_parent(&self, v: usize) -> Option<(usize, usize)> {
        if v == self.graph.sink() {
            return None;
        }
        let mut best: Option<(usize, usize)> = None;
        for &w in self.graph.out_neighbors(v) {
            if self.deleted[w] {
                continue;
            }
            if best.is_none_or(|(l, _)| self.level[w] < l) {
                best = Some((self.level[w], w));
            }
        }
        best.filter(|&(l, _)| l < self.h)
    }

    fn repair(&mut self, start: usize) {
        let mut heap = BinaryHeap::from([Reverse((self.level[start], start))]);
        while let Some(Reverse((lvl, u))) = heap.pop() {
            if lvl != self.level[u] || self.deleted[u] {
                continue;
            }
            if let Some(p) = self.parent[u] {
                if self.graph.has_arc(u, p) && self.level[p] + 1 == self.level[u] {
                    continue;
                }
            }
            let (new_level, new_parent) = match self.best_parent(u) {
                Some((l, w)) => (l + 1, Some(w)),
                None => (self.high(), None),
            };
            self.parent[u] = new_parent;
            if new_level > self.level[u] {
                self.level[u] = new_level;
                for &x in self.graph.in_neighbors(u) {
                    if self.parent[x] == Some(u) {
                        heap.push(Reverse((self.level[x], x)));
                    }
                }
            }
        }
    }

    fn after_update(&mut self) -> Result<()> {
        self.updates += 1;
        let check = match self.mode {
            ValidationMode::Off => false,
            ValidationMode::Every => true,
            ValidationMode::Sampled(k) => self.updates.is_multiple_of(u64::from(k.max(1))),
        };
        if check {
            self.validate()?;
        }
        Ok(())
    }

    /// Distances to the sink over live nodes, truncated to `high()`.
    pub fn bfs_levels(&self) -> Vec<usize> {
        let n = self.graph.node_count();
        let mut dist = vec![self.high(); n];
        let t = self.graph.sink();
        dist[t] = 0;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            if dist[v] >= self.h {
                continue;
            }
            for &u in self.graph.in_neighbors(v) {
                if !self.deleted[u] && dist[u] == self.high() && u != t {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for (d, &gone) in dist.iter_mut().zip(&self.deleted) {
            if gone {
                *d = self.high();
            }
        }
        dist
    }

    /// Compares every level with a fresh BFS and checks the parent pointers.
    pub fn validate(&self) -> Result<()> {
        let truth = self.bfs_levels();
        for (v, &dist) in truth.iter().enumerate() {
            if dist != self.level[v] {
                return Err(Error::invariant(format!(
                    "node {v} at level {} but its distance is {dist}",
                    self.level[v]
                )));
            }
            if v == self.graph.sink() || self.deleted[v] {
                continue;
            }
            match self.parent[v] {
                Some(p) if self.level[v] <= self.h => {
                    if !self.graph.has_arc(v, p) || self.level[p] + 1 != self.level[v] {
                        return Err(Error::invariant(format!("node {v} has a stale parent {p}")));
                    }
                }
                None if self.level[v] == self.high() => {}
                _ => return Err(Error::invariant(format!("node {v} has an inconsistent parent"))),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chain(len: usize, h: usize) -> EsTree {
        // 0 -> 1 -> ... -> len (sink)
        let mut g = ResidualDigraph::new(len + 1, len).unwrap();
        for v in 0..len {
            g.add(v, v + 1);
        }
        EsTree::new(g, h, ValidationMode::Every).unwrap()
    }

    #[test]
    fn init_matches_bfs() {
        let tree = chain(5, 3);
        assert_eq!(tree.levels(), &[4, 4, 3, 2, 1, 0]);
        tree.validate().unwrap();
        let g = ResidualDigraph::new(1, 0).unwrap();
        assert!(EsTree::new(g, 0, ValidationMode::Off).is_err());
    }

    #[test]
    fn deleting_the_only_route_goes_high() {
        let mut tree = chain(3, 5);
        tree.delete_arc(1, 2).unwrap();
        assert_eq!(tree.levels(), &[6, 6, 1, 0]);
        assert!(tree.delete_arc(1, 2).is_err());
    }

    #[test]
    fn parallel_route_keeps_level() {
        // 0 -> 1 -> 3, 0 -> 2 -> 3
        let mut g = ResidualDigraph::new(4, 3).unwrap();
        for (a, b) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            g.add(a, b);
        }
        let mut tree = EsTree::new(g, 4, ValidationMode::Every).unwrap();
        assert_eq!(tree.parent(0), Some(1));
        tree.delete_arc(0, 1).unwrap();
        assert_eq!(tree.level(0), 2);
        assert_eq!(tree.parent(0), Some(2));
    }

    #[test]
    fn shortening_insert_is_rejected() {
        let mut tree = chain(4, 5);
        assert!(tree.insert_arc(0, 4).is_err());
        tree.insert_arc(3, 0).unwrap();
        tree.validate().unwrap();
    }

    proptest! {
        #[test]
        fn random_updates_track_bfs(
            n in 3usize..10,
            h in 1usize..6,
            seed_arcs in prop::collection::vec((0usize..10, 0usize..10), 0..40),
            ops in prop::collection::vec((any::<bool>(), 0usize..10, 0usize..10), 0..60),
        ) {
            let sink = n - 1;
            let mut g = ResidualDigraph::new(n, sink).unwrap();
            for (a, b) in seed_arcs {
                let (a, b) = (a % n, b % n);
                if a != b && a != sink {
                    g.add(a, b);
                }
            }
            let mut tree = EsTree::new(g, h, ValidationMode::Every).unwrap();
            for (insert, a, b) in ops {
                let (a, b) = (a % n, b % n);
                if a == b || a == sink {
                    continue;
                }
                if insert {
                    if tree.graph().has_arc(a, b) {
                        continue;
                    }
                    let ok = tree.level(a) <= (tree.level(b) + 1).min(tree.high());
                    prop_assert_eq!(tree.insert_arc(a, b).is_ok(), ok);
                } else if tree.graph().has_arc(a, b) {
                    tree.delete_arc(a, b).unwrap();
                }
                prop_assert_eq!(tree.levels().to_vec(), tree.bfs_levels());
            }
        }
    }
}
