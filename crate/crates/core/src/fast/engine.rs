use std::collections::VecDeque;

use super::digraph::ResidualDigraph;
use super::estree::{EsTree, ValidationMode};
use crate::error::{Error, Result};
use crate::graph::ArrivalInstance;
use crate::matching::{AugPath, MatchState};
use crate::runlog::{FastStats, PruneEvent, RunLog};

/// `⌈√(n ln n)⌉`, at least 1.
pub fn default_depth_limit(n: usize) -> usize {
    let n = n as f64;
    let h = (n * n.max(1.0).ln()).sqrt().ceil();
    (h as usize).max(1)
}

/// SAP engine over the residual digraph.
///
/// Clients are nodes `0..n`, servers `n..n+S` and the sink is `n+S`. Every
/// unmatched vertex has an arc to the sink, so the distance of a client to the
/// sink is one more than the edge count of its shortest augmenting path. The
/// tree answers paths of up to `h` edges; longer ones come from a plain BFS,
/// and a BFS that finds nothing removes everything it touched for good.
#[derive(Debug, Clone)]
pub struct FastSap<'a> {
    instance: &'a ArrivalInstance,
    state: MatchState,
    tree: EsTree,
    log: RunLog,
    h: usize,
    mode: ValidationMode,
}

impl<'a> FastSap<'a> {
    pub fn new(instance: &'a ArrivalInstance, h: Option<usize>, mode: ValidationMode) -> Result<Self> {
        if !instance.has_unit_capacities() {
            return Err(Error::param("the fast engine needs unit capacities"));
        }
        let h = h.unwrap_or_else(|| default_depth_limit(instance.client_count()));
        if h == 0 {
            return Err(Error::param("depth limit must be at least 1"));
        }
        let tree = EsTree::new(ResidualDigraph::for_instance(instance), h + 1, mode)?;
        let mut log = RunLog::new();
        log.fast = Some(FastStats { depth_limit: h, ..FastStats::default() });
        Ok(Self {
            instance,
            state: MatchState::for_instance(instance),
            tree,
            log,
            h,
            mode,
        })
    }

    pub fn depth_limit(&self) -> usize {
        self.h
    }

    pub fn state(&self) -> &MatchState {
        &self.state
    }

    pub fn tree(&self) -> &EsTree {
        &self.tree
    }

    pub fn log(&self) -> &RunLog {
        &self.log
    }

    pub fn is_done(&self) -> bool {
        self.state.arrived_count() == self.instance.client_count()
    }

    fn sink(&self) -> usize {
        self.instance.client_count() + self.instance.server_count()
    }

    fn server_node(&self, s: usize) -> usize {
        self.instance.client_count() + s
    }

    fn stats(&mut self) -> &mut FastStats {
        self.log.fast.as_mut().expect("fast stats present")
    }

    /// Registers the next client and finds its shortest augmenting path, if
    /// any. Does not augment; pass the path to [`FastSap::apply_augment`].
    pub fn arrival_step(&mut self) -> Result<Option<AugPath>> {
        let c = self.state.arrived_count();
        self.state.arrive(self.instance, c)?;
        for &s in self.instance.neighbors(c) {
            let v = self.server_node(s);
            if !self.tree.is_deleted(v) {
                self.tree.insert_arc(c, v)?;
            }
        }
        self.tree.delete_arc(c, self.sink())?;

        if self.tree.level(c) <= self.h + 1 {
            let path = self.tree_path(c)?;
            self.stats().tree_paths += 1;
            return Ok(Some(path));
        }
        match self.brute_force(c) {
            Ok(path) => {
                self.stats().brute_force_paths += 1;
                Ok(Some(path))
            }
            Err(touched) => {
                self.prune(c, touched)?;
                Ok(None)
            }
        }
    }

    fn tree_path(&self, c: usize) -> Result<AugPath> {
        let n = self.instance.client_count();
        let t = self.sink();
        let broken = || Error::invariant(format!("tree path from client {c} is malformed"));
        let mut clients = vec![c];
        let mut servers = Vec::new();
        let mut u = c;
        loop {
            let s = self.tree.parent(u).ok_or_else(broken)?;
            if s < n || s >= t {
                return Err(broken());
            }
            servers.push(s - n);
            match self.tree.parent(s).ok_or_else(broken)? {
                next if next == t => break,
                next if next < n => {
                    clients.push(next);
                    u = next;
                }
                _ => return Err(broken()),
            }
        }
        Ok(AugPath { clients, servers })
    }

    /// BFS over live nodes from `c`. On failure returns every node touched.
    fn brute_force(&self, c: usize) -> std::result::Result<AugPath, Vec<usize>> {
        let g = self.tree.graph();
        let t = self.sink();
        let n = self.instance.client_count();
        let mut from = vec![usize::MAX; g.node_count()];
        from[c] = c;
        let mut touched = vec![c];
        let mut queue = VecDeque::from([c]);
        while let Some(u) = queue.pop_front() {
            for &w in g.out_neighbors(u) {
                if self.tree.is_deleted(w) || from[w] != usize::MAX {
                    continue;
                }
                from[w] = u;
                if w == t {
                    let mut nodes = vec![u];
                    while *nodes.last().expect("nonempty") != c {
                        let prev = from[*nodes.last().expect("nonempty")];
                        nodes.push(prev);
                    }
                    nodes.reverse();
                    let clients = nodes.iter().step_by(2).copied().collect();
                    let servers = nodes.iter().skip(1).step_by(2).map(|&s| s - n).collect();
                    return Ok(AugPath { clients, servers });
                }
                touched.push(w);
                queue.push_back(w);
            }
        }
        Err(touched)
    }

    fn prune(&mut self, c: usize, mut touched: Vec<usize>) -> Result<()> {
        touched.sort_unstable();
        self.tree.delete_nodes(&touched)?;
        let n = self.instance.client_count();
        let split = touched.partition_point(|&v| v < n);
        let event = PruneEvent {
            arrival: c,
            clients: touched[..split].to_vec(),
            servers: touched[split..].iter().map(|&v| v - n).collect(),
        };
        let stats = self.stats();
        stats.brute_force_failures += 1;
        stats.pruned_clients += event.clients.len();
        stats.pruned_servers += event.servers.len();
        stats.prune_events.push(event);
        Ok(())
    }

    /// Flips `path` in the digraph, arc by arc from the client end, then in
    /// the matching.
    pub fn apply_augment(&mut self, path: &AugPath) -> Result<usize> {
        self.state.validate_path(self.instance, path)?;
        let mut nodes = Vec::with_capacity(2 * path.clients.len() + 1);
        for (&c, &s) in path.clients.iter().zip(&path.servers) {
            nodes.push(c);
            nodes.push(self.server_node(s));
        }
        for w in nodes.windows(2) {
            self.tree.insert_arc(w[1], w[0])?;
            self.tree.delete_arc(w[0], w[1])?;
        }
        let last = *nodes.last().expect("nonempty path");
        self.tree.delete_arc(last, self.sink())?;
        self.state.augment(self.instance, path)
    }

    /// One full arrival: search, augment, record.
    pub fn step(&mut self) -> Result<Option<AugPath>> {
        let c = self.state.arrived_count();
        let path = self.arrival_step()?;
        match &path {
            Some(p) => {
                self.apply_augment(p)?;
                self.log.push_matched(c, p.edge_count());
            }
            None => self.log.push_unmatched(c),
        }
        if self.mode == ValidationMode::Every {
            self.validate()?;
        }
        Ok(path)
    }

    /// Checks levels against BFS and the arc orientation against a digraph
    /// rebuilt from the matching.
    pub fn validate(&self) -> Result<()> {
        self.tree.validate()?;
        let mut expected = ResidualDigraph::from_state(self.instance, &self.state);
        for v in 0..expected.node_count() {
            if self.tree.is_deleted(v) {
                expected.isolate(v);
            }
        }
        if &expected != self.tree.graph() {
            return Err(Error::invariant("residual digraph disagrees with the matching"));
        }
        self.state.check_consistency()
    }

    pub fn finish(mut self) -> (MatchState, RunLog) {
        let (ins, del) = (self.tree.insertions(), self.tree.deletions());
        let stats = self.stats();
        stats.arc_insertions = ins;
        stats.arc_deletions = del;
        (self.state, self.log)
    }
}

/// Runs the fast engine over all arrivals with the default validation mode.
pub fn run_fast_sap(instance: &ArrivalInstance, h: Option<usize>) -> Result<(MatchState, RunLog)> {
    run_fast_sap_with(instance, h, ValidationMode::default())
}

pub fn run_fast_sap_with(
    instance: &ArrivalInstance,
    h: Option<usize>,
    mode: ValidationMode,
) -> Result<(MatchState, RunLog)> {
    let mut engine = FastSap::new(instance, h, mode)?;
    while !engine.is_done() {
        engine.step()?;
    }
    engine.validate()?;
    Ok(engine.finish())
}
