//! Capacitated assignment, exact min-max load and approximate semi-matching.

use std::ops::Range;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::flow::{balanced_flow, max_flow, FlowNetwork, Rational};
use crate::graph::{ArrivalInstance, BipartiteGraph};
use crate::matching::{run_sap, MatchState};
use crate::runlog::RunLog;

/// Server copies laid out contiguously in server order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyMap {
    ranges: Vec<Range<usize>>,
    original: Vec<usize>,
}

impl CopyMap {
    pub fn new(capacities: &[usize]) -> Result<Self> {
        let mut ranges = Vec::with_capacity(capacities.len());
        let mut original = Vec::new();
        for (s, &cap) in capacities.iter().enumerate() {
            if cap == 0 {
                return Err(Error::param(format!("server {s} has capacity 0")));
            }
            ranges.push(original.len()..original.len() + cap);
            original.extend(std::iter::repeat_n(s, cap));
        }
        Ok(Self { ranges, original })
    }

    pub fn copy_count(&self) -> usize {
        self.original.len()
    }

    pub fn copies(&self, server: usize) -> Range<usize> {
        self.ranges[server].clone()
    }

    pub fn original(&self, copy: usize) -> usize {
        self.original[copy]
    }

    /// Neighbor list of a client in the copy graph: every copy of every
    /// neighbor, in server order and then copy order.
    pub fn expand_neighbors(&self, neighbors: &[usize]) -> Vec<usize> {
        neighbors.iter().flat_map(|&s| self.copies(s)).collect()
    }

    pub fn expand_instance(&self, instance: &ArrivalInstance) -> Result<ArrivalInstance> {
        let arrivals = instance
            .arrivals()
            .iter()
            .map(|nbrs| self.expand_neighbors(nbrs))
            .collect();
        ArrivalInstance::new(self.copy_count(), arrivals)
    }

    pub fn expand_graph(&self, graph: &BipartiteGraph) -> BipartiteGraph {
        BipartiteGraph {
            server_count: self.copy_count(),
            adjacency: graph.adjacency.iter().map(|n| self.expand_neighbors(n)).collect(),
        }
    }
}

/// Loads of a run against the best achievable maximum load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadProfile {
    pub load: Vec<usize>,
    pub max_load: usize,
    pub opt: usize,
}

impl LoadProfile {
    pub fn of(state: &MatchState, opt: usize) -> Self {
        Self {
            load: state.loads(),
            max_load: state.max_load(),
            opt,
        }
    }
}

/// Whether every client with a neighbor can be assigned with per-server
/// load at most `b`.
fn all_fit(graph: &BipartiteGraph, b: usize) -> bool {
    let nc = graph.client_count();
    let ns = graph.server_count;
    let (source, sink) = (nc + ns, nc + ns + 1);
    let mut net = FlowNetwork::new(nc + ns + 2, source, sink).expect("valid terminals");
    let mut servable = 0;
    for c in 0..nc {
        if graph.neighbors(c).is_empty() {
            continue;
        }
        servable += 1;
        net.add_arc(source, c, 1).expect("valid arc");
        for &s in graph.neighbors(c) {
            net.add_arc(c, nc + s, 1).expect("valid arc");
        }
    }
    for s in 0..ns {
        net.add_arc(nc + s, sink, b as i64).expect("valid arc");
    }
    max_flow(&net).value == servable
}

/// Smallest maximum load over all assignments of the clients that have a
/// neighbor. Zero when there are none.
pub fn opt_load(graph: &BipartiteGraph) -> usize {
    let servable = graph.adjacency.iter().filter(|n| !n.is_empty()).count();
    if servable == 0 {
        return 0;
    }
    // all_fit(servable) always holds; all_fit(0) never does.
    let (mut lo, mut hi) = (0, servable);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if all_fit(graph, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// [`opt_load`] when the answer is expected to be `guess` or `guess + 1`,
/// falling back to a full search otherwise.
pub fn opt_load_near(graph: &BipartiteGraph, guess: usize) -> usize {
    if graph.adjacency.iter().all(Vec::is_empty) {
        return 0;
    }
    for b in [guess, guess + 1] {
        if b >= 1 && all_fit(graph, b) && !all_fit(graph, b - 1) {
            return b;
        }
    }
    opt_load(graph)
}

/// SAP on the copy graph, reported on the original servers. Missing
/// capacities count as 1.
pub fn run_capacitated(instance: &ArrivalInstance) -> Result<(MatchState, RunLog)> {
    let capacities: Vec<usize> = (0..instance.server_count()).map(|s| instance.capacity(s)).collect();
    let map = CopyMap::new(&capacities)?;
    let expanded = map.expand_instance(instance)?;
    let (copy_state, log) = run_sap(&expanded)?;
    let assignment: Vec<Option<usize>> = copy_state
        .assignment()
        .iter()
        .map(|copy| copy.map(|k| map.original(k)))
        .collect();
    let state = MatchState::from_assignment(instance, capacities, &assignment)?;
    Ok((state, log))
}

/// A stretch of arrivals during which the optimum stayed fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epoch {
    pub opt: usize,
    pub arrivals: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinMaxRun {
    pub state: MatchState,
    pub log: RunLog,
    pub epochs: Vec<Epoch>,
    /// Optimum after each arrival.
    pub opt_history: Vec<usize>,
    /// Clients without neighbors; they stay unmatched and do not count.
    pub unservable: Vec<usize>,
}

impl MinMaxRun {
    pub fn profile(&self) -> LoadProfile {
        LoadProfile::of(&self.state, self.opt_history.last().copied().unwrap_or(0))
    }
}

/// Keeps an assignment of minimum maximum load. Every server gets one more
/// copy whenever the optimum grows, and the arriving client then takes its
/// smallest-index neighbor; otherwise it augments along a shortest path to a
/// server below the optimum.
pub fn run_minmax(instance: &ArrivalInstance) -> Result<MinMaxRun> {
    if !instance.has_unit_capacities() {
        return Err(Error::param("min-max runs ignore capacities; strip them first"));
    }
    let ns = instance.server_count();
    let mut state = MatchState::new(vec![0; ns]);
    let mut log = RunLog::new();
    let mut epochs: Vec<Epoch> = Vec::new();
    let mut opt_history = Vec::with_capacity(instance.client_count());
    let mut unservable = Vec::new();
    let mut opt = 0;

    for c in 0..instance.client_count() {
        state.arrive(instance, c)?;
        let nbrs = instance.neighbors(c);
        if nbrs.is_empty() {
            unservable.push(c);
            log.push_unmatched(c);
            opt_history.push(opt);
            continue;
        }
        let new_opt = opt_load_near(&instance.prefix(c + 1), opt);
        if new_opt < opt {
            return Err(Error::invariant(format!("optimum dropped from {opt} to {new_opt}")));
        }
        if new_opt > opt {
            opt = new_opt;
            for s in 0..ns {
                state.set_capacity(s, opt)?;
            }
            if let Some(last) = epochs.last_mut() {
                last.arrivals.end = c;
            }
            epochs.push(Epoch { opt, arrivals: c..c });
            let path = crate::matching::AugPath { clients: vec![c], servers: vec![nbrs[0]] };
            state.augment(instance, &path)?;
            log.push_matched(c, 1);
        } else {
            let path = state.shortest_aug_path(instance, c)?.ok_or_else(|| {
                Error::invariant(format!("client {c} found no server below the optimum {opt}"))
            })?;
            state.augment(instance, &path)?;
            log.push_matched(c, path.edge_count());
        }
        if state.max_load() != opt {
            return Err(Error::invariant(format!(
                "max load {} differs from optimum {opt} after arrival {c}",
                state.max_load()
            )));
        }
        opt_history.push(opt);
    }
    if let Some(last) = epochs.last_mut() {
        last.arrivals.end = instance.client_count();
    }
    state.check_consistency()?;
    Ok(MinMaxRun { state, log, epochs, opt_history, unservable })
}

/// Allowances and loads right after one arrival of a semi-matching run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiStep {
    pub alpha: Vec<Rational>,
    pub allowance: Vec<usize>,
    pub load: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiRun {
    pub state: MatchState,
    pub log: RunLog,
    pub steps: Vec<SemiStep>,
}

/// `⌈(1 + ε) α⌉` for a nonnegative `α`.
pub fn allowance(epsilon: Rational, alpha: Rational) -> usize {
    let v = (Rational::from_integer(1) + epsilon) * alpha;
    v.ceil().to_integer() as usize
}

/// Approximate semi-matching: server `s` may hold up to `⌈(1+ε) α(s)⌉`
/// clients, where `α` is the balanced flow of the current graph, and each
/// arrival augments along a shortest path under those allowances.
pub fn run_semi_matching(instance: &ArrivalInstance, epsilon: Rational) -> Result<SemiRun> {
    if !epsilon.is_positive() {
        return Err(Error::param(format!("epsilon must be positive, got {epsilon}")));
    }
    if let Some(c) = (0..instance.client_count()).find(|&c| instance.neighbors(c).is_empty()) {
        return Err(Error::InvalidInstance(format!("client {c} has no neighbors")));
    }
    let ns = instance.server_count();
    let mut state = MatchState::new(vec![0; ns]);
    let mut log = RunLog::new();
    let mut steps: Vec<SemiStep> = Vec::with_capacity(instance.client_count());

    for c in 0..instance.client_count() {
        state.arrive(instance, c)?;
        let alpha = balanced_flow(&instance.prefix(c + 1))?.alpha;
        let caps: Vec<usize> = alpha.iter().map(|&a| allowance(epsilon, a)).collect();
        for (s, &cap) in caps.iter().enumerate() {
            if cap < state.capacity(s) {
                return Err(Error::invariant(format!(
                    "allowance of server {s} fell from {} to {cap}",
                    state.capacity(s)
                )));
            }
            state.set_capacity(s, cap)?;
        }
        let path = state
            .shortest_aug_path(instance, c)?
            .ok_or_else(|| Error::invariant(format!("client {c} found no server within allowance")))?;
        state.augment(instance, &path)?;
        log.push_matched(c, path.edge_count());
        state.check_consistency()?;
        steps.push(SemiStep { alpha, allowance: caps, load: state.loads() });
    }
    Ok(SemiRun { state, log, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::rat;
    use crate::generators::{gen_complete, gen_minmax_adversary};

    fn star(n: usize) -> ArrivalInstance {
        ArrivalInstance::new(1, vec![vec![0]; n]).unwrap()
    }

    #[test]
    fn copy_map_layout() {
        let m = CopyMap::new(&[2, 1, 3]).unwrap();
        assert_eq!(m.copy_count(), 6);
        assert_eq!(m.copies(2), 3..6);
        assert_eq!(m.original(4), 2);
        assert_eq!(m.expand_neighbors(&[0, 2]), vec![0, 1, 3, 4, 5]);
        assert!(CopyMap::new(&[1, 0]).is_err());
    }

    #[test]
    fn opt_examples() {
        assert_eq!(opt_load(&star(3).graph()), 3);
        assert_eq!(opt_load(&gen_complete(10, 20).unwrap().graph()), 1);
        assert_eq!(opt_load(&gen_minmax_adversary(4).unwrap().graph()), 4);
        assert_eq!(opt_load_near(&star(3).graph(), 7), 3);
        let empty = BipartiteGraph::new(2, vec![vec![]]).unwrap();
        assert_eq!(opt_load(&empty), 0);
    }

    #[test]
    fn capacitated_single_server() {
        let inst = star(3).with_capacities(vec![3]).unwrap();
        let (state, log) = run_capacitated(&inst).unwrap();
        assert_eq!(state.matched_count(), 3);
        assert_eq!(log.cum_replacements(), 0);
        assert_eq!(state.load(0), 3);
    }

    #[test]
    fn minmax_star() {
        let run = run_minmax(&star(3)).unwrap();
        assert_eq!(run.opt_history, vec![1, 2, 3]);
        assert_eq!(run.log.cum_replacements(), 0);
        assert_eq!(run.epochs.len(), 3);
        assert_eq!(run.profile().max_load, 3);
    }

    #[test]
    fn minmax_skips_unservable() {
        let inst = ArrivalInstance::new(1, vec![vec![0], vec![], vec![0]]).unwrap();
        let run = run_minmax(&inst).unwrap();
        assert_eq!(run.unservable, vec![1]);
        assert_eq!(run.opt_history, vec![1, 1, 2]);
    }

    #[test]
    fn semi_star_allowances() {
        let run = run_semi_matching(&star(3), rat(1, 2)).unwrap();
        let caps: Vec<usize> = run.steps.iter().map(|s| s.allowance[0]).collect();
        assert_eq!(caps, vec![2, 3, 5]);
        assert!(run_semi_matching(&star(3), rat(0, 1)).is_err());
    }

    #[test]
    fn semi_complete_direct_matches() {
        let run = run_semi_matching(&gen_complete(10, 20).unwrap(), rat(1, 1)).unwrap();
        assert!(run.steps.last().unwrap().allowance.iter().all(|&l| l == 1));
        assert!(run.log.path_lengths().all(|l| l == 1));
    }
}
