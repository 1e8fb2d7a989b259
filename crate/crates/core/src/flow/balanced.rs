use std::collections::BTreeMap;

use num_traits::Zero;

use super::maxflow::max_flow;
use super::ratio::{feasibility_network, max_ratio};
use super::{rat, Rational};
use crate::error::{Error, Result};
use crate::graph::{ArrivalInstance, BipartiteGraph};
use crate::matching::MatchState;

/// One step of the peeling decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelLevel {
    pub lambda: Rational,
    pub clients: Vec<usize>,
    pub servers: Vec<usize>,
}

/// The unique balanced server flow of a graph, with one realizing set of edge
/// flows and the peel trace that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedFlow {
    /// Load of each server. Servers without clients get 0.
    pub alpha: Vec<Rational>,
    /// Flow on edge `(client, server)`; edges carrying nothing are omitted.
    pub x: BTreeMap<(usize, usize), Rational>,
    pub peel_trace: Vec<PeelLevel>,
}

impl BalancedFlow {
    pub fn max_alpha(&self) -> Rational {
        self.alpha.iter().copied().max().unwrap_or_else(Rational::zero)
    }

    /// Active neighbors of `client`: its neighbors of minimum load.
    pub fn active_neighbors(&self, graph: &BipartiteGraph, client: usize) -> Vec<usize> {
        let nbrs = graph.neighbors(client);
        let Some(min) = nbrs.iter().map(|&s| self.alpha[s]).min() else {
            return Vec::new();
        };
        nbrs.iter().copied().filter(|&s| self.alpha[s] == min).collect()
    }

    /// Checks realizability, balance and the shape of the peel trace.
    pub fn check_invariants(&self, graph: &BipartiteGraph) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let mut client_out = vec![Rational::zero(); graph.client_count()];
        let mut server_in = vec![Rational::zero(); graph.server_count];
        for (&(c, s), &v) in &self.x {
            if !graph.neighbors(c).contains(&s) || v <= Rational::zero() {
                return fail(format!("bad flow {v} on ({c},{s})"));
            }
            client_out[c] += v;
            server_in[s] += v;
        }
        for (c, out) in client_out.iter().enumerate() {
            if !graph.neighbors(c).is_empty() && *out != rat(1, 1) {
                return fail(format!("client {c} emits {out}"));
            }
        }
        if server_in != self.alpha {
            return fail("server inflow differs from alpha".into());
        }
        for &(c, s) in self.x.keys() {
            let min = graph.neighbors(c).iter().map(|&v| self.alpha[v]).min().expect("edge");
            if self.alpha[s] != min {
                return fail(format!("client {c} sends to non-minimal server {s}"));
            }
        }
        let mut removed_c = vec![false; graph.client_count()];
        let mut removed_s = vec![false; graph.server_count];
        for (i, level) in self.peel_trace.iter().enumerate() {
            if i > 0 && level.lambda >= self.peel_trace[i - 1].lambda {
                return fail("peel levels are not strictly decreasing".into());
            }
            let mut nbhd: Vec<usize> = level
                .clients
                .iter()
                .flat_map(|&c| graph.neighbors(c).iter().copied())
                .filter(|&s| !removed_s[s])
                .collect();
            nbhd.sort_unstable();
            nbhd.dedup();
            if nbhd != level.servers {
                return fail(format!("level {i} servers are not the residual neighborhood"));
            }
            if level.servers.iter().any(|&s| self.alpha[s] != level.lambda) {
                return fail(format!("level {i} servers do not carry {}", level.lambda));
            }
            for &c in &level.clients {
                removed_c[c] = true;
            }
            for &s in &level.servers {
                removed_s[s] = true;
            }
        }
        let total: Rational = self.alpha.iter().sum();
        let servable = graph.adjacency.iter().filter(|n| !n.is_empty()).count();
        if total != rat(servable as i64, 1) {
            return fail(format!("loads sum to {total}, expected {servable}"));
        }
        Ok(())
    }
}

/// Peeling decomposition: repeatedly take the maximal client set with the
/// largest `|K| / |N(K)|` in the remaining graph, give that ratio to its
/// neighborhood and remove both.
pub fn balanced_flow(graph: &BipartiteGraph) -> Result<BalancedFlow> {
    if let Some(c) = graph.first_isolated_client() {
        return Err(Error::param(format!(
            "client {c} has no neighbors; drop isolated clients first"
        )));
    }
    let mut alpha = vec![Rational::zero(); graph.server_count];
    let mut x = BTreeMap::new();
    let mut peel_trace = Vec::new();
    let mut client_left = vec![true; graph.client_count()];
    let mut server_left = vec![true; graph.server_count];

    loop {
        let ids: Vec<usize> = (0..graph.client_count()).filter(|&c| client_left[c]).collect();
        if ids.is_empty() {
            break;
        }
        let sub = BipartiteGraph {
            server_count: graph.server_count,
            adjacency: ids
                .iter()
                .map(|&c| {
                    graph.neighbors(c).iter().copied().filter(|&s| server_left[s]).collect()
                })
                .collect(),
        };
        let (lambda, tight) = max_ratio(&sub)?;

        let clients: Vec<usize> = tight.iter().map(|&i| ids[i]).collect();
        let mut servers: Vec<usize> = tight
            .iter()
            .flat_map(|&i| sub.neighbors(i).iter().copied())
            .collect();
        servers.sort_unstable();
        servers.dedup();

        // Realize the level: at load cap lambda = p/q every tight client can
        // push q units, and flow / q gives the edge values.
        let level_graph = sub.restrict_clients(&tight);
        let (p, q) = (*lambda.numer(), *lambda.denom());
        let net = feasibility_network(&level_graph, p, q)?;
        let flow = max_flow(&net.network);
        if flow.value != q * tight.len() as i64 {
            return Err(Error::invariant(format!("peel level at {lambda} is not realizable")));
        }
        for &(c, s, arc) in &net.edge_arcs {
            let f = flow.arc_flow[arc];
            if f > 0 {
                x.insert((clients[c], s), rat(f, q));
            }
        }

        for &s in &servers {
            alpha[s] = lambda;
            server_left[s] = false;
        }
        for &c in &clients {
            client_left[c] = false;
        }
        peel_trace.push(PeelLevel { lambda, clients, servers });
    }

    Ok(BalancedFlow { alpha, x, peel_trace })
}

/// Which clients increased the maximum matching size on arrival.
pub fn matchable_clients(instance: &ArrivalInstance) -> Result<Vec<bool>> {
    let mut state = MatchState::new(vec![1; instance.server_count()]);
    let mut flags = Vec::with_capacity(instance.client_count());
    for c in 0..instance.client_count() {
        state.arrive(instance, c)?;
        let path = state.shortest_aug_path(instance, c)?;
        if let Some(path) = &path {
            state.augment(instance, path)?;
        }
        flags.push(path.is_some());
    }
    Ok(flags)
}

/// `α_M` after `prefix_len` arrivals: the balanced flow on the clients whose
/// arrival grew the maximum matching.
pub fn alpha_m(instance: &ArrivalInstance, prefix_len: usize) -> Result<Vec<Rational>> {
    if prefix_len > instance.client_count() {
        return Err(Error::param(format!(
            "prefix {prefix_len} exceeds {} clients",
            instance.client_count()
        )));
    }
    let flags = matchable_clients(&instance_prefix(instance, prefix_len)?)?;
    alpha_m_with(instance, &flags, prefix_len)
}

/// Like [`alpha_m`], reusing precomputed [`matchable_clients`] flags.
pub fn alpha_m_with(
    instance: &ArrivalInstance,
    matchable: &[bool],
    prefix_len: usize,
) -> Result<Vec<Rational>> {
    let members: Vec<usize> = (0..prefix_len).filter(|&c| matchable[c]).collect();
    let graph = instance.graph().restrict_clients(&members);
    Ok(balanced_flow(&graph)?.alpha)
}

fn instance_prefix(instance: &ArrivalInstance, len: usize) -> Result<ArrivalInstance> {
    ArrivalInstance::new(instance.server_count(), instance.arrivals()[..len].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(p: usize, q: usize) -> BipartiteGraph {
        BipartiteGraph::new(q, vec![(0..q).collect(); p]).unwrap()
    }

    #[test]
    fn complete_graphs() {
        let f = balanced_flow(&complete(10, 20)).unwrap();
        assert!(f.alpha.iter().all(|&a| a == rat(1, 2)));
        f.check_invariants(&complete(10, 20)).unwrap();
        let f = balanced_flow(&complete(10, 10)).unwrap();
        assert!(f.alpha.iter().all(|&a| a == rat(1, 1)));
        assert_eq!(balanced_flow(&complete(1, 1)).unwrap().alpha, vec![rat(1, 1)]);
    }

    #[test]
    fn two_components_peel_twice() {
        let g = BipartiteGraph::new(3, vec![vec![0], vec![0], vec![1, 2]]).unwrap();
        let f = balanced_flow(&g).unwrap();
        assert_eq!(f.alpha, vec![rat(2, 1), rat(1, 2), rat(1, 2)]);
        assert_eq!(f.peel_trace.len(), 2);
        f.check_invariants(&g).unwrap();
    }

    #[test]
    fn idle_servers_get_zero() {
        let g = BipartiteGraph::new(3, vec![vec![1]]).unwrap();
        let f = balanced_flow(&g).unwrap();
        assert_eq!(f.alpha, vec![rat(0, 1), rat(1, 1), rat(0, 1)]);
        f.check_invariants(&g).unwrap();
    }

    #[test]
    fn isolated_client_rejected() {
        let g = BipartiteGraph::new(1, vec![vec![0], vec![]]).unwrap();
        assert!(balanced_flow(&g).is_err());
    }

    #[test]
    fn alpha_m_on_star() {
        let inst = ArrivalInstance::new(1, vec![vec![0]; 3]).unwrap();
        assert_eq!(matchable_clients(&inst).unwrap(), vec![true, false, false]);
        assert_eq!(alpha_m(&inst, 3).unwrap(), vec![rat(1, 1)]);
        assert_eq!(balanced_flow(&inst.graph()).unwrap().alpha, vec![rat(3, 1)]);
        assert!(alpha_m(&inst, 4).is_err());
    }

    #[test]
    fn alpha_m_on_complete() {
        let inst = ArrivalInstance::new(20, vec![(0..20).collect(); 10]).unwrap();
        assert!(alpha_m(&inst, 10).unwrap().iter().all(|&a| a == rat(1, 2)));
    }
}
