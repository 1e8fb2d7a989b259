//! Arrival instances and static bipartite snapshots.

use crate::error::{Error, Result};

/// A fixed server set plus an ordered sequence of client arrivals.
///
/// Client `i` is the `i`-th arrival. Neighbor lists are kept sorted and free of
/// duplicates; capacities, when present, cover every server and are at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalInstance {
    server_count: usize,
    arrivals: Vec<Vec<usize>>,
    capacities: Option<Vec<usize>>,
}

impl ArrivalInstance {
    /// Builds an instance, normalizing each neighbor list (sort + dedup).
    pub fn new(server_count: usize, arrivals: Vec<Vec<usize>>) -> Result<Self> {
        let mut arrivals = arrivals;
        for (c, nbrs) in arrivals.iter_mut().enumerate() {
            nbrs.sort_unstable();
            nbrs.dedup();
            if let Some(&s) = nbrs.last() {
                if s >= server_count {
                    return Err(Error::InvalidInstance(format!(
                        "client {c} lists server {s} but there are only {server_count} servers"
                    )));
                }
            }
        }
        Ok(Self {
            server_count,
            arrivals,
            capacities: None,
        })
    }

    pub fn with_capacities(mut self, capacities: Vec<usize>) -> Result<Self> {
        if capacities.len() != self.server_count {
            return Err(Error::InvalidInstance(format!(
                "{} capacities given for {} servers",
                capacities.len(),
                self.server_count
            )));
        }
        if let Some(s) = capacities.iter().position(|&u| u == 0) {
            return Err(Error::InvalidInstance(format!(
                "server {s} has capacity 0"
            )));
        }
        self.capacities = Some(capacities);
        Ok(self)
    }

    pub fn without_capacities(mut self) -> Self {
        self.capacities = None;
        self
    }

    pub fn server_count(&self) -> usize {
        self.server_count
    }

    pub fn client_count(&self) -> usize {
        self.arrivals.len()
    }

    pub fn neighbors(&self, client: usize) -> &[usize] {
        &self.arrivals[client]
    }

    pub fn arrivals(&self) -> &[Vec<usize>] {
        &self.arrivals
    }

    pub fn capacities(&self) -> Option<&[usize]> {
        self.capacities.as_deref()
    }

    /// Capacity of `server`; 1 when the instance carries no capacities.
    pub fn capacity(&self, server: usize) -> usize {
        self.capacities.as_ref().map_or(1, |caps| caps[server])
    }

    pub fn has_unit_capacities(&self) -> bool {
        self.capacities
            .as_ref()
            .is_none_or(|caps| caps.iter().all(|&u| u == 1))
    }

    pub fn edge_count(&self) -> usize {
        self.arrivals.iter().map(Vec::len).sum()
    }

    /// Static graph induced by the first `len` arrivals.
    pub fn prefix(&self, len: usize) -> BipartiteGraph {
        BipartiteGraph {
            server_count: self.server_count,
            adjacency: self.arrivals[..len].to_vec(),
        }
    }

    pub fn graph(&self) -> BipartiteGraph {
        self.prefix(self.client_count())
    }

    /// Places `other` next to `self`: its servers are renumbered after ours and
    /// its clients arrive after ours. Capacities default to 1 where absent.
    pub fn disjoint_union(&self, other: &ArrivalInstance) -> ArrivalInstance {
        let offset = self.server_count;
        let mut arrivals = self.arrivals.clone();
        arrivals.extend(
            other
                .arrivals
                .iter()
                .map(|nbrs| nbrs.iter().map(|&s| s + offset).collect()),
        );
        let capacities = if self.capacities.is_none() && other.capacities.is_none() {
            None
        } else {
            let mut caps: Vec<usize> = (0..self.server_count).map(|s| self.capacity(s)).collect();
            caps.extend((0..other.server_count).map(|s| other.capacity(s)));
            Some(caps)
        };
        ArrivalInstance {
            server_count: self.server_count + other.server_count,
            arrivals,
            capacities,
        }
    }
}

/// A static bipartite graph: `adjacency[c]` lists the servers of client `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub server_count: usize,
    pub adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(server_count: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let inst = ArrivalInstance::new(server_count, adjacency)?;
        Ok(inst.graph())
    }

    pub fn client_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, client: usize) -> &[usize] {
        &self.adjacency[client]
    }

    pub fn first_isolated_client(&self) -> Option<usize> {
        self.adjacency.iter().position(Vec::is_empty)
    }

    /// Subgraph on the given clients (renumbered in the given order); all
    /// servers are kept.
    pub fn restrict_clients(&self, clients: &[usize]) -> BipartiteGraph {
        BipartiteGraph {
            server_count: self.server_count,
            adjacency: clients.iter().map(|&c| self.adjacency[c].clone()).collect(),
        }
    }

    /// Drops clients with empty neighborhoods. Returns the reduced graph and
    /// the original index of each remaining client.
    pub fn without_isolated(&self) -> (BipartiteGraph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.client_count())
            .filter(|&c| !self.adjacency[c].is_empty())
            .collect();
        (self.restrict_clients(&keep), keep)
    }

    /// Clients adjacent to each server.
    pub fn server_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.server_count];
        for (c, nbrs) in self.adjacency.iter().enumerate() {
            for &s in nbrs {
                adj[s].push(c);
            }
        }
        adj
    }
}
