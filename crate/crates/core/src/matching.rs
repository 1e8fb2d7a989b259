//! Matching state, shortest augmenting paths and the plain SAP engine.

use crate::error::{Error, Result};
use crate::graph::{ArrivalInstance, BipartiteGraph};
use crate::runlog::RunLog;

/// An augmenting path `c0 s0 c1 s1 ... ck sk`.
///
/// Edge `clients[i] - servers[i]` is unmatched and edge `servers[i] - clients[i+1]`
/// is matched. `clients[0]` is unmatched and `servers[k]` has spare capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugPath {
    pub clients: Vec<usize>,
    pub servers: Vec<usize>,
}

impl AugPath {
    pub fn edge_count(&self) -> usize {
        2 * self.servers.len() - 1
    }

    /// Already-matched clients that move when this path is flipped.
    pub fn replacements(&self) -> usize {
        self.servers.len() - 1
    }

    pub fn start(&self) -> usize {
        self.clients[0]
    }

    pub fn end(&self) -> usize {
        *self.servers.last().expect("non-empty path")
    }
}

/// A (possibly capacitated) matching over the clients that have arrived so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchState {
    server_of_client: Vec<Option<usize>>,
    clients_of_server: Vec<Vec<usize>>,
    capacity: Vec<usize>,
}

impl MatchState {
    pub fn new(capacity: Vec<usize>) -> Self {
        Self {
            server_of_client: Vec::new(),
            clients_of_server: vec![Vec::new(); capacity.len()],
            capacity,
        }
    }

    pub fn for_instance(instance: &ArrivalInstance) -> Self {
        Self::new(
            (0..instance.server_count())
                .map(|s| instance.capacity(s))
                .collect(),
        )
    }

    /// Rebuilds a state from a full client → server assignment.
    pub fn from_assignment(
        instance: &ArrivalInstance,
        capacity: Vec<usize>,
        server_of_client: &[Option<usize>],
    ) -> Result<Self> {
        let mut state = Self::new(capacity);
        for (c, &s) in server_of_client.iter().enumerate() {
            state.arrive(instance, c)?;
            if let Some(s) = s {
                if !instance.neighbors(c).contains(&s) {
                    return Err(Error::invariant(format!("client {c} assigned to non-neighbor {s}")));
                }
                state.server_of_client[c] = Some(s);
                state.clients_of_server[s].push(c);
            }
        }
        for list in &mut state.clients_of_server {
            list.sort_unstable();
        }
        state.check_consistency()?;
        Ok(state)
    }

    pub fn arrived_count(&self) -> usize {
        self.server_of_client.len()
    }

    pub fn server_count(&self) -> usize {
        self.capacity.len()
    }

    pub fn server_of(&self, client: usize) -> Option<usize> {
        self.server_of_client.get(client).copied().flatten()
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.server_of_client
    }

    pub fn clients_of(&self, server: usize) -> &[usize] {
        &self.clients_of_server[server]
    }

    pub fn load(&self, server: usize) -> usize {
        self.clients_of_server[server].len()
    }

    pub fn loads(&self) -> Vec<usize> {
        self.clients_of_server.iter().map(Vec::len).collect()
    }

    pub fn max_load(&self) -> usize {
        self.clients_of_server.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn capacity(&self, server: usize) -> usize {
        self.capacity[server]
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacity
    }

    /// Changes a server's capacity. It may not drop below the current load.
    pub fn set_capacity(&mut self, server: usize, capacity: usize) -> Result<()> {
        if capacity < self.load(server) {
            return Err(Error::param(format!(
                "capacity {capacity} below current load {} of server {server}",
                self.load(server)
            )));
        }
        self.capacity[server] = capacity;
        Ok(())
    }

    pub fn has_room(&self, server: usize) -> bool {
        self.load(server) < self.capacity[server]
    }

    pub fn matched_count(&self) -> usize {
        self.server_of_client.iter().filter(|s| s.is_some()).count()
    }

    /// Registers the next client as arrived and unmatched.
    pub fn arrive(&mut self, instance: &ArrivalInstance, client: usize) -> Result<()> {
        let expected = self.arrived_count();
        if client != expected || client >= instance.client_count() {
            return Err(Error::OutOfOrder { client, expected });
        }
        self.server_of_client.push(None);
        Ok(())
    }

    fn require_unmatched(&self, client: usize) -> Result<()> {
        if client >= self.arrived_count() {
            return Err(Error::NotArrived(client));
        }
        if self.server_of_client[client].is_some() {
            return Err(Error::AlreadyMatched(client));
        }
        Ok(())
    }

    /// Minimum-edge augmenting path from the unmatched client `c`.
    ///
    /// Layers are explored in ascending index order. Among the free servers of
    /// the first layer that contains any, the smallest index wins, and every
    /// server on the way back takes its smallest-index predecessor client.
    pub fn shortest_aug_path(
        &self,
        instance: &ArrivalInstance,
        c: usize,
    ) -> Result<Option<AugPath>> {
        self.require_unmatched(c)?;
        let n = self.arrived_count();
        let mut client_parent: Vec<Option<usize>> = vec![None; n];
        let mut client_seen = vec![false; n];
        let mut server_depth: Vec<Option<usize>> = vec![None; self.server_count()];
        let mut server_parent: Vec<usize> = vec![usize::MAX; self.server_count()];

        client_seen[c] = true;
        let mut client_layer = vec![c];
        let mut depth = 0;
        loop {
            let mut server_layer = Vec::new();
            for &u in &client_layer {
                let own = self.server_of_client[u];
                for &s in instance.neighbors(u) {
                    if Some(s) == own {
                        continue;
                    }
                    match server_depth[s] {
                        None => {
                            server_depth[s] = Some(depth + 1);
                            server_parent[s] = u;
                            server_layer.push(s);
                        }
                        Some(d) if d == depth + 1 && u < server_parent[s] => {
                            server_parent[s] = u;
                        }
                        _ => {}
                    }
                }
            }
            if server_layer.is_empty() {
                return Ok(None);
            }
            server_layer.sort_unstable();
            if let Some(&free) = server_layer.iter().find(|&&s| self.has_room(s)) {
                return Ok(Some(self.trace_back(free, &server_parent, &client_parent)));
            }
            let mut next = Vec::new();
            for &s in &server_layer {
                for &v in &self.clients_of_server[s] {
                    if !client_seen[v] {
                        client_seen[v] = true;
                        client_parent[v] = Some(s);
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                return Ok(None);
            }
            client_layer = next;
            depth += 2;
        }
    }

    fn trace_back(
        &self,
        free: usize,
        server_parent: &[usize],
        client_parent: &[Option<usize>],
    ) -> AugPath {
        let mut clients = Vec::new();
        let mut servers = Vec::new();
        let mut s = free;
        loop {
            servers.push(s);
            let c = server_parent[s];
            clients.push(c);
            match client_parent[c] {
                Some(prev) => s = prev,
                None => break,
            }
        }
        clients.reverse();
        servers.reverse();
        AugPath { clients, servers }
    }

    /// Checks that `path` is a valid augmenting path against the current state.
    pub fn validate_path(&self, instance: &ArrivalInstance, path: &AugPath) -> Result<()> {
        let stale = |msg: String| Err(Error::StalePath(msg));
        if path.clients.is_empty() || path.clients.len() != path.servers.len() {
            return stale("clients and servers must pair up".into());
        }
        self.require_unmatched(path.start())?;
        for (i, (&c, &s)) in path.clients.iter().zip(&path.servers).enumerate() {
            if c >= self.arrived_count() {
                return Err(Error::NotArrived(c));
            }
            if !instance.neighbors(c).contains(&s) {
                return stale(format!("{c}-{s} is not an edge"));
            }
            if self.server_of_client[c] == Some(s) {
                return stale(format!("{c}-{s} should be unmatched"));
            }
            if let Some(&next) = path.clients.get(i + 1) {
                if self.server_of_client[next] != Some(s) {
                    return stale(format!("{s}-{next} should be matched"));
                }
            }
        }
        if !self.has_room(path.end()) {
            return stale(format!("server {} has no spare capacity", path.end()));
        }
        Ok(())
    }

    /// Flips `path`. Returns the number of replaced (re-matched) clients.
    pub fn augment(&mut self, instance: &ArrivalInstance, path: &AugPath) -> Result<usize> {
        self.validate_path(instance, path)?;
        for (&c, &s) in path.clients.iter().zip(&path.servers) {
            if let Some(old) = self.server_of_client[c] {
                let list = &mut self.clients_of_server[old];
                let pos = list.iter().position(|&v| v == c).expect("consistent state");
                list.remove(pos);
            }
            self.server_of_client[c] = Some(s);
            let list = &mut self.clients_of_server[s];
            let pos = list.partition_point(|&v| v < c);
            list.insert(pos, c);
        }
        Ok(path.replacements())
    }

    pub fn check_consistency(&self) -> Result<()> {
        for (s, list) in self.clients_of_server.iter().enumerate() {
            if list.len() > self.capacity[s] {
                return Err(Error::invariant(format!(
                    "server {s} holds {} clients over capacity {}",
                    list.len(),
                    self.capacity[s]
                )));
            }
            for &c in list {
                if self.server_of_client.get(c).copied().flatten() != Some(s) {
                    return Err(Error::invariant(format!("server {s} lists client {c} inconsistently")));
                }
            }
        }
        for (c, s) in self.server_of_client.iter().enumerate() {
            if let Some(s) = *s {
                if !self.clients_of_server[s].contains(&c) {
                    return Err(Error::invariant(format!("client {c} missing from server {s}")));
                }
            }
        }
        Ok(())
    }

    /// Static view of the arrived clients plus the current assignment.
    pub fn snapshot(&self, instance: &ArrivalInstance) -> MatchSnapshot {
        MatchSnapshot {
            graph: instance.prefix(self.arrived_count()),
            server_of_client: self.server_of_client.clone(),
            capacity: self.capacity.clone(),
        }
    }
}

/// Plain data copy of a matching, used to hand states to independent checkers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchSnapshot {
    pub graph: BipartiteGraph,
    pub server_of_client: Vec<Option<usize>>,
    pub capacity: Vec<usize>,
}

/// One SAP step on `state` for the next client. Records the outcome in `log`.
pub(crate) fn sap_step(
    state: &mut MatchState,
    instance: &ArrivalInstance,
    log: &mut RunLog,
) -> Result<Option<AugPath>> {
    let c = state.arrived_count();
    state.arrive(instance, c)?;
    match state.shortest_aug_path(instance, c)? {
        Some(path) => {
            state.augment(instance, &path)?;
            log.push_matched(c, path.edge_count());
            Ok(Some(path))
        }
        None => {
            log.push_unmatched(c);
            Ok(None)
        }
    }
}

/// Runs the SAP protocol over every arrival of a unit-capacity instance.
pub fn run_sap(instance: &ArrivalInstance) -> Result<(MatchState, RunLog)> {
    if !instance.has_unit_capacities() {
        return Err(Error::param(
            "run_sap needs unit capacities; use the capacitated engine",
        ));
    }
    run_sap_any_capacity(instance)
}

pub(crate) fn run_sap_any_capacity(instance: &ArrivalInstance) -> Result<(MatchState, RunLog)> {
    let mut state = MatchState::for_instance(instance);
    let mut log = RunLog::new();
    for _ in 0..instance.client_count() {
        sap_step(&mut state, instance, &mut log)?;
    }
    Ok((state, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(servers: usize, arrivals: Vec<Vec<usize>>) -> ArrivalInstance {
        ArrivalInstance::new(servers, arrivals).unwrap()
    }

    #[test]
    fn arrive_enforces_order() {
        let i = inst(1, vec![vec![0]; 6]);
        let mut st = MatchState::for_instance(&i);
        st.arrive(&i, 0).unwrap();
        assert_eq!(st.arrived_count(), 1);
        assert_eq!(st.matched_count(), 0);
        assert_eq!(
            st.arrive(&i, 0),
            Err(Error::OutOfOrder { client: 0, expected: 1 })
        );
        for c in 1..4 {
            st.arrive(&i, c).unwrap();
        }
        assert_eq!(
            st.arrive(&i, 5),
            Err(Error::OutOfOrder { client: 5, expected: 4 })
        );
    }

    #[test]
    fn direct_edge_path() {
        let i = inst(1, vec![vec![0]]);
        let mut st = MatchState::for_instance(&i);
        st.arrive(&i, 0).unwrap();
        let p = st.shortest_aug_path(&i, 0).unwrap().unwrap();
        assert_eq!(p.edge_count(), 1);
        assert_eq!(st.augment(&i, &p).unwrap(), 0);
    }

    #[test]
    fn saturated_component_has_no_path() {
        let i = inst(1, vec![vec![0], vec![0]]);
        let mut st = MatchState::for_instance(&i);
        sap_step(&mut st, &i, &mut RunLog::new()).unwrap();
        st.arrive(&i, 1).unwrap();
        assert_eq!(st.shortest_aug_path(&i, 1).unwrap(), None);
    }

    #[test]
    fn path_errors() {
        let i = inst(2, vec![vec![0, 1], vec![0]]);
        let mut st = MatchState::for_instance(&i);
        assert_eq!(st.shortest_aug_path(&i, 0), Err(Error::NotArrived(0)));
        sap_step(&mut st, &i, &mut RunLog::new()).unwrap();
        assert_eq!(st.shortest_aug_path(&i, 0), Err(Error::AlreadyMatched(0)));
    }

    #[test]
    fn three_and_five_edge_paths() {
        // c0:{s0,s1} takes s0; c1:{s0} forces c0 to s1; c2:{s0,s1}... blocked except via s2.
        let i = inst(3, vec![vec![0, 1], vec![0], vec![1, 2]]);
        let (st, log) = run_sap(&i).unwrap();
        let lens: Vec<_> = log.records().iter().map(|r| r.path_edges).collect();
        assert_eq!(lens, vec![Some(1), Some(3), Some(1)]);
        assert_eq!(log.cum_replacements(), 1);
        assert_eq!(st.server_of(0), Some(1));

        let j = inst(3, vec![vec![0, 1], vec![1, 2], vec![0], vec![0]]);
        let mut st = MatchState::for_instance(&j);
        let mut log = RunLog::new();
        for _ in 0..3 {
            sap_step(&mut st, &j, &mut log).unwrap();
        }
        // c0 - s0, c1 - s1 then c2 pushes c0 to s1 and c1 to s2.
        let lens: Vec<_> = log.path_lengths().collect();
        assert_eq!(lens, vec![1, 1, 5]);
        assert_eq!(log.cum_replacements(), 2);
        assert_eq!(st.matched_count(), 3);
        st.check_consistency().unwrap();
    }

    #[test]
    fn stale_path_rejected() {
        let i = inst(2, vec![vec![0, 1], vec![0]]);
        let mut st = MatchState::for_instance(&i);
        st.arrive(&i, 0).unwrap();
        let p = st.shortest_aug_path(&i, 0).unwrap().unwrap();
        st.augment(&i, &p).unwrap();
        st.arrive(&i, 1).unwrap();
        let p = st.shortest_aug_path(&i, 1).unwrap().unwrap();
        assert_eq!(p.edge_count(), 3);
        let mut copy = st.clone();
        copy.augment(&i, &p).unwrap();
        // The same path is no longer alternating against the updated state.
        assert!(matches!(copy.validate_path(&i, &p), Err(Error::AlreadyMatched(1))));
        let bogus = AugPath { clients: vec![1, 0], servers: vec![1, 0] };
        assert!(matches!(st.augment(&i, &bogus), Err(Error::StalePath(_))));
    }

    #[test]
    fn star_matches_only_first() {
        let i = inst(1, vec![vec![0]; 3]);
        let (st, log) = run_sap(&i).unwrap();
        assert_eq!(st.matched_count(), 1);
        assert_eq!(log.cum_replacements(), 0);
        assert_eq!(log.records().iter().filter(|r| r.matched).count(), 1);
    }

    #[test]
    fn complete_four_by_four_needs_no_replacements() {
        let i = inst(4, vec![vec![0, 1, 2, 3]; 4]);
        let (st, log) = run_sap(&i).unwrap();
        assert_eq!(st.matched_count(), 4);
        assert_eq!(log.cum_replacements(), 0);
        assert!(log.path_lengths().all(|l| l == 1));
    }

    #[test]
    fn capacitated_rooms() {
        let i = inst(1, vec![vec![0]; 3]).with_capacities(vec![3]).unwrap();
        assert!(run_sap(&i).is_err());
        let (st, log) = run_sap_any_capacity(&i).unwrap();
        assert_eq!(st.load(0), 3);
        assert_eq!(log.cum_replacements(), 0);
    }
}
