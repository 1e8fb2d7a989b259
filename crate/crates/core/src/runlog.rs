//! Per-arrival telemetry.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalRecord {
    pub client: usize,
    pub matched: bool,
    /// Edge count of the augmenting path used, when the client was matched.
    pub path_edges: Option<usize>,
    /// Already-matched clients that changed server: `(path_edges - 1) / 2`.
    pub replacements: usize,
}

/// Bookkeeping specific to the tree-based engine.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FastStats {
    pub depth_limit: usize,
    pub tree_paths: usize,
    pub brute_force_paths: usize,
    pub brute_force_failures: usize,
    pub pruned_clients: usize,
    pub pruned_servers: usize,
    pub prune_events: Vec<PruneEvent>,
    pub arc_insertions: u64,
    pub arc_deletions: u64,
}

/// Vertices removed after a failed brute-force search at arrival `arrival`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneEvent {
    pub arrival: usize,
    pub clients: Vec<usize>,
    pub servers: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunLog {
    records: Vec<ArrivalRecord>,
    cum_replacements: u64,
    cum_path_edges: u64,
    cum_matched: usize,
    /// `long_paths[i]` counts augmenting paths with more than `2^i` edges.
    long_paths: Vec<usize>,
    pub fast: Option<FastStats>,
}

impl RunLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_matched(&mut self, client: usize, path_edges: usize) {
        assert!(path_edges % 2 == 1, "augmenting paths have odd length");
        let replacements = (path_edges - 1) / 2;
        self.records.push(ArrivalRecord {
            client,
            matched: true,
            path_edges: Some(path_edges),
            replacements,
        });
        self.cum_replacements += replacements as u64;
        self.cum_path_edges += path_edges as u64;
        self.cum_matched += 1;
        let mut i = 0;
        while path_edges > 1usize << i {
            if self.long_paths.len() <= i {
                self.long_paths.push(0);
            }
            self.long_paths[i] += 1;
            i += 1;
        }
    }

    pub fn push_unmatched(&mut self, client: usize) {
        self.records.push(ArrivalRecord {
            client,
            matched: false,
            path_edges: None,
            replacements: 0,
        });
    }

    pub fn records(&self) -> &[ArrivalRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn cum_replacements(&self) -> u64 {
        self.cum_replacements
    }

    pub fn cum_path_edges(&self) -> u64 {
        self.cum_path_edges
    }

    /// Newly matched clients (one per successful augmentation).
    pub fn cum_matched(&self) -> usize {
        self.cum_matched
    }

    pub fn path_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.records.iter().filter_map(|r| r.path_edges)
    }

    /// Number of augmenting paths with strictly more than `h` edges.
    pub fn paths_longer_than(&self, h: usize) -> usize {
        self.path_lengths().filter(|&len| len > h).count()
    }

    /// `(h, count)` for `h = 1, 2, 4, ...` up to the longest recorded path.
    pub fn long_path_counters(&self) -> Vec<(usize, usize)> {
        self.long_paths
            .iter()
            .enumerate()
            .map(|(i, &count)| (1usize << i, count))
            .collect()
    }

    pub fn check_consistency(&self) -> Result<()> {
        let mut reps = 0u64;
        let mut edges = 0u64;
        for r in &self.records {
            match (r.matched, r.path_edges) {
                (true, Some(len)) if len % 2 == 1 && r.replacements == (len - 1) / 2 => {
                    reps += r.replacements as u64;
                    edges += len as u64;
                }
                (false, None) if r.replacements == 0 => {}
                _ => return Err(Error::invariant(format!("malformed record {r:?}"))),
            }
        }
        if reps != self.cum_replacements || edges != self.cum_path_edges {
            return Err(Error::invariant("cumulative counters disagree with records"));
        }
        for (h, count) in self.long_path_counters() {
            if count != self.paths_longer_than(h) {
                return Err(Error::invariant(format!("long-path counter for h={h} is stale")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counters_track_records() {
        let mut log = RunLog::new();
        log.push_matched(0, 1);
        log.push_matched(1, 5);
        log.push_unmatched(2);
        log.push_matched(3, 3);
        assert_eq!(log.cum_replacements(), 3);
        assert_eq!(log.cum_path_edges(), 9);
        assert_eq!(log.cum_matched(), 3);
        assert_eq!(log.long_path_counters(), vec![(1, 2), (2, 2), (4, 1)]);
        assert_eq!(log.paths_longer_than(3), 1);
        log.check_consistency().unwrap();
    }

    #[test]
    #[should_panic]
    fn even_path_rejected() {
        RunLog::new().push_matched(0, 2);
    }
}
