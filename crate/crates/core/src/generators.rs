//! Deterministic instance generators.
//!
//! Every generator is a pure function of its parameters; randomized ones take
//! an explicit seed.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ArrivalInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    Random { servers: usize, clients: usize, degree: usize, seed: u64 },
    Complete { clients: usize, servers: usize },
    StarChain { depth: usize },
    MinMaxAdversary { l: usize, pad_to: Option<usize> },
}

impl GenSpec {
    pub fn generate(&self) -> Result<ArrivalInstance> {
        match *self {
            GenSpec::Random { servers, clients, degree, seed } => {
                gen_random(servers, clients, degree, seed)
            }
            GenSpec::Complete { clients, servers } => gen_complete(clients, servers),
            GenSpec::StarChain { depth } => gen_star_chain(depth),
            GenSpec::MinMaxAdversary { l, pad_to } => {
                let inst = gen_minmax_adversary(l)?;
                match pad_to {
                    Some(n) => pad_with_single_edges(&inst, n),
                    None => Ok(inst),
                }
            }
        }
    }
}

/// `clients` arrivals, each adjacent to `degree` distinct servers drawn
/// uniformly at random.
pub fn gen_random(servers: usize, clients: usize, degree: usize, seed: u64) -> Result<ArrivalInstance> {
    if degree == 0 || degree > servers {
        return Err(Error::param(format!(
            "degree must lie in 1..={servers}, got {degree}"
        )));
    }
    gen_random_degrees(servers, clients, degree, degree, seed)
}

/// Like [`gen_random`], but each client draws its degree uniformly from
/// `min_degree..=max_degree` (clamped to the server count).
pub fn gen_random_degrees(
    servers: usize,
    clients: usize,
    min_degree: usize,
    max_degree: usize,
    seed: u64,
) -> Result<ArrivalInstance> {
    if servers == 0 || min_degree == 0 || min_degree > max_degree || min_degree > servers {
        return Err(Error::param(format!(
            "bad degree range {min_degree}..={max_degree} for {servers} servers"
        )));
    }
    let max_degree = max_degree.min(servers);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arrivals = (0..clients)
        .map(|_| {
            let d = rng.gen_range(min_degree..=max_degree);
            sample(&mut rng, servers, d).into_vec()
        })
        .collect();
    ArrivalInstance::new(servers, arrivals)
}

/// Complete bipartite graph: every client sees every server.
pub fn gen_complete(clients: usize, servers: usize) -> Result<ArrivalInstance> {
    if clients == 0 || servers == 0 {
        return Err(Error::param("complete graph needs at least one client and server"));
    }
    ArrivalInstance::new(servers, vec![(0..servers).collect(); clients])
}

/// Disjoint arms of increasing length that force long augmenting paths.
///
/// Arm `k` (for `k = 1..=depth`) owns `k` consecutive servers. First the setup
/// clients arrive: arm `k` gets `k - 1` clients, the `j`-th adjacent to the arm's
/// servers `j-1` and `j`, each of which matches directly. Then one chain client
/// per arm arrives, adjacent only to the arm's first server, so the chain client
/// of arm `k` must push the whole arm and uses a path of `2k - 1` edges.
pub fn gen_star_chain(depth: usize) -> Result<ArrivalInstance> {
    if depth == 0 {
        return Err(Error::param("star chain depth must be at least 1"));
    }
    let arm_start = |k: usize| k * (k - 1) / 2;
    let servers = arm_start(depth + 1);
    let mut arrivals = Vec::new();
    for k in 1..=depth {
        let base = arm_start(k);
        for j in 1..k {
            arrivals.push(vec![base + j - 1, base + j]);
        }
    }
    for k in 1..=depth {
        arrivals.push(vec![arm_start(k)]);
    }
    ArrivalInstance::new(servers, arrivals)
}

/// Number of setup arrivals preceding the chain clients in [`gen_star_chain`].
pub fn star_chain_setup_len(depth: usize) -> usize {
    depth * depth.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpochKind {
    Initial,
    DownHeavy,
    UpHeavy,
}

/// A phase of the min-max adversary and the arrivals it spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryPhase {
    pub kind: EpochKind,
    /// 1-based epoch number (0 for the initial fill).
    pub index: usize,
    pub arrivals: std::ops::Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryLayout {
    pub l: usize,
    pub block_of_client: Vec<usize>,
    pub phases: Vec<AdversaryPhase>,
}

fn check_adversary_l(l: usize) -> Result<()> {
    if l < 4 || !l.is_multiple_of(4) {
        return Err(Error::param(format!("L must be a positive multiple of 4, got {l}")));
    }
    Ok(())
}

/// Block structure and phase boundaries of the min-max adversary.
///
/// Servers `0..L`; block `i < L-1` sees servers `i` and `i+1`, the last block
/// only server `L-1`. The initial fill adds `L/2` clients per block; then `L/2`
/// epochs alternate, starting down-heavy, each adding two clients to every
/// block of its half (lower half for down-heavy, upper for up-heavy).
pub fn minmax_adversary_layout(l: usize) -> Result<AdversaryLayout> {
    check_adversary_l(l)?;
    let mut block_of_client = Vec::with_capacity(l * l);
    let mut phases = Vec::new();
    for b in 0..l {
        block_of_client.extend(std::iter::repeat_n(b, l / 2));
    }
    phases.push(AdversaryPhase {
        kind: EpochKind::Initial,
        index: 0,
        arrivals: 0..block_of_client.len(),
    });
    for epoch in 1..=l / 2 {
        let (kind, blocks) = if epoch % 2 == 1 {
            (EpochKind::DownHeavy, 0..l / 2)
        } else {
            (EpochKind::UpHeavy, l / 2..l)
        };
        let start = block_of_client.len();
        for b in blocks {
            block_of_client.extend([b, b]);
        }
        phases.push(AdversaryPhase {
            kind,
            index: epoch,
            arrivals: start..block_of_client.len(),
        });
    }
    Ok(AdversaryLayout { l, block_of_client, phases })
}

/// The min-max-load adversary with `L²` clients over `L` servers.
pub fn gen_minmax_adversary(l: usize) -> Result<ArrivalInstance> {
    let layout = minmax_adversary_layout(l)?;
    let arrivals = layout
        .block_of_client
        .iter()
        .map(|&b| if b + 1 < l { vec![b, b + 1] } else { vec![b] })
        .collect();
    ArrivalInstance::new(l, arrivals)
}

/// Appends isolated single-edge client/server pairs until there are `total`
/// clients.
pub fn pad_with_single_edges(instance: &ArrivalInstance, total: usize) -> Result<ArrivalInstance> {
    let n = instance.client_count();
    if total < n {
        return Err(Error::param(format!("cannot pad {n} clients down to {total}")));
    }
    let extra = total - n;
    let pads = ArrivalInstance::new(extra, (0..extra).map(|i| vec![i]).collect())?;
    Ok(instance.disjoint_union(&pads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::run_sap;

    #[test]
    fn random_single_edge() {
        let i = gen_random(1, 1, 1, 42).unwrap();
        assert_eq!(i.arrivals(), &[vec![0]]);
    }

    #[test]
    fn random_is_deterministic_and_exact_degree() {
        let a = gen_random(20, 40, 3, 7).unwrap();
        assert_eq!(a, gen_random(20, 40, 3, 7).unwrap());
        assert_ne!(a, gen_random(20, 40, 3, 8).unwrap());
        for nbrs in a.arrivals() {
            assert_eq!(nbrs.len(), 3);
            assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(gen_random(2, 5, 3, 0).is_err());
        assert!(gen_random(2, 5, 0, 0).is_err());
    }

    #[test]
    fn complete_shape() {
        let i = gen_complete(10, 20).unwrap();
        assert_eq!(i.client_count(), 10);
        assert!(i.arrivals().iter().all(|n| n.len() == 20));
    }

    #[test]
    fn star_chain_path_lengths() {
        for depth in 1..=6 {
            let inst = gen_star_chain(depth).unwrap();
            let (_, log) = run_sap(&inst).unwrap();
            let setup = star_chain_setup_len(depth);
            assert!(log.records()[..setup].iter().all(|r| r.path_edges == Some(1)));
            let chain: Vec<usize> = log.records()[setup..]
                .iter()
                .map(|r| r.path_edges.unwrap())
                .collect();
            let expected: Vec<usize> = (1..=depth).map(|k| 2 * k - 1).collect();
            assert_eq!(chain, expected);
        }
    }

    #[test]
    fn adversary_shape() {
        let inst = gen_minmax_adversary(4).unwrap();
        assert_eq!(inst.client_count(), 16);
        assert_eq!(inst.server_count(), 4);
        let layout = minmax_adversary_layout(8).unwrap();
        assert_eq!(layout.block_of_client.len(), 64);
        assert_eq!(layout.phases.len(), 5);
        assert_eq!(layout.phases[1].kind, EpochKind::DownHeavy);
        assert_eq!(layout.phases[2].kind, EpochKind::UpHeavy);
        // Before down-heavy epoch k every block holds L/2 + 2(k-1) clients.
        for phase in layout.phases.iter().filter(|p| p.kind == EpochKind::DownHeavy) {
            let k = phase.index.div_ceil(2);
            let mut counts = [0; 8];
            for &b in &layout.block_of_client[..phase.arrivals.start] {
                counts[b] += 1;
            }
            assert!(counts.iter().all(|&n| n == 8 / 2 + 2 * (k - 1)));
        }
        for bad in [0, 2, 6] {
            assert!(gen_minmax_adversary(bad).is_err());
        }
    }

    #[test]
    fn padding_adds_single_edges() {
        let inst = pad_with_single_edges(&gen_minmax_adversary(4).unwrap(), 40).unwrap();
        assert_eq!(inst.client_count(), 40);
        assert_eq!(inst.server_count(), 4 + 24);
        assert_eq!(inst.neighbors(39), &[27]);
    }
}
