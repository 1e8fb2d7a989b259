//! Drivers behind the `sap` binary: engine dispatch, per-arrival analysis,
//! invariant verification and the replacement benchmark.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extensions::{opt_load_near, run_capacitated, run_minmax, run_semi_matching};
use crate::fast::{run_fast_sap_with, FastSap, ValidationMode};
use crate::flow::{balanced_flow, Rational};
use crate::generators::{gen_complete, gen_minmax_adversary, gen_random, gen_random_degrees, gen_star_chain};
use crate::graph::ArrivalInstance;
use crate::io::{write_telemetry, ArrivalAnalysis};
use crate::matching::{run_sap, sap_step, MatchState};
use crate::oracles::{hopcroft_karp_size, oracle_balanced_flow, oracle_shortest_aug_path, oracle_shortest_tail};
use crate::runlog::RunLog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Naive,
    Fast,
    Capacitated,
    MinMax,
    Semi,
}

impl Engine {
    pub const ALL: [Engine; 5] = [Engine::Naive, Engine::Fast, Engine::Capacitated, Engine::MinMax, Engine::Semi];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Naive => "naive",
            Engine::Fast => "fast",
            Engine::Capacitated => "capacitated",
            Engine::MinMax => "minmax",
            Engine::Semi => "semi",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::param(format!("unknown engine {s:?} (naive, fast, capacitated, minmax, semi)")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub engine: Engine,
    pub epsilon: Option<Rational>,
    pub h: Option<usize>,
    pub analyze: bool,
    pub validation: ValidationMode,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            engine: Engine::Naive,
            epsilon: None,
            h: None,
            analyze: false,
            validation: ValidationMode::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub engine: Engine,
    pub state: MatchState,
    pub log: RunLog,
    pub analysis: Option<Vec<ArrivalAnalysis>>,
    /// Human-readable summary lines.
    pub notes: Vec<String>,
}

impl RunOutcome {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_telemetry(out, &self.log, self.engine.name(), self.analysis.as_deref())
    }
}

/// Runs one engine over the whole instance.
pub fn run(instance: &ArrivalInstance, opts: &RunOptions) -> Result<RunOutcome> {
    if opts.epsilon.is_some() && opts.engine != Engine::Semi {
        return Err(Error::param("--epsilon only applies to the semi engine"));
    }
    if opts.h.is_some() && opts.engine != Engine::Fast {
        return Err(Error::param("--h only applies to the fast engine"));
    }
    if !instance.has_unit_capacities() && opts.engine != Engine::Capacitated {
        return Err(Error::param("capacities are only supported by the capacitated engine"));
    }
    let mut notes = Vec::new();
    let (state, log) = match opts.engine {
        Engine::Naive => run_sap(instance)?,
        Engine::Fast => {
            let (state, log) = run_fast_sap_with(instance, opts.h, opts.validation)?;
            if let Some(f) = &log.fast {
                notes.push(format!(
                    "h={} tree_paths={} brute_force_paths={} failed_searches={} pruned_clients={} pruned_servers={}",
                    f.depth_limit, f.tree_paths, f.brute_force_paths, f.brute_force_failures,
                    f.pruned_clients, f.pruned_servers
                ));
            }
            (state, log)
        }
        Engine::Capacitated => run_capacitated(instance)?,
        Engine::MinMax => {
            let r = run_minmax(instance)?;
            notes.push(format!(
                "epochs={} final_opt={} max_load={} unservable={}",
                r.epochs.len(),
                r.profile().opt,
                r.profile().max_load,
                r.unservable.len()
            ));
            (r.state, r.log)
        }
        Engine::Semi => {
            let eps = opts.epsilon.ok_or_else(|| Error::param("the semi engine needs --epsilon"))?;
            let r = run_semi_matching(instance, eps)?;
            (r.state, r.log)
        }
    };
    log.check_consistency()?;
    state.check_consistency()?;
    notes.insert(
        0,
        format!(
            "engine={} clients={} matched={} cum_replacements={} cum_path_edges={}",
            opts.engine,
            instance.client_count(),
            state.matched_count(),
            log.cum_replacements(),
            log.cum_path_edges()
        ),
    );
    let analysis = if opts.analyze { Some(analyze_prefixes(instance)?) } else { None };
    Ok(RunOutcome { engine: opts.engine, state, log, analysis, notes })
}

/// Maximum balanced-flow load and optimum max load after every arrival,
/// ignoring clients without neighbors.
pub fn analyze_prefixes(instance: &ArrivalInstance) -> Result<Vec<ArrivalAnalysis>> {
    let mut out = Vec::with_capacity(instance.client_count());
    let mut opt = 0;
    for t in 1..=instance.client_count() {
        let (graph, _) = instance.prefix(t).without_isolated();
        opt = opt_load_near(&graph, opt);
        let max_alpha = if graph.client_count() == 0 {
            Rational::zero()
        } else {
            balanced_flow(&graph)?.max_alpha()
        };
        out.push(ArrivalAnalysis { max_alpha, opt_load: opt });
    }
    Ok(out)
}

// ---------------------------------------------------------------- bounds

fn ln(n: usize) -> f64 {
    (n as f64).ln()
}

/// `value <= bound`, with a little upward slack for floating-point rounding.
pub fn within(value: f64, bound: f64) -> bool {
    value <= bound + 1e-9 * bound.abs().max(1.0)
}

/// `4 n ln n / h`: allowed number of augmenting paths longer than `h`.
pub fn long_path_bound(n: usize, h: usize) -> f64 {
    4.0 * n as f64 * ln(n) / h as f64
}

/// `8 n ln n (⌊log₂ n⌋ + 2)`: allowed total path length of a run.
pub fn total_edges_bound(n: usize) -> f64 {
    8.0 * n as f64 * ln(n) * (n.max(1).ilog2() as f64 + 2.0)
}

/// `(2 / ε) ln |C_M|`.
pub fn expansion_bound(epsilon: Rational, c_m: usize) -> f64 {
    2.0 / epsilon.to_f64().expect("finite") * ln(c_m)
}

/// `(2 / ε) ln |C_M| + 2`: the tail bound once the first layer of the
/// expansion argument is counted.
pub fn expansion_bound_plus_two(epsilon: Rational, c_m: usize) -> f64 {
    expansion_bound(epsilon, c_m) + 2.0
}

/// `2 ((1 + ε) / ε) ln n`.
pub fn semi_path_bound(epsilon: Rational, n: usize) -> f64 {
    let e = epsilon.to_f64().expect("finite");
    2.0 * (1.0 + e) / e * ln(n)
}

/// `32 n min(L ln² n, √n ln n)`.
pub fn minmax_bound(n: usize, l: usize) -> f64 {
    let a = l as f64 * ln(n) * ln(n);
    let b = (n as f64).sqrt() * ln(n);
    32.0 * n as f64 * a.min(b)
}

/// Checks the long-path inequality for `h = 1, 2, 4, ..., ≤ 2n`.
pub fn check_long_paths(log: &RunLog, n: usize) -> std::result::Result<(), String> {
    if n < 2 {
        return Ok(());
    }
    let mut h = 1;
    while h <= 2 * n {
        let count = log.paths_longer_than(h);
        if !within(count as f64, long_path_bound(n, h)) {
            return Err(format!("{count} paths longer than {h} exceed {:.3}", long_path_bound(n, h)));
        }
        h *= 2;
    }
    Ok(())
}

pub fn check_total_edges(log: &RunLog, n: usize) -> std::result::Result<(), String> {
    if n < 2 {
        return Ok(());
    }
    let total = log.cum_path_edges();
    if within(total as f64, total_edges_bound(n)) {
        Ok(())
    } else {
        Err(format!("total path edges {total} exceed {:.3}", total_edges_bound(n)))
    }
}

// ---------------------------------------------------------------- replays

/// One matched-or-saturated server observed during an expansion replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailSample {
    pub arrival: usize,
    pub server: usize,
    pub alpha_m: Rational,
    pub c_m: usize,
    pub tail: Option<usize>,
}

impl TailSample {
    pub fn epsilon(&self) -> Rational {
        Rational::one() - self.alpha_m
    }
}

/// Runs SAP and, after every arrival, measures the shortest augmenting tail
/// of every server with `α_M(s) < 1`.
pub fn expansion_samples(instance: &ArrivalInstance) -> Result<Vec<TailSample>> {
    let mut state = MatchState::for_instance(instance);
    let mut log = RunLog::new();
    let mut members = Vec::new();
    let mut samples = Vec::new();
    for t in 0..instance.client_count() {
        if sap_step(&mut state, instance, &mut log)?.is_some() {
            members.push(t);
        }
        if members.is_empty() {
            continue;
        }
        let alpha_m = balanced_flow(&instance.graph().restrict_clients(&members))?.alpha;
        let snap = state.snapshot(instance);
        for (s, &a) in alpha_m.iter().enumerate() {
            if a < Rational::one() {
                samples.push(TailSample {
                    arrival: t,
                    server: s,
                    alpha_m: a,
                    c_m: members.len(),
                    tail: oracle_shortest_tail(&snap, s),
                });
            }
        }
    }
    Ok(samples)
}

/// Balanced-flow loads after every arrival, ignoring clients without
/// neighbors.
pub fn alpha_history(instance: &ArrivalInstance) -> Result<Vec<Vec<Rational>>> {
    (1..=instance.client_count())
        .map(|t| {
            let (graph, _) = instance.prefix(t).without_isolated();
            if graph.client_count() == 0 {
                Ok(vec![Rational::zero(); instance.server_count()])
            } else {
                Ok(balanced_flow(&graph)?.alpha)
            }
        })
        .collect()
}

/// Loads never drop, and an arrival leaves alone every server whose load
/// was below the smallest load among the new client's neighbors.
pub fn check_monotone_local(instance: &ArrivalInstance, history: &[Vec<Rational>]) -> std::result::Result<(), String> {
    let zero = vec![Rational::zero(); instance.server_count()];
    for t in 0..history.len() {
        let old = if t == 0 { &zero } else { &history[t - 1] };
        let new = &history[t];
        for s in 0..old.len() {
            if new[s] < old[s] {
                return Err(format!("arrival {t}: load of server {s} fell from {} to {}", old[s], new[s]));
            }
        }
        let Some(floor) = instance.neighbors(t).iter().map(|&s| old[s]).min() else {
            if new != old {
                return Err(format!("arrival {t} has no neighbors but changed loads"));
            }
            continue;
        };
        for s in 0..old.len() {
            if old[s] < floor && new[s] != old[s] {
                return Err(format!("arrival {t}: server {s} below {floor} moved from {} to {}", old[s], new[s]));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub skipped: bool,
    pub detail: String,
}

impl Check {
    fn from_result(name: &str, r: std::result::Result<String, String>) -> Self {
        match r {
            Ok(detail) => Check { name: name.into(), passed: true, skipped: false, detail },
            Err(detail) => Check { name: name.into(), passed: false, skipped: false, detail },
        }
    }

    fn skipped(name: &str, detail: String) -> Self {
        Check { name: name.into(), passed: true, skipped: true, detail }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match (c.skipped, c.passed) {
                (true, _) => "SKIP",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn matching_sizes_match(instance: &ArrivalInstance, log: &RunLog) -> std::result::Result<String, String> {
    let mut matched = 0;
    for (t, r) in log.records().iter().enumerate() {
        matched += usize::from(r.matched);
        let best = hopcroft_karp_size(&instance.prefix(t + 1));
        if matched != best {
            return Err(format!("after arrival {t}: matched {matched}, maximum {best}"));
        }
    }
    Ok(format!("{} prefixes", log.len()))
}

fn fast_paths_match(instance: &ArrivalInstance, validation: ValidationMode) -> Result<std::result::Result<String, String>> {
    let mut engine = FastSap::new(instance, None, validation)?;
    for t in 0..instance.client_count() {
        let path = engine.arrival_step()?;
        let snap = engine.state().snapshot(instance);
        let want = oracle_shortest_aug_path(&snap, t);
        let got = path.as_ref().map(|p| p.edge_count());
        if got != want {
            return Ok(Err(format!("arrival {t}: engine {got:?}, oracle {want:?}")));
        }
        if let Some(p) = path {
            engine.apply_augment(&p)?;
        }
    }
    engine.validate()?;
    Ok(Ok(format!("h={}", engine.depth_limit())))
}

fn verify_capacitated(instance: &ArrivalInstance) -> Result<Report> {
    let (state, log) = run_capacitated(instance)?;
    let caps: Vec<usize> = (0..instance.server_count()).map(|s| instance.capacity(s)).collect();
    let map = crate::extensions::CopyMap::new(&caps)?;
    let best = hopcroft_karp_size(&map.expand_graph(&instance.graph()));
    let n = instance.client_count();
    Ok(Report {
        checks: vec![
            Check::from_result(
                "capacitated coverage",
                if state.matched_count() == best {
                    Ok(format!("{best} clients placed"))
                } else {
                    Err(format!("placed {}, possible {best}", state.matched_count()))
                },
            ),
            Check::from_result("long-path bound", check_long_paths(&log, n).map(|_| format!("n={n}"))),
        ],
    })
}

/// Runs every applicable invariant check on one instance.
pub fn verify_instance(instance: &ArrivalInstance, analyze: bool) -> Result<Report> {
    if !instance.has_unit_capacities() {
        return verify_capacitated(instance);
    }
    let n = instance.client_count();
    let mut checks = Vec::new();
    let (_, naive) = run_sap(instance)?;
    let (_, fast) = run_fast_sap_with(instance, None, ValidationMode::default())?;
    checks.push(Check::from_result("maximum matching (naive)", matching_sizes_match(instance, &naive)));
    checks.push(Check::from_result("maximum matching (fast)", matching_sizes_match(instance, &fast)));
    checks.push(Check::from_result(
        "fast path lengths",
        fast_paths_match(instance, ValidationMode::default())?,
    ));
    checks.push(Check::from_result("long-path bound", check_long_paths(&naive, n).map(|_| format!("n={n}"))));
    checks.push(Check::from_result(
        "total path edges",
        check_total_edges(&naive, n).map(|_| format!("{} edges", naive.cum_path_edges())),
    ));

    if !analyze {
        return Ok(Report { checks });
    }
    if let Some(c) = (0..n).find(|&c| instance.neighbors(c).is_empty()) {
        checks.push(Check::skipped(
            "flow checks",
            format!("client {c} has no neighbors, balanced-flow checks skipped"),
        ));
        return Ok(Report { checks });
    }

    let history = alpha_history(instance)?;
    let mut flow_check = Ok(format!("{n} prefixes"));
    for t in 1..=n {
        let graph = instance.prefix(t);
        let flow = balanced_flow(&graph)?;
        if let Err(e) = flow.check_invariants(&graph) {
            flow_check = Err(format!("prefix {t}: {e}"));
            break;
        }
        if t <= 16 && oracle_balanced_flow(&graph) != flow.alpha {
            flow_check = Err(format!("prefix {t}: loads differ from the subset oracle"));
            break;
        }
    }
    checks.push(Check::from_result("balanced flow", flow_check));
    checks.push(Check::from_result(
        "load monotonicity and locality",
        check_monotone_local(instance, &history).map(|_| "ok".into()),
    ));

    let samples = expansion_samples(instance)?;
    let bad = samples.iter().find(|s| match s.tail {
        None => true,
        Some(len) => !within(len as f64, expansion_bound_plus_two(s.epsilon(), s.c_m)),
    });
    checks.push(Check::from_result(
        "expansion tails (2/eps ln|C_M| + 2)",
        match bad {
            None => Ok(format!("{} samples", samples.len())),
            Some(s) => Err(format!(
                "arrival {} server {}: tail {:?} with alpha_M {} and |C_M| {}",
                s.arrival, s.server, s.tail, s.alpha_m, s.c_m
            )),
        },
    ));
    Ok(Report { checks })
}

/// The built-in corpus behind `verify --suite small`.
pub fn small_suite() -> Result<Vec<(String, ArrivalInstance)>> {
    let mut suite = vec![
        ("complete-4x4".to_string(), gen_complete(4, 4)?),
        ("complete-10x20".to_string(), gen_complete(10, 20)?),
        ("star-3".to_string(), ArrivalInstance::new(1, vec![vec![0]; 3])?),
        ("star-chain-4".to_string(), gen_star_chain(4)?),
        ("adversary-4".to_string(), gen_minmax_adversary(4)?),
        (
            "saturated".to_string(),
            ArrivalInstance::new(3, vec![vec![0], vec![0], vec![1, 2], vec![0], vec![2]])?,
        ),
        ("isolated-client".to_string(), ArrivalInstance::new(2, vec![vec![0], vec![], vec![0, 1]])?),
    ];
    for seed in 0..8 {
        suite.push((format!("random-{seed}"), gen_random_degrees(6, 12, 1, 3, seed)?));
    }
    Ok(suite)
}

// ---------------------------------------------------------------- bench

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub total_replacements: u64,
    pub total_path_edges: u64,
    pub n_ln2_n: f64,
}

/// Random instances with `n` clients and `n` servers of fixed degree, one per
/// `(size, seed)` cell, run with the fast engine. Rows come back in
/// `(size, seed)` order.
pub fn bench(sizes: &[usize], seeds: u64, degree: usize) -> Result<Vec<BenchRow>> {
    let cells: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&n| (0..seeds).map(move |seed| (n, seed)))
        .collect();
    let rows: Vec<BenchRow> = cells
        .par_iter()
        .map(|&(n, seed)| {
            let inst = gen_random(n, n, degree.min(n), seed)?;
            let (_, log) = run_fast_sap_with(&inst, None, ValidationMode::Sampled(64))?;
            check_total_edges(&log, n).map_err(Error::Invariant)?;
            Ok(BenchRow {
                n,
                seed,
                total_replacements: log.cum_replacements(),
                total_path_edges: log.cum_path_edges(),
                n_ln2_n: n as f64 * ln(n) * ln(n),
            })
        })
        .collect::<Result<_>>()?;
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "total_replacements", "total_path_edges", "n_ln2_n"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.total_replacements.to_string(),
            r.total_path_edges.to_string(),
            format!("{:.6}", r.n_ln2_n),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_names_round_trip() {
        for e in Engine::ALL {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
        }
        assert!("nope".parse::<Engine>().is_err());
    }

    #[test]
    fn run_rejects_mismatched_flags() {
        let inst = gen_complete(2, 2).unwrap();
        let opts = RunOptions { epsilon: Some(Rational::one()), ..RunOptions::default() };
        assert!(run(&inst, &opts).is_err());
        let capped = inst.clone().with_capacities(vec![2, 2]).unwrap();
        assert!(run(&capped, &RunOptions::default()).is_err());
    }

    #[test]
    fn naive_complete_has_no_replacements() {
        let out = run(&gen_complete(10, 10).unwrap(), &RunOptions { analyze: true, ..RunOptions::default() }).unwrap();
        assert_eq!(out.log.cum_replacements(), 0);
        let a = out.analysis.unwrap();
        assert_eq!(a.last().unwrap().max_alpha, Rational::one());
        assert_eq!(a.last().unwrap().opt_load, 1);
    }

    #[test]
    fn bounds() {
        assert!((long_path_bound(2, 1) - 8.0 * 2f64.ln()).abs() < 1e-12);
        assert_eq!(expansion_bound(Rational::new(1, 2), 1), 0.0);
        assert!(within(1.0, 1.0));
        assert!(!within(1.1, 1.0));
    }

    #[test]
    fn small_suite_passes() {
        for (name, inst) in small_suite().unwrap() {
            let report = verify_instance(&inst, true).unwrap();
            assert!(report.all_passed(), "{name}:\n{report}");
        }
    }

    #[test]
    fn bench_rows_in_order() {
        let rows = bench(&[16, 8], 2, 3).unwrap();
        let keys: Vec<(usize, u64)> = rows.iter().map(|r| (r.n, r.seed)).collect();
        assert_eq!(keys, vec![(16, 0), (16, 1), (8, 0), (8, 1)]);
        let mut buf = Vec::new();
        write_bench_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("n,total_replacements,total_path_edges,n_ln2_n\n"));
    }
}
