//! Cross-checks between the engines and the brute-force oracles.

mod common;

use common::oracle_opt;
use online_sap::extensions::{run_capacitated, run_minmax, run_semi_matching, CopyMap};
use online_sap::fast::{FastSap, ValidationMode};
use online_sap::oracles::{hopcroft_karp_size, oracle_shortest_aug_path};
use online_sap::{run_sap, ArrivalInstance, Rational};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = ArrivalInstance> {
    (1usize..7, 1usize..14).prop_flat_map(|(ns, nc)| {
        proptest::collection::vec(proptest::collection::btree_set(0..ns, 0..=ns.min(3)), nc).prop_map(
            move |sets| ArrivalInstance::new(ns, sets.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn naive_paths_are_shortest_and_maximum(inst in instance()) {
        let (state, log) = run_sap(&inst).unwrap();
        state.check_consistency().unwrap();
        log.check_consistency().unwrap();
        prop_assert_eq!(state.matched_count(), hopcroft_karp_size(&inst.graph()));
    }

    #[test]
    fn fast_engine_matches_oracle_for_any_depth(inst in instance(), h in 1usize..6) {
        let mut engine = FastSap::new(&inst, Some(h), ValidationMode::Every).unwrap();
        for t in 0..inst.client_count() {
            let path = engine.arrival_step().unwrap();
            let want = oracle_shortest_aug_path(&engine.state().snapshot(&inst), t);
            prop_assert_eq!(path.as_ref().map(|p| p.edge_count()), want);
            if let Some(p) = path {
                engine.apply_augment(&p).unwrap();
            }
            engine.validate().unwrap();
        }
        let (state, _) = engine.finish();
        prop_assert_eq!(state.matched_count(), hopcroft_karp_size(&inst.graph()));
    }

    #[test]
    fn capacitated_placement_is_maximum(inst in instance(), seed in 0usize..100) {
        let caps: Vec<usize> = (0..inst.server_count()).map(|s| 1 + (s + seed) % 3).collect();
        let capped = inst.clone().with_capacities(caps.clone()).unwrap();
        let (state, _) = run_capacitated(&capped).unwrap();
        let expanded = CopyMap::new(&caps).unwrap().expand_graph(&inst.graph());
        prop_assert_eq!(state.matched_count(), hopcroft_karp_size(&expanded));
        for (s, &cap) in caps.iter().enumerate() {
            prop_assert!(state.load(s) <= cap);
        }
    }

    #[test]
    fn minmax_tracks_optimum(inst in instance()) {
        let run = run_minmax(&inst).unwrap();
        for t in 0..inst.client_count() {
            prop_assert_eq!(run.opt_history[t], oracle_opt(&inst.prefix(t + 1)));
        }
        prop_assert_eq!(run.state.max_load(), oracle_opt(&inst.graph()));
    }

    #[test]
    fn semi_matching_places_every_client(inst in instance()) {
        let degrees_ok = inst.arrivals().iter().all(|n| !n.is_empty());
        let run = run_semi_matching(&inst, Rational::new(1, 2));
        prop_assert_eq!(run.is_ok(), degrees_ok);
        if let Ok(run) = run {
            prop_assert_eq!(run.state.matched_count(), inst.client_count());
        }
    }
}
