//! Text format round trips.

use online_sap::io::{parse_instance, parse_rational, write_instance};
use online_sap::{ArrivalInstance, Rational};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = ArrivalInstance> {
    (1usize..8, 0usize..12, any::<bool>()).prop_flat_map(|(ns, nc, capped)| {
        (
            proptest::collection::vec(proptest::collection::btree_set(0..ns, 0..=ns), nc),
            proptest::collection::vec(1usize..5, ns),
        )
            .prop_map(move |(sets, caps)| {
                let inst = ArrivalInstance::new(ns, sets.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap();
                if capped {
                    inst.with_capacities(caps).unwrap()
                } else {
                    inst
                }
            })
    })
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(inst in instance()) {
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(write_instance(&back), text);
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn fractions_parse_exactly(num in -1000i64..1000, den in 1i64..1000) {
        let r = Rational::new(num, den);
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn garbage_never_panics(text in "[a-z0-9 #\n]{0,80}") {
        let _ = parse_instance(&text);
    }
}
