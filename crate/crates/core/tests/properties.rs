mod common;

use nilcohom::GR;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = GR> {
    (-2i64..=2, -1i64..=1, 1i64..=2).prop_map(|(a, b, d)| GR::from_ratios(a, d, b, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structural_identities_hold(k in proptest::array::uniform6(coeff())) {
        if let Ok(s) = common::two_step(&k) {
            let bad = common::property_violations(&s);
            prop_assert!(bad.is_empty(), "{:?}", bad);
        }
    }
}

#[test]
fn corpus_structures_satisfy_identities() {
    for s in common::corpus_structures() {
        assert!(common::property_violations(&s).is_empty(), "{}", s.name);
    }
}
