use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rbmltt::bound::{bound_leq, BoundExpr, SizeEnv};
use rbmltt::harness::algebra::random_bound;
use rbmltt::lattice::{ExtNat, Lattice};

fn extnat() -> impl Strategy<Value = ExtNat> {
    prop_oneof![
        1 => Just(ExtNat::Inf),
        6 => (0u64..1000).prop_map(ExtNat::Fin),
    ]
}

fn bound(vars: usize) -> impl Strategy<Value = BoundExpr> {
    any::<u64>().prop_map(move |seed| random_bound(&mut ChaCha8Rng::seed_from_u64(seed), vars, 3))
}

fn env(vars: usize) -> impl Strategy<Value = SizeEnv> {
    proptest::collection::vec(0u64..40, vars).prop_map(|vals| {
        let mut e = SizeEnv::new();
        for (i, v) in vals.into_iter().enumerate() {
            e.set(i, v);
        }
        e
    })
}

proptest! {
    #[test]
    fn extnat_text_roundtrip(a in extnat()) {
        prop_assert_eq!(a.to_string().parse::<ExtNat>().unwrap(), a);
    }

    #[test]
    fn nfold_is_scaling(a in 0u64..1000, n in 0u64..50) {
        prop_assert_eq!(ExtNat::Fin(a).nfold(n), ExtNat::Fin(a * n));
        prop_assert_eq!(ExtNat::Inf.nfold(n), if n == 0 { ExtNat::ZERO } else { ExtNat::Inf });
    }

    #[test]
    fn combine_distributes_over_join(a in extnat(), b in extnat(), c in extnat()) {
        prop_assert_eq!(a.combine(&b.join(&c)), a.combine(&b).join(&a.combine(&c)));
    }

    #[test]
    fn plus_and_join_commute_in_normal_form(a in bound(2), b in bound(2)) {
        prop_assert_eq!(
            BoundExpr::plus(a.clone(), b.clone()).normalize(),
            BoundExpr::plus(b.clone(), a.clone()).normalize()
        );
        prop_assert_eq!(
            BoundExpr::join(a.clone(), b.clone()).normalize(),
            BoundExpr::join(b, a).normalize()
        );
    }

    #[test]
    fn join_dominates_pointwise(a in bound(2), b in bound(2), e in env(2)) {
        let j = BoundExpr::join(a.clone(), b).eval(&e).unwrap();
        prop_assert!(a.eval(&e).unwrap() <= j);
    }

    #[test]
    fn dominance_is_reflexive(a in bound(2)) {
        let v = bound_leq(&a, &a, 16);
        prop_assert!(v.accepts(), "{v}");
    }

    #[test]
    fn adding_slack_is_accepted(a in bound(2), b in bound(2)) {
        let v = bound_leq(&a, &BoundExpr::plus(a.clone(), b), 16);
        prop_assert!(v.accepts(), "{v}");
    }

    #[test]
    fn refutation_witness_is_genuine(a in bound(1), b in bound(1)) {
        let v = bound_leq(&a, &b, 16);
        if v.is_refuted() {
            let e = v.witness_env().unwrap_or_default();
            prop_assert!(a.eval(&e).unwrap() > b.eval(&e).unwrap(), "{v}");
        }
    }
}
