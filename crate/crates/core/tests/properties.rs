//! Randomized invariants for the exact arithmetic and lattice layers.

use proptest::prelude::*;

use redideal::classifier::classify;
use redideal::field::{FieldCtx, Int, QElem, Rat};
use redideal::ideal::{enumerate_reduced, normalize_module, CanonicalForm, IdealForm};
use redideal::lattice::{brute_shortest, shortest_vector, sqlen, Metric};
use redideal::pi::below_pi_threshold;
use redideal::sweep::valid_discs;

fn discs() -> Vec<i64> {
    valid_discs(5, 500, false)
}

prop_compose! {
    fn arb_ctx()(idx in 0usize..discs().len()) -> FieldCtx {
        FieldCtx::new(discs()[idx]).unwrap()
    }
}

prop_compose! {
    fn arb_elem()(ctx in arb_ctx(), p in -30i64..=30, q in -30i64..=30, r in 1i64..=12) -> QElem {
        ctx.elem(p, q, r)
    }
}

prop_compose! {
    fn arb_pair()(ctx in arb_ctx(),
                  p1 in -30i64..=30, q1 in -30i64..=30, r1 in 1i64..=12,
                  p2 in -30i64..=30, q2 in -30i64..=30, r2 in 1i64..=12)
                 -> (QElem, QElem) {
        (ctx.elem(p1, q1, r1), ctx.elem(p2, q2, r2))
    }
}

prop_compose! {
    fn arb_ideal()(ctx in arb_ctx())(idx in 0usize..enumerate_reduced(&ctx).len(),
                                     ctx in Just(ctx))
                  -> IdealForm {
        enumerate_reduced(&ctx).swap_remove(idx)
    }
}

prop_compose! {
    fn arb_metric()(sn in 1i64..=64, sd in 1i64..=64, wn in 1i64..=64, wd in 1i64..=64)
                   -> Metric {
        Metric::rational(Rat::new(sn.into(), sd.into()), Rat::new(wn.into(), wd.into())).unwrap()
    }
}

proptest! {
    #[test]
    fn norm_is_multiplicative((x, y) in arb_pair()) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn trace_is_additive((x, y) in arb_pair()) {
        prop_assert_eq!((&x + &y).trace(), x.trace() + y.trace());
    }

    #[test]
    fn conjugation_involution_and_norm(x in arb_elem()) {
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &x.conj()).as_rat(), Some(x.norm()));
    }

    #[test]
    fn sign_is_antisymmetric(x in arb_elem()) {
        prop_assert_eq!((-&x).signum(), -x.signum());
        prop_assert_eq!(x.signum() == 0, x.is_zero());
    }

    #[test]
    fn floor_brackets(x in arb_elem()) {
        let fl = x.floor();
        let lo = x.ctx().from_int(fl.clone());
        let hi = x.ctx().from_int(fl + 1);
        prop_assert!(lo <= x && x < hi);
    }

    #[test]
    fn round_within_half(x in arb_elem()) {
        let r = x.ctx().from_int(x.round_nearest());
        let d = &x - &r;
        let half = x.ctx().from_rat(&Rat::new(1.into(), 2.into()));
        prop_assert!(-&half <= d && d <= half);
    }

    #[test]
    fn inverse_multiplies_to_one(x in arb_elem()) {
        if !x.is_zero() {
            let inv = x.inv().unwrap();
            prop_assert_eq!(&x * &inv, x.ctx().one());
        }
    }

    #[test]
    fn ordering_is_trichotomous((x, y) in arb_pair()) {
        let lt = x < y;
        let eq = x == y;
        let gt = x > y;
        prop_assert_eq!(u8::from(lt) + u8::from(eq) + u8::from(gt), 1);
    }

    #[test]
    fn threshold_is_monotone(n1 in 0i64..=2000, n2 in 0i64..=2000) {
        let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
        let lo = Rat::new(lo.into(), Int::from(256));
        let hi = Rat::new(hi.into(), Int::from(256));
        if below_pi_threshold(&hi) {
            prop_assert!(below_pi_threshold(&lo));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_matches_brute_force(ideal in arb_ideal(), u in arb_metric()) {
        let m = ideal.module();
        let fast = shortest_vector(&m, &u).unwrap();
        let brute = brute_shortest(&m, &u, 25).unwrap();
        prop_assert_eq!(sqlen(&fast, &u), sqlen(&brute, &u));
    }

    #[test]
    fn metric_scaling_is_isometric_up_to_factor(x in arb_elem(), u in arb_metric(),
                                                c in 1i64..=16) {
        let t = Rat::from_integer(Int::from(c));
        let scaled = match &u {
            Metric::RationalSquares { s, w } =>
                Metric::rational(s * &t, w * &t).unwrap(),
            _ => unreachable!(),
        };
        let lhs = sqlen(&x, &scaled);
        let rhs = &x.ctx().from_rat(&t) * &sqlen(&x, &u);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_recovers_ideal_up_to_rational_scale(ideal in arb_ideal(),
                                                     tn in 1i64..=20, td in 1i64..=20) {
        let t = Rat::new(Int::from(tn), Int::from(td));
        let m = ideal.module().scale(&ideal.ctx().from_rat(&t)).unwrap();
        let (scale, form) = normalize_module(&m).unwrap();
        prop_assert_eq!(scale, t);
        match form {
            CanonicalForm::Ideal(out) => prop_assert_eq!(out, ideal),
            CanonicalForm::Raw(_) => prop_assert!(false, "expected ideal form"),
        }
    }

    #[test]
    fn classification_is_consistent(ideal in arb_ideal()) {
        let rec = classify(&ideal).unwrap();
        prop_assert!(rec.methods_agree);
        prop_assert_eq!(rec.witness_ratio.is_some(),
                        rec.one_reduced() && !rec.boundary);
    }
}
