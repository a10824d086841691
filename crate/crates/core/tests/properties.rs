mod common;

use ccei_core::afriat::AfriatUtility;
use ccei_core::oracle::ordinal_levels;
use ccei_core::scalar::ratio;
use ccei_core::{
    ccei_binary_search, ccei_exact, ccei_oracle, check_e_garp, cross_expenditures, direct_relations,
    garp_oracle, ordinal_oracle, solve_afriat, Afriat, EfficiencyVector, Exact,
};
use common::{arb_dataset, arb_dataset_with_e};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lowering_efficiency_preserves_consistency((d, e) in arb_dataset_with_e(6, 3), shrink in 1i64..=1000) {
        let lower = EfficiencyVector::new(
            e.values().iter().map(|v| v.clone() * ratio(shrink, 1000)).collect()
        ).unwrap();
        if check_e_garp(&d, &e).unwrap().holds {
            prop_assert!(check_e_garp(&d, &lower).unwrap().holds);
        }
    }

    #[test]
    fn witnesses_revalidate((d, e) in arb_dataset_with_e(7, 3)) {
        let v = check_e_garp(&d, &e).unwrap();
        let rel = direct_relations(&d, &e).unwrap();
        match v.witness {
            Some(w) => {
                prop_assert!(!v.holds);
                prop_assert!(w.is_valid_for(&rel));
            }
            None => prop_assert!(v.holds),
        }
    }

    #[test]
    fn relations_respect_strictness_and_self_loops((d, e) in arb_dataset_with_e(6, 3)) {
        let rel = direct_relations(&d, &e).unwrap();
        for t in 0..d.observations() {
            prop_assert_eq!(rel.weak.get(t, t), *e.get(t) == ratio(1, 1));
            prop_assert!(!rel.strict.get(t, t));
            for s in 0..d.observations() {
                prop_assert!(!rel.strict.get(t, s) || rel.weak.get(t, s));
            }
        }
    }

    #[test]
    fn relabeling_permutes_relations((d, e) in arb_dataset_with_e(6, 3), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let n = d.observations();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let pd = d.permuted(&order);
        let pe = EfficiencyVector::new(order.iter().map(|&t| e.get(t).clone()).collect()).unwrap();
        let (rel, prel) = (direct_relations(&d, &e).unwrap(), direct_relations(&pd, &pe).unwrap());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(prel.weak.get(i, j), rel.weak.get(order[i], order[j]));
                prop_assert_eq!(prel.strict.get(i, j), rel.strict.get(order[i], order[j]));
                prop_assert_eq!(prel.closure.get(i, j), rel.closure.get(order[i], order[j]));
            }
        }
        prop_assert_eq!(check_e_garp(&d, &e).unwrap().holds, check_e_garp(&pd, &pe).unwrap().holds);
    }

    #[test]
    fn price_scaling_changes_nothing((d, e) in arb_dataset_with_e(6, 3), num in 1i64..500, den in 1i64..500) {
        let t = d.observations() - 1;
        let scaled = d.with_scaled_prices(t, &ratio(num, den));
        prop_assert_eq!(direct_relations(&d, &e).unwrap(), direct_relations(&scaled, &e).unwrap());
        let (c, cs) = (cross_expenditures(&d), cross_expenditures(&scaled));
        for a in 0..d.observations() {
            for b in 0..d.observations() {
                prop_assert_eq!(c.ratio(a, b), cs.ratio(a, b));
            }
        }
    }

    #[test]
    fn production_and_oracles_agree((d, e) in arb_dataset_with_e(6, 3)) {
        let fast = check_e_garp(&d, &e).unwrap();
        let slow = garp_oracle(&d, &e).unwrap();
        prop_assert_eq!(fast.holds, slow.garp_holds);
        if let Some(w) = fast.witness {
            let shortest = slow.violating_cycles.iter().map(Vec::len).min().unwrap();
            prop_assert_eq!(w.indices.len(), shortest);
        }
        prop_assert_eq!(slow.garp_holds, ordinal_oracle(&d, &e).unwrap());
        prop_assert_eq!(ccei_exact(&d).value, ccei_oracle(&d).unwrap());
    }

    #[test]
    fn ordinal_levels_respect_the_relations((d, e) in arb_dataset_with_e(6, 3)) {
        if let Some(u) = ordinal_levels(&d, &e).unwrap() {
            let rel = direct_relations(&d, &e).unwrap();
            for t in 0..d.observations() {
                for s in 0..d.observations() {
                    if rel.weak.get(t, s) { prop_assert!(u[t] >= u[s]); }
                    if rel.strict.get(t, s) { prop_assert!(u[t] > u[s]); }
                }
            }
        }
    }

    #[test]
    fn bisection_tracks_exact_index(d in arb_dataset(6, 3)) {
        let exact = ccei_exact(&d).value;
        let tol = 1e-6;
        let float_est = ccei_binary_search(&d.to_f64(), &tol).unwrap();
        prop_assert!((float_est - exact.to_f64_lossy()).abs() <= tol);
        let exact_est = ccei_binary_search(&d, &ratio(1, 1_000_000)).unwrap();
        prop_assert!((exact_est - &exact).abs_le(&ratio(1, 1_000_000)));
    }

    #[test]
    fn index_is_the_supremum(d in arb_dataset(7, 3)) {
        let r = ccei_exact(&d);
        prop_assert!(r.value > ratio(0, 1) && r.value <= ratio(1, 1));
        let n = d.observations();
        let at = |e: &Exact| check_e_garp(&d, &EfficiencyVector::uniform(e.clone(), n).unwrap()).unwrap().holds;
        prop_assert_eq!(at(&r.value), r.attained);
        prop_assert_eq!(r.value == ratio(1, 1), at(&ratio(1, 1)));
        // Passing just below the index.
        let below = r.breakpoints.iter().rev().find(|c| **c < r.value).cloned().unwrap_or_else(|| ratio(0, 1));
        prop_assert!(at(&((below + &r.value) / ratio(2, 1))));
        if let (Some(p), Some(w)) = (&r.probe_above, &r.witness_above) {
            prop_assert!(!at(p));
            let rel = direct_relations(&d, &EfficiencyVector::uniform(p.clone(), n).unwrap()).unwrap();
            prop_assert!(w.is_valid_for(&rel));
        } else {
            prop_assert_eq!(r.value.clone(), ratio(1, 1));
        }
    }

    #[test]
    fn afriat_solutions_exist_exactly_under_e_garp((d, e) in arb_dataset_with_e(8, 4)) {
        let holds = check_e_garp(&d, &e).unwrap().holds;
        match solve_afriat(&d, &e).unwrap() {
            Afriat::Solved(sol) => {
                prop_assert!(holds);
                sol.verify(&cross_expenditures(&d)).unwrap();
            }
            Afriat::Infeasible(w) => {
                prop_assert!(!holds);
                prop_assert!(w.is_valid_for(&direct_relations(&d, &e).unwrap()));
            }
        }
    }

    #[test]
    fn afriat_utility_bounds_each_budget((d, e) in arb_dataset_with_e(6, 3), shares in prop::collection::vec(0u32..=100, 3)) {
        if let Afriat::Solved(sol) = solve_afriat(&d, &e).unwrap() {
            let u = AfriatUtility::new(&sol, &d);
            for t in 0..d.observations() {
                let ut = u.evaluate(d.bundle(t)).unwrap();
                prop_assert!(ut >= sol.phi[t]);
                // A rational point on or inside the deflated budget.
                let budget = e.get(t).clone() * d.expenditure(t);
                let l = d.goods();
                let total: u32 = shares.iter().take(l).sum::<u32>().max(1);
                let x: Vec<Exact> = (0..l)
                    .map(|i| {
                        let share = ratio(i64::from(*shares.get(i).unwrap_or(&0)), i64::from(total));
                        share * &budget / &d.price(t)[i]
                    })
                    .collect();
                prop_assert!(d.cost_at(t, &x) <= budget);
                prop_assert!(u.evaluate(&x).unwrap() <= ut);
            }
        }
    }
}

trait ExactExt {
    fn to_f64_lossy(&self) -> f64;
    fn abs_le(&self, bound: &Exact) -> bool;
}

impl ExactExt for Exact {
    fn to_f64_lossy(&self) -> f64 {
        ccei_core::Scalar::to_f64(self)
    }

    fn abs_le(&self, bound: &Exact) -> bool {
        use num_traits::Signed;
        self.abs() <= *bound
    }
}
