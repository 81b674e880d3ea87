use interdict::{
    min_attack_weight, phi, phi_enum, phi_lambda_lp, solve_dp, solve_enum, AttackWeight, Instance, Selection,
};
use proptest::prelude::*;

fn instance(max_n: usize) -> impl Strategy<Value = (Instance, Vec<bool>)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(1u64..=30, n),
            prop::collection::vec(1u64..=30, n),
            0u64..=60,
            1..=n,
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(c, w, b, p, x)| (Instance::new(c, w, b, p).unwrap(), x))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn greedy_attack_is_optimal((inst, bits) in instance(12)) {
        let x = Selection::new(&inst, bits).unwrap();
        let g = phi(&inst, &x).unwrap();
        let e = phi_enum(&inst, &x).unwrap();
        prop_assert_eq!(g.value, e.value);
        prop_assert!(g.spent <= inst.budget());
        prop_assert!(g.attacked.iter().all(|&i| x.is_chosen(i)));
    }

    #[test]
    fn relaxed_attack_program_is_exact((inst, bits) in instance(10)) {
        prop_assume!(inst.all_attackable());
        let x = Selection::new(&inst, bits).unwrap();
        let lp: f64 = phi_lambda_lp(&inst, &x).unwrap();
        prop_assert!((lp - phi(&inst, &x).unwrap().value as f64).abs() <= 1e-7);
    }

    #[test]
    fn attack_grows_with_selection((inst, bits) in instance(12), extra in 0usize..12) {
        let x = Selection::new(&inst, bits.clone()).unwrap();
        let mut more = bits;
        let j = extra % inst.n();
        more[j] = true;
        let y = Selection::new(&inst, more).unwrap();
        let (a, b) = (phi(&inst, &x).unwrap().value, phi(&inst, &y).unwrap().value);
        prop_assert!(a <= b && b <= a + 1);
    }

    #[test]
    fn attack_weights_are_monotone((inst, bits) in instance(12)) {
        let x = Selection::new(&inst, bits).unwrap();
        let mut prev = AttackWeight::Finite(0);
        for k in 1..=inst.n() {
            let w = min_attack_weight(&inst, &x, k).unwrap();
            prop_assert!(w >= prev);
            prop_assert_eq!(w == AttackWeight::Infinite, k > x.size());
            prev = w;
        }
    }

    #[test]
    fn dp_matches_enumeration((inst, _) in instance(11)) {
        let d = solve_dp(&inst).unwrap();
        let e = solve_enum(&inst).unwrap();
        prop_assert_eq!(d.status, e.status);
        prop_assert_eq!(d.objective, e.objective);
    }

    #[test]
    fn optimum_monotone_in_budget_and_p((inst, _) in instance(9)) {
        let base = solve_dp(&inst).unwrap().objective;
        let richer = Instance::new(inst.costs().to_vec(), inst.weights().to_vec(), inst.budget() + 1, inst.p()).unwrap();
        let up = solve_dp(&richer).unwrap().objective;
        // None is infeasible, which ranks above every cost
        let le = |a: Option<u64>, b: Option<u64>| match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => x <= y,
        };
        prop_assert!(le(base, up));
        if inst.p() < inst.n() {
            let harder = inst.with_p(inst.p() + 1).unwrap();
            prop_assert!(le(base, solve_dp(&harder).unwrap().objective));
        }
    }
}
