use interdict::instgen::{generate, GenSpec, Generator};
use interdict::{
    build_model, extract_selection, model_size, robust_feasible, solve_bb, solve_dp, solve_enum, solve_lp, BbLimits,
    Error, ExactBranchAndBound, ExactStatus, Formulation, Instance, MilpStatus, SizeReport,
};

fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..20u64 {
        let g = [Generator::Gen1, Generator::Gen2, Generator::Partition][seed as usize % 3];
        let n = 4 + seed as usize % 6;
        let p = 1 + seed as usize % 3;
        out.push(generate(&GenSpec::new(g, n, p.min(n), seed).unwrap()).unwrap());
    }
    out
}

#[test]
fn every_model_matches_both_oracles() {
    for inst in corpus() {
        let dp = solve_dp(&inst).unwrap();
        let en = solve_enum(&inst).unwrap();
        assert_eq!(dp.objective, en.objective);
        for f in Formulation::applicable(inst.p()) {
            let m = build_model(&inst, f).unwrap();
            let res = solve_bb(&m, BbLimits::unlimited()).unwrap();
            match dp.status {
                ExactStatus::Optimal => {
                    assert_eq!(res.status, MilpStatus::Optimal, "{f}");
                    assert_eq!(res.objective.map(|o| o.round() as u64), dp.objective, "{f}");
                    let sel = extract_selection(&m, &inst, res.solution.as_ref().unwrap()).unwrap();
                    assert!(robust_feasible(&inst, &sel).unwrap().feasible);
                    assert_eq!(Some(sel.cost()), dp.objective);
                }
                ExactStatus::Infeasible => assert_eq!(res.status, MilpStatus::Infeasible, "{f}"),
            }
        }
    }
}

#[test]
fn relaxation_never_exceeds_integer_optimum() {
    for inst in corpus() {
        for f in Formulation::applicable(inst.p()) {
            let m = build_model(&inst, f).unwrap();
            let lp = solve_lp(&m).unwrap();
            let bb = solve_bb(&m, BbLimits::unlimited()).unwrap();
            if let (Some(l), Some(b)) = (lp.objective, bb.objective) {
                assert!(l <= b + 1e-9, "{f}: {l} > {b}");
            }
        }
    }
}

#[test]
fn relabelling_items_keeps_the_optimum() {
    for inst in corpus().into_iter().take(8) {
        let n = inst.n();
        let perm: Vec<usize> = (0..n).rev().collect();
        let shuffled = inst.permuted(&perm).unwrap();
        let want = solve_dp(&inst).unwrap().objective;
        assert_eq!(solve_dp(&shuffled).unwrap().objective, want);
        for f in Formulation::applicable(inst.p()) {
            let m = build_model(&shuffled, f).unwrap();
            let res = solve_bb(&m, BbLimits::unlimited()).unwrap();
            assert_eq!(res.objective.map(|o| o.round() as u64), want, "{f}");
        }
    }
}

#[test]
fn exact_branch_and_bound_agrees_on_worked_example() {
    let inst = Instance::worked_example(1);
    for f in Formulation::ALL {
        let m = build_model(&inst, f).unwrap();
        let res = ExactBranchAndBound::new().solve(&m, BbLimits::unlimited()).unwrap();
        assert_eq!(res.status, MilpStatus::Optimal);
        assert_eq!(res.objective, Some(interdict::Exact::from_integer(7.into())), "{f}");
    }
}

#[test]
fn p_two_worked_example() {
    let inst = Instance::worked_example(2);
    for f in Formulation::applicable(2) {
        let res = solve_bb(&build_model(&inst, f).unwrap(), BbLimits::unlimited()).unwrap();
        assert_eq!(res.objective, Some(12.0), "{f}");
    }
}

#[test]
fn single_item_at_budget_is_infeasible() {
    let inst = Instance::new(vec![1], vec![5], 5, 1).unwrap();
    let res = solve_bb(&build_model(&inst, Formulation::Ip5).unwrap(), BbLimits::unlimited()).unwrap();
    assert_eq!(res.status, MilpStatus::Infeasible);
    assert_eq!(solve_dp(&inst).unwrap().status, ExactStatus::Infeasible);
}

#[test]
fn builders_reject_bad_input() {
    let inst = Instance::worked_example(2);
    assert!(matches!(build_model(&inst, Formulation::Ip1), Err(Error::Unsupported(_))));
    let heavy = Instance::new(vec![1, 1], vec![3, 20], 10, 1).unwrap();
    for f in Formulation::ALL {
        assert!(matches!(build_model(&heavy, f), Err(Error::Assumption(_))), "{f}");
    }
}

fn closed_form(f: Formulation, n: usize) -> SizeReport {
    let (c, d, k) = match f {
        Formulation::Ip1 => (0, 0, 0),
        Formulation::Ip2 => ((n * n + 3 * n) / 2 + 1, 0, n * n + 2 * n),
        Formulation::Ip3 => ((n * n + n) / 2 + 1, n, n * n + 3 * n),
        Formulation::Ip4 => (n * n + n, n, n * n + n),
        Formulation::Ip5 => (0, n, n),
    };
    SizeReport { continuous_added: c, discrete_added: d, constraints_added: k }
}

#[test]
fn sizes_follow_closed_forms() {
    for n in [5, 10, 50] {
        let inst = Instance::new(vec![1; n], vec![1; n], n as u64, 1).unwrap();
        for f in Formulation::ALL {
            let m = build_model(&inst, f).unwrap();
            assert_eq!(model_size(&m), closed_form(f, n), "{f} n={n}");
        }
    }
}
