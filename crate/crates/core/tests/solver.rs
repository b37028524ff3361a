//! Multi-frontal solves against independent references.

mod common;

use common::{band_lu_solve, dense_lu_solve, front_flops, oracle_solve, rel_diff};
use mfs::{
    build_space, classify_level, compare, merge, predict_total, schur_eliminate, solve, solve_with, Assembler,
    Continuity, FactoredFront, SolveOptions,
};
use proptest::prelude::*;

#[test]
fn matches_dense_oracle() {
    for (d, p, c, s) in [
        (1, 2, Continuity::C0, 1),
        (1, 1, Continuity::C0, 1),
        (1, 4, Continuity::Cpm1, 3),
        (2, 2, Continuity::C0, 2),
        (2, 3, Continuity::Cpm1, 2),
        (3, 1, Continuity::C0, 1),
        (3, 2, Continuity::Cpm1, 1),
    ] {
        let space = build_space(d, p, c, s).unwrap();
        let (sol, _) = solve(&space).unwrap();
        let reference = oracle_solve(&space);
        assert!(rel_diff(&sol.values, &reference) < 1e-12, "d={d} p={p} {c} s={s}");
    }
}

#[test]
fn residual_bounds() {
    for (d, p, c, s, tol) in [
        (1, 2, Continuity::C0, 2, 1e-12),
        (2, 3, Continuity::Cpm1, 2, 1e-10),
        (3, 1, Continuity::C0, 1, 1e-12),
    ] {
        let space = build_space(d, p, c, s).unwrap();
        let (sol, _) = solve(&space).unwrap();
        assert!(sol.residual_norm < tol);
    }
    assert_eq!(build_space(3, 1, Continuity::C0, 1).unwrap().n_dofs(), 27);
}

#[test]
fn band_and_dense_oracles_agree() {
    let space = build_space(2, 2, Continuity::Cpm1, 2).unwrap();
    let (a, b) = Assembler::new(&space).global_system();
    let x = dense_lu_solve(a.to_dense(), a.n(), b.clone());
    let y = band_lu_solve(&a, b);
    assert!(rel_diff(&x, &y) < 1e-12);
}

#[test]
fn interface_system_of_two_quadratic_elements() {
    let space = build_space(1, 2, Continuity::C0, 1).unwrap();
    let asm = Assembler::new(&space);
    let leaves: Vec<FactoredFront> = classify_level(&space, 0)
        .unwrap()
        .iter()
        .map(|c| schur_eliminate(asm.build_front(c).unwrap()).unwrap())
        .collect();
    let root = &classify_level(&space, 1).unwrap()[0];
    let front = merge(root, &[&leaves[0], &leaves[1]]).unwrap();
    // eliminating everything but the middle vertex leaves a scalar equation
    let x = front.rhs[0] / front.matrix[0];
    let reference = oracle_solve(&space);
    assert!((x - reference[2]).abs() < 1e-12);
}

#[test]
fn linear_two_element_problem() {
    let space = build_space(1, 1, Continuity::C0, 1).unwrap();
    let (sol, cost) = solve(&space).unwrap();
    assert!(rel_diff(&sol.values, &oracle_solve(&space)) < 1e-12);
    // the exact solution u = 1 lies in the space
    assert!(sol.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    // two fronts with q = r = 1 and a scalar root
    assert_eq!(cost.total_factor_entries, 3 + 3 + 1);
}

#[test]
fn counters_match_closed_form() {
    for (d, p, c, s) in [(2, 2, Continuity::C0, 3), (3, 2, Continuity::Cpm1, 1), (1, 3, Continuity::Cpm1, 5)] {
        let space = build_space(d, p, c, s).unwrap();
        let (_, cost) = solve(&space).unwrap();
        let mut flops = 0;
        let mut entries = 0;
        for i in 0..=s {
            for cl in classify_level(&space, i).unwrap() {
                let (q, r) = (cl.q() as u64, cl.r() as u64);
                flops += front_flops(q, r);
                entries += q * q + 2 * q * r;
            }
        }
        assert_eq!(cost.total_flops, flops);
        assert_eq!(cost.total_factor_entries, entries);
        assert_eq!(cost.total_factor_bytes, 8 * entries);
    }
}

#[test]
fn large_front_counter_near_model() {
    // a single front with q = r = 64
    let exact = front_flops(64, 64) as f64;
    let (model, _) = mfs::schur_cost_model(64.0, 64.0);
    assert!((exact / model - 1.0).abs() < 0.15);
}

#[test]
fn model_on_measured_sizes_tracks_counter() {
    let space = build_space(2, 3, Continuity::Cpm1, 4).unwrap();
    let (_, cost) = solve(&space).unwrap();
    let ratio = cost.model_flops() / cost.total_flops as f64;
    assert!((ratio - 1.0).abs() < 0.2, "{ratio}");
    let cmp = compare(&cost, &predict_total(2, 3, Continuity::Cpm1, 4).unwrap());
    assert_eq!(cmp.per_level.len(), 5);
    assert!(cmp.total_flops_ratio.is_finite() && cmp.total_flops_ratio > 0.0);
}

#[test]
fn threads_are_bit_identical() {
    let space = build_space(3, 2, Continuity::C0, 2).unwrap();
    let (a, ca) = solve(&space).unwrap();
    for threads in [2, 4] {
        let (b, cb) = solve_with(&space, &SolveOptions { threads }).unwrap();
        assert_eq!(a, b);
        assert_eq!(ca, cb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_small_configs_match_oracle(d in 1usize..=3, p in 1usize..=3, cpm1: bool, s in 1usize..=2) {
        let c = if cpm1 { Continuity::Cpm1 } else { Continuity::C0 };
        let space = build_space(d, p, c, s).unwrap();
        prop_assume!(space.n_dofs() <= 1500);
        let (sol, cost) = solve(&space).unwrap();
        prop_assert!(rel_diff(&sol.values, &oracle_solve(&space)) < 1e-10);
        let q_total: usize = (0..=s).map(|i| classify_level(&space, i).unwrap().iter().map(|c| c.q()).sum::<usize>()).sum();
        prop_assert_eq!(q_total, space.n_dofs());
        prop_assert_eq!(cost.per_level.len(), s + 1);
    }
}
