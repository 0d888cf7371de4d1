mod common;

use common::*;
use gptcompat::lp::{duality_gap, solve_lp, LinearProgram, LpStatus};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Bounded feasible program: positive costs and a known feasible point.
fn random_program(r: &mut ChaCha8Rng, n: usize, m: usize) -> LinearProgram {
    let cost: Vec<f64> = (0..n).map(|_| r.random_range(0.1..2.0)).collect();
    let x0: Vec<f64> = (0..n).map(|_| r.random_range(0.0..2.0)).collect();
    let mut lp = LinearProgram::new(cost);
    for _ in 0..m {
        let row: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let b = dot(&row, &x0) - r.random_range(0.0..0.5);
        lp.add_row(row, b);
    }
    lp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optimum_matches_basis_enumeration(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=6) {
        let mut r = rng(seed);
        let lp = random_program(&mut r, n, m);
        let sol = solve_lp(&lp).unwrap();
        let (obj, _) = lp_by_enumeration(&lp.cost, &lp.matrix, &lp.rhs).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!((sol.objective - obj).abs() <= 1e-8 * (1.0 + obj.abs()));
    }

    #[test]
    fn duals_are_feasible_with_zero_gap(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=8) {
        let mut r = rng(seed);
        let lp = random_program(&mut r, n, m);
        let sol = solve_lp(&lp).unwrap();
        prop_assert!(sol.y.iter().all(|&y| y >= -1e-9));
        for j in 0..n {
            let col: f64 = lp.matrix.iter().zip(&sol.y).map(|(row, y)| row[j] * y).sum();
            prop_assert!(col <= lp.cost[j] + 1e-9);
        }
        prop_assert!(lp.activities(&sol.x).iter().zip(&lp.rhs).all(|(a, b)| *a >= b - 1e-9));
        prop_assert!(duality_gap(&sol, &lp).unwrap() <= 1e-8);
        // Weak duality for an arbitrary feasible point.
        let shifted: Vec<f64> = sol.x.iter().map(|x| x + 1.0).collect();
        let feasible = lp.activities(&shifted).iter().zip(&lp.rhs).all(|(a, b)| *a >= *b);
        if feasible {
            prop_assert!(sol.dual_objective(&lp) <= dot(&lp.cost, &shifted) + 1e-9);
        }
    }

    #[test]
    fn infeasible_programs_carry_farkas_vectors(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let mut lp = random_program(&mut r, n, 2);
        // x₁ ≥ 1 together with −x₁ ≥ 0 cannot hold.
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        lp.add_row(e.clone(), 1.0);
        lp.add_row(e.iter().map(|v| -v).collect(), 0.0);
        let sol = solve_lp(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Infeasible);
        let y = sol.farkas.unwrap();
        prop_assert!(y.iter().all(|&v| v >= -1e-9));
        prop_assert!(dot(&y, &lp.rhs) > 1e-9);
        for j in 0..n {
            let col: f64 = lp.matrix.iter().zip(&y).map(|(row, yi)| row[j] * yi).sum();
            prop_assert!(col <= 1e-9);
        }
    }
}

#[test]
fn unbounded_program_has_recession_ray() {
    let mut lp = LinearProgram::new(vec![-1.0, 1.0]);
    lp.add_row(vec![1.0, -1.0], -2.0);
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Unbounded);
    let d = sol.ray.unwrap();
    assert!(d.iter().all(|&v| v >= -1e-12));
    assert!(dot(&lp.cost, &d) < 0.0);
    assert!(lp.activities(&d)[0] >= -1e-12);
}
