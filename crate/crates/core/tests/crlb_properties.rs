mod common;

use common::{random_scenario, random_tree, rel_err, rng};
use num_complex::Complex64;
use num_rational::Rational64;
use rand::Rng;
use selfcal::crlb::{
    budgeted_average_crlb, crlb_closed_form, crlb_numeric, daisy_mean_distance, fisher_matrix,
    optimal_reference, daisy_budget_ratio, CrlbError, FisherMatrix, ScenarioParams, DAISY_RATIO_LIMIT,
};
use selfcal::simulate::{draw_gains, RfGains};
use selfcal::topology::Topology;

#[test]
fn numeric_inverse_matches_distance_form() {
    let mut r = rng(100);
    for case in 0..300 {
        let m = r.random_range(3..=10);
        let t = random_tree(m, &mut r);
        let s = random_scenario(&mut r);
        let gains = draw_gains(m, &s, case);
        let numeric = crlb_numeric(&fisher_matrix(&t, &gains, &s).unwrap()).unwrap();
        let closed = crlb_closed_form(&t, &s).unwrap();
        assert_eq!(numeric.antennas, closed.antennas);
        for i in 0..numeric.alpha.len() {
            assert!(
                rel_err(numeric.alpha[i], closed.per_antenna_alpha[i]) < 1e-9,
                "case {case}: {t:?}"
            );
            assert!(rel_err(numeric.beta[i], closed.per_antenna_beta[i]) < 1e-9);
        }
    }
}

#[test]
fn bound_ignores_gain_phases() {
    let mut r = rng(7);
    for _ in 0..50 {
        let m = r.random_range(3..=9);
        let t = random_tree(m, &mut r);
        let s = random_scenario(&mut r);
        let base = crlb_numeric(&fisher_matrix(&t, &draw_gains(m, &s, 1), &s).unwrap()).unwrap();
        for seed in 2..6 {
            let other =
                crlb_numeric(&fisher_matrix(&t, &draw_gains(m, &s, seed), &s).unwrap()).unwrap();
            for (a, b) in base.alpha.iter().chain(&base.beta).zip(other.alpha.iter().chain(&other.beta)) {
                assert!(rel_err(*b, *a) < 1e-9);
            }
        }
    }
}

#[test]
fn fisher_is_hermitian_positive_definite() {
    let mut r = rng(8);
    for seed in 0..100 {
        let m = r.random_range(2..=12);
        let t = random_tree(m, &mut r);
        let s = random_scenario(&mut r);
        let j = fisher_matrix(&t, &draw_gains(m, &s, seed), &s).unwrap();
        assert_eq!(j.order(), 2 * (m - 1));
        assert!(j.is_hermitian(1e-14));
        assert!(j.eigenvalues()[0] > 0.0);
        // A and B are real diagonal; D follows the reduced interconnection.
        let n = m - 1;
        let reduced = t.reduced_interconnection_matrix();
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    assert_eq!(j.matrix[(p, q)], Complex64::new(0.0, 0.0));
                    assert_eq!(j.matrix[(n + p, n + q)], Complex64::new(0.0, 0.0));
                }
                let d = j.matrix[(n + p, q)];
                assert_eq!(d.norm() > 0.0, reduced[(p, q)] == 1);
            }
            assert_eq!(j.matrix[(p, p)].im, 0.0);
        }
    }
}

#[test]
fn disconnected_candidates_are_singular() {
    let s = ScenarioParams::unit();
    let mut r = rng(9);
    for m in 3..=8 {
        let g = draw_gains(m, &s, m as u64);
        // Chain over antennas 2..=m, reference 1 left isolated from it.
        let edges: Vec<_> = (2..m).map(|k| (k, k + 1)).collect();
        let j = FisherMatrix::from_edges(m, 1, &edges, &g, &s).unwrap();
        assert!(matches!(crlb_numeric(&j), Err(CrlbError::Singular { .. })));
        // A tree with one edge removed.
        let mut tree_edges = random_tree(m, &mut r).edges().to_vec();
        tree_edges.pop();
        let j = FisherMatrix::from_edges(m, 1, &tree_edges, &g, &s).unwrap();
        assert!(matches!(crlb_numeric(&j), Err(CrlbError::Singular { .. })));
    }
}

#[test]
fn end_referenced_daisy_grows_linearly() {
    let s = ScenarioParams::unit().with_noise_variance(0.37);
    let (rho_a, rho_b) = s.noise_ratios();
    for m in [3, 4, 8, 17] {
        let t = Topology::daisy(m, 1).unwrap();
        let numeric = crlb_numeric(&fisher_matrix(&t, &RfGains::unit(m), &s).unwrap()).unwrap();
        for k in 0..m - 1 {
            assert!(rel_err(numeric.alpha[k], (k + 1) as f64 * rho_b) < 1e-9);
            assert!(rel_err(numeric.beta[k], (k + 1) as f64 * rho_a) < 1e-9);
        }
    }
}

#[test]
fn daisy_mean_formula_matches_hop_counts() {
    for m in 2..=200 {
        for f in 1..=m {
            let hop = Topology::daisy(m, f).unwrap().calibration_distances().mean;
            assert_eq!(daisy_mean_distance(m, f).unwrap(), hop, "m = {m}, f = {f}");
        }
    }
}

#[test]
fn optimal_reference_minimizes_mean() {
    for m in 2..=60 {
        let (f, best) = optimal_reference(m).unwrap();
        let min = (1..=m).map(|g| daisy_mean_distance(m, g).unwrap()).min().unwrap();
        assert_eq!(best, min);
        assert_eq!(daisy_mean_distance(m, f).unwrap(), min);
    }
}

#[test]
fn daisy_budget_ratio_matches_budgeted_daisy() {
    for m in 3usize..=200 {
        let f = m.div_ceil(2);
        let budget = 2 * (m as u64 - 1);
        let report = budgeted_average_crlb(&Topology::daisy(m, f).unwrap(), &ScenarioParams::unit(), budget)
            .unwrap();
        let exact = report.mean_distance / Rational64::from_integer(report.repetitions as i64);
        assert_eq!(daisy_budget_ratio(m).unwrap(), exact, "m = {m}");
        if m >= 5 {
            assert!(exact < Rational64::from_integer(1));
        }
    }
}

#[test]
fn daisy_budget_ratio_decreases_per_parity() {
    for m in 5..=498 {
        let (a, b) = (daisy_budget_ratio(m).unwrap(), daisy_budget_ratio(m + 2).unwrap());
        assert!(b < a, "m = {m}");
        assert!(b > DAISY_RATIO_LIMIT);
    }
}

#[test]
fn numeric_route_rejects_degenerate_inputs() {
    let t = Topology::star(3, 1).unwrap();
    let s = ScenarioParams::unit().with_noise_variance(0.0);
    assert_eq!(fisher_matrix(&t, &RfGains::unit(3), &s).unwrap_err(), CrlbError::Noiseless);
    assert!(matches!(
        fisher_matrix(&t, &RfGains::unit(4), &ScenarioParams::unit()),
        Err(CrlbError::DimensionMismatch { .. })
    ));
}
