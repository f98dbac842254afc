use proptest::prelude::*;
use scma_hybrid::optimizer::{
    activation_terms, codebook_split_q6, exhaustive_jc, grid_search_qd, optimal_jc_dense, optimal_qd_full_d2d,
    utility_overlaid, utility_underlaid, OverlaidModel, QD_GRID_STEP,
};
use scma_hybrid::topology::{derive_intensities, Coexistence, NetworkConfig};

fn fig6() -> NetworkConfig {
    NetworkConfig { lambda_u: 1e-3, lambda_d: 2.5e-3, tau_dis: f64::INFINITY, ..NetworkConfig::default() }
}

#[test]
fn activation_utility_has_the_two_ratio_form() {
    // With τ_dis = ∞: A_C ∝ 1/(Q1 + Q2 q) and A_D ∝ q/(Q3 q + Q4) share constants with the closed form.
    let cfg = fig6();
    let d = derive_intensities(&cfg).unwrap();
    let t = activation_terms(&cfg, &d).unwrap();
    let at = |q: f64| utility_underlaid(&cfg, &d, q).unwrap();
    let (a, b) = (at(0.2), at(0.7));
    let ratio_c = a.ase_c / b.ase_c;
    assert!((ratio_c - (t.q1 + t.q2 * 0.7) / (t.q1 + t.q2 * 0.2)).abs() < 1e-12);
    let ratio_d = a.ase_d / b.ase_d;
    let want = (0.2 / (t.q3 * 0.2 + t.q4)) / (0.7 / (t.q3 * 0.7 + t.q4));
    assert!((ratio_d - want).abs() < 1e-12);
}

#[test]
fn codebook_split_matches_dense_search_over_load() {
    for lambda_d in [1e-4, 5e-4, 2.5e-3, 1e-2, 5e-2] {
        let cfg = NetworkConfig { lambda_d, coexistence: Coexistence::Overlaid, ..fig6() };
        let d = derive_intensities(&cfg).unwrap();
        let closed = optimal_jc_dense(&cfg, &d).unwrap().value.j_cell as f64;
        let brute = exhaustive_jc(&cfg, &d, OverlaidModel::Dense).unwrap().decision;
        assert!((closed - brute).abs() <= 1.0, "lambda_d {lambda_d}: {closed} vs {brute}");
    }
}

#[test]
fn dense_utility_in_closed_shape() {
    // u = ln(J_C) + ln(J_D / (J_D + Q6)) + const for the dense model.
    let cfg = NetworkConfig { coexistence: Coexistence::Overlaid, ..fig6() };
    let d = derive_intensities(&cfg).unwrap();
    let q6 = codebook_split_q6(&cfg, &d).unwrap();
    let u = |j: u32| utility_overlaid(&cfg, &d, j, OverlaidModel::Dense).unwrap().u;
    let shape = |j: u32| (j as f64).ln() + ((30 - j) as f64 / ((30 - j) as f64 + q6)).ln();
    for (a, b) in [(3, 11), (7, 22), (15, 29)] {
        assert!(((u(a) - u(b)) - (shape(a) - shape(b))).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn activation_optimum_beats_grid(lambda_u in 1e-4f64..1e-2, lambda_d in 1e-4f64..1e-2, j in 4u32..60, tau_db in 0.0f64..15.0) {
        let tau = 10f64.powf(tau_db / 10.0);
        let cfg = NetworkConfig { lambda_u, lambda_d, j_codebooks: j, tau_bs: tau, tau_dr: tau, ..fig6() };
        let d = derive_intensities(&cfg).unwrap();
        let q = optimal_qd_full_d2d(&cfg, &d).unwrap().value;
        let best = grid_search_qd(&cfg, &d, QD_GRID_STEP).unwrap();
        prop_assert!((q - best.decision).abs() <= QD_GRID_STEP + 1e-12);
        prop_assert!(utility_underlaid(&cfg, &d, q).unwrap().u >= best.u - 1e-12);
    }

    #[test]
    fn codebook_split_ignores_cellular_parameters(scale in 0.1f64..10.0, lambda_d in 1e-4f64..1e-2) {
        let cfg = NetworkConfig { lambda_d, coexistence: Coexistence::Overlaid, ..fig6() };
        let d = derive_intensities(&cfg).unwrap();
        let base = optimal_jc_dense(&cfg, &d).unwrap().value;
        let moved = NetworkConfig {
            lambda_bs: cfg.lambda_bs * scale,
            lambda_u: cfg.lambda_u * scale,
            p_u: cfg.p_u * scale,
            tau_bs: cfg.tau_bs * scale,
            ..cfg.clone()
        };
        let dm = derive_intensities(&moved).unwrap();
        prop_assert_eq!(optimal_jc_dense(&moved, &dm).unwrap().value, base);
    }
}
