mod strategies;

use frevival::linalg::{expm_minus_i, max_abs, max_abs_c, unitarity_residual};
use frevival::spectral::{default_cluster_tol, spectral_decomposition, SpectralDecomposition};
use frevival::WeightedGraph;
use proptest::prelude::*;
use strategies::weighted_graph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn idempotents_resolve_identity_and_rebuild_a(g in weighted_graph(1, 8)) {
        let s = spectral_decomposition(&g, None).unwrap();
        let inv = s.check_invariants(g.weights());
        prop_assert!(inv.holds(1e-9 * (1.0 + g.inf_norm()), s.cluster_tol(), g.n()), "{inv:?}");
        prop_assert!(s.eigenvalues().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn spectral_walk_matches_dense_exponential(g in weighted_graph(1, 6), t in -20.0..20.0f64) {
        let s = spectral_decomposition(&g, None).unwrap();
        let dev = max_abs_c(&(s.transition_matrix(t) - expm_minus_i(g.weights(), t)));
        prop_assert!(dev < 1e-8, "deviation {dev:e}");
    }

    #[test]
    fn walk_is_a_unitary_group(g in weighted_graph(1, 6), a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let s = spectral_decomposition(&g, None).unwrap();
        let (ua, ub, uab) = (s.transition_matrix(a), s.transition_matrix(b), s.transition_matrix(a + b));
        prop_assert!(max_abs_c(&(&ua * &ub - uab)) < 1e-9);
        prop_assert!(unitarity_residual(&ua) < 1e-9);
        let back = &ua * s.transition_matrix(-a);
        prop_assert!(unitarity_residual(&back) < 1e-9);
    }

    #[test]
    fn vertex_evolution_preserves_norm(g in weighted_graph(1, 7), t in 0.0..50.0f64) {
        let s = spectral_decomposition(&g, None).unwrap();
        for v in 0..g.n() {
            let col = s.evolve_vertex(v, t).unwrap();
            prop_assert!((col.norm() - 1.0).abs() < 1e-9);
            let dense = s.transition_matrix(t).column(v).into_owned();
            prop_assert!((col - dense).norm() < 1e-12);
        }
    }

    #[test]
    fn graph_json_round_trips_exactly(g in weighted_graph(1, 7)) {
        let text = g.to_json_string();
        let back = WeightedGraph::from_json_str(&text).unwrap();
        prop_assert_eq!(back.weights(), g.weights());
        prop_assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn clustering_is_idempotent(g in weighted_graph(1, 7)) {
        let s = spectral_decomposition(&g, None).unwrap();
        let again = SpectralDecomposition::of_matrix(&s.reconstruct(), Some(s.cluster_tol())).unwrap();
        prop_assert_eq!(s.multiplicities(), again.multiplicities());
        for (x, y) in s.eigenvalues().iter().zip(again.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + g.inf_norm()));
        }
        for (e, f) in s.idempotents().iter().zip(again.idempotents()) {
            prop_assert!(max_abs(&(e - f)) < 1e-8);
        }
    }
}

#[test]
fn cluster_tol_scales_with_norm() {
    assert!(default_cluster_tol(0.0) > 0.0);
    assert!(default_cluster_tol(100.0) > default_cluster_tol(1.0));
}
