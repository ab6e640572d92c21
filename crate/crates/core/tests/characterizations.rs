//! Cross-checks between independent characterizations on a shared corpus.
mod common;

use common::{named_integer_graphs, random_connected, rng, Weights};
use frevival::constructions::{prescribed_fr, PrescribedParams};
use frevival::cospectral::{analyze_pair, restricted_idempotents, same_pq, PairOptions};
use frevival::integer_revival::{extract_quadratic_data, minimal_proper_time, MinimalTime};
use frevival::linalg::{max_abs_c, CMatrix, C64};
use frevival::partition::lattice::{all_partitions, IndexPartition};
use frevival::partition::{
    default_ratio_tol, eigenvalue_support, find_revival_time, is_properly_decomposable, min_commuting_partition,
    partition_commutator_residual, ratio_condition, ratio_condition_on_support, verify_k_fr, RevivalKind,
    RevivalOptions,
};
use frevival::spectral::{spectral_decomposition, subset_projector};
use frevival::{Execution, WeightedGraph};
use nalgebra::Matrix2;
use rand::Rng;

fn corpus() -> Vec<(String, WeightedGraph)> {
    let mut r = rng(42);
    let mut out: Vec<(String, WeightedGraph)> =
        named_integer_graphs().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    for i in 0..150 {
        let w = if i % 2 == 0 { Weights::Simple } else { Weights::SmallInt };
        out.push((format!("random {i}"), random_connected(&mut r, 2, 7, w)));
    }
    out
}

#[test]
fn meet_of_commuting_partitions_commutes() {
    let mut r = rng(1);
    let mut checked = 0;
    for _ in 0..60 {
        let g = random_connected(&mut r, 2, 6, Weights::Quarter);
        let s = spectral_decomposition(&g, None).unwrap();
        let k = subset_projector(&common::random_subset(&mut r, g.n()), g.n()).unwrap();
        let commuting: Vec<IndexPartition> = all_partitions(s.len())
            .into_iter()
            .filter(|p| partition_commutator_residual(&s, &k, p) < 1e-9)
            .collect();
        for _ in 0..10 {
            let a = &commuting[r.random_range(0..commuting.len())];
            let b = &commuting[r.random_range(0..commuting.len())];
            assert!(partition_commutator_residual(&s, &k, &a.meet(b)) < 1e-8);
            checked += 1;
        }
    }
    assert_eq!(checked, 600);
}

#[test]
fn ratio_on_partition_agrees_with_ratio_on_support() {
    let mut r = rng(2);
    for (name, g) in corpus() {
        let s = spectral_decomposition(&g, None).unwrap();
        let k = subset_projector(&common::random_subset(&mut r, g.n()), g.n()).unwrap();
        let ci = min_commuting_partition(&s, &k, None);
        let support = eigenvalue_support(&s, &k, None);
        let tol = default_ratio_tol(g.inf_norm());
        let on_partition = ratio_condition(&s, &ci.partition, 1_000_000, tol);
        let on_support = ratio_condition_on_support(&s, &support, 1_000_000, tol);
        assert_eq!(on_partition.holds, on_support.holds, "{name} K {:?}", k.subset());
    }
}

#[test]
fn search_and_direct_check_agree() {
    let mut r = rng(3);
    for (name, g) in corpus() {
        let s = spectral_decomposition(&g, None).unwrap();
        let k = subset_projector(&common::random_subset(&mut r, g.n()), g.n()).unwrap();
        let cert = find_revival_time(&s, &k, g.inf_norm(), &RevivalOptions::default()).unwrap();
        let Some(tau) = cert.tau else { continue };
        if cert.kind == RevivalKind::None {
            continue;
        }
        let direct = verify_k_fr(&s, &k, tau, 1e-7);
        assert_eq!(direct.kind, cert.kind, "{name}");
        assert!(max_abs_c(&(&direct.h - &cert.h)) < 1e-7, "{name}");
        let partition = cert.partition.unwrap();
        let ci = min_commuting_partition(&s, &k, None);
        assert!(ci.partition.refines(&partition));
        let phases = s.phases(tau);
        for c in partition.classes() {
            for &r in c {
                assert!((phases[r] - phases[c[0]]).norm() < 1e-7, "{name}: phase varies in class {c:?}");
            }
        }
    }
}

#[test]
fn strong_cospectrality_is_proper_decomposability_of_the_pair() {
    for (name, g) in corpus() {
        let s = spectral_decomposition(&g, None).unwrap();
        for a in 0..g.n() {
            for b in (a + 1)..g.n() {
                let rep = analyze_pair(&g, &s, a, b, &PairOptions::default()).unwrap();
                let ci = min_commuting_partition(&s, &subset_projector(&[a, b], g.n()).unwrap(), None);
                let decomposable = is_properly_decomposable(&ci, &g).is_ok_and(|d| d.decomposable);
                assert_eq!(rep.strongly_fractionally_cospectral, decomposable, "{name} ({a},{b})");
            }
        }
    }
}

#[test]
fn eigenvectors_of_strong_pairs_have_one_of_two_ratios() {
    let mut graphs = corpus();
    for (i, pq) in [(0.6, 0.8), (0.8, 0.6), (0.3, 0.95394)].into_iter().enumerate() {
        // H with eigenvectors (p, q) and (-q, p).
        let (p, q): (f64, f64) = pq;
        let norm = p.hypot(q);
        let (p, q) = (p / norm, q / norm);
        let (l1, l2) = (C64::new(0.0, 1.0), C64::new(-1.0, 0.0));
        let h = [[l1 * p * p + l2 * q * q, (l1 - l2) * p * q], [(l1 - l2) * p * q, l1 * q * q + l2 * p * p]];
        let pg = prescribed_fr(&PrescribedParams::new(h, 1.0 + i as f64, 6)).unwrap();
        graphs.push((format!("prescribed {i}"), pg.graph.clone()));
        let s = spectral_decomposition(&pg.graph, None).unwrap();
        let rep = analyze_pair(&pg.graph, &s, 0, 1, &PairOptions::default()).unwrap();
        assert!(same_pq((rep.p.unwrap(), rep.q.unwrap()), (p, q), 1e-7), "{:?} vs {:?}", (rep.p, rep.q), (p, q));
    }
    let mut strong = 0;
    for (name, g) in graphs {
        let s = spectral_decomposition(&g, None).unwrap();
        for a in 0..g.n() {
            for b in (a + 1)..g.n() {
                let rep = analyze_pair(&g, &s, a, b, &PairOptions::default()).unwrap();
                if !rep.strongly_fractionally_cospectral {
                    continue;
                }
                strong += 1;
                let (p, q) = (rep.p.unwrap(), rep.q.unwrap());
                for r in 0..s.len() {
                    let v = s.eigenvectors(r);
                    for col in v.column_iter() {
                        let plus = (col[a] - p / q * col[b]).abs();
                        let minus = (col[a] + q / p * col[b]).abs();
                        assert!(plus < 1e-6 || minus < 1e-6, "{name} ({a},{b}) eigenvalue {r}");
                    }
                }
                // Any H diagonal in the (p, q) basis commutes with every restriction.
                let m1 = Matrix2::new(p * p, p * q, p * q, q * q);
                let m2 = Matrix2::new(q * q, -p * q, -p * q, p * p);
                let (l1, l2) = (C64::from_polar(1.0, 0.7), C64::from_polar(1.0, -2.1));
                let h = m1.map(|x| l1 * x) + m2.map(|x| l2 * x);
                for e in restricted_idempotents(&s, a, b).unwrap() {
                    let ec = e.map(|x| C64::new(x, 0.0));
                    let comm = h * ec - ec * h;
                    assert!(comm.iter().all(|z| z.norm() < 1e-7), "{name} ({a},{b})");
                }
            }
        }
    }
    assert!(strong > 20, "only {strong} strong pairs");
}

#[test]
fn quadratic_data_rebuilds_the_spectrum_and_the_revival_column() {
    let mut certified = 0;
    for (name, g) in corpus() {
        let s = spectral_decomposition(&g, None).unwrap();
        for a in 0..g.n() {
            for b in (a + 1)..g.n() {
                let rep = analyze_pair(&g, &s, a, b, &PairOptions::default()).unwrap();
                let Some(split) = rep.class_split.as_ref() else { continue };
                let Ok(data) = extract_quadratic_data(&g, &s, split, 1_000_000) else { continue };
                for &r in split.c1.iter().chain(&split.c2) {
                    let theta = data.theta(r).unwrap();
                    assert!((theta - s.eigenvalues()[r]).abs() < 1e-8, "{name} ({a},{b}) eigenvalue {r}");
                }
                let MinimalTime::At { tau, .. } = minimal_proper_time(&data, Execution::Sequential).unwrap() else {
                    continue;
                };
                certified += 1;
                let phases = s.phases(tau);
                let one_value = |c: &[usize]| c.iter().all(|&r| (phases[r] - phases[c[0]]).norm() < 1e-7);
                assert!(one_value(&split.c1) && one_value(&split.c2), "{name} ({a},{b})");
                let (eh, ej) = (phases[split.c1[0]], phases[split.c2[0]]);
                let (p, q) = (rep.p.unwrap(), rep.q.unwrap());
                let alpha = eh * (p * p) + ej * (q * q);
                let beta = (eh - ej) * (p * q);
                assert!((eh - (alpha + beta * (q / p))).norm() < 1e-9);
                assert!((ej - (alpha - beta * (p / q))).norm() < 1e-9);
                let col = s.evolve_vertex(a, tau).unwrap();
                let mut want = CMatrix::zeros(g.n(), 1);
                want[(a, 0)] = alpha;
                want[(b, 0)] = beta;
                let dev = (0..g.n()).map(|v| (col[v] - want[(v, 0)]).norm()).fold(0.0, f64::max);
                assert!(dev < 1e-7, "{name} ({a},{b}) at {tau}: {dev:e}");
            }
        }
    }
    assert!(certified > 10, "only {certified} certified pairs");
}

#[test]
fn spider_middle_vertices_are_cospectral() {
    let g = frevival::constructions::builders::subdivided_star(3).unwrap();
    let s = spectral_decomposition(&g, None).unwrap();
    let rep = analyze_pair(&g, &s, 1, 2, &PairOptions::default()).unwrap();
    assert!(rep.cospectral);
    for e in s.idempotents() {
        assert!((e[(1, 1)] - e[(2, 2)]).abs() < 1e-9);
    }
}
