//! Deterministic random graph corpora shared by the integration tests.
#![allow(dead_code)]

use frevival::constructions::{builders, cartesian_product};
use frevival::WeightedGraph;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub enum Weights {
    /// Unweighted, no loops.
    Simple,
    /// Edge weights in {1, 2, 3}, occasional loops in {-1, 1, 2}.
    SmallInt,
    /// Uniform in [-2, 2] rounded to 0.25, loops included.
    Quarter,
}

fn draw_matrix(rng: &mut ChaCha8Rng, n: usize, w: Weights) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = match (w, i == j) {
                (Weights::Simple, true) => 0.0,
                (Weights::Simple, false) => f64::from(u8::from(rng.random_bool(0.5))),
                (Weights::SmallInt, true) => {
                    if rng.random_bool(0.2) {
                        [-1.0, 1.0, 2.0][rng.random_range(0..3)]
                    } else {
                        0.0
                    }
                }
                (Weights::SmallInt, false) => {
                    if rng.random_bool(0.55) {
                        f64::from(rng.random_range(1..=3u8))
                    } else {
                        0.0
                    }
                }
                (Weights::Quarter, _) => {
                    if i != j && rng.random_bool(0.4) {
                        0.0
                    } else {
                        (rng.random_range(-2.0..=2.0f64) * 4.0).round() / 4.0
                    }
                }
            };
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Connected graph on `n_min..=n_max` vertices; retries until connected.
pub fn random_connected(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize, w: Weights) -> WeightedGraph {
    loop {
        let n = rng.random_range(n_min..=n_max);
        let g = WeightedGraph::from_matrix(draw_matrix(rng, n, w), None).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Distinct random subset of `0..n` with `1..=n` elements, sorted.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let size = rng.random_range(1..=n);
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    let mut k = all[..size].to_vec();
    k.sort_unstable();
    k
}

/// Connected regular graphs on at most six vertices.
pub fn small_regular_graphs() -> Vec<(&'static str, WeightedGraph)> {
    let k2 = builders::complete(2).unwrap();
    let k3 = builders::complete(3).unwrap();
    let k33 = WeightedGraph::from_matrix(DMatrix::from_fn(6, 6, |i, j| if (i < 3) != (j < 3) { 1.0 } else { 0.0 }), None).unwrap();
    vec![
        ("K1", builders::complete(1).unwrap()),
        ("K2", k2.clone()),
        ("K3", k3.clone()),
        ("K4", builders::complete(4).unwrap()),
        ("K5", builders::complete(5).unwrap()),
        ("K6", builders::complete(6).unwrap()),
        ("C4", builders::cycle(4).unwrap()),
        ("C5", builders::cycle(5).unwrap()),
        ("C6", builders::cycle(6).unwrap()),
        ("K33", k33),
        ("prism", cartesian_product(&k3, &k2)),
        ("octahedron", builders::cocktail_party(3).unwrap()),
    ]
}

/// Named integer-weighted graphs with known symmetric pairs.
pub fn named_integer_graphs() -> Vec<(&'static str, WeightedGraph)> {
    let loop_pair = WeightedGraph::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]], None).unwrap();
    vec![
        ("K2", builders::complete(2).unwrap()),
        ("P3", builders::path(3).unwrap()),
        ("P4", builders::path(4).unwrap()),
        ("P5", builders::path(5).unwrap()),
        ("C6", builders::cycle(6).unwrap()),
        ("Q3", builders::hypercube(3).unwrap()),
        ("cocktail3", builders::cocktail_party(3).unwrap()),
        ("cocktail4", builders::cocktail_party(4).unwrap()),
        ("spider3", builders::subdivided_star(3).unwrap()),
        ("rook3", builders::rook(3).unwrap()),
        ("loop_pair", loop_pair),
        ("fork", fork_graph()),
    ]
}

/// Path 0-1-2 with two leaves 3, 4 on vertex 2.
pub fn fork_graph() -> WeightedGraph {
    WeightedGraph::from_edges(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.0)], &[], None).unwrap()
}
