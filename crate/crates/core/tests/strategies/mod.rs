//! Proptest strategies for small weighted graphs.
#![allow(dead_code)]

use frevival::WeightedGraph;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn symmetric(n: usize, upper: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut it = upper.iter();
    for i in 0..n {
        for j in i..n {
            let x = *it.next().expect("n(n+1)/2 entries");
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Weights in quarter steps of `[-2, 2]`, zero about a third of the time.
fn quarter() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 2 => (-8i32..=8).prop_map(|k| f64::from(k) / 4.0)]
}

/// Any symmetric graph on `n_min..=n_max` vertices with quarter weights.
pub fn weighted_graph(n_min: usize, n_max: usize) -> impl Strategy<Value = WeightedGraph> {
    (n_min..=n_max).prop_flat_map(|n| {
        proptest::collection::vec(quarter(), n * (n + 1) / 2)
            .prop_map(move |u| WeightedGraph::from_matrix(symmetric(n, &u), None).unwrap())
    })
}

/// Like [`weighted_graph`] but rejected unless connected.
pub fn connected_graph(n_min: usize, n_max: usize) -> impl Strategy<Value = WeightedGraph> {
    weighted_graph(n_min, n_max).prop_filter("connected", WeightedGraph::is_connected)
}

/// Simple graphs, connected.
pub fn simple_connected(n_min: usize, n_max: usize) -> impl Strategy<Value = WeightedGraph> {
    (n_min..=n_max)
        .prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n + 1) / 2).prop_map(move |bits| {
                let mut k = 0;
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in i..n {
                        if i != j && bits[k] {
                            m[(i, j)] = 1.0;
                            m[(j, i)] = 1.0;
                        }
                        k += 1;
                    }
                }
                WeightedGraph::from_matrix(m, None).unwrap()
            })
        })
        .prop_filter("connected", WeightedGraph::is_connected)
}

/// A graph together with a nonempty sorted vertex subset.
pub fn graph_and_subset(n_min: usize, n_max: usize) -> impl Strategy<Value = (WeightedGraph, Vec<usize>)> {
    connected_graph(n_min, n_max).prop_flat_map(|g| {
        let n = g.n();
        proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n).prop_map(move |k| (g.clone(), k))
    })
}
