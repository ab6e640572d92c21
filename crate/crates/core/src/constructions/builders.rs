//! Base graph families.

use nalgebra::DMatrix;

use super::ConstructionError;
use crate::graph::WeightedGraph;

fn from_adjacency(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> WeightedGraph {
    let m = DMatrix::from_fn(n, n, |i, j| if i != j && adjacent(i, j) { 1.0 } else { 0.0 });
    WeightedGraph::from_matrix(m, None).expect("0/1 symmetric matrix is a valid graph")
}

fn at_least(name: &str, value: usize, min: usize) -> Result<(), ConstructionError> {
    if value < min {
        return Err(ConstructionError::BadParameter(format!("{name} must be >= {min}, got {value}")));
    }
    Ok(())
}

/// `K_{2n}` minus the perfect matching `{2i, 2i+1}`.
pub fn cocktail_party(n: usize) -> Result<WeightedGraph, ConstructionError> {
    at_least("n", n, 2)?;
    Ok(from_adjacency(2 * n, |i, j| i / 2 != j / 2))
}

/// `K_{1,m}` with every edge subdivided: centre 0, middles `1..=m`,
/// leaves `m+1..=2m`, leaf `m+i` hanging off middle `i`.
pub fn subdivided_star(m: usize) -> Result<WeightedGraph, ConstructionError> {
    at_least("m", m, 2)?;
    Ok(from_adjacency(2 * m + 1, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        (lo == 0 && (1..=m).contains(&hi)) || ((1..=m).contains(&lo) && hi == lo + m)
    }))
}

/// The `d`-cube on `{0,1}^d`, vertices adjacent when they differ in one bit.
pub fn hypercube(d: usize) -> Result<WeightedGraph, ConstructionError> {
    at_least("d", d, 1)?;
    if d > 12 {
        return Err(ConstructionError::BadParameter(format!("d = {d} is too large for dense matrices")));
    }
    Ok(from_adjacency(1 << d, |i, j| (i ^ j).count_ones() == 1))
}

/// Line graph of `K_{n,n}`: cell `(i, j)` is vertex `i n + j`, adjacent
/// to cells sharing its row or column.
pub fn rook(n: usize) -> Result<WeightedGraph, ConstructionError> {
    at_least("n", n, 2)?;
    Ok(from_adjacency(n * n, |u, v| u / n == v / n || u % n == v % n))
}

pub fn complete(n: usize) -> Result<WeightedGraph, ConstructionError> {
    at_least("n", n, 1)?;
    Ok(from_adjacency(n, |_, _| true))
}

pub fn path(n: usize) -> Result<WeightedGraph, ConstructionError> {
    at_least("n", n, 1)?;
    Ok(from_adjacency(n, |i, j| i.abs_diff(j) == 1))
}

pub fn cycle(n: usize) -> Result<WeightedGraph, ConstructionError> {
    at_least("n", n, 3)?;
    Ok(from_adjacency(n, |i, j| {
        let d = i.abs_diff(j);
        d == 1 || d == n - 1
    }))
}

/// `J - I - A` for a graph without loops.
pub fn complement(g: &WeightedGraph) -> WeightedGraph {
    let n = g.n();
    let m = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 - g.weight(i, j) });
    WeightedGraph::from_matrix(m, None).expect("complement of a symmetric matrix is symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &WeightedGraph) -> Vec<usize> {
        (0..g.n()).map(|v| g.degree(v)).collect()
    }

    #[test]
    fn cocktail_party_2_is_c4() {
        let g = cocktail_party(2).unwrap();
        assert_eq!(degrees(&g), vec![2; 4]);
        assert_eq!(g.weight(0, 1), 0.0);
        assert_eq!(g.weight(0, 2), 1.0);
    }

    #[test]
    fn spider_degrees() {
        let g = subdivided_star(3).unwrap();
        assert_eq!(degrees(&g), vec![3, 2, 2, 2, 1, 1, 1]);
        assert_eq!(g.weight(1, 4), 1.0);
        assert_eq!(g.weight(3, 6), 1.0);
    }

    #[test]
    fn rook_and_cube_are_regular() {
        assert_eq!(rook(3).unwrap().regular_degree(), Some(4.0));
        assert_eq!(hypercube(3).unwrap().regular_degree(), Some(3.0));
        assert!(matches!(rook(1), Err(ConstructionError::BadParameter(_))));
    }

    #[test]
    fn small_families() {
        assert_eq!(complete(4).unwrap().regular_degree(), Some(3.0));
        assert_eq!(degrees(&path(3).unwrap()), vec![1, 2, 1]);
        assert_eq!(cycle(5).unwrap().regular_degree(), Some(2.0));
        assert_eq!(complement(&complete(3).unwrap()).inf_norm(), 0.0);
    }
}
