//! Weighted graphs where every vertex revives with every other vertex,
//! built from a normalized Hadamard matrix and a CRT-chosen spectrum.
//!
//! With `L = (1/n) H D H^T` and `lambda_r = (1 - H_{j,r})/2 mod p_j` for
//! every row `j >= 1`, at `tau = 2 pi / p_k` the phase of `lambda_r` is 1
//! or `exp(-2 pi i / p_k)` according to the sign of `H_{k,r}`, which puts
//! `v_0` and `v_k` in one 2x2 block.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{ConstructionError, ExpectedKind, Prediction};
use crate::graph::WeightedGraph;
use crate::linalg::C64;
use crate::rational::{crt, is_prime};

/// Largest eigenvalue product that still converts to `f64` exactly.
const EXACT_F64: u64 = 1 << 53;

#[derive(Clone, Debug, Serialize)]
pub struct PolygamyGraph {
    #[serde(skip)]
    pub graph: WeightedGraph,
    #[serde(skip)]
    pub hadamard: DMatrix<i8>,
    pub primes: Vec<u64>,
    /// `lambda_0 = 0, lambda_1, ..., lambda_{n-1}`.
    pub lambdas: Vec<u64>,
    /// Whether `d I - L` (zero diagonal) was returned instead of `L`.
    pub adjacency: bool,
    /// Sylvester `H` is symmetric with `H_{u,r} H_{k,r} = H_{u xor k, r}`,
    /// so every pair at XOR distance `k` revives at `2 pi / p_k`; for other
    /// Hadamard matrices only the pairs `(0, k)` are predicted.
    pub sylvester: bool,
    pub predictions: Vec<Prediction>,
}

impl PolygamyGraph {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Expected `2x2` block on `{u, u xor k}` at `2 pi / p_k`:
    /// `1/2 [[1 + w, 1 - w], [1 - w, 1 + w]]` with `w = exp(-2 pi i / p_k)`,
    /// conjugated and rephased by `exp(-i tau d)` in the adjacency variant.
    pub fn expected_block(&self, k: usize) -> [[C64; 2]; 2] {
        let p = self.primes[k - 1] as f64;
        let tau = 2.0 * PI / p;
        let w = C64::from_polar(1.0, -tau);
        let one = C64::new(1.0, 0.0);
        let (mut stay, mut go) = ((one + w) * 0.5, (one - w) * 0.5);
        if self.adjacency {
            let shift = C64::from_polar(1.0, -tau * self.diagonal());
            stay = shift * stay.conj();
            go = shift * go.conj();
        }
        [[stay, go], [go, stay]]
    }

    /// Diagonal entry of `L`, the shift used in the adjacency variant.
    pub fn diagonal(&self) -> f64 {
        self.lambdas.iter().map(|&l| l as f64).sum::<f64>() / self.n() as f64
    }
}

/// `[[1, 1], [1, -1]]^{(x) m}`, entries `(-1)^{popcount(i & j)}`.
pub fn sylvester_hadamard(m: u32) -> DMatrix<i8> {
    let n = 1usize << m;
    DMatrix::from_fn(n, n, |i, j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 })
}

fn check_primes(primes: &[u64], needed: usize) -> Result<(), ConstructionError> {
    if primes.len() != needed {
        return Err(ConstructionError::BadPrimeList(format!("need {needed} primes, got {}", primes.len())));
    }
    for (i, &p) in primes.iter().enumerate() {
        if p % 2 == 0 || !is_prime(p) {
            return Err(ConstructionError::BadPrimeList(format!("{p} is not an odd prime")));
        }
        if primes[..i].contains(&p) {
            return Err(ConstructionError::BadPrimeList(format!("{p} is repeated")));
        }
    }
    Ok(())
}

fn check_hadamard(h: &DMatrix<i8>) -> Result<(), ConstructionError> {
    let n = h.nrows();
    let bad = |msg: String| Err(ConstructionError::BadParameter(msg));
    if n < 2 || h.ncols() != n {
        return bad(format!("Hadamard matrix must be square of order >= 2, got {}x{}", n, h.ncols()));
    }
    if h.iter().any(|&x| x != 1 && x != -1) {
        return bad("Hadamard entries must be +-1".into());
    }
    if (0..n).any(|i| h[(0, i)] != 1 || h[(i, 0)] != 1) {
        return bad("Hadamard matrix must be normalized (first row and column all ones)".into());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dot: i64 = (0..n).map(|r| i64::from(h[(i, r)]) * i64::from(h[(j, r)])).sum();
            if dot != 0 {
                return bad(format!("rows {i} and {j} are not orthogonal"));
            }
        }
    }
    Ok(())
}

/// Sylvester construction of order `2^m`.
pub fn hadamard_polygamy(m: u32, primes: &[u64], adjacency: bool) -> Result<PolygamyGraph, ConstructionError> {
    if !(1..=10).contains(&m) {
        return Err(ConstructionError::BadParameter(format!("m must be in 1..=10, got {m}")));
    }
    build(sylvester_hadamard(m), primes, adjacency, true)
}

/// Same construction from a caller-supplied normalized Hadamard matrix.
pub fn polygamy_from_hadamard(
    h: DMatrix<i8>,
    primes: &[u64],
    adjacency: bool,
) -> Result<PolygamyGraph, ConstructionError> {
    check_hadamard(&h)?;
    let sylvester = h == sylvester_hadamard(h.nrows().trailing_zeros()) && h.nrows().is_power_of_two();
    build(h, primes, adjacency, sylvester)
}

fn build(h: DMatrix<i8>, primes: &[u64], adjacency: bool, sylvester: bool) -> Result<PolygamyGraph, ConstructionError> {
    let n = h.nrows();
    check_primes(primes, n - 1)?;
    let product = primes.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p).filter(|&x| x <= EXACT_F64));
    if product.is_none() {
        return Err(ConstructionError::BadPrimeList(
            "product of primes exceeds 2^53; eigenvalues would not be exact".into(),
        ));
    }
    let moduli: Vec<BigInt> = primes.iter().map(|&p| BigInt::from(p)).collect();
    let mut lambdas = vec![0u64];
    for r in 1..n {
        let residues: Vec<BigInt> = (1..n).map(|j| BigInt::from((1 - i64::from(h[(j, r)])) / 2)).collect();
        let x = crt(&residues, &moduli).expect("distinct primes are coprime");
        lambdas.push(x.to_u64().expect("below the prime product"));
    }
    // Entries (1/n) sum_r H_ur H_vr lambda_r, summed exactly.
    let entry = |u: usize, v: usize| -> f64 {
        let s: i128 = (0..n)
            .map(|r| i128::from(h[(u, r)]) * i128::from(h[(v, r)]) * i128::from(lambdas[r]))
            .sum();
        s as f64 / n as f64
    };
    let diag = entry(0, 0);
    let m = DMatrix::from_fn(n, n, |u, v| {
        let l = entry(u, v);
        if adjacency {
            if u == v {
                diag - l
            } else {
                -l
            }
        } else {
            l
        }
    });
    let graph = WeightedGraph::from_matrix(m, None)?;
    let mut predictions = Vec::new();
    for k in 1..n {
        let tau = 2.0 * PI / primes[k - 1] as f64;
        if sylvester {
            for u in 0..n {
                let v = u ^ k;
                if u < v {
                    predictions.push(Prediction::new(vec![u, v], tau, ExpectedKind::Proper));
                }
            }
        } else {
            predictions.push(Prediction::new(vec![0, k], tau, ExpectedKind::Proper));
        }
    }
    Ok(PolygamyGraph {
        graph,
        hadamard: h,
        primes: primes.to_vec(),
        lambdas,
        adjacency,
        sylvester,
        predictions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h4_matches_worked_example() {
        let pg = hadamard_polygamy(2, &[3, 5, 7], false).unwrap();
        assert_eq!(pg.lambdas, vec![0, 85, 36, 91]);
        let want = [
            [53.0, -35.0, -10.5, -7.5],
            [-35.0, 53.0, -7.5, -10.5],
            [-10.5, -7.5, 53.0, -35.0],
            [-7.5, -10.5, -35.0, 53.0],
        ];
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                assert_eq!(pg.graph.weight(i, j), *w);
            }
        }
        assert_eq!(pg.predictions.len(), 6);
    }

    #[test]
    fn adjacency_variant_has_zero_diagonal() {
        let pg = hadamard_polygamy(2, &[3, 5, 7], true).unwrap();
        assert_eq!(pg.graph.weight(0, 0), 0.0);
        assert_eq!(pg.graph.weight(0, 1), 35.0);
    }

    #[test]
    fn rejects_bad_primes() {
        for primes in [vec![3, 5], vec![3, 5, 5], vec![2, 3, 5], vec![3, 5, 9]] {
            assert!(matches!(
                hadamard_polygamy(2, &primes, false),
                Err(ConstructionError::BadPrimeList(_))
            ));
        }
    }

    #[test]
    fn raw_hadamard_is_checked() {
        let mut h = sylvester_hadamard(2);
        let pg = polygamy_from_hadamard(h.clone(), &[3, 5, 7], false).unwrap();
        assert!(pg.sylvester);
        h[(1, 1)] = 1;
        assert!(polygamy_from_hadamard(h, &[3, 5, 7], false).is_err());
    }
}
