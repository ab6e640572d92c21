//! Fractional cospectrality, parallelism and strong fractional
//! cospectrality of a vertex pair.
//!
//! A pair is described by `kappa = p/q - q/p`. Each characterization below
//! recovers `kappa` (or `(p, q)`) on its own, so the verdicts can be
//! compared against each other instead of sharing one computation.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::partition::{min_commuting_partition, IndexPartition};
use crate::poly::{bareiss_det, berkowitz, char_poly_int, IntPoly};
use crate::spectral::{subset_projector, SpectralDecomposition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CospectralError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("a pair needs two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("graph has non-integer weights")]
    NotIntegerWeighted,
    #[error("eigenvalue split {split:?} disagrees with the minimal commuting partition {partition:?}")]
    InconsistentClassSplit { split: (Vec<usize>, Vec<usize>), partition: Vec<Vec<usize>> },
    #[error("eigenvalue {r} matches neither p/q nor -q/p on the pair")]
    UnclassifiedEigenvalue { r: usize },
}

/// `(p, q)` with `p, q > 0` and `p/q - q/p = kappa`.
pub fn pq_from_kappa(kappa: f64) -> (f64, f64) {
    let x = (kappa + (kappa * kappa + 4.0).sqrt()) / 2.0;
    let norm = (1.0 + x * x).sqrt();
    (x / norm, 1.0 / norm)
}

/// Normalizes an eigenvector `(u, v)` of the restricted idempotents to the
/// convention `p, q > 0`, swapping to the orthogonal partner when the
/// components have opposite signs.
fn normalize_pq(u: f64, v: f64) -> (f64, f64) {
    let norm = u.hypot(v);
    let (u, v) = (u / norm, v / norm);
    if u * v >= 0.0 {
        (u.abs(), v.abs())
    } else {
        // (-v, u) is the partner eigenvector; it has same-sign components.
        (v.abs(), u.abs())
    }
}

fn check_pair(n: usize, a: usize, b: usize) -> Result<(), CospectralError> {
    for v in [a, b] {
        if v >= n {
            return Err(CospectralError::VertexOutOfRange { vertex: v, n });
        }
    }
    if a == b {
        return Err(CospectralError::SameVertex(a));
    }
    Ok(())
}

/// `[[E_aa, E_ab], [E_ab, E_bb]]` for every principal idempotent.
pub fn restricted_idempotents(
    s: &SpectralDecomposition,
    a: usize,
    b: usize,
) -> Result<Vec<Matrix2<f64>>, CospectralError> {
    check_pair(s.n(), a, b)?;
    Ok(s
        .idempotents()
        .iter()
        .map(|e| Matrix2::new(e[(a, a)], e[(a, b)], e[(b, a)], e[(b, b)]))
        .collect())
}

/// Outcome of one characterization.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub kappa: Option<f64>,
    /// `num/den` when the parameter was recovered in exact arithmetic.
    pub exact_kappa: Option<String>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub note: Option<String>,
}

impl ConditionVerdict {
    fn from_kappa(holds: bool, kappa: Option<f64>) -> Self {
        let (p, q) = kappa.map(pq_from_kappa).unzip();
        ConditionVerdict { holds, kappa, p, q, ..Default::default() }
    }

    fn failed(note: impl Into<String>) -> Self {
        ConditionVerdict { note: Some(note.into()), ..Default::default() }
    }

    fn exact(holds: bool, kappa: Option<BigRational>) -> Self {
        let mut v = Self::from_kappa(holds, kappa.as_ref().and_then(ToPrimitive::to_f64));
        v.exact_kappa = kappa.map(|k| k.to_string());
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassSplit {
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub rest: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCospectralityReport {
    pub a: usize,
    pub b: usize,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub ratio_plus: Option<f64>,
    pub ratio_minus: Option<f64>,
    pub fractionally_cospectral: bool,
    pub cospectral: bool,
    pub parallel: bool,
    pub strongly_fractionally_cospectral: bool,
    /// Every restricted idempotent is diagonal, so `(p, q)` is undefined.
    pub no_non_diagonal_restriction: bool,
    pub class_split: Option<ClassSplit>,
    pub simple_poles: Option<bool>,
    pub per_condition: BTreeMap<String, ConditionVerdict>,
}

impl PairCospectralityReport {
    /// True when every evaluated condition returned the same verdict.
    pub fn conditions_agree(&self) -> bool {
        let mut it = self.per_condition.values().map(|v| v.holds);
        match it.next() {
            Some(first) => it.all(|h| h == first),
            None => true,
        }
    }

    /// Largest disagreement in `(p, q)` between conditions that hold.
    pub fn pq_spread(&self) -> f64 {
        let pqs: Vec<(f64, f64)> = self
            .per_condition
            .values()
            .filter(|v| v.holds)
            .filter_map(|v| v.p.zip(v.q))
            .collect();
        let mut worst: f64 = 0.0;
        for x in &pqs {
            for y in &pqs {
                worst = worst.max((x.0 - y.0).abs()).max((x.1 - y.1).abs());
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairOptions {
    pub tol: f64,
    /// Highest walk length checked by the walk conditions; `None` means `2n`.
    pub k_max: Option<usize>,
}

impl Default for PairOptions {
    fn default() -> Self {
        PairOptions { tol: 1e-7, k_max: None }
    }
}

/// Condition (i): all restricted idempotents commute. `(p, q)` comes from
/// the eigenvectors of the most strongly non-diagonal restriction.
pub fn condition_commuting(rest: &[Matrix2<f64>], tol: f64) -> ConditionVerdict {
    let mut worst: f64 = 0.0;
    for x in rest {
        for y in rest {
            let c = x * y - y * x;
            worst = worst.max(c.amax());
        }
    }
    let holds = worst < tol;
    let Some(best) = rest.iter().max_by(|x, y| x[(0, 1)].abs().total_cmp(&y[(0, 1)].abs())) else {
        return ConditionVerdict::failed("empty spectrum");
    };
    if best[(0, 1)].abs() <= tol {
        let mut v = ConditionVerdict::failed("all restrictions diagonal");
        v.holds = holds;
        return v;
    }
    let eig = best.symmetric_eigen();
    let col = eig.eigenvectors.column(0);
    let (p, q) = normalize_pq(col[0], col[1]);
    ConditionVerdict {
        holds,
        kappa: Some(p / q - q / p),
        p: Some(p),
        q: Some(q),
        note: (!holds).then(|| format!("commutator residual {worst:e}")),
        ..Default::default()
    }
}

/// Condition (iii): `E_aa - E_bb = kappa E_ab` for every idempotent.
pub fn condition_idempotent_entries(rest: &[Matrix2<f64>], tol: f64) -> ConditionVerdict {
    let Some(best) = rest.iter().max_by(|x, y| x[(0, 1)].abs().total_cmp(&y[(0, 1)].abs())) else {
        return ConditionVerdict::failed("empty spectrum");
    };
    if best[(0, 1)].abs() <= tol {
        return ConditionVerdict::failed("all restrictions diagonal");
    }
    let kappa = (best[(0, 0)] - best[(1, 1)]) / best[(0, 1)];
    let holds = rest
        .iter()
        .all(|m| (m[(0, 0)] - m[(1, 1)] - kappa * m[(0, 1)]).abs() < tol);
    ConditionVerdict::from_kappa(holds, Some(kappa))
}

/// Condition (viii): the modules generated by `p e_a + q e_b` and
/// `-q e_a + p e_b` are orthogonal, i.e. `(p,q) E_r (-q,p)^T = 0` for all
/// `r`. The angle is solved from the restriction with the largest
/// `(E_aa - E_bb, 2 E_ab)`.
pub fn condition_orthogonal_modules(rest: &[Matrix2<f64>], tol: f64) -> ConditionVerdict {
    let weight = |m: &Matrix2<f64>| (m[(0, 0)] - m[(1, 1)]).hypot(2.0 * m[(0, 1)]);
    let Some(best) = rest.iter().max_by(|x, y| weight(x).total_cmp(&weight(y))) else {
        return ConditionVerdict::failed("empty spectrum");
    };
    if best[(0, 1)].abs() <= tol {
        return ConditionVerdict::failed("all restrictions diagonal");
    }
    let phi = 0.5 * (2.0 * best[(0, 1)]).atan2(best[(0, 0)] - best[(1, 1)]);
    let (p, q) = normalize_pq(phi.cos(), phi.sin());
    let holds = rest.iter().all(|m| {
        let u = nalgebra::Vector2::new(p, q);
        let w = nalgebra::Vector2::new(-q, p);
        (u.transpose() * m * w)[(0, 0)].abs() < tol
    });
    ConditionVerdict {
        holds,
        kappa: Some(p / q - q / p),
        p: Some(p),
        q: Some(q),
        ..Default::default()
    }
}

fn to_big(g: &WeightedGraph) -> Option<Vec<Vec<BigInt>>> {
    g.integer_matrix()
        .map(|m| m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
}

fn big_matmul(x: &[Vec<BigInt>], y: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                .collect()
        })
        .collect()
}

/// Checks `lhs_k = kappa * rhs_k` for all `k`, recovering `kappa` from the
/// first nonzero `rhs_k`, in exact rational arithmetic.
fn exact_proportional(pairs: &[(BigInt, BigInt)]) -> (bool, Option<BigRational>) {
    let Some((l0, r0)) = pairs.iter().find(|(_, r)| !r.is_zero()) else {
        return (false, None);
    };
    let kappa = BigRational::new(l0.clone(), r0.clone());
    let holds = pairs
        .iter()
        .all(|(l, r)| l * kappa.denom() == r * kappa.numer());
    (holds, Some(kappa))
}

/// Same in floating point; `kappa` comes from the largest `|rhs_k|`.
fn float_proportional(pairs: &[(f64, f64)], tol: f64) -> (bool, Option<f64>) {
    let Some((l0, r0)) = pairs
        .iter()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .filter(|(_, r)| r.abs() > tol)
    else {
        return (false, None);
    };
    let kappa = l0 / r0;
    (pairs.iter().all(|(l, r)| (l - kappa * r).abs() < tol), Some(kappa))
}

fn normalized_weights(g: &WeightedGraph) -> DMatrix<f64> {
    let norm = g.inf_norm();
    if norm == 0.0 {
        g.weights().clone()
    } else {
        g.weights() / norm
    }
}

/// Condition (iv): `(A^k)_aa - (A^k)_bb = kappa (A^k)_ab` for `k <= k_max`,
/// from full matrix powers.
pub fn condition_walk_counts(g: &WeightedGraph, a: usize, b: usize, k_max: usize, tol: f64) -> ConditionVerdict {
    if let Some(m) = to_big(g) {
        let n = m.len();
        let mut power: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        let mut pairs = Vec::with_capacity(k_max + 1);
        for _ in 0..=k_max {
            pairs.push((&power[a][a] - &power[b][b], power[a][b].clone()));
            power = big_matmul(&power, &m);
        }
        let (holds, kappa) = exact_proportional(&pairs);
        return ConditionVerdict::exact(holds, kappa);
    }
    let m = normalized_weights(g);
    let n = m.nrows();
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut pairs = Vec::with_capacity(k_max + 1);
    for _ in 0..=k_max {
        pairs.push((power[(a, a)] - power[(b, b)], power[(a, b)]));
        power = &power * &m;
    }
    let (holds, kappa) = float_proportional(&pairs, tol);
    ConditionVerdict::from_kappa(holds, kappa)
}

/// Condition (vi): `M_a^T M_a - M_b^T M_b = kappa M_a^T M_b` for the walk
/// matrices `M_v = [e_v, A e_v, .., A^(n-1) e_v]`.
pub fn condition_walk_matrix(g: &WeightedGraph, a: usize, b: usize, tol: f64) -> ConditionVerdict {
    let n = g.n();
    if let Some(m) = to_big(g) {
        let walk = |v: usize| {
            let mut cols = Vec::with_capacity(n);
            let mut x: Vec<BigInt> = (0..n).map(|i| BigInt::from(u8::from(i == v))).collect();
            for _ in 0..n {
                let next = (0..n)
                    .map(|i| (0..n).fold(BigInt::zero(), |acc, j| acc + &m[i][j] * &x[j]))
                    .collect();
                cols.push(std::mem::replace(&mut x, next));
            }
            cols
        };
        let (ma, mb) = (walk(a), walk(b));
        let dot = |x: &[BigInt], y: &[BigInt]| x.iter().zip(y).fold(BigInt::zero(), |acc, (p, q)| acc + p * q);
        let mut pairs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let lhs = dot(&ma[i], &ma[j]) - dot(&mb[i], &mb[j]);
                pairs.push((lhs, dot(&ma[i], &mb[j])));
            }
        }
        let (holds, kappa) = exact_proportional(&pairs);
        return ConditionVerdict::exact(holds, kappa);
    }
    let m = normalized_weights(g);
    let walk = |v: usize| {
        let mut w = DMatrix::<f64>::zeros(n, n);
        let mut x = DVector::<f64>::zeros(n);
        x[v] = 1.0;
        for k in 0..n {
            w.set_column(k, &x);
            x = &m * x;
        }
        w
    };
    let (ma, mb) = (walk(a), walk(b));
    let lhs = ma.transpose() * &ma - mb.transpose() * &mb;
    let rhs = ma.transpose() * &mb;
    let pairs: Vec<(f64, f64)> = lhs.iter().zip(rhs.iter()).map(|(l, r)| (*l, *r)).collect();
    let (holds, kappa) = float_proportional(&pairs, tol);
    ConditionVerdict::from_kappa(holds, kappa)
}

/// Exact characteristic polynomials of `X`, `X\a`, `X\b`, `X\{a,b}`.
#[derive(Clone, Debug, Serialize)]
pub struct IntegerCharPolys {
    pub full: IntPoly,
    pub without_a: IntPoly,
    pub without_b: IntPoly,
    pub without_ab: IntPoly,
}

pub fn char_poly_exact(g: &WeightedGraph) -> Result<IntPoly, CospectralError> {
    let m = to_big(g).ok_or(CospectralError::NotIntegerWeighted)?;
    Ok(char_poly_int(&m))
}

pub fn char_polys_for_pair(g: &WeightedGraph, a: usize, b: usize) -> Result<IntegerCharPolys, CospectralError> {
    check_pair(g.n(), a, b)?;
    Ok(IntegerCharPolys {
        full: char_poly_exact(g)?,
        without_a: char_poly_exact(&g.delete_vertices(&[a]))?,
        without_b: char_poly_exact(&g.delete_vertices(&[b]))?,
        without_ab: char_poly_exact(&g.delete_vertices(&[a, b]))?,
    })
}

/// `adj(yI - A)_{ab}` at an integer point, by an exact cofactor.
fn adjugate_entry_at(m: &[Vec<BigInt>], a: usize, b: usize, y: &BigInt) -> BigInt {
    let n = m.len();
    let minor: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| i != b)
        .map(|i| {
            (0..n)
                .filter(|&j| j != a)
                .map(|j| if i == j { y - &m[i][j] } else { -m[i][j].clone() })
                .collect()
        })
        .collect();
    let det = bareiss_det(&minor);
    if (a + b).is_multiple_of(2) {
        det
    } else {
        -det
    }
}

/// Condition (vii): `phi(X\a) - phi(X\b) = kappa sqrt(phi(X\a) phi(X\b) - phi(X) phi(X\{a,b}))`.
///
/// The radicand must be a perfect square. Its root is only defined up to
/// sign; the sign is fixed against an exact cofactor of `yI - A`, which is
/// the polynomial the root stands for.
pub fn condition_char_poly(g: &WeightedGraph, a: usize, b: usize, tol: f64) -> ConditionVerdict {
    if let (Some(m), Ok(polys)) = (to_big(g), char_polys_for_pair(g, a, b)) {
        let radicand = &(&polys.without_a * &polys.without_b) - &(&polys.full * &polys.without_ab);
        let Some(mut root) = radicand.exact_sqrt() else {
            return ConditionVerdict::failed("radicand is not a perfect square");
        };
        if root.is_zero() {
            return ConditionVerdict::failed("radicand vanishes");
        }
        let base = BigInt::from(g.inf_norm().ceil() as i64 + 1);
        let Some((y, sv)) = (0..=2 * g.n() as i64 + 2)
            .map(|i| base.clone() + BigInt::from(i))
            .map(|y| {
                let v = root.eval(&y);
                (y, v)
            })
            .find(|(_, v)| !v.is_zero())
        else {
            return ConditionVerdict::failed("square root vanishes at every probe point");
        };
        let adj = adjugate_entry_at(&m, a, b, &y);
        if adj == -sv.clone() {
            root = -&root;
        } else if adj != sv {
            return ConditionVerdict::failed("square root disagrees with the cofactor");
        }
        let diff = &polys.without_a - &polys.without_b;
        let pairs: Vec<(BigInt, BigInt)> = (0..=radicand.degree().unwrap_or(0).max(diff.degree().unwrap_or(0)))
            .map(|i| (diff.coeff(i), root.coeff(i)))
            .collect();
        let (holds, kappa) = exact_proportional(&pairs);
        return ConditionVerdict::exact(holds, kappa);
    }
    condition_char_poly_float(g, a, b, tol)
}

fn float_poly_mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    if x.is_empty() || y.is_empty() {
        return vec![];
    }
    let mut out = vec![0.0; x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn float_poly_sqrt(p: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut p = p.to_vec();
    let scale = p.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    while p.last().is_some_and(|c| c.abs() <= tol * scale.max(1.0)) {
        p.pop();
    }
    if p.is_empty() {
        return Some(vec![]);
    }
    let deg = p.len() - 1;
    if deg % 2 == 1 || p[deg] < 0.0 {
        return None;
    }
    let m = deg / 2;
    let mut s = vec![0.0; m + 1];
    s[m] = p[deg].sqrt();
    for k in (0..m).rev() {
        let acc: f64 = (k + 1..m).map(|i| s[i] * s[m + k - i]).sum();
        s[k] = (p[m + k] - acc) / (2.0 * s[m]);
    }
    let sq = float_poly_mul(&s, &s);
    let ok = (0..p.len().max(sq.len())).all(|i| {
        (p.get(i).copied().unwrap_or(0.0) - sq.get(i).copied().unwrap_or(0.0)).abs() <= tol * scale.max(1.0)
    });
    ok.then_some(s)
}

/// Floating-point version of condition (vii) on the normalized matrix.
fn condition_char_poly_float(g: &WeightedGraph, a: usize, b: usize, tol: f64) -> ConditionVerdict {
    let norm = g.inf_norm();
    let scaled = |h: &WeightedGraph| -> Vec<f64> {
        let rows: Vec<Vec<f64>> = h
            .weights()
            .row_iter()
            .map(|r| r.iter().map(|x| if norm > 0.0 { x / norm } else { *x }).collect())
            .collect();
        berkowitz(&rows)
    };
    let full = scaled(g);
    let pa = scaled(&g.delete_vertices(&[a]));
    let pb = scaled(&g.delete_vertices(&[b]));
    let pab = scaled(&g.delete_vertices(&[a, b]));
    let l = float_poly_mul(&pa, &pb);
    let r = float_poly_mul(&full, &pab);
    let radicand: Vec<f64> = (0..l.len().max(r.len()))
        .map(|i| l.get(i).copied().unwrap_or(0.0) - r.get(i).copied().unwrap_or(0.0))
        .collect();
    let Some(mut root) = float_poly_sqrt(&radicand, tol) else {
        return ConditionVerdict::failed("radicand is not a perfect square");
    };
    if root.is_empty() {
        return ConditionVerdict::failed("radicand vanishes");
    }
    // Sign: the root equals adj(yI - B)_{ab}; compare at a point beyond the spectrum.
    let y = 2.0 + 0.25 * g.n() as f64;
    let m = normalized_weights(g);
    let n = g.n();
    let minor = DMatrix::from_fn(n - 1, n - 1, |i, j| {
        let ii = if i >= b { i + 1 } else { i };
        let jj = if j >= a { j + 1 } else { j };
        if ii == jj { y - m[(ii, jj)] } else { -m[(ii, jj)] }
    });
    let adj = minor.determinant() * if (a + b).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sv: f64 = root.iter().rev().fold(0.0, |acc, c| acc * y + c);
    if adj * sv < 0.0 {
        root.iter_mut().for_each(|c| *c = -*c);
    }
    let diff: Vec<f64> = (0..pa.len().max(pb.len()))
        .map(|i| pa.get(i).copied().unwrap_or(0.0) - pb.get(i).copied().unwrap_or(0.0))
        .collect();
    let pairs: Vec<(f64, f64)> = (0..diff.len().max(root.len()))
        .map(|i| (diff.get(i).copied().unwrap_or(0.0), root.get(i).copied().unwrap_or(0.0)))
        .collect();
    let (holds, kappa) = float_proportional(&pairs, tol);
    ConditionVerdict::from_kappa(holds, kappa)
}

/// `kappa`-form walk identity for a caller-supplied `(p, q)`, through `k_max`.
pub fn walk_condition(g: &WeightedGraph, a: usize, b: usize, p: f64, q: f64, k_max: usize, tol: f64) -> bool {
    let kappa = p / q - q / p;
    let m = normalized_weights(g);
    let n = g.n();
    let mut power = DMatrix::<f64>::identity(n, n);
    for _ in 0..=k_max {
        if (power[(a, a)] - power[(b, b)] - kappa * power[(a, b)]).abs() >= tol {
            return false;
        }
        power = &power * &m;
    }
    true
}

/// Every `E_r e_a` is parallel to `E_r e_b`. If exactly one of the two
/// vanishes for some `r`, the pair is not parallel.
pub fn parallel_vertices(s: &SpectralDecomposition, a: usize, b: usize, tol: f64) -> bool {
    if a == b {
        return true;
    }
    s.idempotents().iter().all(|e| {
        let (u, v) = (e.column(a), e.column(b));
        let (nu, nv) = (u.norm(), v.norm());
        match (nu < tol, nv < tol) {
            (true, true) => true,
            (true, false) | (false, true) => false,
            (false, false) => {
                let c = u.dot(&v) / (nu * nv);
                (1.0 - c * c).abs() < tol
            }
        }
    })
}

/// All characterizations of fractional cospectrality for a pair, plus
/// parallelism, strong fractional cospectrality and its class split.
pub fn analyze_pair(
    g: &WeightedGraph,
    s: &SpectralDecomposition,
    a: usize,
    b: usize,
    opts: &PairOptions,
) -> Result<PairCospectralityReport, CospectralError> {
    check_pair(g.n(), a, b)?;
    if !g.is_connected() {
        return Err(CospectralError::DisconnectedGraph);
    }
    let tol = opts.tol;
    let rest = restricted_idempotents(s, a, b)?;
    let no_non_diagonal = rest.iter().all(|m| m[(0, 1)].abs() <= tol);
    let k_max = opts.k_max.unwrap_or(2 * g.n());

    let mut per_condition = BTreeMap::new();
    let primary = condition_commuting(&rest, tol);
    per_condition.insert("i".to_string(), primary.clone());
    per_condition.insert("iii".to_string(), condition_idempotent_entries(&rest, tol));
    per_condition.insert("iv".to_string(), condition_walk_counts(g, a, b, k_max, tol));
    per_condition.insert("vi".to_string(), condition_walk_matrix(g, a, b, tol));
    per_condition.insert("vii".to_string(), condition_char_poly(g, a, b, tol));
    per_condition.insert("viii".to_string(), condition_orthogonal_modules(&rest, tol));

    let fractionally_cospectral = primary.holds && !no_non_diagonal;
    let (p, q) = if fractionally_cospectral { (primary.p, primary.q) } else { (None, None) };
    let cospectral = match (p, q) {
        (Some(p), Some(q)) => (p.abs() - q.abs()).abs() < tol,
        _ => false,
    };
    let parallel = parallel_vertices(s, a, b, tol);
    let strongly = fractionally_cospectral && parallel;

    let class_split = match (strongly, p, q) {
        (true, Some(p), Some(q)) => Some(class_split(s, a, b, p, q, tol)?),
        _ => None,
    };
    if let Some(split) = &class_split {
        cross_check_split(s, a, b, split)?;
    }
    let simple_poles = if g.integer_weighted() { simple_poles_check(g, a, b).ok() } else { None };

    Ok(PairCospectralityReport {
        a,
        b,
        p,
        q,
        ratio_plus: p.zip(q).map(|(p, q)| p / q),
        ratio_minus: p.zip(q).map(|(p, q)| -q / p),
        fractionally_cospectral,
        cospectral,
        parallel,
        strongly_fractionally_cospectral: strongly,
        no_non_diagonal_restriction: no_non_diagonal,
        class_split,
        simple_poles,
        per_condition,
    })
}

fn class_split(
    s: &SpectralDecomposition,
    a: usize,
    b: usize,
    p: f64,
    q: f64,
    tol: f64,
) -> Result<ClassSplit, CospectralError> {
    let (plus, minus) = (p / q, -q / p);
    let mut split = ClassSplit { c1: vec![], c2: vec![], rest: vec![] };
    for (r, e) in s.idempotents().iter().enumerate() {
        let (u, v) = (e.column(a), e.column(b));
        let scale = u.norm().max(v.norm());
        if scale < tol {
            split.rest.push(r);
        } else if (u - v * plus).norm() < 1e-6 * scale.max(1.0) {
            split.c1.push(r);
        } else if (u - v * minus).norm() < 1e-6 * scale.max(1.0) {
            split.c2.push(r);
        } else {
            return Err(CospectralError::UnclassifiedEigenvalue { r });
        }
    }
    Ok(split)
}

/// The two classes with nonzero restriction in the minimal commuting
/// partition for `{a, b}` must be exactly `C_1` and `C_2`.
fn cross_check_split(
    s: &SpectralDecomposition,
    a: usize,
    b: usize,
    split: &ClassSplit,
) -> Result<(), CospectralError> {
    let k = subset_projector(&[a, b], s.n()).map_err(|_| CospectralError::SameVertex(a))?;
    let ci = min_commuting_partition(s, &k, None);
    let nonzero: Vec<Vec<usize>> = ci
        .partition
        .classes()
        .iter()
        .zip(&ci.nonzero)
        .filter(|(_, &nz)| nz)
        .map(|(c, _)| c.clone())
        .collect();
    let ok = nonzero.len() == 2 && nonzero.contains(&split.c1) && nonzero.contains(&split.c2);
    if ok {
        Ok(())
    } else {
        Err(CospectralError::InconsistentClassSplit {
            split: (split.c1.clone(), split.c2.clone()),
            partition: ci.partition.classes().to_vec(),
        })
    }
}

/// The reduced denominator of `phi(X\{a,b}) / phi(X)` is squarefree.
pub fn simple_poles_check(g: &WeightedGraph, a: usize, b: usize) -> Result<bool, CospectralError> {
    let polys = char_polys_for_pair(g, a, b)?;
    let common = polys.full.gcd(&polys.without_ab);
    let reduced = polys
        .full
        .div_exact(&common)
        .or_else(|| polys.full.div_exact(&-&common))
        .unwrap_or_else(|| polys.full.clone());
    Ok(reduced.is_squarefree() || reduced.degree() == Some(0))
}

/// Partition of the eigenvalue indices induced by a class split, with the
/// vanishing indices as singletons.
pub fn split_partition(split: &ClassSplit, len: usize) -> Option<IndexPartition> {
    let mut classes = vec![split.c1.clone(), split.c2.clone()];
    classes.extend(split.rest.iter().map(|&r| vec![r]));
    IndexPartition::new(len, classes)
}

/// Sign-insensitive comparison of two `(p, q)` pairs.
pub fn same_pq(x: (f64, f64), y: (f64, f64), tol: f64) -> bool {
    let direct = (x.0 - y.0).abs() < tol && (x.1 - y.1).abs() < tol;
    let flipped = (x.0 + y.0).abs() < tol && (x.1 + y.1).abs() < tol;
    direct || flipped
}

/// Numerator and denominator of an exact `kappa`, if recovered.
pub fn exact_kappa_parts(v: &ConditionVerdict) -> Option<(BigInt, BigInt)> {
    let s = v.exact_kappa.as_ref()?;
    let r: BigRational = s.parse().ok()?;
    Some((r.numer().clone(), r.denom().abs()))
}
