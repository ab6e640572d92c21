//! A weighted graph on `n >= 4` vertices whose walk at time `tau` acts on
//! `{0, 1}` as a prescribed non-diagonal symmetric unitary `H`.
//!
//! `H = l1 (p,q)(p,q)^T + l2 (-q,p)(-q,p)^T`; eigenvalues `theta_1, theta_3`
//! solve `exp(-i tau theta) = l1, l2`, and `theta_2, theta_4` sit a whole
//! number of periods `1/xi = 2 pi / tau` above them.  Vertex 0 is `a`,
//! vertex 1 is `b`, then a block of `m` vertices and a block of `n-2-m`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;

use super::{ConstructionError, ExpectedKind, Prediction};
use crate::graph::WeightedGraph;
use crate::linalg::C64;

const INPUT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct PrescribedParams {
    pub h: [[C64; 2]; 2],
    pub tau: f64,
    pub n: usize,
    /// Size of the first uniform block; default `(n - 2) / 2`.
    pub m: Option<usize>,
    pub sigma: i64,
    pub omega: i64,
    /// Whole periods added to `theta_1` and `theta_3` on top of the
    /// principal branch.
    pub branch: [i64; 2],
    /// Eigenvalues `theta_5..theta_n`; default all zero.
    pub fillers: Option<Vec<f64>>,
}

impl PrescribedParams {
    pub fn new(h: [[C64; 2]; 2], tau: f64, n: usize) -> Self {
        PrescribedParams {
            h,
            tau,
            n,
            m: None,
            sigma: 1,
            omega: 1,
            branch: [0, 0],
            fillers: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrescribedGraph {
    #[serde(skip)]
    pub graph: WeightedGraph,
    pub p: f64,
    pub q: f64,
    /// Eigenvalues of `H` on `(p, q)` and `(-q, p)`.
    #[serde(skip)]
    pub lambda: [C64; 2],
    pub theta: [f64; 4],
    pub fillers: Vec<f64>,
    pub m: usize,
    pub tau: f64,
    pub prediction: Prediction,
}

impl PrescribedGraph {
    /// Adjacency matrix written out entry by entry, valid when all fillers
    /// are zero (their eigenvectors then drop out of `P D P^T`).
    pub fn closed_form(&self) -> DMatrix<f64> {
        let n = self.graph.n();
        let m = self.m;
        let rest = n - 2 - m;
        let [t1, t2, t3, t4] = self.theta;
        let (p, q) = (self.p, self.q);
        let (sm, sr) = ((m as f64).sqrt(), (rest as f64).sqrt());
        let block = |v: usize| if v < 2 { v } else if v < 2 + m { 2 } else { 3 };
        DMatrix::from_fn(n, n, |i, j| {
            let (bi, bj) = (block(i).min(block(j)), block(i).max(block(j)));
            match (bi, bj) {
                (0, 0) => ((t1 + t2) * p * p + (t3 + t4) * q * q) / 2.0,
                (0, 1) => (t1 + t2 - t3 - t4) * p * q / 2.0,
                (1, 1) => ((t1 + t2) * q * q + (t3 + t4) * p * p) / 2.0,
                (0, 2) => p * (t1 - t2) / (2.0 * sm),
                (0, 3) => -q * (t3 - t4) / (2.0 * sr),
                (1, 2) => q * (t1 - t2) / (2.0 * sm),
                (1, 3) => p * (t3 - t4) / (2.0 * sr),
                (2, 2) => (t1 + t2) / (2.0 * m as f64),
                (3, 3) => (t3 + t4) / (2.0 * rest as f64),
                _ => 0.0,
            }
        })
    }
}

/// Orthonormal eigenvectors of a real symmetric 2x2 matrix, as rotation angle.
fn eigen_angle(m: &Matrix2<f64>) -> f64 {
    0.5 * (2.0 * m[(0, 1)]).atan2(m[(0, 0)] - m[(1, 1)])
}

fn quad(h: &[[C64; 2]; 2], v: (f64, f64)) -> C64 {
    h[0][0] * v.0 * v.0 + (h[0][1] + h[1][0]) * v.0 * v.1 + h[1][1] * v.1 * v.1
}

/// Splits `H` into `(p, q)` with `p, q > 0` and the two eigenvalues.
fn decompose(h: &[[C64; 2]; 2]) -> Result<(f64, f64, [C64; 2]), ConstructionError> {
    let asym = (h[0][1] - h[1][0]).norm();
    let hm = nalgebra::Matrix2::new(h[0][0], h[0][1], h[1][0], h[1][1]);
    let unit = (hm * hm.adjoint() - Matrix2::<C64>::identity()).iter().fold(0.0f64, |a, x| a.max(x.norm()));
    let residual = asym.max(unit);
    if !residual.is_finite() || residual > INPUT_TOL {
        return Err(ConstructionError::NotSymmetricUnitary { residual });
    }
    if h[0][1].norm() <= INPUT_TOL {
        return Err(ConstructionError::DiagonalH);
    }
    // Re H and Im H are real symmetric and commute; either one with a
    // nonzero off-diagonal entry has the eigenvectors of H.
    let re = hm.map(|z| z.re);
    let im = hm.map(|z| z.im);
    let pick = if re[(0, 1)].abs() >= im[(0, 1)].abs() { re } else { im };
    let phi = eigen_angle(&pick);
    let (mut p, mut q) = (phi.cos(), phi.sin());
    if p * q < 0.0 {
        (p, q) = (-q, p);
    }
    if p < 0.0 {
        (p, q) = (-p, -q);
    }
    Ok((p, q, [quad(h, (p, q)), quad(h, (-q, p))]))
}

/// `n - 2` orthonormal vectors starting from the two block-uniform ones.
fn block_basis(len: usize, m: usize) -> Vec<DVector<f64>> {
    let mut basis = vec![
        DVector::from_fn(len, |i, _| if i < m { 1.0 / (m as f64).sqrt() } else { 0.0 }),
        DVector::from_fn(len, |i, _| if i >= m { 1.0 / ((len - m) as f64).sqrt() } else { 0.0 }),
    ];
    for e in 0..len {
        if basis.len() == len {
            break;
        }
        let mut v = DVector::from_fn(len, |i, _| if i == e { 1.0 } else { 0.0 });
        // Two passes of Gram-Schmidt keep the basis orthogonal to rounding.
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    basis
}

pub fn prescribed_fr(params: &PrescribedParams) -> Result<PrescribedGraph, ConstructionError> {
    let PrescribedParams { h, tau, n, sigma, omega, branch, .. } = *params;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(ConstructionError::BadParameter(format!("tau must be positive, got {tau}")));
    }
    if n < 4 {
        return Err(ConstructionError::BadParameter(format!("n must be >= 4, got {n}")));
    }
    if sigma == 0 || omega == 0 {
        return Err(ConstructionError::BadParameter("sigma and omega must be nonzero".into()));
    }
    let m = params.m.unwrap_or((n - 2) / 2);
    if m < 1 || m > n - 3 {
        return Err(ConstructionError::BadBlockSize { m, max: n - 3 });
    }
    let (p, q, lambda) = decompose(&h)?;
    let period = 2.0 * PI / tau;
    let t1 = -lambda[0].arg() / tau + branch[0] as f64 * period;
    let t3 = -lambda[1].arg() / tau + branch[1] as f64 * period;
    let theta = [t1, t1 + sigma as f64 * period, t3, t3 + omega as f64 * period];
    let scale = 1.0 + theta.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    let collides = |x: f64| theta.iter().any(|t| (t - x).abs() <= 1e-6 * scale);

    let fillers = match &params.fillers {
        Some(f) => {
            if f.len() != n - 4 {
                return Err(ConstructionError::BadParameter(format!("need {} filler eigenvalues, got {}", n - 4, f.len())));
            }
            if let Some(x) = f.iter().find(|&&x| !x.is_finite() || collides(x)) {
                return Err(ConstructionError::BadParameter(format!("filler eigenvalue {x} repeats one of theta_1..theta_4")));
            }
            f.clone()
        }
        None => {
            let mut x = 0.0;
            let mut j = 0u32;
            while collides(x) {
                j += 1;
                x = f64::from(j) * period / 2.0;
            }
            vec![x; n - 4]
        }
    };

    let basis = block_basis(n - 2, m);
    let r = 1.0 / SQRT_2;
    let mut pm = DMatrix::zeros(n, n);
    let head = [[p, -p, -q, q], [q, -q, p, -p]];
    for (row, vals) in head.iter().enumerate() {
        for (col, v) in vals.iter().enumerate() {
            pm[(row, col)] = v * r;
        }
    }
    for i in 0..n - 2 {
        pm[(2 + i, 0)] = basis[0][i] * r;
        pm[(2 + i, 1)] = basis[0][i] * r;
        pm[(2 + i, 2)] = basis[1][i] * r;
        pm[(2 + i, 3)] = basis[1][i] * r;
        for j in 0..n - 4 {
            pm[(2 + i, 4 + j)] = basis[2 + j][i];
        }
    }
    let d = DVector::from_iterator(n, theta.iter().copied().chain(fillers.iter().copied()));
    let a = &pm * DMatrix::from_diagonal(&d) * pm.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let graph = WeightedGraph::from_matrix(a, None)?;
    Ok(PrescribedGraph {
        graph,
        p,
        q,
        lambda,
        theta,
        fillers,
        m,
        tau,
        prediction: Prediction::new(vec![0, 1], tau, ExpectedKind::Proper),
    })
}
