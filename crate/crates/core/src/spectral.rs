//! Spectral decomposition into principal idempotents and the walk
//! `U(t) = exp(-i t A)` built from it.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::linalg::{max_abs, CMatrix, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("symmetric eigensolver did not converge")]
    EigensolverFailure,
    #[error("cluster tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("subset is empty")]
    EmptySubset,
    #[error("vertex {0} listed twice in subset")]
    DuplicateVertex(usize),
}

/// Non-fatal observations made while clustering eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum SpectralWarning {
    /// Two neighbouring clusters are separated by a gap only slightly
    /// larger than the merge threshold.
    ClusterAmbiguity { between: (usize, usize), gap: f64 },
}

/// Distinct eigenvalues in decreasing order with their principal idempotents.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    idempotents: Vec<DMatrix<f64>>,
    eigenvectors: Vec<DMatrix<f64>>,
    multiplicities: Vec<usize>,
    cluster_tol: f64,
    warnings: Vec<SpectralWarning>,
}

/// Default merge threshold for a matrix with the given infinity norm.
pub fn default_cluster_tol(inf_norm: f64) -> f64 {
    1e-9 * (1.0 + inf_norm)
}

pub fn spectral_decomposition(
    g: &WeightedGraph,
    cluster_tol: Option<f64>,
) -> Result<SpectralDecomposition, SpectralError> {
    SpectralDecomposition::of_matrix(g.weights(), cluster_tol)
}

impl SpectralDecomposition {
    /// Decomposes a real symmetric matrix. `cluster_tol` defaults to
    /// [`default_cluster_tol`].
    pub fn of_matrix(a: &DMatrix<f64>, cluster_tol: Option<f64>) -> Result<Self, SpectralError> {
        let n = a.nrows();
        let inf_norm = a
            .row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(inf_norm));
        if tol.is_nan() || tol <= 0.0 {
            return Err(SpectralError::NonPositiveTolerance(tol));
        }
        if n == 0 {
            return Ok(SpectralDecomposition {
                eigenvalues: vec![],
                idempotents: vec![],
                eigenvectors: vec![],
                multiplicities: vec![],
                cluster_tol: tol,
                warnings: vec![],
            });
        }
        let eig = a
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 10_000)
            .ok_or(SpectralError::EigensolverFailure)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

        let mut clusters: Vec<Vec<usize>> = vec![vec![order[0]]];
        let mut warnings = Vec::new();
        for w in order.windows(2) {
            let gap = eig.eigenvalues[w[0]] - eig.eigenvalues[w[1]];
            if gap <= tol {
                clusters.last_mut().expect("nonempty").push(w[1]);
            } else {
                if gap < 10.0 * tol {
                    let c = clusters.len();
                    warnings.push(SpectralWarning::ClusterAmbiguity { between: (c - 1, c), gap });
                }
                clusters.push(vec![w[1]]);
            }
        }

        let mut eigenvalues = Vec::with_capacity(clusters.len());
        let mut idempotents = Vec::with_capacity(clusters.len());
        let mut eigenvectors = Vec::with_capacity(clusters.len());
        let mut multiplicities = Vec::with_capacity(clusters.len());
        for cluster in &clusters {
            let mean = cluster.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / cluster.len() as f64;
            let v = DMatrix::from_fn(n, cluster.len(), |i, j| eig.eigenvectors[(i, cluster[j])]);
            let e = &v * v.transpose();
            eigenvalues.push(mean);
            idempotents.push(e);
            eigenvectors.push(v);
            multiplicities.push(cluster.len());
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            idempotents,
            eigenvectors,
            multiplicities,
            cluster_tol: tol,
            warnings,
        })
    }

    pub fn n(&self) -> usize {
        self.idempotents.first().map_or(0, |e| e.nrows())
    }

    /// Number of distinct eigenvalues (`d + 1`).
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn idempotents(&self) -> &[DMatrix<f64>] {
        &self.idempotents
    }

    pub fn idempotent(&self, r: usize) -> &DMatrix<f64> {
        &self.idempotents[r]
    }

    /// Orthonormal basis of the `r`-th eigenspace, one vector per column.
    pub fn eigenvectors(&self, r: usize) -> &DMatrix<f64> {
        &self.eigenvectors[r]
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn warnings(&self) -> &[SpectralWarning] {
        &self.warnings
    }

    /// `sum_r theta_r E_r`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.n();
        self.eigenvalues
            .iter()
            .zip(&self.idempotents)
            .fold(DMatrix::zeros(n, n), |acc, (t, e)| acc + e * *t)
    }

    /// Worst deviations from the idempotent identities.
    pub fn check_invariants(&self, a: &DMatrix<f64>) -> InvariantReport {
        let n = self.n();
        let sum = self.idempotents.iter().fold(DMatrix::zeros(n, n), |acc, e| acc + e);
        let resolution = max_abs(&(sum - DMatrix::identity(n, n)));
        let mut orthogonality: f64 = 0.0;
        for (r, er) in self.idempotents.iter().enumerate() {
            for (s, es) in self.idempotents.iter().enumerate() {
                let prod = er * es;
                let dev = if r == s { max_abs(&(prod - er)) } else { max_abs(&prod) };
                orthogonality = orthogonality.max(dev);
            }
        }
        let reconstruction = max_abs(&(self.reconstruct() - a));
        let rank_mismatch = self
            .idempotents
            .iter()
            .zip(&self.multiplicities)
            .any(|(e, &m)| e.trace().round() as i64 != m as i64);
        let min_gap = self
            .eigenvalues
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min);
        InvariantReport {
            resolution,
            orthogonality,
            reconstruction,
            rank_mismatch,
            min_gap,
            multiplicity_total: self.multiplicities.iter().sum(),
        }
    }

    /// `U(t) = sum_r exp(-i t theta_r) E_r`.
    pub fn transition_matrix(&self, t: f64) -> CMatrix {
        let n = self.n();
        let mut u = CMatrix::zeros(n, n);
        for (theta, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            let phase = C64::from_polar(1.0, -t * theta);
            u.zip_apply(e, |x, y| *x += phase * y);
        }
        u
    }

    /// Column `a` of `U(t)`.
    pub fn evolve_vertex(&self, a: usize, t: f64) -> Result<DVector<C64>, SpectralError> {
        let n = self.n();
        if a >= n {
            return Err(SpectralError::VertexOutOfRange { vertex: a, n });
        }
        let mut out = DVector::from_element(n, C64::new(0.0, 0.0));
        for (theta, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            let phase = C64::from_polar(1.0, -t * theta);
            for i in 0..n {
                out[i] += phase * e[(i, a)];
            }
        }
        Ok(out)
    }

    /// Phases `exp(-i t theta_r)` for every distinct eigenvalue.
    pub fn phases(&self, t: f64) -> Vec<C64> {
        self.eigenvalues.iter().map(|th| C64::from_polar(1.0, -t * th)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub resolution: f64,
    pub orthogonality: f64,
    pub reconstruction: f64,
    pub rank_mismatch: bool,
    pub min_gap: f64,
    pub multiplicity_total: usize,
}

impl InvariantReport {
    pub fn holds(&self, tol: f64, cluster_tol: f64, n: usize) -> bool {
        self.resolution < tol
            && self.orthogonality < tol
            && self.reconstruction < tol
            && !self.rank_mismatch
            && self.min_gap > cluster_tol
            && self.multiplicity_total == n
    }
}

/// The diagonal 0/1 projector onto a vertex subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetProjector {
    subset: Vec<usize>,
    n: usize,
}

pub fn subset_projector(k: &[usize], n: usize) -> Result<SubsetProjector, SpectralError> {
    if k.is_empty() {
        return Err(SpectralError::EmptySubset);
    }
    let mut subset = k.to_vec();
    subset.sort_unstable();
    for w in subset.windows(2) {
        if w[0] == w[1] {
            return Err(SpectralError::DuplicateVertex(w[0]));
        }
    }
    if let Some(&v) = subset.iter().find(|&&v| v >= n) {
        return Err(SpectralError::VertexOutOfRange { vertex: v, n });
    }
    Ok(SubsetProjector { subset, n })
}

impl SubsetProjector {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.subset.binary_search(&v).is_ok()
    }

    /// Vertices outside the subset, increasing.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|v| !self.contains(*v)).collect()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if i == j && self.contains(i) { 1.0 } else { 0.0 })
    }
}
