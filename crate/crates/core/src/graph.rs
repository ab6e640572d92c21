//! Weighted graphs and their JSON form.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest tolerated `|w[i][j] - w[j][i]|` before a raw matrix is rejected.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("matrix is asymmetric: |w[{i}][{j}] - w[{j}][{i}]| = {gap:e}")]
    AsymmetricBeyondTolerance { i: usize, j: usize, gap: f64 },
    #[error("non-finite entry at ({i}, {j})")]
    NonFiniteEntry { i: usize, j: usize },
    #[error("{got} labels supplied for {n} vertices")]
    LabelCountMismatch { n: usize, got: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({i}, {j}) listed more than once")]
    DuplicateEdge { i: usize, j: usize },
    #[error("edge ({i}, {i}) is a loop; list it under \"loops\"")]
    LoopInEdgeList { i: usize },
    #[error("declared n = {declared} but the matrix has {actual} rows")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// A real symmetric weight matrix with vertex labels.
///
/// Diagonal entries are loop weights. The matrix is stored exactly as
/// validated; nothing downstream mutates it.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    weights: DMatrix<f64>,
    labels: Vec<String>,
    integer_weighted: bool,
}

impl WeightedGraph {
    /// Validates a square matrix given row by row.
    pub fn from_rows(rows: &[Vec<f64>], labels: Option<Vec<String>>) -> Result<Self, GraphError> {
        let n = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GraphError::NonSquare { row, len: r.len(), expected: n });
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::from_matrix(m, labels)
    }

    /// Validates a matrix: finite, symmetric to [`SYMMETRY_TOL`], labels
    /// matching the vertex count. Symmetry is then enforced exactly by
    /// averaging mirrored entries.
    pub fn from_matrix(raw: DMatrix<f64>, labels: Option<Vec<String>>) -> Result<Self, GraphError> {
        if raw.nrows() != raw.ncols() {
            return Err(GraphError::NonSquare { row: 0, len: raw.ncols(), expected: raw.nrows() });
        }
        let n = raw.nrows();
        for i in 0..n {
            for j in 0..n {
                if !raw[(i, j)].is_finite() {
                    return Err(GraphError::NonFiniteEntry { i, j });
                }
            }
        }
        let mut weights = raw;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (weights[(i, j)], weights[(j, i)]);
                let gap = (a - b).abs();
                if gap > SYMMETRY_TOL {
                    return Err(GraphError::AsymmetricBeyondTolerance { i, j, gap });
                }
                if a != b {
                    let mid = 0.5 * (a + b);
                    weights[(i, j)] = mid;
                    weights[(j, i)] = mid;
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(GraphError::LabelCountMismatch { n, got: l.len() })
            }
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let integer_weighted = weights.iter().all(|w| *w == w.round());
        Ok(WeightedGraph { weights, labels, integer_weighted })
    }

    /// Builds a graph from an edge list `(i, j, w)` and loop list `(i, w)`.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize, f64)],
        loops: &[(usize, f64)],
        labels: Option<Vec<String>>,
    ) -> Result<Self, GraphError> {
        let mut m = DMatrix::zeros(n, n);
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, w) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(GraphError::LoopInEdgeList { i });
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(GraphError::DuplicateEdge { i, j });
            }
            m[(i, j)] = w;
            m[(j, i)] = w;
        }
        for &(i, w) in loops {
            if i >= n {
                return Err(GraphError::VertexOutOfRange { vertex: i, n });
            }
            if seen.insert((i, i)) {
                m[(i, i)] = w;
            } else {
                return Err(GraphError::DuplicateEdge { i, j: i });
            }
        }
        Self::from_matrix(m, labels)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn integer_weighted(&self) -> bool {
        self.integer_weighted
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::LabelCountMismatch { n: self.n(), got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        self.weights
            .row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// A simple graph: 0/1 off-diagonal weights and no loops.
    pub fn is_simple(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| {
            self.weights[(i, i)] == 0.0
                && (0..n).all(|j| i == j || self.weights[(i, j)] == 0.0 || self.weights[(i, j)] == 1.0)
        })
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&w| w != v && self.weights[(v, w)] != 0.0)
    }

    /// Breadth-first distances from `source` over nonzero off-diagonal weights.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        if source >= self.n() {
            return dist;
        }
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for w in self.neighbours(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Two-colourability of the support graph.
    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap_or(false);
                if self.weights[(v, v)] != 0.0 {
                    return false;
                }
                for w in self.neighbours(v) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Common row sum when every row sums to the same value (weighted degree).
    pub fn regular_degree(&self) -> Option<f64> {
        let sums: Vec<f64> = self.weights.row_iter().map(|r| r.sum()).collect();
        let first = *sums.first()?;
        let scale = 1.0 + first.abs();
        sums.iter().all(|s| (s - first).abs() <= 1e-12 * scale).then_some(first)
    }

    /// Degree of `v` counted as the number of neighbours.
    pub fn degree(&self, v: usize) -> usize {
        self.neighbours(v).count()
    }

    /// Graph with the listed vertices removed, in the original order.
    pub fn delete_vertices(&self, removed: &[usize]) -> WeightedGraph {
        let keep: Vec<usize> = (0..self.n()).filter(|v| !removed.contains(v)).collect();
        let m = DMatrix::from_fn(keep.len(), keep.len(), |i, j| self.weights[(keep[i], keep[j])]);
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        WeightedGraph {
            weights: m,
            labels,
            integer_weighted: self.integer_weighted,
        }
    }

    /// Weights as exact integers, when the graph is integer-weighted.
    pub fn integer_matrix(&self) -> Option<Vec<Vec<i64>>> {
        if !self.integer_weighted {
            return None;
        }
        Some(
            self.weights
                .row_iter()
                .map(|r| r.iter().map(|x| *x as i64).collect())
                .collect(),
        )
    }

    /// Resolves a vertex token: a label first, then a plain index.
    pub fn resolve_vertex(&self, token: &str) -> Option<usize> {
        let token = token.trim();
        self.labels
            .iter()
            .position(|l| l == token)
            .or_else(|| token.parse::<usize>().ok().filter(|&i| i < self.n()))
    }

    pub fn to_json(&self) -> GraphJson {
        let n = self.n();
        let mut edges = Vec::new();
        let mut loops = Vec::new();
        for i in 0..n {
            if self.weights[(i, i)] != 0.0 {
                loops.push((i, self.weights[(i, i)]));
            }
            for j in (i + 1)..n {
                if self.weights[(i, j)] != 0.0 {
                    edges.push((i, j, self.weights[(i, j)]));
                }
            }
        }
        GraphJson {
            n,
            labels: Some(self.labels.clone()),
            edges,
            loops: Some(loops),
            matrix: None,
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        if let Some(rows) = &json.matrix {
            if rows.len() != json.n {
                return Err(GraphError::SizeMismatch { declared: json.n, actual: rows.len() });
            }
            return Self::from_rows(rows, json.labels.clone());
        }
        Self::from_edges(
            json.n,
            &json.edges,
            json.loops.as_deref().unwrap_or(&[]),
            json.labels.clone(),
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        let json: GraphJson = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("graph JSON serializes")
    }

    /// Vertex-count keyed summary used by reports.
    pub fn summary(&self) -> BTreeMap<&'static str, serde_json::Value> {
        BTreeMap::from([
            ("n", serde_json::json!(self.n())),
            ("integer_weighted", serde_json::json!(self.integer_weighted)),
            ("connected", serde_json::json!(self.is_connected())),
        ])
    }
}

/// On-disk graph format. `matrix` takes precedence over `edges`/`loops`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loops: Option<Vec<(usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}
