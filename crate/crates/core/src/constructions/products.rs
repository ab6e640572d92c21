//! Cartesian and direct products, double covers and joins.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{builders, ConstructionError};
use crate::graph::WeightedGraph;
use crate::linalg::{complexify, expm_minus_i, kron, kron_c, max_abs, max_abs_c, CMatrix, C64};
use crate::partition::RevivalKind;
use crate::spectral::SpectralDecomposition;

fn graph_of(m: DMatrix<f64>) -> WeightedGraph {
    WeightedGraph::from_matrix(m, None).expect("products of symmetric matrices are symmetric")
}

/// `A_X (x) I + I (x) A_Y`, vertex `(x, y)` at index `x |Y| + y`.
pub fn cartesian_product(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let ix = DMatrix::identity(x.n(), x.n());
    let iy = DMatrix::identity(y.n(), y.n());
    graph_of(kron(x.weights(), &iy) + kron(&ix, y.weights()))
}

/// `A_X (x) A_Y`, same vertex order as [`cartesian_product`].
pub fn direct_product(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    graph_of(kron(x.weights(), y.weights()))
}

/// `U_{X x Y}(t) = sum_r E_r (x) U_Y(theta_r t)` over the idempotents of X.
pub fn direct_product_transition(sx: &SpectralDecomposition, sy: &SpectralDecomposition, t: f64) -> CMatrix {
    let n = sx.n() * sy.n();
    let mut u = CMatrix::zeros(n, n);
    for (theta, e) in sx.eigenvalues().iter().zip(sx.idempotents()) {
        u += kron_c(&complexify(e), &sy.transition_matrix(theta * t));
    }
    u
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectProductCheck {
    pub t: f64,
    /// `max_r |U_Y(theta_r t) - U_Y(theta_0 t)|`.
    pub spread: f64,
    pub holds: bool,
    /// The common `U_Y(theta_r t)` when `holds`: then `U_{X x Y}(t) = I (x) H`
    /// and every `{a} x V(Y)` revives with this block.
    #[serde(skip)]
    pub h: CMatrix,
    pub kind: RevivalKind,
}

/// Tests whether `U_Y(theta_r t)` is the same for every eigenvalue of X.
pub fn direct_product_fr_check(
    sx: &SpectralDecomposition,
    sy: &SpectralDecomposition,
    t: f64,
    tol: f64,
) -> DirectProductCheck {
    let mut blocks: Vec<CMatrix> = sx.eigenvalues().iter().map(|th| sy.transition_matrix(th * t)).collect();
    let spread = blocks.iter().map(|b| max_abs_c(&(b - &blocks[0]))).fold(0.0, f64::max);
    let holds = spread < tol;
    let h = blocks.swap_remove(0);
    let ny = h.nrows();
    let off_diag = (0..ny)
        .flat_map(|i| (0..ny).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| h[(i, j)].norm())
        .fold(0.0, f64::max);
    let kind = match (holds, off_diag > tol) {
        (false, _) => RevivalKind::None,
        (true, true) => RevivalKind::Proper,
        (true, false) => RevivalKind::Periodic,
    };
    DirectProductCheck { t, spread, holds, h, kind }
}

/// `[[A_X, A_Y], [A_Y, A_X]]`, vertex `(v, i)` at index `i n + v`.
pub fn double_cover(x: &WeightedGraph, y: &WeightedGraph) -> Result<WeightedGraph, ConstructionError> {
    let n = x.n();
    if y.n() != n {
        return Err(ConstructionError::SizeMismatch { left: n, right: y.n() });
    }
    let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        if bi == bj {
            x.weight(i % n, j % n)
        } else {
            y.weight(i % n, j % n)
        }
    });
    Ok(graph_of(m))
}

/// Double cover with `A_X = J - I - A_Y`.
pub fn switching_graph(y: &WeightedGraph) -> WeightedGraph {
    double_cover(&builders::complement(y), y).expect("complement has the same size")
}

#[derive(Clone, Debug)]
pub struct DoubleCoverTransition {
    pub u: CMatrix,
    /// `max |A_X A_Y - A_Y A_X|`.
    pub commutator: f64,
    /// Whether the block formula was used instead of dense exponentiation.
    pub block_formula: bool,
}

/// `U(t)` of the double cover. When `A_X` and `A_Y` commute,
/// `U = 1/2 [[U_X (U_Y(t) + U_Y(-t)), U_X (U_Y(t) - U_Y(-t))], [.., ..]]`;
/// otherwise the full `2n x 2n` matrix is exponentiated.
pub fn double_cover_transition(
    x: &WeightedGraph,
    y: &WeightedGraph,
    t: f64,
) -> Result<DoubleCoverTransition, ConstructionError> {
    let n = x.n();
    let cover = double_cover(x, y)?;
    let (ax, ay) = (x.weights(), y.weights());
    let commutator = max_abs(&(ax * ay - ay * ax));
    let scale = 1.0 + x.inf_norm() * y.inf_norm();
    if commutator > 1e-10 * scale {
        return Ok(DoubleCoverTransition {
            u: expm_minus_i(cover.weights(), t),
            commutator,
            block_formula: false,
        });
    }
    let ux = expm_minus_i(ax, t);
    let (uy_plus, uy_minus) = (expm_minus_i(ay, t), expm_minus_i(ay, -t));
    let half = C64::new(0.5, 0.0);
    let diag = &ux * (&uy_plus + &uy_minus) * half;
    let off = &ux * (&uy_plus - &uy_minus) * half;
    let mut u = CMatrix::zeros(2 * n, 2 * n);
    u.view_mut((0, 0), (n, n)).copy_from(&diag);
    u.view_mut((n, n), (n, n)).copy_from(&diag);
    u.view_mut((0, n), (n, n)).copy_from(&off);
    u.view_mut((n, 0), (n, n)).copy_from(&off);
    Ok(DoubleCoverTransition { u, commutator, block_formula: true })
}

#[derive(Clone, Debug, Serialize)]
pub struct JoinPrediction {
    /// Degree and order of X, then of Y.
    pub k: f64,
    pub n: usize,
    pub h: f64,
    pub m: usize,
    /// Roots of `n x^2 - (k - h) x - m`, smaller first.
    pub alpha: [f64; 2],
    /// `theta_j = n alpha_j + h`.
    pub theta: [f64; 2],
    /// `2 pi / (theta_2 - theta_1)`.
    pub tau: f64,
    /// `|sum_j exp(-i tau theta_j) alpha_j / (alpha_j^2 n + m)|`.
    pub cancellation_residual: f64,
}

/// Join of a `k`-regular X and an `h`-regular Y; X occupies `0..n`.
pub fn join(x: &WeightedGraph, y: &WeightedGraph) -> Result<(WeightedGraph, JoinPrediction), ConstructionError> {
    let k = x.regular_degree().ok_or(ConstructionError::NotRegular("X"))?;
    let h = y.regular_degree().ok_or(ConstructionError::NotRegular("Y"))?;
    if !x.is_connected() {
        return Err(ConstructionError::Disconnected("X"));
    }
    if !y.is_connected() {
        return Err(ConstructionError::Disconnected("Y"));
    }
    let (n, m) = (x.n(), y.n());
    let total = n + m;
    let a = DMatrix::from_fn(total, total, |i, j| match (i < n, j < n) {
        (true, true) => x.weight(i, j),
        (false, false) => y.weight(i - n, j - n),
        _ => 1.0,
    });
    let (nf, mf) = (n as f64, m as f64);
    let disc = ((k - h) * (k - h) + 4.0 * nf * mf).sqrt();
    let alpha = [((k - h) - disc) / (2.0 * nf), ((k - h) + disc) / (2.0 * nf)];
    let theta = [nf * alpha[0] + h, nf * alpha[1] + h];
    let tau = 2.0 * std::f64::consts::PI / (theta[1] - theta[0]);
    let sum: C64 = (0..2)
        .map(|j| C64::from_polar(1.0, -tau * theta[j]) * (alpha[j] / (alpha[j] * alpha[j] * nf + mf)))
        .sum();
    let prediction = JoinPrediction {
        k,
        n,
        h,
        m,
        alpha,
        theta,
        tau,
        cancellation_residual: sum.norm(),
    };
    Ok((graph_of(a), prediction))
}
