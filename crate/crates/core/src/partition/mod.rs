//! Eigenvalue support of a vertex subset, the minimal commuting partition,
//! the ratio condition, and revival certificates.

pub mod lattice;
pub mod oracle;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::linalg::{max_abs, restrict, unitarity_residual, CMatrix, C64};
use crate::rational::{lcm_checked, rationalize};
use crate::spectral::{SpectralDecomposition, SubsetProjector};

pub use lattice::IndexPartition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("{count} nonzero restricted class idempotents exceed |K| = {k}; eigenvalue clustering is suspect")]
    InternalInconsistency { count: usize, k: usize },
    #[error("nonzero restricted class idempotent {class} is diagonal on a connected graph")]
    DiagonalRestriction { class: usize },
    #[error("revival time needs lcm of denominators beyond 2^63")]
    ReconstructionOverflow,
}

/// Threshold below which `E_r D_K E_s` counts as zero.
pub fn default_zero_tol(n: usize) -> f64 {
    1e-8 * n.max(1) as f64
}

/// Absolute threshold on `|d_i - (a/b) d_0|` when rationalizing eigenvalue
/// differences. Tight enough that quadratic irrationals are not mistaken
/// for their continued-fraction convergents below the denominator cap.
pub fn default_ratio_tol(inf_norm: f64) -> f64 {
    256.0 * f64::EPSILON * (1.0 + inf_norm)
}

/// Pairs `(r, s)` with `E_r D_K E_s != 0`.
#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueSupport {
    pub pairs: BTreeSet<(usize, usize)>,
    /// `norms[r][s] = max |E_r D_K E_s|`.
    pub norms: Vec<Vec<f64>>,
    pub zero_tol: f64,
}

pub fn eigenvalue_support(
    s: &SpectralDecomposition,
    k: &SubsetProjector,
    zero_tol: Option<f64>,
) -> EigenvalueSupport {
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(s.n()));
    let cols: Vec<DMatrix<f64>> = s
        .idempotents()
        .iter()
        .map(|e| e.select_columns(k.subset()))
        .collect();
    let d = s.len();
    let mut norms = vec![vec![0.0; d]; d];
    let mut pairs = BTreeSet::new();
    for r in 0..d {
        for t in r..d {
            let v = max_abs(&(&cols[r] * cols[t].transpose()));
            norms[r][t] = v;
            norms[t][r] = v;
            if v > tol {
                pairs.insert((r, t));
                pairs.insert((t, r));
            }
        }
    }
    EigenvalueSupport { pairs, norms, zero_tol: tol }
}

/// Class sums of idempotents for a partition, and their `K x K` blocks.
#[derive(Clone, Debug)]
pub struct ClassIdempotents {
    pub partition: IndexPartition,
    pub f: Vec<DMatrix<f64>>,
    pub f_restricted: Vec<DMatrix<f64>>,
    pub nonzero: Vec<bool>,
    pub subset: Vec<usize>,
    pub zero_tol: f64,
}

impl ClassIdempotents {
    pub fn build(
        s: &SpectralDecomposition,
        k: &SubsetProjector,
        partition: IndexPartition,
        zero_tol: f64,
    ) -> Self {
        let n = s.n();
        let f: Vec<DMatrix<f64>> = partition
            .classes()
            .iter()
            .map(|c| c.iter().fold(DMatrix::zeros(n, n), |acc, &r| acc + s.idempotent(r)))
            .collect();
        let f_restricted: Vec<DMatrix<f64>> = f.iter().map(|m| restrict(m, k.subset())).collect();
        let nonzero = f_restricted.iter().map(|m| max_abs(m) > zero_tol).collect();
        ClassIdempotents {
            partition,
            f,
            f_restricted,
            nonzero,
            subset: k.subset().to_vec(),
            zero_tol,
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.nonzero.iter().filter(|&&b| b).count()
    }

    /// `max_j |F_j D_K - D_K F_j|`, which reduces to the largest entry of
    /// any `F_j` linking `K` to its complement.
    pub fn commutator_residual(&self) -> f64 {
        commutator_residual_of(&self.f, &self.subset)
    }
}

fn commutator_residual_of(f: &[DMatrix<f64>], subset: &[usize]) -> f64 {
    let n = f.first().map_or(0, |m| m.nrows());
    let inside: Vec<bool> = (0..n).map(|v| subset.contains(&v)).collect();
    let mut worst: f64 = 0.0;
    for m in f {
        for i in 0..n {
            for j in 0..n {
                if inside[i] != inside[j] {
                    worst = worst.max(m[(i, j)].abs());
                }
            }
        }
    }
    worst
}

/// Commutation residual of an arbitrary partition with `D_K`.
pub fn partition_commutator_residual(
    s: &SpectralDecomposition,
    k: &SubsetProjector,
    partition: &IndexPartition,
) -> f64 {
    let n = s.n();
    let f: Vec<DMatrix<f64>> = partition
        .classes()
        .iter()
        .map(|c| c.iter().fold(DMatrix::zeros(n, n), |acc, &r| acc + s.idempotent(r)))
        .collect();
    commutator_residual_of(&f, k.subset())
}

/// Minimal partition of the eigenvalue indices commuting with `D_K`:
/// connected components of the off-diagonal support relation.
pub fn min_commuting_partition(
    s: &SpectralDecomposition,
    k: &SubsetProjector,
    zero_tol: Option<f64>,
) -> ClassIdempotents {
    let support = eigenvalue_support(s, k, zero_tol);
    let partition = components(s.len(), &support.pairs);
    ClassIdempotents::build(s, k, partition, support.zero_tol)
}

fn components(len: usize, pairs: &BTreeSet<(usize, usize)>) -> IndexPartition {
    let mut parent: Vec<usize> = (0..len).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(r, t) in pairs {
        if r != t {
            let (a, b) = (find(&mut parent, r), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let labels: Vec<usize> = (0..len).map(|i| find(&mut parent, i)).collect();
    IndexPartition::from_labels(&labels)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportBound {
    pub count: usize,
    pub bound_met: bool,
    /// Only evaluated when `count == |K|`.
    pub parallel_columns: Option<bool>,
}

/// Counts nonzero restricted class idempotents and, at equality with
/// `|K|`, tests that the `K`-columns of every `E_r` are pairwise parallel.
pub fn check_support_bound(
    ci: &ClassIdempotents,
    s: &SpectralDecomposition,
    tol: f64,
) -> Result<SupportBound, PartitionError> {
    let count = ci.nonzero_count();
    let kk = ci.subset.len();
    if count > kk {
        return Err(PartitionError::InternalInconsistency { count, k: kk });
    }
    let parallel_columns = (count == kk).then(|| {
        s.idempotents().iter().all(|e| {
            ci.subset.iter().enumerate().all(|(i, &a)| {
                ci.subset[i + 1..]
                    .iter()
                    .all(|&b| columns_parallel(&e.column(a).into_owned(), &e.column(b).into_owned(), tol))
            })
        })
    });
    Ok(SupportBound { count, bound_met: count <= kk, parallel_columns })
}

/// Linear dependence of two vectors through the normalized Gram
/// determinant `1 - cos^2`. A vanishing vector is dependent on anything.
fn columns_parallel(u: &nalgebra::DVector<f64>, v: &nalgebra::DVector<f64>, tol: f64) -> bool {
    let (nu, nv) = (u.norm(), v.norm());
    if nu < tol || nv < tol {
        return true;
    }
    let c = u.dot(v) / (nu * nv);
    (1.0 - c * c).abs() < tol
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposability {
    pub decomposable: bool,
    pub classes: usize,
    pub nonzero_restrictions: usize,
}

/// At least two classes and at least two nonzero restricted class
/// idempotents. Requires a connected graph, on which every nonzero
/// restriction must then be non-diagonal.
pub fn is_properly_decomposable(
    ci: &ClassIdempotents,
    g: &WeightedGraph,
) -> Result<Decomposability, PartitionError> {
    if !g.is_connected() {
        return Err(PartitionError::DisconnectedGraph);
    }
    let nonzero = ci.nonzero_count();
    let decomposable = ci.partition.num_classes() >= 2 && nonzero >= 2;
    if decomposable {
        for (j, m) in ci.f_restricted.iter().enumerate() {
            if !ci.nonzero[j] {
                continue;
            }
            let off = (0..m.nrows())
                .flat_map(|a| (0..m.ncols()).map(move |b| (a, b)))
                .filter(|(a, b)| a != b)
                .fold(0.0f64, |acc, (a, b)| acc.max(m[(a, b)].abs()));
            if off <= ci.zero_tol {
                return Err(PartitionError::DiagonalRestriction { class: j });
            }
        }
    }
    Ok(Decomposability {
        decomposable,
        classes: ci.partition.num_classes(),
        nonzero_restrictions: nonzero,
    })
}

/// One reconstructed ratio `(theta_r - theta_s) / d_0 = num / den`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEntry {
    pub r: usize,
    pub s: usize,
    pub num: i64,
    pub den: u64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCertificate {
    pub holds: bool,
    /// No class holds two indices; the condition is vacuous.
    pub degenerate: bool,
    /// Indices `(r, s)` of the base difference `d_0 = theta_r - theta_s`.
    pub base: Option<(usize, usize)>,
    pub base_difference: f64,
    pub entries: Vec<RatioEntry>,
    /// First difference with no rational below the cap, if any.
    pub failed_at: Option<(usize, usize)>,
    pub max_denominator: u64,
    pub ratio_tol: f64,
}

impl RatioCertificate {
    /// `lcm` of all denominators; `None` on overflow.
    pub fn lcm_denominator(&self) -> Option<u64> {
        self.entries.iter().try_fold(1u64, |acc, e| lcm_checked(acc, e.den))
    }

    /// Least `tau > 0` with `tau * (theta_r - theta_s)` a multiple of `2 pi`
    /// for every recorded difference.
    pub fn minimal_time(&self) -> Result<Option<f64>, PartitionError> {
        if !self.holds || self.degenerate || self.base_difference == 0.0 {
            return Ok(None);
        }
        let l = self.lcm_denominator().ok_or(PartitionError::ReconstructionOverflow)?;
        if l > 1u64 << 63 {
            return Err(PartitionError::ReconstructionOverflow);
        }
        Ok(Some(2.0 * PI * l as f64 / self.base_difference.abs()))
    }
}

/// Rationality of all within-class eigenvalue differences against one base.
pub fn ratio_condition(
    s: &SpectralDecomposition,
    partition: &IndexPartition,
    max_denominator: u64,
    ratio_tol: f64,
) -> RatioCertificate {
    let theta = s.eigenvalues();
    let diffs: Vec<(usize, usize)> = partition
        .classes()
        .iter()
        .flat_map(|c| c[1..].iter().map(move |&r| (r, c[0])))
        .collect();
    rationalize_differences(theta, &diffs, max_denominator, ratio_tol)
}

/// Same condition, phrased directly on the eigenvalue support: every
/// difference `theta_r - theta_s` with `(r, s)` in the support, `r != s`.
pub fn ratio_condition_on_support(
    s: &SpectralDecomposition,
    support: &EigenvalueSupport,
    max_denominator: u64,
    ratio_tol: f64,
) -> RatioCertificate {
    let diffs: Vec<(usize, usize)> = support
        .pairs
        .iter()
        .copied()
        .filter(|(r, t)| r < t)
        .collect();
    rationalize_differences(s.eigenvalues(), &diffs, max_denominator, ratio_tol)
}

fn rationalize_differences(
    theta: &[f64],
    diffs: &[(usize, usize)],
    max_denominator: u64,
    ratio_tol: f64,
) -> RatioCertificate {
    let mut cert = RatioCertificate {
        holds: true,
        degenerate: diffs.is_empty(),
        base: None,
        base_difference: 0.0,
        entries: vec![],
        failed_at: None,
        max_denominator,
        ratio_tol,
    };
    let Some(&(br, bs)) = diffs
        .iter()
        .max_by(|x, y| (theta[x.0] - theta[x.1]).abs().total_cmp(&(theta[y.0] - theta[y.1]).abs()))
    else {
        return cert;
    };
    let d0 = theta[br] - theta[bs];
    cert.base = Some((br, bs));
    cert.base_difference = d0;
    for &(r, t) in diffs {
        let d = theta[r] - theta[t];
        let found = rationalize(d / d0, max_denominator, ratio_tol / d0.abs())
            .and_then(|(a, b)| i64::try_from(a).ok().map(|a| (a, b)));
        match found {
            Some((a, b)) => cert.entries.push(RatioEntry {
                r,
                s: t,
                num: a,
                den: b,
                residual: (d - a as f64 / b as f64 * d0).abs(),
            }),
            None => {
                cert.holds = false;
                cert.failed_at = Some((r, t));
                break;
            }
        }
    }
    cert
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RevivalKind {
    Proper,
    Periodic,
    None,
}

#[derive(Clone, Debug)]
pub struct RevivalCertificate {
    pub subset: Vec<usize>,
    pub tau: Option<f64>,
    pub partition: Option<IndexPartition>,
    pub h: CMatrix,
    pub off_block_residual: f64,
    pub commutator_residual: f64,
    pub unitarity_residual: f64,
    pub kind: RevivalKind,
    /// `exp(-i tau theta)` on each class of `partition`.
    pub phases: Vec<C64>,
    pub ratio: Option<RatioCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevivalOptions {
    pub zero_tol: Option<f64>,
    pub max_denominator: u64,
    pub ratio_tol: Option<f64>,
    /// Classification threshold on `|H_ij|` and residuals.
    pub tol: f64,
}

impl Default for RevivalOptions {
    fn default() -> Self {
        RevivalOptions { zero_tol: None, max_denominator: 1_000_000, ratio_tol: None, tol: 1e-7 }
    }
}

/// Block structure of a unitary with respect to `K`.
#[derive(Clone, Debug)]
pub struct BlockClassification {
    pub h: CMatrix,
    pub off_block_residual: f64,
    pub commutator_residual: f64,
    pub unitarity_residual: f64,
    pub kind: RevivalKind,
}

/// Reads `H = U[K, K]` and classifies: `none` when `U` leaks out of `K`
/// or `H` is not unitary, `proper` when `H` has an off-diagonal entry
/// above `tol`, `periodic` otherwise.
pub fn classify_unitary(u: &CMatrix, subset: &[usize], tol: f64) -> BlockClassification {
    let n = u.nrows();
    let inside: Vec<bool> = (0..n).map(|v| subset.contains(&v)).collect();
    let mut off_block: f64 = 0.0;
    let mut commutator: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if inside[i] != inside[j] {
                commutator = commutator.max(u[(i, j)].norm());
                if inside[i] {
                    off_block = off_block.max(u[(i, j)].norm());
                }
            }
        }
    }
    let h = restrict(u, subset);
    let unitarity = unitarity_residual(&h);
    let off_diag = (0..h.nrows())
        .flat_map(|i| (0..h.ncols()).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .fold(0.0f64, |acc, (i, j)| acc.max(h[(i, j)].norm()));
    let kind = if off_block >= tol || unitarity >= tol {
        RevivalKind::None
    } else if off_diag > tol {
        RevivalKind::Proper
    } else {
        RevivalKind::Periodic
    };
    BlockClassification {
        h,
        off_block_residual: off_block,
        commutator_residual: commutator,
        unitarity_residual: unitarity,
        kind,
    }
}

/// Direct check of `K`-revival at a given time, without any partition.
pub fn verify_k_fr(s: &SpectralDecomposition, k: &SubsetProjector, tau: f64, tol: f64) -> RevivalCertificate {
    let u = s.transition_matrix(tau);
    let c = classify_unitary(&u, k.subset(), tol);
    RevivalCertificate {
        subset: k.subset().to_vec(),
        tau: Some(tau),
        partition: None,
        h: c.h,
        off_block_residual: c.off_block_residual,
        commutator_residual: c.commutator_residual,
        unitarity_residual: c.unitarity_residual,
        kind: c.kind,
        phases: vec![],
        ratio: None,
    }
}

/// Minimal revival time from the ratio condition on the minimal commuting
/// partition, certified by evaluating `U(tau)`.
///
/// When the minimal partition is all singletons the subset only revives
/// through periodicity of the whole walk, so the whole spectrum is used
/// as one class.
pub fn find_revival_time(
    s: &SpectralDecomposition,
    k: &SubsetProjector,
    g_inf_norm: f64,
    options: &RevivalOptions,
) -> Result<RevivalCertificate, PartitionError> {
    let ci = min_commuting_partition(s, k, options.zero_tol);
    let ratio_tol = options.ratio_tol.unwrap_or_else(|| default_ratio_tol(g_inf_norm));
    let mut partition = ci.partition.clone();
    let mut ratio = ratio_condition(s, &partition, options.max_denominator, ratio_tol);
    if ratio.degenerate {
        partition = IndexPartition::whole(s.len());
        ratio = ratio_condition(s, &partition, options.max_denominator, ratio_tol);
    }
    let tau = if ratio.degenerate {
        // A single distinct eigenvalue: U(t) is a scalar at all times.
        Some(2.0 * PI)
    } else {
        ratio.minimal_time()?
    };
    let Some(tau) = tau else {
        let kk = k.len();
        return Ok(RevivalCertificate {
            subset: k.subset().to_vec(),
            tau: None,
            partition: Some(partition),
            h: CMatrix::zeros(kk, kk),
            off_block_residual: f64::NAN,
            commutator_residual: f64::NAN,
            unitarity_residual: f64::NAN,
            kind: RevivalKind::None,
            phases: vec![],
            ratio: Some(ratio),
        });
    };
    let mut cert = verify_k_fr(s, k, tau, options.tol);
    let phases = s.phases(tau);
    cert.phases = partition.classes().iter().map(|c| phases[c[0]]).collect();
    cert.partition = Some(partition);
    cert.ratio = Some(ratio);
    Ok(cert)
}

/// Largest spread of `exp(-i tau theta)` within any class.
pub fn phase_spread(s: &SpectralDecomposition, partition: &IndexPartition, tau: f64) -> f64 {
    let ph = s.phases(tau);
    partition
        .classes()
        .iter()
        .flat_map(|c| c.iter().flat_map(|&r| c.iter().map(move |&t| (r, t))))
        .fold(0.0f64, |acc, (r, t)| acc.max((ph[r] - ph[t]).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{spectral_decomposition, subset_projector};

    fn k2() -> WeightedGraph {
        WeightedGraph::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]], None).unwrap()
    }

    #[test]
    fn k2_support_is_full() {
        let s = spectral_decomposition(&k2(), None).unwrap();
        let k = subset_projector(&[0], 2).unwrap();
        let sup = eigenvalue_support(&s, &k, None);
        assert_eq!(sup.pairs.len(), 4);
    }

    #[test]
    fn full_subset_gives_singletons() {
        let s = spectral_decomposition(&k2(), None).unwrap();
        let k = subset_projector(&[0, 1], 2).unwrap();
        let ci = min_commuting_partition(&s, &k, None);
        assert_eq!(ci.partition, IndexPartition::singletons(2));
        let dec = is_properly_decomposable(&ci, &k2()).unwrap();
        assert!(dec.decomposable);
    }

    #[test]
    fn k2_single_vertex_is_periodic_at_pi() {
        let g = k2();
        let s = spectral_decomposition(&g, None).unwrap();
        let k = subset_projector(&[0], 2).unwrap();
        let cert = find_revival_time(&s, &k, g.inf_norm(), &RevivalOptions::default()).unwrap();
        assert_eq!(cert.kind, RevivalKind::Periodic);
        assert!((cert.tau.unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn verify_at_zero_is_periodic() {
        let g = k2();
        let s = spectral_decomposition(&g, None).unwrap();
        let k = subset_projector(&[0], 2).unwrap();
        assert_eq!(verify_k_fr(&s, &k, 0.0, 1e-7).kind, RevivalKind::Periodic);
        assert_eq!(verify_k_fr(&s, &k, 1.0, 1e-7).kind, RevivalKind::None);
    }

    #[test]
    fn ratio_rejects_quadratic_irrational() {
        let theta = [1.0 + 2f64.sqrt(), 1.0, 0.0];
        let cert = rationalize_differences(&theta, &[(1, 0), (2, 0)], 1_000_000, default_ratio_tol(4.0));
        assert!(!cert.holds);
        let cert = rationalize_differences(&[3.0, 1.5, 0.0], &[(1, 0), (2, 0)], 1_000_000, 1e-12);
        assert!(cert.holds);
        assert_eq!(cert.lcm_denominator(), Some(2));
    }
}
