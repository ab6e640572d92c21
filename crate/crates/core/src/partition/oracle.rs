//! Exhaustive search for the finest partition commuting with `D_K`.
//!
//! Enumerates all Bell(d+1) partitions of the eigenvalue indices, so it is
//! only meant for small spectra and as an independent check on
//! [`super::min_commuting_partition`].

use super::lattice::{all_partitions, IndexPartition};
use super::partition_commutator_residual;
use crate::exec::{self, Execution};
use crate::spectral::{SpectralDecomposition, SubsetProjector};

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Meet of every commuting partition.
    pub minimum: IndexPartition,
    pub commuting: Vec<IndexPartition>,
    pub examined: usize,
}

impl OracleResult {
    /// The meet must itself commute and refine every commuting partition.
    pub fn is_consistent(&self) -> bool {
        self.commuting.contains(&self.minimum)
            && self.commuting.iter().all(|p| self.minimum.refines(p))
    }
}

pub fn brute_force_min_partition(
    s: &SpectralDecomposition,
    k: &SubsetProjector,
    tol: f64,
    exec: Execution,
) -> OracleResult {
    let candidates = all_partitions(s.len());
    let residuals = exec::map(exec, &candidates, |p| partition_commutator_residual(s, k, p));
    let examined = candidates.len();
    let commuting: Vec<IndexPartition> = candidates
        .into_iter()
        .zip(residuals)
        .filter(|(_, r)| *r < tol)
        .map(|(p, _)| p)
        .collect();
    // The whole set always commutes (its class sum is I), so the fold has a seed.
    let minimum = commuting
        .iter()
        .fold(IndexPartition::whole(s.len()), |acc, p| acc.meet(p));
    OracleResult { minimum, commuting, examined }
}
