//! Proper fractional revival between two vertices of an integer-weighted
//! graph, in exact quadratic-integer terms.
//!
//! Within each class of the pair's eigenvalue split the eigenvalues are
//! `rho + n sqrt(delta)` with integer `n`; `g` is the gcd of all
//! within-class differences measured in units of `sqrt(delta)`. Revival
//! can only happen at multiples of `2 pi / (g sqrt(delta))`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::cospectral::{char_poly_exact, ClassSplit};
use crate::exec::{self, Execution};
use crate::graph::WeightedGraph;
use crate::partition::default_ratio_tol;
use crate::poly::IntPoly;
use crate::rational::{gcd_u64, lcm_checked, rationalize, squarefree_decomposition};
use crate::spectral::SpectralDecomposition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegerRevivalError {
    #[error("graph has non-integer weights")]
    NotIntegerWeighted,
    #[error("within-class differences have no common base with denominator <= {max_denominator}")]
    NoCommonBase { max_denominator: u64 },
    #[error("no proper time found for k <= {horizon}")]
    HorizonExceeded { horizon: u64 },
    #[error("class split has an empty class")]
    EmptyClass,
}

const INTEGRALITY_TOL: f64 = 1e-9;

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGRALITY_TOL
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticSpectrumData {
    pub delta: u64,
    pub rho1: f64,
    pub rho2: f64,
    /// `sigma_h` for `h` in `C_1`, anchored so the smallest is 0.
    pub sigma: BTreeMap<usize, f64>,
    pub omega: BTreeMap<usize, f64>,
    pub g: u64,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    /// No class has two members, so `g` was set to 1 rather than computed.
    pub g_defaulted: bool,
    /// Where `delta` came from: the squared lattice base, or a quadratic
    /// factor of the characteristic polynomial.
    pub delta_source: DeltaSource,
    pub max_denominator: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSource {
    Default,
    LatticeBase,
    QuadraticFactor,
}

impl QuadraticSpectrumData {
    pub fn sqrt_delta(&self) -> f64 {
        (self.delta as f64).sqrt()
    }

    /// `2 pi k / (g sqrt(delta))`.
    pub fn time(&self, k: u64) -> f64 {
        2.0 * PI * k as f64 / (self.g as f64 * self.sqrt_delta())
    }

    /// Eigenvalue rebuilt from the quadratic data.
    pub fn theta(&self, r: usize) -> Option<f64> {
        let sd = self.sqrt_delta();
        self.sigma
            .get(&r)
            .map(|s| self.rho1 + s * sd)
            .or_else(|| self.omega.get(&r).map(|w| self.rho2 + w * sd))
    }

    /// `(theta_j - theta_h) / (g sqrt(delta))` for the class anchors.
    fn cross_ratio(&self) -> f64 {
        let sd = self.sqrt_delta();
        let (sigma0, omega0) = (
            self.sigma.values().copied().next().unwrap_or(0.0),
            self.omega.values().copied().next().unwrap_or(0.0),
        );
        (self.rho2 - self.rho1 + (omega0 - sigma0) * sd) / (self.g as f64 * sd)
    }
}

/// Reads `delta`, `rho`, `sigma`, `omega` and `g` off the spectrum.
///
/// The within-class differences are first rationalized against the
/// largest one; the generator of the lattice they span is `g sqrt(delta)`,
/// so its square is an integer whose square-free part is `delta`. When the
/// square is not integral, quadratic factors `y^2 - s y + p` of the exact
/// characteristic polynomial supply candidate values of `delta`.
pub fn extract_quadratic_data(
    g: &WeightedGraph,
    s: &SpectralDecomposition,
    split: &ClassSplit,
    max_denominator: u64,
) -> Result<QuadraticSpectrumData, IntegerRevivalError> {
    if !g.integer_weighted() {
        return Err(IntegerRevivalError::NotIntegerWeighted);
    }
    if split.c1.is_empty() || split.c2.is_empty() {
        return Err(IntegerRevivalError::EmptyClass);
    }
    let theta = s.eigenvalues();
    let diffs: Vec<f64> = [&split.c1, &split.c2]
        .iter()
        .flat_map(|c| c[1..].iter().map(move |&r| theta[c[0]] - theta[r]))
        .collect();

    let anchor = |c: &[usize]| c.iter().map(|&r| theta[r]).fold(f64::INFINITY, f64::min);
    let (rho1, rho2) = (anchor(&split.c1), anchor(&split.c2));
    let mut data = QuadraticSpectrumData {
        delta: 1,
        rho1,
        rho2,
        sigma: split.c1.iter().map(|&r| (r, 0.0)).collect(),
        omega: split.c2.iter().map(|&r| (r, 0.0)).collect(),
        g: 1,
        c1: split.c1.clone(),
        c2: split.c2.clone(),
        g_defaulted: true,
        delta_source: DeltaSource::Default,
        max_denominator,
    };
    if diffs.is_empty() {
        return Ok(data);
    }

    let d0 = diffs.iter().copied().fold(0.0f64, |a, d| if d.abs() > a.abs() { d } else { a });
    let tol = default_ratio_tol(g.inf_norm());
    let mut fracs = Vec::with_capacity(diffs.len());
    for d in &diffs {
        let (a, b) = rationalize(d / d0, max_denominator, tol / d0.abs())
            .ok_or(IntegerRevivalError::NoCommonBase { max_denominator })?;
        fracs.push((a, b));
    }
    let l = fracs
        .iter()
        .try_fold(1u64, |acc, &(_, b)| lcm_checked(acc, b))
        .ok_or(IntegerRevivalError::NoCommonBase { max_denominator })?;
    let multiplier_gcd = fracs
        .iter()
        .fold(0u64, |acc, &(a, b)| gcd_u64(acc, (a.unsigned_abs() as u64) * (l / b)));
    let base = d0.abs() * multiplier_gcd as f64 / l as f64;

    let squared = base * base;
    let (delta, source) = if near_integer_rel(squared) {
        (squarefree_decomposition(squared.round() as u64).0, DeltaSource::LatticeBase)
    } else {
        let candidate = quadratic_factor_deltas(g, s)
            .into_iter()
            .find(|&dl| diffs.iter().all(|d| near_integer(d / (dl as f64).sqrt())));
        match candidate {
            Some(dl) => (dl, DeltaSource::QuadraticFactor),
            None => return Err(IntegerRevivalError::NoCommonBase { max_denominator }),
        }
    };
    let sd = (delta as f64).sqrt();
    if !diffs.iter().all(|d| near_integer(d / sd)) {
        return Err(IntegerRevivalError::NoCommonBase { max_denominator });
    }
    let gg = diffs
        .iter()
        .fold(0u64, |acc, d| gcd_u64(acc, (d / sd).round().abs() as u64));
    data.delta = delta;
    data.g = gg.max(1);
    data.g_defaulted = false;
    data.delta_source = source;
    data.sigma = split.c1.iter().map(|&r| (r, ((theta[r] - rho1) / sd).round())).collect();
    data.omega = split.c2.iter().map(|&r| (r, ((theta[r] - rho2) / sd).round())).collect();
    Ok(data)
}

fn near_integer_rel(x: f64) -> bool {
    (x - x.round()).abs() <= 1e-6 * x.abs().max(1.0)
}

/// Square-free discriminants of monic integer quadratics `y^2 - s y + p`
/// built from eigenvalue pairs that divide the characteristic polynomial.
fn quadratic_factor_deltas(g: &WeightedGraph, s: &SpectralDecomposition) -> Vec<u64> {
    let Ok(phi) = char_poly_exact(g) else {
        return vec![];
    };
    let theta = s.eigenvalues();
    let mut out = Vec::new();
    for i in 0..theta.len() {
        for j in (i + 1)..theta.len() {
            let (sum, prod) = (theta[i] + theta[j], theta[i] * theta[j]);
            if !near_integer_rel(sum) || !near_integer_rel(prod) {
                continue;
            }
            let (si, pi) = (sum.round() as i64, prod.round() as i64);
            let quad = IntPoly::new(vec![BigInt::from(pi), BigInt::from(-si), BigInt::from(1)]);
            if phi.div_exact(&quad).is_none() {
                continue;
            }
            let disc = si * si - 4 * pi;
            if disc > 0 {
                let dl = squarefree_decomposition(disc as u64).0;
                if dl > 1 && !out.contains(&dl) {
                    out.push(dl);
                }
            }
        }
    }
    out
}

/// Proper revival at `2 pi k / (g sqrt(delta))`: the phases of the two
/// classes differ, i.e. `k (theta_j - theta_h) / (g sqrt(delta))` is not
/// an integer for some `h` in `C_1`, `j` in `C_2`.
pub fn proper_fr_at(data: &QuadraticSpectrumData, k: u64) -> bool {
    let sd = data.sqrt_delta();
    let scale = k as f64 / (data.g as f64 * sd);
    data.sigma.values().any(|sigma| {
        data.omega.values().any(|omega| {
            let x = scale * (data.rho2 - data.rho1 + (omega - sigma) * sd);
            !near_integer(x)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MinimalTime {
    At { k: u64, tau: f64, warning: Option<String> },
    /// Both classes are singletons, so no within-class constraint fixes a
    /// time grid. Proper revival holds at every time outside the multiples
    /// of `period`; `witness` is half a period.
    Unconstrained { period: f64, witness: f64 },
    /// The two classes always share a phase on the time grid.
    Never,
}

/// Least `k` with [`proper_fr_at`], scanned in parallel chunks.
pub fn minimal_proper_time(
    data: &QuadraticSpectrumData,
    exec: Execution,
) -> Result<MinimalTime, IntegerRevivalError> {
    if data.g_defaulted {
        let gap = (data.rho2 - data.rho1).abs();
        if gap == 0.0 {
            return Ok(MinimalTime::Never);
        }
        let period = 2.0 * PI / gap;
        return Ok(MinimalTime::Unconstrained { period, witness: period / 2.0 });
    }
    if near_integer(data.cross_ratio()) {
        return Ok(MinimalTime::Never);
    }
    let horizon = data.g.saturating_mul(data.delta).saturating_mul(1 << 20);
    const CHUNK: u64 = 1024;
    let mut start = 1u64;
    while start <= horizon {
        let len = CHUNK.min(horizon - start + 1);
        let hits = exec::map_range(exec, len as usize, |i| proper_fr_at(data, start + i as u64));
        if let Some(i) = hits.iter().position(|&h| h) {
            let k = start + i as u64;
            let warning = (k > 1).then(|| format!("first proper multiple is k = {k}, not 1"));
            return Ok(MinimalTime::At { k, tau: data.time(k), warning });
        }
        start += len;
    }
    Err(IntegerRevivalError::HorizonExceeded { horizon })
}
