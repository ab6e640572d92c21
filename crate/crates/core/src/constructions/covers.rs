//! Antipodal distance-regular `r`-fold covers of `K_n`, at the level of
//! their parameters `(n, r, c)`.
//!
//! Building the covers is out of reach; [`verify_cover`] checks a
//! user-supplied cover against the predicted transition matrix.

use std::f64::consts::PI;

use serde::Serialize;

use super::ConstructionError;
use crate::graph::WeightedGraph;
use crate::linalg::C64;
use crate::partition::{verify_k_fr, RevivalKind};
use crate::spectral::{spectral_decomposition, subset_projector};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverPrediction {
    pub n: u64,
    pub r: u64,
    pub c: u64,
    /// `n - 2 - r c`.
    pub delta: i64,
    /// `n - 1, -1` and the two roots of `x^2 - delta x - (n - 1)`.
    pub eigenvalues: [f64; 4],
    /// `pi / (2 m)` when `delta = +-2` and `n = 4 m^2`.
    pub tau: Option<f64>,
    pub m: Option<u64>,
}

pub fn cover_fr_prediction(n: u64, r: u64, c: u64) -> CoverPrediction {
    let delta = n as i64 - 2 - (r * c) as i64;
    let d = delta as f64;
    let root = (d * d + 4.0 * (n as f64 - 1.0)).sqrt();
    let eigenvalues = [n as f64 - 1.0, -1.0, (d + root) / 2.0, (d - root) / 2.0];
    let m = if delta.abs() == 2 && n.is_multiple_of(4) {
        let q = n / 4;
        let s = (q as f64).sqrt().round() as u64;
        (s * s == q && s > 0).then_some(s)
    } else {
        None
    };
    CoverPrediction {
        n,
        r,
        c,
        delta,
        eigenvalues,
        tau: m.map(|m| PI / (2.0 * m as f64)),
        m,
    }
}

impl CoverPrediction {
    /// `(exp(-i theta_1 tau), exp(-i theta_3 tau))` at the predicted time.
    pub fn phases(&self) -> Option<(C64, C64)> {
        let tau = self.tau?;
        Some((
            C64::from_polar(1.0, -self.eigenvalues[0] * tau),
            C64::from_polar(1.0, -self.eigenvalues[2] * tau),
        ))
    }

    /// Predicted `U(tau)` entry for two vertices of a cover whose fibres
    /// have size `r`.
    pub fn predicted_entry(&self, same_fibre: bool, diagonal: bool) -> Option<C64> {
        let (e1, e3) = self.phases()?;
        let r = self.r as f64;
        Some(match (same_fibre, diagonal) {
            (_, true) => e3 + (e1 - e3) / r,
            (true, false) => (e1 - e3) / r,
            (false, false) => C64::new(0.0, 0.0),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseIdentities {
    pub m: u64,
    pub delta: i64,
    pub tau: f64,
    /// Largest deviation among the four phases from their closed forms:
    /// `exp(i pi / 2m)` for `theta_1, theta_2` and
    /// `exp((2m -+ 1) pi i / 2m)` for `theta_3, theta_4` (`delta = +-2`).
    pub residual: f64,
}

/// Checks the phase identities at `n = 4 m^2` for `delta = 2` or `-2`.
pub fn cover_phase_identities(m: u64, delta: i64) -> Result<PhaseIdentities, ConstructionError> {
    if m == 0 || delta.abs() != 2 {
        return Err(ConstructionError::BadParameter(format!(
            "need m >= 1 and delta = +-2, got m = {m}, delta = {delta}"
        )));
    }
    let n = 4 * m * m;
    let mf = m as f64;
    let d = delta as f64;
    let root = (d * d + 4.0 * (n as f64 - 1.0)).sqrt();
    let thetas = [n as f64 - 1.0, -1.0, (d + root) / 2.0, (d - root) / 2.0];
    let tau = PI / (2.0 * mf);
    let outer = C64::from_polar(1.0, PI / (2.0 * mf));
    let inner_num = if delta == 2 { 2.0 * mf - 1.0 } else { 2.0 * mf + 1.0 };
    let inner = C64::from_polar(1.0, inner_num * PI / (2.0 * mf));
    let expected = [outer, outer, inner, inner];
    let residual = thetas
        .iter()
        .zip(expected)
        .map(|(th, e)| (C64::from_polar(1.0, -th * tau) - e).norm())
        .fold(0.0, f64::max);
    Ok(PhaseIdentities { m, delta, tau, residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverCheck {
    pub prediction: CoverPrediction,
    /// `max |U(tau) - I_n (x) (e3 I_r + (e1 - e3)/r J_r)|` in the fibre order given.
    pub residual: f64,
    /// `verify_k_fr` verdict for each fibre.
    pub fibre_kinds: Vec<RevivalKind>,
}

/// Compares a supplied cover with the predicted `U(tau)`; `fibres` lists
/// the `n` fibres of size `r`.
pub fn verify_cover(
    g: &WeightedGraph,
    fibres: &[Vec<usize>],
    r: u64,
    c: u64,
    tol: f64,
) -> Result<CoverCheck, ConstructionError> {
    let n = fibres.len() as u64;
    let total = g.n();
    if (n * r) as usize != total {
        return Err(ConstructionError::SizeMismatch { left: total, right: (n * r) as usize });
    }
    let mut fibre_of = vec![usize::MAX; total];
    for (i, f) in fibres.iter().enumerate() {
        if f.len() as u64 != r {
            return Err(ConstructionError::BadParameter(format!("fibre {i} has {} vertices, expected {r}", f.len())));
        }
        for &v in f {
            if v >= total || fibre_of[v] != usize::MAX {
                return Err(ConstructionError::BadParameter(format!("vertex {v} is out of range or repeated")));
            }
            fibre_of[v] = i;
        }
    }
    let prediction = cover_fr_prediction(n, r, c);
    let tau = prediction.tau.ok_or_else(|| {
        ConstructionError::BadParameter(format!(
            "parameters ({n}, {r}, {c}) give delta = {}, no predicted time",
            prediction.delta
        ))
    })?;
    let s = spectral_decomposition(g, None)?;
    let u = s.transition_matrix(tau);
    let mut residual = 0.0f64;
    for i in 0..total {
        for j in 0..total {
            let want = prediction
                .predicted_entry(fibre_of[i] == fibre_of[j], i == j)
                .expect("tau is present");
            residual = residual.max((u[(i, j)] - want).norm());
        }
    }
    let mut fibre_kinds = Vec::with_capacity(fibres.len());
    for f in fibres {
        let k = subset_projector(f, total)?;
        fibre_kinds.push(verify_k_fr(&s, &k, tau, tol).kind);
    }
    Ok(CoverCheck { prediction, residual, fibre_kinds })
}
