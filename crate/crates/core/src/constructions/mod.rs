//! Graph families and constructions with known revival behaviour.
//!
//! Every builder that can say something about its own walk returns
//! [`Prediction`]s, which [`verify_predictions`] checks against the
//! spectral pipeline.

pub mod builders;
pub mod covers;
pub mod polygamy;
pub mod prescribed;
pub mod products;
pub mod recipe;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::graph::{GraphError, WeightedGraph};
use crate::partition::{verify_k_fr, RevivalKind};
use crate::spectral::{spectral_decomposition, subset_projector, SpectralError};

pub use builders::{cocktail_party, complement, complete, cycle, hypercube, path, rook, subdivided_star};
pub use covers::{cover_fr_prediction, cover_phase_identities, verify_cover, CoverCheck, CoverPrediction, PhaseIdentities};
pub use polygamy::{hadamard_polygamy, polygamy_from_hadamard, sylvester_hadamard, PolygamyGraph};
pub use prescribed::{prescribed_fr, PrescribedGraph, PrescribedParams};
pub use products::{
    cartesian_product, direct_product, direct_product_fr_check, direct_product_transition, double_cover,
    double_cover_transition, join, switching_graph, DirectProductCheck, DoubleCoverTransition, JoinPrediction,
};
pub use recipe::{Construction, ConstructionRecipe};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("size mismatch: {left} vs {right} vertices")]
    SizeMismatch { left: usize, right: usize },
    #[error("graph is not regular: {0}")]
    NotRegular(&'static str),
    #[error("graph is disconnected: {0}")]
    Disconnected(&'static str),
    #[error("bad prime list: {0}")]
    BadPrimeList(String),
    #[error("H is not a symmetric unitary matrix (residual {residual:.3e})")]
    NotSymmetricUnitary { residual: f64 },
    #[error("H is diagonal, so no revival between distinct vertices can realise it")]
    DiagonalH,
    #[error("block size m = {m} must satisfy 1 <= m <= n - 3 = {max}")]
    BadBlockSize { m: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedKind {
    Proper,
    Periodic,
    None,
    /// Block-diagonal at the time, either proper or periodic.
    Revival,
}

impl ExpectedKind {
    pub fn accepts(self, kind: RevivalKind) -> bool {
        match self {
            ExpectedKind::Proper => kind == RevivalKind::Proper,
            ExpectedKind::Periodic => kind == RevivalKind::Periodic,
            ExpectedKind::None => kind == RevivalKind::None,
            ExpectedKind::Revival => kind != RevivalKind::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    #[serde(rename = "K")]
    pub subset: Vec<usize>,
    pub tau: f64,
    pub expected_kind: ExpectedKind,
}

impl Prediction {
    pub fn new(subset: Vec<usize>, tau: f64, expected_kind: ExpectedKind) -> Self {
        Prediction { subset, tau, expected_kind }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictionCheck {
    #[serde(flatten)]
    pub prediction: Prediction,
    pub kind: RevivalKind,
    pub off_block_residual: f64,
    pub passed: bool,
}

/// Runs `verify_k_fr` for each prediction. A prediction of revival also
/// needs the off-block residual under `tol`.
pub fn verify_predictions(
    g: &WeightedGraph,
    predictions: &[Prediction],
    tol: f64,
    exec: Execution,
) -> Result<Vec<PredictionCheck>, ConstructionError> {
    if predictions.is_empty() {
        return Ok(Vec::new());
    }
    let s = spectral_decomposition(g, None)?;
    let projectors = predictions
        .iter()
        .map(|p| subset_projector(&p.subset, g.n()))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs: Vec<_> = predictions.iter().zip(projectors).collect();
    Ok(exec::map(exec, &pairs, |(p, k)| {
        let cert = verify_k_fr(&s, k, p.tau, tol);
        let residual_ok = p.expected_kind == ExpectedKind::None || cert.off_block_residual < tol;
        PredictionCheck {
            prediction: (*p).clone(),
            kind: cert.kind,
            off_block_residual: cert.off_block_residual,
            passed: p.expected_kind.accepts(cert.kind) && residual_ok,
        }
    }))
}
