//! `{"kind": "...", "params": {...}}` recipes and the graphs they build.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::*;
use crate::exec::Execution;
use crate::linalg::{expm_minus_i, max_abs_c, ComplexValue};
use crate::spectral::spectral_decomposition;

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructionRecipe {
    CocktailParty {
        n: usize,
    },
    SubdividedStar {
        m: usize,
    },
    Hypercube {
        d: usize,
    },
    /// Line graph of `K_{n,n}`.
    Rook {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Cartesian {
        x: Box<ConstructionRecipe>,
        y: Box<ConstructionRecipe>,
    },
    Direct {
        x: Box<ConstructionRecipe>,
        y: Box<ConstructionRecipe>,
        /// Time at which to test `U_Y(theta_r t)` for constancy.
        #[serde(default)]
        time: Option<f64>,
    },
    /// `x` defaults to the complement of `y` (the switching graph).
    DoubleCover {
        #[serde(default)]
        x: Option<Box<ConstructionRecipe>>,
        y: Box<ConstructionRecipe>,
        #[serde(default)]
        time: Option<f64>,
    },
    Join {
        x: Box<ConstructionRecipe>,
        y: Box<ConstructionRecipe>,
    },
    CoverParams {
        n: u64,
        r: u64,
        c: u64,
    },
    HadamardPolygamy {
        m: u32,
        primes: Vec<u64>,
        #[serde(default)]
        adjacency: bool,
        /// Normalized Hadamard matrix to use instead of Sylvester's.
        #[serde(default)]
        hadamard: Option<Vec<Vec<i8>>>,
    },
    Prescribed {
        h: [[ComplexValue; 2]; 2],
        tau: f64,
        n: usize,
        #[serde(default)]
        m: Option<usize>,
        #[serde(default = "one")]
        sigma: i64,
        #[serde(default = "one")]
        omega: i64,
        #[serde(default)]
        branch: [i64; 2],
        #[serde(default)]
        fillers: Option<Vec<f64>>,
    },
}

#[derive(Clone, Debug)]
pub struct Construction {
    /// Absent for parameter-only recipes (`cover_params`).
    pub graph: Option<WeightedGraph>,
    pub predictions: Vec<Prediction>,
    /// Construction-specific data (times, spectra, residuals).
    pub details: Value,
}

impl Construction {
    fn plain(graph: WeightedGraph, predictions: Vec<Prediction>) -> Self {
        Construction { graph: Some(graph), predictions, details: Value::Null }
    }

    pub fn verify(&self, tol: f64, exec: Execution) -> Result<Vec<PredictionCheck>, ConstructionError> {
        match &self.graph {
            Some(g) => verify_predictions(g, &self.predictions, tol, exec),
            None => Ok(Vec::new()),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "graph": self.graph.as_ref().map(|g| g.to_json()),
            "predictions": self.predictions,
            "details": self.details,
        })
    }
}

impl ConstructionRecipe {
    pub fn from_json_str(s: &str) -> Result<Self, ConstructionError> {
        serde_json::from_str(s).map_err(|e| ConstructionError::BadParameter(format!("recipe: {e}")))
    }

    pub fn build(&self) -> Result<Construction, ConstructionError> {
        use ConstructionRecipe as R;
        Ok(match self {
            R::CocktailParty { n } => {
                let tau = PI / *n as f64;
                let preds = (0..*n).map(|i| Prediction::new(vec![2 * i, 2 * i + 1], tau, ExpectedKind::Proper));
                Construction::plain(cocktail_party(*n)?, preds.collect())
            }
            R::SubdividedStar { m } => {
                let g = subdivided_star(*m)?;
                let k: Vec<usize> = std::iter::once(0).chain(m + 1..=2 * m).collect();
                let tau = PI / ((m + 1) as f64).sqrt();
                Construction::plain(g, vec![Prediction::new(k, tau, ExpectedKind::None)])
            }
            R::Hypercube { d } => {
                let g = hypercube(*d)?;
                let far = g.n() - 1;
                Construction::plain(g, vec![Prediction::new(vec![0, far], PI / 2.0, ExpectedKind::Proper)])
            }
            R::Rook { n } | R::Complete { n } => {
                let g = if matches!(self, R::Rook { .. }) { rook(*n)? } else { complete(*n)? };
                let preds = if *n >= 2 {
                    vec![Prediction::new(vec![0], 2.0 * PI / *n as f64, ExpectedKind::Periodic)]
                } else {
                    Vec::new()
                };
                Construction::plain(g, preds)
            }
            R::Path { n } => Construction::plain(path(*n)?, Vec::new()),
            R::Cycle { n } => Construction::plain(cycle(*n)?, Vec::new()),
            R::Cartesian { x, y } => {
                let (cx, cy) = (x.build()?, y.build()?);
                let (gx, gy) = (require_graph(&cx)?, require_graph(&cy)?);
                let (nx, ny) = (gx.n(), gy.n());
                // U_X (x) U_Y is block diagonal on K x V(Y) whenever U_X is on K.
                let mut preds = Vec::new();
                for p in cx.predictions.iter().filter(|p| p.expected_kind != ExpectedKind::None) {
                    let k = p.subset.iter().flat_map(|&a| (0..ny).map(move |b| a * ny + b)).collect();
                    preds.push(Prediction::new(k, p.tau, ExpectedKind::Revival));
                }
                for p in cy.predictions.iter().filter(|p| p.expected_kind != ExpectedKind::None) {
                    let mut k: Vec<usize> = (0..nx).flat_map(|a| p.subset.iter().map(move |&b| a * ny + b)).collect();
                    k.sort_unstable();
                    preds.push(Prediction::new(k, p.tau, ExpectedKind::Revival));
                }
                Construction::plain(cartesian_product(gx, gy), preds)
            }
            R::Direct { x, y, time } => {
                let (cx, cy) = (x.build()?, y.build()?);
                let (gx, gy) = (require_graph(&cx)?, require_graph(&cy)?);
                let g = direct_product(gx, gy);
                let mut preds = Vec::new();
                let mut details = Value::Null;
                if let Some(t) = time {
                    let sx = spectral_decomposition(gx, None)?;
                    let sy = spectral_decomposition(gy, None)?;
                    let check = direct_product_fr_check(&sx, &sy, *t, 1e-8);
                    if check.holds {
                        let kind = match check.kind {
                            crate::partition::RevivalKind::Proper => ExpectedKind::Proper,
                            _ => ExpectedKind::Periodic,
                        };
                        preds.push(Prediction::new((0..gy.n()).collect(), *t, kind));
                    }
                    details = json!({ "direct_product_check": check });
                }
                Construction { graph: Some(g), predictions: preds, details }
            }
            R::DoubleCover { x, y, time } => {
                let cy = y.build()?;
                let gy = require_graph(&cy)?;
                let gx = match x {
                    Some(x) => require_graph(&x.build()?)?.clone(),
                    None => complement(gy),
                };
                let g = double_cover(&gx, gy)?;
                let n = gy.n();
                // Switching graph of an odd rook graph: U_Y(pi) = U_Y(-pi) = I - 2E.
                let odd_rook = matches!(**y, R::Rook { n } if n % 2 == 1) && x.is_none();
                let t = time.or(odd_rook.then_some(PI));
                let mut preds = Vec::new();
                let mut details = Value::Null;
                if let Some(t) = t {
                    let commutator = crate::linalg::max_abs(&(gx.weights() * gy.weights() - gy.weights() * gx.weights()));
                    let even = max_abs_c(&(expm_minus_i(gy.weights(), t) - expm_minus_i(gy.weights(), -t)));
                    let scale = 1.0 + gx.inf_norm() * gy.inf_norm();
                    if commutator <= 1e-10 * scale && even < 1e-8 {
                        let kind = if odd_rook && time.is_none() { ExpectedKind::Proper } else { ExpectedKind::Revival };
                        preds.push(Prediction::new((0..n).collect(), t, kind));
                    }
                    details = json!({ "commutator": commutator, "odd_part": even, "time": t });
                }
                Construction { graph: Some(g), predictions: preds, details }
            }
            R::Join { x, y } => {
                let (cx, cy) = (x.build()?, y.build()?);
                let (gx, gy) = (require_graph(&cx)?, require_graph(&cy)?);
                let (g, jp) = join(gx, gy)?;
                let preds = vec![Prediction::new((0..gx.n()).collect(), jp.tau, ExpectedKind::Revival)];
                Construction { graph: Some(g), predictions: preds, details: json!(jp) }
            }
            R::CoverParams { n, r, c } => Construction {
                graph: None,
                predictions: Vec::new(),
                details: json!(cover_fr_prediction(*n, *r, *c)),
            },
            R::HadamardPolygamy { m, primes, adjacency, hadamard } => {
                let pg = match hadamard {
                    None => hadamard_polygamy(*m, primes, *adjacency)?,
                    Some(rows) => {
                        let n = rows.len();
                        if rows.iter().any(|r| r.len() != n) {
                            return Err(ConstructionError::BadParameter("Hadamard matrix must be square".into()));
                        }
                        let h = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
                        polygamy_from_hadamard(h, primes, *adjacency)?
                    }
                };
                Construction {
                    graph: Some(pg.graph.clone()),
                    predictions: pg.predictions.clone(),
                    details: json!({
                        "primes": pg.primes,
                        "lambdas": pg.lambdas,
                        "adjacency": pg.adjacency,
                        "sylvester": pg.sylvester,
                    }),
                }
            }
            R::Prescribed { h, tau, n, m, sigma, omega, branch, fillers } => {
                let hc = [[h[0][0].into(), h[0][1].into()], [h[1][0].into(), h[1][1].into()]];
                let params = PrescribedParams {
                    h: hc,
                    tau: *tau,
                    n: *n,
                    m: *m,
                    sigma: *sigma,
                    omega: *omega,
                    branch: *branch,
                    fillers: fillers.clone(),
                };
                let pg = prescribed_fr(&params)?;
                Construction {
                    graph: Some(pg.graph.clone()),
                    predictions: vec![pg.prediction.clone()],
                    details: json!(pg),
                }
            }
        })
    }
}

fn require_graph(c: &Construction) -> Result<&WeightedGraph, ConstructionError> {
    c.graph
        .as_ref()
        .ok_or_else(|| ConstructionError::BadParameter("cover_params does not build a graph".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> Construction {
        ConstructionRecipe::from_json_str(s).unwrap().build().unwrap()
    }

    #[test]
    fn parses_and_verifies_base_families() {
        for s in [
            r#"{"kind":"cocktail_party","params":{"n":4}}"#,
            r#"{"kind":"subdivided_star","params":{"m":3}}"#,
            r#"{"kind":"hypercube","params":{"d":3}}"#,
            r#"{"kind":"rook","params":{"n":3}}"#,
            r#"{"kind":"complete","params":{"n":5}}"#,
        ] {
            let c = build(s);
            let checks = c.verify(1e-7, Execution::Sequential).unwrap();
            assert!(!checks.is_empty());
            assert!(checks.iter().all(|ch| ch.passed), "{s}: {checks:?}");
        }
    }

    #[test]
    fn nested_recipes() {
        let c = build(r#"{"kind":"double_cover","params":{"y":{"kind":"rook","params":{"n":3}}}}"#);
        assert_eq!(c.graph.as_ref().unwrap().n(), 18);
        let checks = c.verify(1e-7, Execution::Sequential).unwrap();
        assert_eq!(checks.len(), 1);
        assert!(checks[0].passed, "{checks:?}");

        let c = build(
            r#"{"kind":"cartesian","params":{"x":{"kind":"complete","params":{"n":2}},"y":{"kind":"cycle","params":{"n":4}}}}"#,
        );
        assert!(c.verify(1e-7, Execution::Sequential).unwrap().iter().all(|ch| ch.passed));
    }

    #[test]
    fn cover_params_has_no_graph() {
        let c = build(r#"{"kind":"cover_params","params":{"n":36,"r":3,"c":12}}"#);
        assert!(c.graph.is_none());
        assert!((c.details["tau"].as_f64().unwrap() - PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(ConstructionRecipe::from_json_str(r#"{"kind":"complete","params":{"n":3,"x":1}}"#).is_err());
        assert!(ConstructionRecipe::from_json_str(r#"{"kind":"nope","params":{}}"#).is_err());
    }
}
