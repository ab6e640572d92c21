//! End-to-end analyses with serializable reports and a plain-text view.
//!
//! These are what the command-line front end prints; they are also the
//! easiest way to drive the whole pipeline from code.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cospectral::{analyze_pair, PairCospectralityReport, PairOptions};
use crate::exec::Execution;
use crate::graph::WeightedGraph;
use crate::integer_revival::{extract_quadratic_data, minimal_proper_time, MinimalTime, QuadraticSpectrumData};
use crate::linalg::{complex_rows, ComplexValue};
use crate::partition::lattice::IndexPartition;
use crate::partition::{
    check_support_bound, eigenvalue_support, find_revival_time, is_properly_decomposable, min_commuting_partition,
    verify_k_fr, Decomposability, EigenvalueSupport, RatioCertificate, RevivalCertificate, RevivalKind,
    RevivalOptions, SupportBound,
};
use crate::spectral::{spectral_decomposition, subset_projector, SpectralDecomposition, SpectralWarning};
use crate::Error;

/// Tolerances shared by every command.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub tol: f64,
    pub cluster_tol: Option<f64>,
    pub zero_tol: Option<f64>,
    pub max_denominator: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol: 1e-8, cluster_tol: None, zero_tol: None, max_denominator: 1_000_000 }
    }
}

impl Tolerances {
    fn revival_options(&self) -> RevivalOptions {
        RevivalOptions {
            zero_tol: self.zero_tol,
            max_denominator: self.max_denominator,
            ratio_tol: None,
            tol: self.tol,
        }
    }
}

/// JSON form of a [`RevivalCertificate`].
#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    #[serde(rename = "K")]
    pub subset: Vec<usize>,
    pub tau: Option<f64>,
    pub kind: RevivalKind,
    #[serde(rename = "H")]
    pub h: Vec<Vec<ComplexValue>>,
    pub off_block_residual: f64,
    pub partition: Option<IndexPartition>,
    pub phases: Vec<ComplexValue>,
}

impl From<&RevivalCertificate> for CertificateJson {
    fn from(c: &RevivalCertificate) -> Self {
        CertificateJson {
            subset: c.subset.clone(),
            tau: c.tau,
            kind: c.kind,
            h: complex_rows(&c.h),
            off_block_residual: c.off_block_residual,
            partition: c.partition.clone(),
            phases: c.phases.iter().map(|&z| z.into()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumJson {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub cluster_tol: f64,
    pub warnings: Vec<SpectralWarning>,
}

impl From<&SpectralDecomposition> for SpectrumJson {
    fn from(s: &SpectralDecomposition) -> Self {
        SpectrumJson {
            eigenvalues: s.eigenvalues().to_vec(),
            multiplicities: s.multiplicities().to_vec(),
            cluster_tol: s.cluster_tol(),
            warnings: s.warnings().to_vec(),
        }
    }
}

/// Classes of `p` as lists of eigenvalues.
pub fn partition_eigenvalues(s: &SpectralDecomposition, p: &IndexPartition) -> Vec<Vec<f64>> {
    p.classes().iter().map(|c| c.iter().map(|&r| s.eigenvalues()[r]).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassSummary {
    pub eigenvalue_indices: Vec<usize>,
    pub eigenvalues: Vec<f64>,
    pub nonzero_on_k: bool,
    /// `F_j` restricted to `K x K`.
    pub restricted: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub n: usize,
    #[serde(rename = "K")]
    pub subset: Vec<usize>,
    pub spectrum: SpectrumJson,
    pub support: EigenvalueSupport,
    pub partition: IndexPartition,
    pub classes: Vec<ClassSummary>,
    pub commutator_residual: f64,
    pub support_bound: Option<SupportBound>,
    pub decomposability: Option<Decomposability>,
    /// Why `decomposability` or `support_bound` could not be decided.
    pub notes: Vec<String>,
    pub ratio: Option<RatioCertificate>,
    pub certificate: CertificateJson,
    /// Direct check at a caller-supplied time.
    pub at_time: Option<CertificateJson>,
}

impl AnalyzeReport {
    /// Revival at the requested time if one was given, else at the searched time.
    pub fn found(&self) -> bool {
        self.at_time.as_ref().unwrap_or(&self.certificate).kind != RevivalKind::None
    }
}

pub fn analyze(
    g: &WeightedGraph,
    subset: &[usize],
    time: Option<f64>,
    tols: &Tolerances,
) -> Result<AnalyzeReport, Error> {
    let s = spectral_decomposition(g, tols.cluster_tol)?;
    let k = subset_projector(subset, g.n())?;
    let support = eigenvalue_support(&s, &k, tols.zero_tol);
    let ci = min_commuting_partition(&s, &k, tols.zero_tol);
    let mut notes = Vec::new();
    let support_bound = check_support_bound(&ci, &s, tols.tol.max(1e-9))
        .map_err(|e| notes.push(format!("support bound: {e}")))
        .ok();
    let decomposability = is_properly_decomposable(&ci, g)
        .map_err(|e| notes.push(format!("decomposability: {e}")))
        .ok();
    let cert = find_revival_time(&s, &k, g.inf_norm(), &tols.revival_options())?;
    let classes = ci
        .partition
        .classes()
        .iter()
        .enumerate()
        .map(|(j, c)| ClassSummary {
            eigenvalue_indices: c.clone(),
            eigenvalues: c.iter().map(|&r| s.eigenvalues()[r]).collect(),
            nonzero_on_k: ci.nonzero[j],
            restricted: ci.f_restricted[j].row_iter().map(|r| r.iter().copied().collect()).collect(),
        })
        .collect();
    let at_time = time.map(|t| CertificateJson::from(&verify_k_fr(&s, &k, t, tols.tol)));
    Ok(AnalyzeReport {
        n: g.n(),
        subset: k.subset().to_vec(),
        spectrum: (&s).into(),
        support,
        commutator_residual: ci.commutator_residual(),
        partition: ci.partition,
        classes,
        support_bound,
        decomposability,
        notes,
        ratio: cert.ratio.clone(),
        certificate: (&cert).into(),
        at_time,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub spectrum: SpectrumJson,
    pub cospectrality: PairCospectralityReport,
    pub quadratic: Option<QuadraticSpectrumData>,
    pub minimal_time: Option<MinimalTime>,
    /// `verify_k_fr` on `{a, b}` at the time from `minimal_time`.
    pub verified: Option<CertificateJson>,
    /// Minimal revival time on `{a, b}` from the ratio condition.
    pub certificate: CertificateJson,
    pub notes: Vec<String>,
}

impl PairReport {
    pub fn found(&self) -> bool {
        self.certificate.kind != RevivalKind::None
            || self.verified.as_ref().is_some_and(|c| c.kind != RevivalKind::None)
    }
}

pub fn pair(g: &WeightedGraph, a: usize, b: usize, tols: &Tolerances, exec: Execution) -> Result<PairReport, Error> {
    let s = spectral_decomposition(g, tols.cluster_tol)?;
    let opts = PairOptions { tol: tols.tol.max(1e-7), k_max: None };
    let cospectrality = analyze_pair(g, &s, a, b, &opts)?;
    let k = subset_projector(&[a, b], g.n())?;
    let cert = find_revival_time(&s, &k, g.inf_norm(), &tols.revival_options())?;
    let mut notes = Vec::new();
    let (mut quadratic, mut minimal_time, mut verified) = (None, None, None);
    if !g.integer_weighted() {
        notes.push("weights are not integers; the quadratic-spectrum analysis is skipped".into());
    } else if let (true, Some(split)) =
        (cospectrality.strongly_fractionally_cospectral, cospectrality.class_split.as_ref())
    {
        match extract_quadratic_data(g, &s, split, tols.max_denominator) {
            Ok(data) => {
                match minimal_proper_time(&data, exec) {
                    Ok(mt) => {
                        let t = match &mt {
                            MinimalTime::At { tau, .. } => Some(*tau),
                            MinimalTime::Unconstrained { witness, .. } => Some(*witness),
                            MinimalTime::Never => None,
                        };
                        verified = t.map(|t| CertificateJson::from(&verify_k_fr(&s, &k, t, tols.tol)));
                        minimal_time = Some(mt);
                    }
                    Err(e) => notes.push(format!("minimal time: {e}")),
                }
                quadratic = Some(data);
            }
            Err(e) => notes.push(format!("quadratic data: {e}")),
        }
    } else {
        notes.push("pair is not strongly fractionally cospectral".into());
    }
    if cospectrality.cospectral {
        let pst = verified
            .as_ref()
            .is_some_and(|c| c.kind == RevivalKind::Proper && c.h[0][0].re.hypot(c.h[0][0].im) < tols.tol.max(1e-8));
        notes.push(if pst {
            "cospectral pair (p = q): the revival found is perfect state transfer".into()
        } else {
            "cospectral pair (p = q): perfect state transfer is the special case H_aa = 0".into()
        });
    }
    Ok(PairReport {
        spectrum: (&s).into(),
        cospectrality,
        quadratic,
        minimal_time,
        verified,
        certificate: (&cert).into(),
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EvolveReport {
    pub vertex: usize,
    pub tau: f64,
    pub amplitudes: Vec<ComplexValue>,
    pub probabilities: Vec<f64>,
}

pub fn evolve(g: &WeightedGraph, a: usize, tau: f64, tols: &Tolerances) -> Result<EvolveReport, Error> {
    let s = spectral_decomposition(g, tols.cluster_tol)?;
    let v = s.evolve_vertex(a, tau)?;
    Ok(EvolveReport {
        vertex: a,
        tau,
        amplitudes: v.iter().map(|&z| z.into()).collect(),
        probabilities: v.iter().map(|z| z.norm_sqr()).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub t: f64,
    /// `argmax_{b != a} |U(t)_{ab}|`.
    pub partner: usize,
    pub amplitude: f64,
    /// `|U(t)_{aa}|^2 + |U(t)_{a,partner}|^2`: how much of the state sits
    /// on one pair containing `a`.
    pub concentration: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub vertex: usize,
    pub rows: Vec<SweepRow>,
    /// Row with the largest `amplitude`.
    pub peak: Option<SweepRow>,
    /// Grid-local maxima of `concentration` at or above `threshold`.
    pub concentration_peaks: Vec<SweepRow>,
    pub threshold: f64,
}

/// Inclusive grid of `steps` points from `start` to `stop`.
pub fn time_grid(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect(),
    }
}

pub fn sweep(
    g: &WeightedGraph,
    a: usize,
    grid: &[f64],
    threshold: f64,
    tols: &Tolerances,
    exec: Execution,
) -> Result<SweepReport, Error> {
    if g.n() < 2 {
        return Err(Error::Request("sweep needs at least two vertices".into()));
    }
    let s = spectral_decomposition(g, tols.cluster_tol)?;
    s.evolve_vertex(a, 0.0)?;
    let rows = crate::exec::map(exec, grid, |&t| {
        let v = s.evolve_vertex(a, t).expect("vertex checked above");
        let (partner, amplitude) = (0..v.len())
            .filter(|&b| b != a)
            .map(|b| (b, v[b].norm()))
            .fold((usize::MAX, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        SweepRow { t, partner, amplitude, concentration: v[a].norm_sqr() + amplitude * amplitude }
    });
    let peak = rows
        .iter()
        .fold(None::<&SweepRow>, |best, r| match best {
            Some(b) if b.amplitude >= r.amplitude => Some(b),
            _ => Some(r),
        })
        .cloned();
    let concentration_peaks = (0..rows.len())
        .filter(|&i| {
            let c = rows[i].concentration;
            let left = i == 0 || rows[i - 1].concentration <= c;
            let right = i + 1 == rows.len() || rows[i + 1].concentration < c;
            c >= threshold && left && right
        })
        .map(|i| rows[i].clone())
        .collect();
    Ok(SweepReport { vertex: a, rows, peak, concentration_peaks, threshold })
}

/// `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// [`sig12`] with rounding noise below `1e-12` shown as 0; for values of
/// order one (eigenvalues, amplitudes), never for residuals.
fn value12(x: f64) -> String {
    sig12(if x.abs() < 1e-12 { 0.0 } else { x })
}

fn complex_text(z: &ComplexValue) -> String {
    let im = if z.im.abs() < 1e-12 { 0.0 } else { z.im };
    if im >= 0.0 {
        format!("{}+{}i", value12(z.re), sig12(im))
    } else {
        format!("{}-{}i", value12(z.re), sig12(-im))
    }
}

fn list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| value12(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn partition_text(eigs: &[f64], p: &IndexPartition) -> String {
    let parts: Vec<String> = p
        .classes()
        .iter()
        .map(|c| {
            let vals: Vec<f64> = c.iter().map(|&r| eigs[r]).collect();
            format!("{{{}}}", list(&vals).trim_start_matches('[').trim_end_matches(']'))
        })
        .collect();
    parts.join(" ")
}

fn certificate_text(out: &mut String, label: &str, c: &CertificateJson, eigs: &[f64]) {
    let kind = match c.kind {
        RevivalKind::Proper => "proper",
        RevivalKind::Periodic => "periodic",
        RevivalKind::None => "none",
    };
    let _ = writeln!(out, "{label}: K = {:?}, kind = {kind}", c.subset);
    match c.tau {
        Some(t) => {
            let _ = writeln!(out, "  tau = {}", sig12(t));
        }
        None => {
            let _ = writeln!(out, "  tau = none (no rational ratio below the denominator cap)");
        }
    }
    if let Some(p) = &c.partition {
        let _ = writeln!(out, "  partition = {}", partition_text(eigs, p));
    }
    let _ = writeln!(out, "  off-block residual = {}", sig12(c.off_block_residual));
    if c.tau.is_some() {
        for row in &c.h {
            let cells: Vec<String> = row.iter().map(complex_text).collect();
            let _ = writeln!(out, "  H | {}", cells.join("  "));
        }
    }
}

impl AnalyzeReport {
    pub fn to_text(&self) -> String {
        let eigs = &self.spectrum.eigenvalues;
        let mut out = String::new();
        let _ = writeln!(out, "vertices: {}", self.n);
        let _ = writeln!(out, "eigenvalues: {}", list(eigs));
        let _ = writeln!(out, "multiplicities: {:?}", self.spectrum.multiplicities);
        for w in &self.spectrum.warnings {
            let _ = writeln!(out, "warning: {w:?}");
        }
        let _ = writeln!(out, "K: {:?}", self.subset);
        let _ = writeln!(out, "minimal commuting partition: {}", partition_text(eigs, &self.partition));
        for c in &self.classes {
            let _ = writeln!(
                out,
                "  class {}: restricted idempotent {}",
                list(&c.eigenvalues),
                if c.nonzero_on_k { "nonzero" } else { "zero" }
            );
        }
        let _ = writeln!(out, "commutator residual: {}", sig12(self.commutator_residual));
        if let Some(d) = &self.decomposability {
            let _ = writeln!(out, "properly decomposable: {}", d.decomposable);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(r) = &self.ratio {
            let _ = writeln!(out, "ratio condition: {}", if r.holds { "holds" } else { "fails" });
        }
        certificate_text(&mut out, "certificate", &self.certificate, eigs);
        if let Some(c) = &self.at_time {
            certificate_text(&mut out, "at requested time", c, eigs);
        }
        out
    }
}

impl PairReport {
    pub fn to_text(&self) -> String {
        let eigs = &self.spectrum.eigenvalues;
        let c = &self.cospectrality;
        let mut out = String::new();
        let _ = writeln!(out, "pair: ({}, {})", c.a, c.b);
        let _ = writeln!(out, "eigenvalues: {}", list(eigs));
        let _ = writeln!(out, "fractionally cospectral: {}", c.fractionally_cospectral);
        if let (Some(p), Some(q)) = (c.p, c.q) {
            let _ = writeln!(out, "  p = {}, q = {}", sig12(p), sig12(q));
        }
        let _ = writeln!(out, "cospectral: {}", c.cospectral);
        let _ = writeln!(out, "parallel: {}", c.parallel);
        let _ = writeln!(out, "strongly fractionally cospectral: {}", c.strongly_fractionally_cospectral);
        if let Some(split) = &c.class_split {
            let pick = |idx: &[usize]| -> Vec<f64> { idx.iter().map(|&r| eigs[r]).collect() };
            let _ = writeln!(out, "  C1 = {}, C2 = {}", list(&pick(&split.c1)), list(&pick(&split.c2)));
        }
        for (name, v) in &c.per_condition {
            let _ = writeln!(out, "  condition ({name}): {}", v.holds);
        }
        if let Some(q) = &self.quadratic {
            let _ = writeln!(out, "quadratic data: delta = {}, g = {}", q.delta, q.g);
        }
        if let Some(m) = &self.minimal_time {
            let line = match m {
                MinimalTime::At { k, tau, .. } => format!("minimal proper time: k = {k}, tau = {}", sig12(*tau)),
                MinimalTime::Unconstrained { period, witness } => format!(
                    "proper revival at every time except multiples of {} (e.g. {})",
                    sig12(*period),
                    sig12(*witness)
                ),
                MinimalTime::Never => "no proper revival time".into(),
            };
            let _ = writeln!(out, "{line}");
        }
        if let Some(v) = &self.verified {
            certificate_text(&mut out, "verified", v, eigs);
        }
        certificate_text(&mut out, "certificate", &self.certificate, eigs);
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

impl EvolveReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("U({}) e_{}\n", sig12(self.tau), self.vertex);
        for (i, (z, p)) in self.amplitudes.iter().zip(&self.probabilities).enumerate() {
            let _ = writeln!(out, "{i:>5}  {:<40} {}", complex_text(z), value12(*p));
        }
        out
    }
}

impl SweepReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{:>20}  {:>7}  {:>20}  {:>20}\n", "t", "partner", "amplitude", "concentration");
        for r in &self.rows {
            let _ = writeln!(out, "{:>20}  {:>7}  {:>20}  {:>20}", sig12(r.t), r.partner, sig12(r.amplitude), sig12(r.concentration));
        }
        if let Some(p) = &self.peak {
            let _ = writeln!(out, "peak amplitude {} to vertex {} at t = {}", sig12(p.amplitude), p.partner, sig12(p.t));
        }
        for p in &self.concentration_peaks {
            let _ = writeln!(out, "concentration peak {} on ({}, {}) at t = {}", sig12(p.concentration), self.vertex, p.partner, sig12(p.t));
        }
        out
    }
}
