//! Serializable reports. Every rational is an exact `"p/q"` string; the
//! summary format is rendered from the same structures.

use std::fmt::Write as _;

use gitstab::opssearch::{Certificate, TorusVerdict, Wall};
use gitstab::{LambdaVerdict, Rational};
use serde::Serialize;

use crate::input::RequestFile;

pub fn rat(x: &Rational) -> String {
    x.to_string()
}

pub fn rats(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(rat).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptionsEcho {
    pub mode: String,
    pub seed: u64,
    pub random_transforms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_range: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<String>,
    pub assume_smooth: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayReport {
    pub lambda: Vec<i64>,
    pub omega: String,
    pub threshold: String,
    pub classification: String,
}

impl From<&LambdaVerdict> for RayReport {
    fn from(v: &LambdaVerdict) -> Self {
        Self {
            lambda: v.lambda.weights().to_vec(),
            omega: rat(&v.omega),
            threshold: rat(&v.threshold),
            classification: v.classification.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusReport {
    pub verdict: String,
    pub rays_checked: usize,
    pub witnesses: Vec<RayReport>,
}

impl From<&TorusVerdict> for TorusReport {
    fn from(v: &TorusVerdict) -> Self {
        Self {
            verdict: v.kind.to_string(),
            rays_checked: v.rays_checked,
            witnesses: v.witnesses.iter().map(RayReport::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateStats {
    pub rays: usize,
    pub pieces: usize,
    pub ties: usize,
    pub torus_rays: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub strategy: String,
    pub lambda: Vec<i64>,
    pub transform: Vec<Vec<String>>,
    pub omega: String,
    pub threshold: String,
    pub classification: String,
    pub verified: bool,
}

impl CertificateReport {
    pub fn new(c: &Certificate, verified: bool) -> Self {
        Self {
            strategy: c.strategy.to_string(),
            lambda: c.lambda.weights().to_vec(),
            transform: c.transform.matrix().iter().map(|row| rats(row)).collect(),
            omega: rat(&c.omega),
            threshold: rat(&c.threshold),
            classification: c.classification.to_string(),
            verified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    /// `found`, `not-found` or `skipped`.
    pub outcome: String,
    /// Frames in the search plan (all of them unless a certificate was found).
    pub frames: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallReport {
    pub value: String,
    pub rays: Vec<Vec<i64>>,
    pub outside_regime: bool,
}

impl From<&Wall> for WallReport {
    fn from(w: &Wall) -> Self {
        Self {
            value: rat(&w.value),
            rays: w.rays.iter().map(|r| r.weights().to_vec()).collect(),
            outside_regime: w.outside_regime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VgitReport {
    pub t: Vec<String>,
    /// `n sum t >= kd`.
    pub outside_regime: bool,
    pub torus: TorusReport,
    pub search: SearchReport,
    /// Scales `s` along the given `t` at which some ray changes sign.
    pub walls: Vec<WallReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    /// `(n+1)/d`.
    pub sufficient: String,
    /// `(n+1)/(kd)`, for `k >= 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub necessary: Option<String>,
    /// `k(n+1)/(kd - n sum t)`, when `t` is given and in the regime.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vgit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointLct {
    pub point: Vec<String>,
    pub value: String,
    pub nondegenerate_assumed: bool,
    pub crossing: String,
    pub binding_weights: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub lambda: Vec<i64>,
    pub bound: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasePointReport {
    pub point: Vec<String>,
    /// Local lct of each generator.
    pub generators: Vec<PointLct>,
    /// Smallest `Λ/ω` over candidate rays with `ω > 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple_bound: Option<BoundReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LctCriteria {
    pub thresholds: Thresholds,
    pub base_points: Vec<BasePointReport>,
    /// Some generator has `lct <= (n+1)/(kd)` at a base point.
    pub refutes_stable: bool,
    /// Some generator has `lct < (n+1)/(kd)` at a base point.
    pub refutes_semistable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalyzeReport {
    pub command: String,
    pub request: RequestFile,
    pub options: OptionsEcho,
    pub candidates: CandidateStats,
    pub torus: TorusReport,
    pub search: SearchReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth_members_verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vgit: Option<VgitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lct: Option<LctCriteria>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub scale: String,
    pub t: Vec<String>,
    pub verdict: String,
    pub outside_regime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub command: String,
    pub request: RequestFile,
    pub options: OptionsEcho,
    /// Direction in `t`-space; the scanned values are `scale * direction`.
    pub direction: Vec<String>,
    pub candidates: CandidateStats,
    /// Scale at which `n sum t = kd`.
    pub regime_limit: String,
    pub walls: Vec<WallReport>,
    pub table: Vec<ScanRow>,
    pub constant_between_walls: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormLct {
    pub generator: usize,
    pub form: String,
    /// Minimum over the points and 1.
    pub global_lct: String,
    pub points: Vec<PointLct>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LctReport {
    pub command: String,
    pub request: RequestFile,
    pub thresholds: Thresholds,
    pub forms: Vec<FormLct>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Analyze(Box<AnalyzeReport>),
    Scan(Box<ScanReport>),
    Lct(Box<LctReport>),
}

fn lambda(l: &[i64]) -> String {
    let parts: Vec<String> = l.iter().map(|a| a.to_string()).collect();
    format!("({})", parts.join(","))
}

fn torus_lines(out: &mut String, label: &str, t: &TorusReport) {
    let _ = writeln!(out, "{label}: {} ({} rays)", t.verdict, t.rays_checked);
    for w in t.witnesses.iter().take(5) {
        let _ = writeln!(out, "  {} omega {} vs {} ({})", lambda(&w.lambda), w.omega, w.threshold, w.classification);
    }
    if t.witnesses.len() > 5 {
        let _ = writeln!(out, "  ... {} more", t.witnesses.len() - 5);
    }
}

fn search_lines(out: &mut String, s: &SearchReport) {
    let _ = write!(out, "destabilizer search: {} ({} frames)", s.outcome, s.frames);
    match &s.certificate {
        Some(c) => {
            let _ = writeln!(
                out,
                "\n  {} at {}: omega {} vs {} (verified: {})",
                c.strategy,
                lambda(&c.lambda),
                c.omega,
                c.threshold,
                c.verified
            );
        }
        None => out.push('\n'),
    }
}

fn wall_lines(out: &mut String, walls: &[WallReport]) {
    if walls.is_empty() {
        out.push_str("walls: none\n");
        return;
    }
    let values: Vec<String> =
        walls.iter().map(|w| if w.outside_regime { format!("{}*", w.value) } else { w.value.clone() }).collect();
    let _ = writeln!(out, "walls: {} (* outside regime)", values.join(", "));
}

fn threshold_lines(out: &mut String, t: &Thresholds) {
    let _ = write!(out, "thresholds: sufficient {}", t.sufficient);
    if let Some(x) = &t.necessary {
        let _ = write!(out, ", necessary {x}");
    }
    if let Some(x) = &t.vgit {
        let _ = write!(out, ", vgit {x}");
    }
    out.push('\n');
}

impl Report {
    pub fn summary(&self) -> String {
        let mut out = String::new();
        match self {
            Self::Analyze(r) => {
                let _ = writeln!(out, "analyze (mode {}, seed {})", r.options.mode, r.options.seed);
                let c = &r.candidates;
                let _ = writeln!(
                    out,
                    "candidates: {} rays, {} pieces, {} ties; {} torus rays",
                    c.rays, c.pieces, c.ties, c.torus_rays
                );
                torus_lines(&mut out, "torus", &r.torus);
                search_lines(&mut out, &r.search);
                if let Some(v) = &r.smooth_members_verdict {
                    let _ = writeln!(out, "smooth members: {v}");
                }
                if let Some(v) = &r.vgit {
                    let _ = writeln!(
                        out,
                        "t = [{}]{}",
                        v.t.join(", "),
                        if v.outside_regime { " (outside regime)" } else { "" }
                    );
                    torus_lines(&mut out, "vgit torus", &v.torus);
                    search_lines(&mut out, &v.search);
                    wall_lines(&mut out, &v.walls);
                }
                if let Some(l) = &r.lct {
                    threshold_lines(&mut out, &l.thresholds);
                    for b in &l.base_points {
                        let values: Vec<&str> = b.generators.iter().map(|g| g.value.as_str()).collect();
                        let _ = write!(out, "base point ({}): lct {}", b.point.join(":"), values.join(", "));
                        if let Some(t) = &b.tuple_bound {
                            let _ = write!(out, "; bound {} at {}", t.bound, lambda(&t.lambda));
                        }
                        out.push('\n');
                    }
                    let _ = writeln!(
                        out,
                        "refutes stable: {}, refutes semistable: {}",
                        l.refutes_stable, l.refutes_semistable
                    );
                }
            }
            Self::Scan(r) => {
                let _ = writeln!(out, "vgit-scan along t = s*[{}] (mode {})", r.direction.join(", "), r.options.mode);
                wall_lines(&mut out, &r.walls);
                let _ = writeln!(out, "regime limit: s < {}", r.regime_limit);
                let mut start = 0;
                while start < r.table.len() {
                    let end = (start..r.table.len())
                        .find(|&i| r.table[i].verdict != r.table[start].verdict)
                        .unwrap_or(r.table.len());
                    let _ = writeln!(
                        out,
                        "  s in [{}, {}]: {}",
                        r.table[start].scale,
                        r.table[end - 1].scale,
                        r.table[start].verdict
                    );
                    start = end;
                }
                let _ = writeln!(out, "constant between walls: {}", r.constant_between_walls);
            }
            Self::Lct(r) => {
                threshold_lines(&mut out, &r.thresholds);
                for f in &r.forms {
                    let _ = writeln!(out, "{}: global lct {}", f.form, f.global_lct);
                    for p in &f.points {
                        let _ = writeln!(
                            out,
                            "  at ({}): {} (crossing {}, weights {})",
                            p.point.join(":"),
                            p.value,
                            p.crossing,
                            lambda(&p.binding_weights)
                        );
                    }
                }
            }
        }
        out
    }
}
