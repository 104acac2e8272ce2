//! The three subcommands as pure functions from a validated problem to a report.

use gitstab::lct::{best_tuple_lct_bound, lct_at, sufficient_vgit_via_lct, LctValue};
use gitstab::opssearch::{
    candidate_lambdas, constant_between_walls, destabilizer_search, scan_t, torus_candidates,
    tuple_verdict_from_members, vgit_walls_along, CandidateSet, MemberVerdict, SearchOptions, SearchOutcome, Strategy,
    TorusEvaluator, TorusKind, TorusVerdict,
};
use gitstab::{Error, Mode, Permutation, ProjectivePoint, Rational, TuplePoint, VgitConfig};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::CliError;
use crate::input::Problem;
use crate::report::*;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub mode: Mode,
    pub seed: u64,
    pub random_transforms: usize,
    pub t_range: Option<(Rational, Rational)>,
    pub t_grid: Option<Rational>,
    /// Caller asserts every member of the tuple is smooth.
    pub assume_smooth: bool,
}

impl RunOptions {
    fn echo(&self) -> OptionsEcho {
        OptionsEcho {
            mode: self.mode.to_string(),
            seed: self.seed,
            random_transforms: self.random_transforms,
            t_range: self.t_range.as_ref().map(|(a, b)| [rat(a), rat(b)]),
            t_grid: self.t_grid.as_ref().map(rat),
            assume_smooth: self.assume_smooth,
        }
    }
}

fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn kd(t: &TuplePoint) -> i64 {
    t.k() as i64 * t.degree() as i64
}

fn stats(all: &CandidateSet, torus: &CandidateSet) -> CandidateStats {
    CandidateStats { rays: all.len(), pieces: all.pieces, ties: all.ties, torus_rays: torus.len() }
}

/// Torus verdict on the lower-envelope rays, cross-checked against the full
/// candidate set.
fn checked_torus(
    t: &TuplePoint,
    cfg: Option<&VgitConfig>,
    mode: Mode,
    all: &CandidateSet,
) -> Result<TorusVerdict, CliError> {
    let torus = torus_candidates(t, cfg, mode)?;
    let evaluator = TorusEvaluator::new(t, cfg, mode)?;
    let verdict = evaluator.torus_verdict(&torus)?;
    let full = evaluator.torus_verdict(all)?;
    if full.kind != verdict.kind {
        return Err(CliError::Invariant(format!(
            "candidate refinements disagree: {} on {} rays, {} on {} rays",
            verdict.kind, verdict.rays_checked, full.kind, full.rays_checked
        )));
    }
    Ok(verdict)
}

fn search(
    problem: &Problem,
    cfg: Option<&VgitConfig>,
    opts: &RunOptions,
    torus: &TorusVerdict,
) -> Result<SearchReport, CliError> {
    let t = &problem.tuple;
    let search_opts = SearchOptions {
        mode: opts.mode,
        permutations: true,
        transforms: Vec::new(),
        base_points: problem.base_points.clone(),
        random_transforms: opts.random_transforms,
        seed: opts.seed,
        smooth_members: opts.assume_smooth,
    };
    let n = t.ambient();
    let frames = (1..=n + 1).product::<usize>() + problem.base_points.len() + opts.random_transforms;
    Ok(match destabilizer_search(t, cfg, &search_opts)? {
        SearchOutcome::Found(c) => {
            let verified = c.verify(t, cfg)?;
            if !verified {
                return Err(CliError::Invariant(format!("certificate at {} does not verify", c.lambda)));
            }
            if torus.kind == TorusKind::Unstable {
                let identity = Strategy::Permutation(Permutation::identity(n + 1));
                if c.strategy != identity || c.lambda != torus.witnesses[0].lambda {
                    return Err(CliError::Invariant(
                        "search disagrees with the torus verdict in the given frame".into(),
                    ));
                }
            }
            SearchReport { outcome: "found".into(), frames, certificate: Some(CertificateReport::new(&c, verified)) }
        }
        SearchOutcome::NotFound { searched } => {
            if torus.kind == TorusKind::Unstable {
                return Err(CliError::Invariant("torus-unstable tuple not found by the search".into()));
            }
            SearchReport { outcome: "not-found".into(), frames: searched, certificate: None }
        }
        SearchOutcome::Skipped => SearchReport { outcome: "skipped".into(), frames: 0, certificate: None },
    })
}

fn point_lct(p: &ProjectivePoint, v: LctValue) -> PointLct {
    PointLct {
        point: rats(p.coords()),
        value: rat(&v.value),
        nondegenerate_assumed: v.nondegenerate_assumed,
        crossing: rat(&v.crossing),
        binding_weights: v.binding_weights,
    }
}

fn thresholds(t: &TuplePoint, tv: Option<&[Rational]>) -> Result<Thresholds, CliError> {
    let (n, d, k) = (t.ambient() as i64, t.degree() as i64, t.k());
    let vgit = match tv {
        None => None,
        Some(tv) => match sufficient_vgit_via_lct(t.ambient(), t.degree(), k, tv, &int(1)) {
            Ok(s) => Some(rat(&s.threshold)),
            Err(Error::OutsideRegime { .. }) => None,
            Err(e) => return Err(e.into()),
        },
    };
    Ok(Thresholds {
        sufficient: rat(&Rational::new((n + 1).into(), d.into())),
        necessary: (k >= 2).then(|| rat(&Rational::new((n + 1).into(), kd(t).into()))),
        vgit,
    })
}

fn lct_criteria(problem: &Problem) -> Result<Option<LctCriteria>, CliError> {
    if problem.base_points.is_empty() {
        return Ok(None);
    }
    let t = &problem.tuple;
    let evaluated = problem
        .base_points
        .par_iter()
        .map(|p| {
            let values = t.generators().iter().map(|f| lct_at(f, p)).collect::<Result<Vec<_>, Error>>()?;
            let tuple_bound = if t.k() >= 2 {
                best_tuple_lct_bound(t, p)?.map(|(l, b)| BoundReport { lambda: l.weights().to_vec(), bound: rat(&b) })
            } else {
                None
            };
            Ok((p, values, tuple_bound))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let (mut refutes_stable, mut refutes_semistable) = (false, false);
    if t.k() >= 2 {
        let thr = Rational::new((t.ambient() as i64 + 1).into(), kd(t).into());
        for v in evaluated.iter().flat_map(|(_, values, _)| values) {
            refutes_stable |= v.value <= thr;
            refutes_semistable |= v.value < thr;
        }
    }
    let base_points = evaluated
        .into_iter()
        .map(|(p, values, tuple_bound)| BasePointReport {
            point: rats(p.coords()),
            generators: values.into_iter().map(|v| point_lct(p, v)).collect(),
            tuple_bound,
        })
        .collect();
    Ok(Some(LctCriteria {
        thresholds: thresholds(t, problem.t.as_deref())?,
        base_points,
        refutes_stable,
        refutes_semistable,
    }))
}

fn vgit_report(problem: &Problem, opts: &RunOptions) -> Result<Option<VgitReport>, CliError> {
    let Some(tv) = &problem.t else { return Ok(None) };
    let t = &problem.tuple;
    let cfg = VgitConfig::new(tv.clone(), problem.hyperplanes.clone())?;
    let all = candidate_lambdas(t, Some(&cfg))?;
    let torus = checked_torus(t, Some(&cfg), opts.mode, &all)?;
    let search = search(problem, Some(&cfg), opts, &torus)?;
    let walls = vgit_walls_along(t, &problem.hyperplanes, tv, &all, opts.mode)?;
    let sum = tv.iter().fold(Rational::zero(), |a, b| a + b);
    Ok(Some(VgitReport {
        t: rats(tv),
        outside_regime: int(t.ambient() as i64) * sum >= int(kd(t)),
        torus: TorusReport::from(&torus),
        search,
        walls: walls.iter().map(WallReport::from).collect(),
    }))
}

pub fn analyze(problem: &Problem, opts: &RunOptions) -> Result<AnalyzeReport, CliError> {
    let t = &problem.tuple;
    if problem.t.is_none() && !problem.hyperplanes.is_empty() {
        return Err(CliError::Input("t: required when hyperplanes are given".into()));
    }
    if opts.assume_smooth && t.degree() < 3 {
        return Err(CliError::Input("--assume-smooth: smooth members are stable only for degree >= 3".into()));
    }
    let all = candidate_lambdas(t, None)?;
    let torus_set = torus_candidates(t, None, opts.mode)?;
    let torus = checked_torus(t, None, opts.mode, &all)?;
    let search = search(problem, None, opts, &torus)?;
    let smooth_members_verdict = if opts.assume_smooth {
        Some(tuple_verdict_from_members(&vec![MemberVerdict::Stable; t.k()])?.to_string())
    } else {
        None
    };
    Ok(AnalyzeReport {
        command: "analyze".into(),
        request: problem.request.clone(),
        options: opts.echo(),
        candidates: stats(&all, &torus_set),
        torus: TorusReport::from(&torus),
        search,
        smooth_members_verdict,
        vgit: vgit_report(problem, opts)?,
        lct: lct_criteria(problem)?,
    })
}

/// Positive grid points `lo + i·step <= hi`.
pub fn grid(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut s = lo.clone();
    while &s <= hi {
        if s > Rational::zero() {
            out.push(s.clone());
        }
        s += step;
    }
    out
}

const MAX_GRID: usize = 100_000;

pub fn vgit_scan(problem: &Problem, opts: &RunOptions) -> Result<ScanReport, CliError> {
    let t = &problem.tuple;
    if problem.hyperplanes.is_empty() {
        return Err(CliError::Input("hyperplanes: vgit-scan needs at least one hyperplane".into()));
    }
    let (lo, hi) = opts.t_range.clone().ok_or_else(|| CliError::Input("--t-range: required for vgit-scan".into()))?;
    let step = opts.t_grid.clone().ok_or_else(|| CliError::Input("--t-grid: required for vgit-scan".into()))?;
    if step <= Rational::zero() {
        return Err(CliError::Input("--t-grid: step must be positive".into()));
    }
    if (&hi - &lo) / &step > int(MAX_GRID as i64) {
        return Err(CliError::Input(format!("--t-grid: more than {MAX_GRID} grid points")));
    }
    let direction = problem.t.clone().unwrap_or_else(|| vec![int(1); problem.hyperplanes.len()]);
    let cfg = VgitConfig::new(direction.clone(), problem.hyperplanes.clone())?;
    let all = candidate_lambdas(t, Some(&cfg))?;
    let torus_set = torus_candidates(t, Some(&cfg), opts.mode)?;
    let walls = vgit_walls_along(t, &problem.hyperplanes, &direction, &all, opts.mode)?;

    let points = grid(&lo, &hi, &step);
    let chunks: Vec<&[Rational]> = points.chunks(16).collect();
    let scanned = chunks
        .par_iter()
        .map(|c| scan_t(t, &problem.hyperplanes, &direction, c, &all, opts.mode))
        .collect::<Result<Vec<_>, Error>>()?
        .concat();
    let constant = constant_between_walls(&scanned, &walls);
    if !constant {
        return Err(CliError::Invariant("scanned verdict changes between consecutive walls".into()));
    }
    let dir_sum = direction.iter().fold(Rational::zero(), |a, b| a + b);
    Ok(ScanReport {
        command: "vgit-scan".into(),
        request: problem.request.clone(),
        options: opts.echo(),
        direction: rats(&direction),
        candidates: stats(&all, &torus_set),
        regime_limit: rat(&(int(kd(t)) / (int(t.ambient() as i64) * dir_sum))),
        walls: walls.iter().map(WallReport::from).collect(),
        table: scanned
            .iter()
            .map(|p| ScanRow {
                scale: rat(&p.scale),
                t: direction.iter().map(|d| rat(&(d * &p.scale))).collect(),
                verdict: p.kind.to_string(),
                outside_regime: p.outside_regime,
            })
            .collect(),
        constant_between_walls: constant,
    })
}

pub fn lct(problem: &Problem) -> Result<LctReport, CliError> {
    let t = &problem.tuple;
    let points = if problem.points.is_empty() { &problem.base_points } else { &problem.points };
    let field = if problem.points.is_empty() { "base_points" } else { "points" };
    if points.is_empty() {
        return Err(CliError::Input("points: lct needs at least one point".into()));
    }
    let forms = t
        .generators()
        .par_iter()
        .enumerate()
        .map(|(g, f)| {
            let mut best = int(1);
            let mut values = Vec::with_capacity(points.len());
            for (i, p) in points.iter().enumerate() {
                let v = lct_at(f, p).map_err(|e| match e {
                    Error::PointNotOnHypersurface => {
                        CliError::Input(format!("{field}[{i}]: not on generator {g} ({e})"))
                    }
                    other => other.into(),
                })?;
                best = best.min(v.value.clone());
                values.push(point_lct(p, v));
            }
            Ok(FormLct { generator: g, form: f.to_string(), global_lct: rat(&best), points: values })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(LctReport {
        command: "lct".into(),
        request: problem.request.clone(),
        thresholds: thresholds(t, problem.t.as_deref())?,
        forms,
    })
}
