use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::candidates::{candidate_lambdas_with, CandidateSet, Refinement};
use crate::error::{Error, Result};
use crate::forms::point_to_last_transform;
use crate::forms::{ProjectivePoint, ProjectiveTransform, Transformable, TuplePoint};
use crate::lattice::{NormalizedOps, Permutation};
use crate::weights::{
    git_threshold, hyperplane_term, vgit_threshold, Classification, LambdaVerdict, Mode, TupleWeigher, VgitConfig,
};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorusKind {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for TorusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Stable => "torus-stable",
            Self::StrictlySemistable => "torus-strictly-semistable",
            Self::Unstable => "torus-unstable",
        })
    }
}

/// Stability with respect to the diagonal torus of the current coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusVerdict {
    pub kind: TorusKind,
    pub mode: Mode,
    /// Unstable: the ray with the largest `(ω - threshold) / Λ` (first in
    /// candidate order on ties). Strictly semistable: every equality ray.
    /// Stable: empty.
    pub witnesses: Vec<LambdaVerdict>,
    pub rays_checked: usize,
}

/// Evaluates `ω` (plus hyperplane terms) against the threshold on one set of rays.
pub struct TorusEvaluator<'a> {
    t: &'a TuplePoint,
    cfg: Option<&'a VgitConfig>,
    weigher: TupleWeigher,
}

impl<'a> TorusEvaluator<'a> {
    pub fn new(t: &'a TuplePoint, cfg: Option<&'a VgitConfig>, mode: Mode) -> Result<Self> {
        Ok(Self { t, cfg, weigher: TupleWeigher::new(t, mode)? })
    }

    pub fn verdict(&self, lambda: &NormalizedOps) -> Result<LambdaVerdict> {
        let omega = Rational::from_integer(self.weigher.omega(lambda)?.into());
        let (k, d) = (self.t.k(), self.t.degree());
        Ok(match self.cfg {
            None => LambdaVerdict::new(lambda.clone(), omega, git_threshold(k, d, lambda)),
            Some(cfg) => LambdaVerdict::new(
                lambda.clone(),
                omega + hyperplane_term(cfg, lambda)?,
                vgit_threshold(k, d, cfg, lambda),
            ),
        })
    }

    pub fn torus_verdict(&self, candidates: &CandidateSet) -> Result<TorusVerdict> {
        let verdicts: Vec<LambdaVerdict> =
            candidates.rays.par_iter().map(|r| self.verdict(&r.lambda)).collect::<Result<Vec<_>>>()?;
        Ok(aggregate(verdicts, self.weigher.mode()))
    }
}

fn aggregate(verdicts: Vec<LambdaVerdict>, mode: Mode) -> TorusVerdict {
    let rays_checked = verdicts.len();
    let mut worst: Option<(Rational, &LambdaVerdict)> = None;
    for v in verdicts.iter().filter(|v| v.classification == Classification::DestabilizedBy) {
        let m = v.normalized_margin();
        if worst.as_ref().is_none_or(|(w, _)| m > *w) {
            worst = Some((m, v));
        }
    }
    if let Some((_, v)) = worst {
        return TorusVerdict { kind: TorusKind::Unstable, mode, witnesses: vec![v.clone()], rays_checked };
    }
    let equal: Vec<LambdaVerdict> =
        verdicts.into_iter().filter(|v| v.classification == Classification::EqualityAt).collect();
    let kind = if equal.is_empty() { TorusKind::Stable } else { TorusKind::StrictlySemistable };
    TorusVerdict { kind, mode, witnesses: equal, rays_checked }
}

/// The candidate set used for torus verdicts: pieces of the requested mode,
/// refined along the lower envelope only.
pub fn torus_candidates(t: &TuplePoint, cfg: Option<&VgitConfig>, mode: Mode) -> Result<CandidateSet> {
    candidate_lambdas_with(t, cfg, mode, Refinement::LowerEnvelope)
}

pub fn torus_verdict(t: &TuplePoint, cfg: Option<&VgitConfig>, mode: Mode) -> Result<TorusVerdict> {
    let candidates = torus_candidates(t, cfg, mode)?;
    TorusEvaluator::new(t, cfg, mode)?.torus_verdict(&candidates)
}

/// How the coordinates of a certificate were obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Permutation(Permutation),
    /// Index into the caller's list of transforms.
    Explicit(usize),
    BasePoint(ProjectivePoint),
    Random {
        seed: u64,
        index: usize,
    },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Permutation(p) => write!(f, "permutation {:?}", p.images()),
            Self::Explicit(i) => write!(f, "transform #{i}"),
            Self::BasePoint(p) => write!(f, "base point {p:?}"),
            Self::Random { seed, index } => write!(f, "random transform #{index} (seed {seed})"),
        }
    }
}

/// A destabilizing ray after a change of coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub lambda: NormalizedOps,
    pub transform: ProjectiveTransform,
    pub omega: Rational,
    pub threshold: Rational,
    pub classification: Classification,
    pub mode: Mode,
    pub strategy: Strategy,
}

impl Certificate {
    /// Recomputes the verdict at `λ` on `transform·T`.
    pub fn verify(&self, t: &TuplePoint, cfg: Option<&VgitConfig>) -> Result<bool> {
        let moved = t.transform(&self.transform)?;
        let cfg_moved = cfg.map(|c| transform_cfg(c, &self.transform)).transpose()?;
        let v = TorusEvaluator::new(&moved, cfg_moved.as_ref(), self.mode)?.verdict(&self.lambda)?;
        Ok(v.omega == self.omega && v.threshold == self.threshold && v.classification == self.classification)
    }
}

fn transform_cfg(cfg: &VgitConfig, a: &ProjectiveTransform) -> Result<VgitConfig> {
    let hs = cfg.hyperplanes().iter().map(|h| h.transform(a)).collect::<Result<Vec<_>>>()?;
    VgitConfig::new(cfg.t().to_vec(), hs)
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub mode: Mode,
    pub permutations: bool,
    pub transforms: Vec<ProjectiveTransform>,
    pub base_points: Vec<ProjectivePoint>,
    pub random_transforms: usize,
    pub seed: u64,
    /// Caller asserts every member of the tuple is smooth.
    pub smooth_members: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<Certificate>),
    /// No destabilizer among the searched frames; not a proof of semistability.
    NotFound {
        searched: usize,
    },
    /// Skipped because every member is smooth; use [`tuple_verdict_from_members`].
    Skipped,
}

/// `count` invertible matrices with entries in `-3..=3`, resampled when singular.
pub fn seeded_transforms(n: usize, count: usize, seed: u64) -> Vec<ProjectiveTransform> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m: Vec<Vec<Rational>> = (0..=n)
            .map(|_| (0..=n).map(|_| Rational::from_integer(rng.gen_range(-3i64..=3).into())).collect())
            .collect();
        if let Ok(a) = ProjectiveTransform::new(m) {
            out.push(a);
        }
    }
    out
}

/// Tries permutations (lexicographic, identity first), explicit transforms,
/// base-point moves and seeded random transforms, in that order, returning the
/// first frame in which the tuple is torus-unstable.
pub fn destabilizer_search(t: &TuplePoint, cfg: Option<&VgitConfig>, opts: &SearchOptions) -> Result<SearchOutcome> {
    if opts.smooth_members {
        return Ok(SearchOutcome::Skipped);
    }
    let n = t.ambient();
    let mut frames: Vec<(Strategy, ProjectiveTransform)> = Vec::new();
    if opts.permutations {
        for p in Permutation::all(n + 1) {
            let a = ProjectiveTransform::permutation(&p);
            frames.push((Strategy::Permutation(p), a));
        }
    } else {
        frames.push((Strategy::Permutation(Permutation::identity(n + 1)), ProjectiveTransform::identity(n)));
    }
    for (i, a) in opts.transforms.iter().enumerate() {
        frames.push((Strategy::Explicit(i), a.clone()));
    }
    for p in &opts.base_points {
        if p.ambient() != n {
            return Err(Error::DimensionMismatch { expected: n + 1, got: p.ambient() + 1 });
        }
        if !t.is_base_point(p)? {
            return Err(Error::NotABasePoint);
        }
        frames.push((Strategy::BasePoint(p.clone()), point_to_last_transform(p)));
    }
    for (index, a) in seeded_transforms(n, opts.random_transforms, opts.seed).into_iter().enumerate() {
        frames.push((Strategy::Random { seed: opts.seed, index }, a));
    }

    let searched = frames.len();
    for (strategy, a) in frames {
        let moved = t.transform(&a)?;
        let cfg_moved = cfg.map(|c| transform_cfg(c, &a)).transpose()?;
        let v = torus_verdict(&moved, cfg_moved.as_ref(), opts.mode)?;
        if v.kind == TorusKind::Unstable {
            let w = &v.witnesses[0];
            return Ok(SearchOutcome::Found(Box::new(Certificate {
                lambda: w.lambda.clone(),
                transform: a,
                omega: w.omega.clone(),
                threshold: w.threshold.clone(),
                classification: w.classification,
                mode: opts.mode,
                strategy,
            })));
        }
    }
    Ok(SearchOutcome::NotFound { searched })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MemberVerdict {
    Stable,
    StrictlySemistable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TupleVerdict {
    Stable,
    Semistable,
}

impl fmt::Display for TupleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Stable => "stable",
            Self::Semistable => "semistable",
        })
    }
}

/// Combines verdicts covering every member of the linear system.
///
/// All stable, or exactly one strictly semistable among at least two listed
/// members, gives [`TupleVerdict::Stable`]; any other list of semistable
/// members gives [`TupleVerdict::Semistable`].
pub fn tuple_verdict_from_members(members: &[MemberVerdict]) -> Result<TupleVerdict> {
    if members.is_empty() {
        return Err(Error::EmptyVerdictList);
    }
    let strict = members.iter().filter(|&&m| m == MemberVerdict::StrictlySemistable).count();
    Ok(match strict {
        0 => TupleVerdict::Stable,
        1 if members.len() > 1 => TupleVerdict::Stable,
        _ => TupleVerdict::Semistable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::tests::{form, q, tuple};
    use crate::forms::HyperplaneForm;

    fn single(terms: &[(i64, &[u32])]) -> TuplePoint {
        TuplePoint::single(form(terms))
    }

    #[test]
    fn plane_cubic_torus_verdicts() {
        let fermat = single(&[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3])]);
        let triangle = single(&[(1, &[1, 1, 1])]);
        let pencil = tuple(&[&[(1, &[3, 0, 0]), (1, &[2, 1, 0])], &[(1, &[3, 0, 0]), (-1, &[2, 1, 0])]]);
        for mode in [Mode::Exact, Mode::Combinatorial] {
            assert_eq!(torus_verdict(&fermat, None, mode).unwrap().kind, TorusKind::Stable);
            let v = torus_verdict(&triangle, None, mode).unwrap();
            assert_eq!(v.kind, TorusKind::StrictlySemistable);
            assert_eq!(v.witnesses.len(), v.rays_checked);
            let v = torus_verdict(&pencil, None, mode).unwrap();
            assert_eq!(v.kind, TorusKind::Unstable);
            assert_eq!(v.witnesses[0].omega, q(15));
            assert_eq!(v.witnesses[0].lambda.weights(), &[2, -1, -1]);
        }
    }

    #[test]
    fn cusp_certificate_under_permutation() {
        let cusp = single(&[(1, &[0, 2, 1]), (-1, &[3, 0, 0])]);
        let opts = SearchOptions { permutations: true, ..Default::default() };
        let SearchOutcome::Found(c) = destabilizer_search(&cusp, None, &opts).unwrap() else {
            panic!("cusp must be destabilized");
        };
        assert_eq!(c.strategy, Strategy::Permutation(Permutation::new(vec![1, 0, 2]).unwrap()));
        assert_eq!(c.lambda.weights(), &[4, 1, -5]);
        assert_eq!((c.omega.clone(), c.threshold.clone()), (q(18), q(15)));
        assert!(c.verify(&cusp, None).unwrap());
    }

    #[test]
    fn smooth_flag_skips_search() {
        let t = single(&[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3])]);
        let opts = SearchOptions { smooth_members: true, ..Default::default() };
        assert_eq!(destabilizer_search(&t, None, &opts).unwrap(), SearchOutcome::Skipped);
    }

    #[test]
    fn base_points_are_checked() {
        let t = single(&[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3])]);
        let opts = SearchOptions { base_points: vec![ProjectivePoint::coordinate(2, 2)], ..Default::default() };
        assert_eq!(destabilizer_search(&t, None, &opts), Err(Error::NotABasePoint));
    }

    #[test]
    fn seeded_transforms_are_reproducible() {
        let a = seeded_transforms(2, 5, 7);
        assert_eq!(a, seeded_transforms(2, 5, 7));
        assert_ne!(a, seeded_transforms(2, 5, 8));
    }

    #[test]
    fn member_combinator() {
        use MemberVerdict::*;
        assert_eq!(tuple_verdict_from_members(&[Stable, Stable]).unwrap(), TupleVerdict::Stable);
        assert_eq!(tuple_verdict_from_members(&[StrictlySemistable, Stable, Stable]).unwrap(), TupleVerdict::Stable);
        assert_eq!(
            tuple_verdict_from_members(&[StrictlySemistable, StrictlySemistable]).unwrap(),
            TupleVerdict::Semistable
        );
        assert_eq!(tuple_verdict_from_members(&[StrictlySemistable]).unwrap(), TupleVerdict::Semistable);
        assert_eq!(tuple_verdict_from_members(&[]), Err(Error::EmptyVerdictList));
    }

    #[test]
    fn vgit_torus_verdict_follows_t() {
        let t = single(&[(1, &[2, 1, 0])]);
        let h = HyperplaneForm::coordinate(2, 2);
        let at = |x: Rational| {
            let cfg = VgitConfig::new(vec![x], vec![h.clone()]).unwrap();
            torus_verdict(&t, Some(&cfg), Mode::Exact).unwrap().kind
        };
        assert_eq!(at(q(1)), TorusKind::Unstable);
        assert_eq!(at(q(3)), TorusKind::StrictlySemistable);
        assert_eq!(at(q(4)), TorusKind::Stable);
    }
}
