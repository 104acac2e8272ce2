//! Newton-polyhedron log canonical thresholds and the lct-based stability
//! criteria.
//!
//! For a germ `g` at the origin of `C^n` with Newton polyhedron `P`, let `c` be
//! the smallest `s` with `s·(1, ..., 1)` in `P`. Then `lct_0(g) <= min(1, 1/c)`
//! with equality when `g` is Newton-nondegenerate; nondegeneracy is assumed,
//! not checked, and flagged on every value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::{
    combinations, point_to_last_transform, HypersurfaceForm, ProjectivePoint, Transformable, TuplePoint,
};
use crate::lattice::{lambda_factor, NormalizedOps};
use crate::linalg::int_kernel_ray;
use crate::opssearch::{candidate_lambdas, TupleVerdict};
use crate::weights::{omega_hypersurface, omega_tuple, Mode};
use crate::Rational;

fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// A polynomial in `n` affine variables vanishing at the origin.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalGerm {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl LocalGerm {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: e.len() });
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(Error::EmptyForm);
        }
        if map.keys().any(|e| e.iter().all(|&x| x == 0)) {
            return Err(Error::GermNotVanishing);
        }
        Ok(Self { n, terms: map })
    }

    pub fn from_int_terms(n: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        Self::new(n, terms.iter().map(|(c, e)| (e.to_vec(), int(*c))))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().cloned().collect()
    }
}

impl fmt::Debug for LocalGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}*u^{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Moves `p` to `(0:...:0:1)` and sets the last variable to 1.
pub fn localize(f: &HypersurfaceForm, p: &ProjectivePoint) -> Result<LocalGerm> {
    if p.ambient() != f.ambient() {
        return Err(Error::DimensionMismatch { expected: f.ambient() + 1, got: p.ambient() + 1 });
    }
    if !f.evaluate(p.coords())?.is_zero() {
        return Err(Error::PointNotOnHypersurface);
    }
    let moved = f.transform(&point_to_last_transform(p))?;
    let n = f.ambient();
    LocalGerm::new(n, moved.terms().iter().map(|(e, c)| (e.exponents()[..n].to_vec(), c.clone())))
}

/// A supporting inequality `<w, x> >= b` with `w` a nonnegative primitive integer vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

/// `conv(Supp g + R_{>=0}^n)` as generating exponents and facet inequalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    pub points: Vec<Vec<u32>>,
    pub facets: Vec<Facet>,
}

impl NewtonPolyhedron {
    /// Enumerates supporting hyperplanes spanned by a generating point and
    /// `n - 1` directions among the other points and coordinate vectors, and
    /// keeps those valid for every point with a nonnegative normal.
    pub fn new(g: &LocalGerm) -> Result<Self> {
        let n = g.ambient();
        let points = minimal_points(g.support());
        let mut facets = BTreeSet::new();
        for p0 in &points {
            let mut dirs: Vec<Vec<i64>> = points
                .iter()
                .filter(|q| *q != p0)
                .map(|q| q.iter().zip(p0).map(|(&a, &b)| a as i64 - b as i64).collect())
                .collect();
            dirs.extend((0..n).map(|j| (0..n).map(|i| i64::from(i == j)).collect()));
            for combo in combinations(dirs.len(), n - 1) {
                let rows: Vec<Vec<i64>> = combo.iter().map(|&i| dirs[i].clone()).collect();
                let w = if n == 1 {
                    vec![1]
                } else {
                    match int_kernel_ray(&rows).ok_or(Error::Overflow("newton facet normal"))? {
                        Some(w) => w,
                        None => continue,
                    }
                };
                let w = if w.iter().all(|&x| x >= 0) {
                    w
                } else if w.iter().all(|&x| x <= 0) {
                    w.iter().map(|x| -x).collect()
                } else {
                    continue;
                };
                let dot = |q: &[u32]| q.iter().zip(&w).map(|(&a, &b)| a as i64 * b).sum::<i64>();
                let b = dot(p0);
                if points.iter().all(|q| dot(q) >= b) {
                    facets.insert(Facet { normal: w, offset: b });
                }
            }
        }
        Ok(Self { points, facets: facets.into_iter().collect() })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| {
            let lhs = f.normal.iter().zip(x).fold(Rational::zero(), |acc, (&w, v)| acc + int(w) * v);
            lhs >= int(f.offset)
        })
    }

    /// `min { s : s·(1,...,1) in P }` and a facet attaining it.
    pub fn diagonal_crossing(&self) -> (Rational, &Facet) {
        self.facets
            .iter()
            .map(|f| (Rational::new(f.offset.into(), f.normal.iter().sum::<i64>().into()), f))
            .fold(None::<(Rational, &Facet)>, |best, (c, f)| match best {
                Some((b, bf)) if b >= c => Some((b, bf)),
                _ => Some((c, f)),
            })
            .expect("a vanishing germ has a facet with positive offset")
    }
}

/// Exponents not dominated coordinatewise by another exponent.
fn minimal_points(mut pts: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    pts.sort();
    pts.dedup();
    let dominated = |p: &Vec<u32>| pts.iter().any(|q| q != p && q.iter().zip(p).all(|(a, b)| a <= b));
    pts.iter().filter(|p| !dominated(p)).cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LctValue {
    /// In `(0, 1]`.
    pub value: Rational,
    /// Exact only for Newton-nondegenerate germs; an upper bound otherwise.
    pub nondegenerate_assumed: bool,
    /// The diagonal crossing `c`.
    pub crossing: Rational,
    /// Normal of a facet attaining `c`.
    pub binding_weights: Vec<i64>,
}

pub fn lct_newton(g: &LocalGerm) -> Result<LctValue> {
    let poly = NewtonPolyhedron::new(g)?;
    let (c, facet) = poly.diagonal_crossing();
    let value = if c <= Rational::one() { Rational::one() } else { c.recip() };
    Ok(LctValue { value, nondegenerate_assumed: true, crossing: c, binding_weights: facet.normal.clone() })
}

/// Local lct of `f` at `p`.
pub fn lct_at(f: &HypersurfaceForm, p: &ProjectivePoint) -> Result<LctValue> {
    lct_newton(&localize(f, p)?)
}

/// Minimum of the local values over the supplied points and 1 (the value on the smooth locus).
pub fn global_lct(f: &HypersurfaceForm, points: &[ProjectivePoint]) -> Result<Rational> {
    let mut best = Rational::one();
    for p in points {
        best = best.min(lct_at(f, p)?.value);
    }
    Ok(best)
}

/// `a(E) = sum w_i - 1 - c·mult_w(g)` for the weighted blow-up with weights `w`.
/// The pair is not log canonical along `E` when this is below `-1`.
pub fn weighted_blowup_discrepancy(g: &LocalGerm, w: &[i64], c: &Rational) -> Result<Rational> {
    if w.len() != g.ambient() {
        return Err(Error::DimensionMismatch { expected: g.ambient(), got: w.len() });
    }
    if w.iter().any(|&x| x < 0) || w.iter().all(|&x| x == 0) {
        return Err(Error::InvalidBlowupWeights);
    }
    let mult =
        g.terms.keys().map(|e| e.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum::<i64>()).min().expect("nonempty germ");
    Ok(int(w.iter().sum::<i64>() - 1) - c * int(mult))
}

/// `Λ(λ) / ω(T, λ)` after moving the base point `p` to `(0:...:0:1)`, with the
/// exact tuple weight.
pub fn tuple_lct_bound(t: &TuplePoint, p: &ProjectivePoint, lambda: &NormalizedOps) -> Result<Rational> {
    if t.k() < 2 {
        return Err(Error::NeedsPencilOrLarger);
    }
    if p.ambient() != t.ambient() {
        return Err(Error::DimensionMismatch { expected: t.ambient() + 1, got: p.ambient() + 1 });
    }
    if !t.is_base_point(p)? {
        return Err(Error::NotABasePoint);
    }
    let moved = t.transform(&point_to_last_transform(p))?;
    let omega = omega_tuple(&moved, lambda, Mode::Exact)?;
    if omega == 0 {
        return Err(Error::ZeroOmega);
    }
    Ok(Rational::new(lambda_factor(lambda).into(), omega.into()))
}

/// The smallest [`tuple_lct_bound`] over candidate rays of the moved tuple
/// with positive exact weight, first in candidate order on ties. `None` when
/// no ray has `ω > 0`.
pub fn best_tuple_lct_bound(t: &TuplePoint, p: &ProjectivePoint) -> Result<Option<(NormalizedOps, Rational)>> {
    if t.k() < 2 {
        return Err(Error::NeedsPencilOrLarger);
    }
    if p.ambient() != t.ambient() {
        return Err(Error::DimensionMismatch { expected: t.ambient() + 1, got: p.ambient() + 1 });
    }
    if !t.is_base_point(p)? {
        return Err(Error::NotABasePoint);
    }
    let moved = t.transform(&point_to_last_transform(p))?;
    let mut best: Option<(NormalizedOps, Rational)> = None;
    for lambda in candidate_lambdas(&moved, None)?.lambdas() {
        let omega = omega_tuple(&moved, lambda, Mode::Exact)?;
        if omega <= 0 {
            continue;
        }
        let bound = Rational::new(lambda_factor(lambda).into(), omega.into());
        if best.as_ref().is_none_or(|(_, b)| bound < *b) {
            best = Some((lambda.clone(), bound));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClaim {
    Stable,
    Semistable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessaryConditionReport {
    pub claim: StabilityClaim,
    /// `(n + 1) / (kd)`.
    pub threshold: Rational,
    /// Indices of supplied lct values violating the condition.
    pub violations: Vec<usize>,
}

impl NecessaryConditionReport {
    /// A violation refutes the claim.
    pub fn refutes_claim(&self) -> bool {
        !self.violations.is_empty()
    }
}

/// A stable tuple has `lct_p(F) > (n+1)/(kd)` for every member `F` and base
/// point `p`; a semistable one has `lct_p(F) >= (n+1)/(kd)`.
pub fn necessary_condition_check(
    n: usize,
    d: u32,
    k: usize,
    claim: StabilityClaim,
    member_lcts: &[Rational],
) -> Result<NecessaryConditionReport> {
    if k < 2 {
        return Err(Error::NeedsPencilOrLarger);
    }
    let threshold = Rational::new((n as i64 + 1).into(), (k as i64 * d as i64).into());
    let violations = member_lcts
        .iter()
        .enumerate()
        .filter(|(_, l)| match claim {
            StabilityClaim::Stable => **l <= threshold,
            StabilityClaim::Semistable => **l < threshold,
        })
        .map(|(i, _)| i)
        .collect();
    Ok(NecessaryConditionReport { claim, threshold, violations })
}

/// `lct >= (n+1)/d` for every member gives semistable, `>` gives stable.
pub fn sufficient_semistable_via_lct(n: usize, d: u32, certified_min_lct: &Rational) -> Option<TupleVerdict> {
    let threshold = Rational::new((n as i64 + 1).into(), (d as i64).into());
    match certified_min_lct.cmp(&threshold) {
        std::cmp::Ordering::Greater => Some(TupleVerdict::Stable),
        std::cmp::Ordering::Equal => Some(TupleVerdict::Semistable),
        std::cmp::Ordering::Less => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VgitSufficiency {
    /// `k(n+1) / (kd - n sum t)`.
    pub threshold: Rational,
    /// The threshold exceeds 1, which no reduced member can reach.
    pub vacuous: bool,
    pub verdict: Option<TupleVerdict>,
}

pub fn sufficient_vgit_via_lct(
    n: usize,
    d: u32,
    k: usize,
    t: &[Rational],
    certified_min_lct: &Rational,
) -> Result<VgitSufficiency> {
    let sum_t = t.iter().fold(Rational::zero(), |a, b| a + b);
    if t.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidConfig("t must be positive".into()));
    }
    let kd = int(k as i64 * d as i64);
    let denom = &kd - int(n as i64) * &sum_t;
    if !denom.is_positive() {
        return Err(Error::OutsideRegime { sum_t: Box::new(sum_t), limit: Box::new(kd / int(n as i64)) });
    }
    let threshold = int(k as i64 * (n as i64 + 1)) / denom;
    let verdict = match certified_min_lct.cmp(&threshold) {
        std::cmp::Ordering::Greater => Some(TupleVerdict::Stable),
        std::cmp::Ordering::Equal => Some(TupleVerdict::Semistable),
        std::cmp::Ordering::Less => None,
    };
    Ok(VgitSufficiency { vacuous: threshold > Rational::one(), threshold, verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KollarReport {
    /// `ω / Λ`.
    pub ratio: Rational,
    /// `1 / lct` for a form, `k / lct` for a tuple.
    pub bound: Rational,
}

impl KollarReport {
    pub fn holds(&self) -> bool {
        self.ratio <= self.bound
    }
}

/// `ω(f, λ)/Λ(λ) <= 1/lct(F)`.
pub fn kollar_bound_check(f: &HypersurfaceForm, lambda: &NormalizedOps, lct: &Rational) -> Result<KollarReport> {
    if !lct.is_positive() {
        return Err(Error::InvalidConfig(format!("lct must be positive, got {lct}")));
    }
    let ratio = Rational::new(omega_hypersurface(f, lambda)?.into(), lambda_factor(lambda).into());
    Ok(KollarReport { ratio, bound: lct.recip() })
}

/// `ω(T, λ)/Λ(λ) <= k/lct` where `lct` is the smallest global lct among members.
pub fn kollar_tuple_check(
    t: &TuplePoint,
    lambda: &NormalizedOps,
    worst_member_lct: &Rational,
    mode: Mode,
) -> Result<KollarReport> {
    if !worst_member_lct.is_positive() {
        return Err(Error::InvalidConfig(format!("lct must be positive, got {worst_member_lct}")));
    }
    let ratio = Rational::new(omega_tuple(t, lambda, mode)?.into(), lambda_factor(lambda).into());
    Ok(KollarReport { ratio, bound: int(t.k() as i64) / worst_member_lct })
}
