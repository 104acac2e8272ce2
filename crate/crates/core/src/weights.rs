//! Hilbert–Mumford values and affine weights of forms and tuples, per-λ
//! verdicts, and the ω-decomposition of a tuple through its members.
//!
//! Two notions of the tuple weight are provided:
//!
//! * [`Mode::Combinatorial`] minimizes over tuples `(I_1, ..., I_k)` of
//!   pairwise distinct monomials with `I_i` in `Supp(f_i)`. It depends on the
//!   chosen generators and is solved as a min-cost assignment.
//! * [`Mode::Exact`] minimizes over `k`-subsets with a nonzero Plücker
//!   coordinate, which depends only on the linear system.
//!
//! The combinatorial weight never exceeds the exact one, so a
//! [`Classification::DestabilizedBy`] in combinatorial mode also holds in exact
//! mode, while [`Classification::CompatibleWithStable`] is only conclusive in
//! exact mode.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::assignment::min_cost_assignment;
use crate::error::{DecompositionFailure, Error, Result};
use crate::forms::{plucker_support, HyperplaneForm, HypersurfaceForm, TuplePoint};
use crate::lattice::{
    affine_weight_monomial, lambda_factor, pairing, pairing_raw, ExponentVector, NormalizedOps, Permutation,
};
use crate::linalg;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Mode {
    #[default]
    Exact,
    Combinatorial,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Combinatorial => "combinatorial",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "combinatorial" => Ok(Mode::Combinatorial),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

fn check_lambda(n: usize, lambda: &NormalizedOps) -> Result<()> {
    if lambda.ambient() != n {
        return Err(Error::DimensionMismatch { expected: n + 1, got: lambda.ambient() + 1 });
    }
    Ok(())
}

/// `mu(f, λ) = -min_{I in Supp f} <I, λ>`.
pub fn mu_hypersurface(f: &HypersurfaceForm, lambda: &NormalizedOps) -> Result<i64> {
    check_lambda(f.ambient(), lambda)?;
    let mut best = i64::MAX;
    for e in f.terms().keys() {
        best = best.min(pairing(e, lambda)?);
    }
    Ok(-best)
}

/// `ω(f, λ) = min_{I in Supp f} sum_{j<n} d_j (a_j - a_n)`.
pub fn omega_hypersurface(f: &HypersurfaceForm, lambda: &NormalizedOps) -> Result<i64> {
    check_lambda(f.ambient(), lambda)?;
    let mut best = i64::MAX;
    for e in f.terms().keys() {
        best = best.min(affine_weight_monomial(e, lambda)?);
    }
    Ok(best)
}

/// Affine weight of a hyperplane: `a_j - a_n` for the largest `j` in its support.
pub fn omega_hyperplane(h: &HyperplaneForm, lambda: &NormalizedOps) -> Result<i64> {
    omega_hypersurface(&h.as_form(), lambda)
}

/// Sum of exponent vectors of a monomial collection.
pub(crate) fn exponent_sum(monomials: &[ExponentVector], len: usize) -> Vec<i64> {
    let mut s = vec![0i64; len];
    for m in monomials {
        for (acc, &e) in s.iter_mut().zip(m.exponents()) {
            *acc += e as i64;
        }
    }
    s
}

/// Precomputed data for evaluating the tuple weight at many λ.
#[derive(Debug, Clone)]
pub struct TupleWeigher {
    mode: Mode,
    n: usize,
    kd: i64,
    /// Exact mode: exponent sums of the Plücker-support subsets.
    subset_sums: Vec<Vec<i64>>,
    /// Combinatorial mode: generator supports and their union.
    supports: Vec<BTreeSet<ExponentVector>>,
    columns: Vec<ExponentVector>,
}

impl TupleWeigher {
    pub fn new(t: &TuplePoint, mode: Mode) -> Result<Self> {
        let n = t.ambient();
        let kd = t.k() as i64 * t.degree() as i64;
        let mut w = Self { mode, n, kd, subset_sums: Vec::new(), supports: Vec::new(), columns: Vec::new() };
        match mode {
            Mode::Exact => {
                let ps = plucker_support(t)?;
                let sums: BTreeSet<Vec<i64>> = ps.subsets.iter().map(|s| exponent_sum(&s.monomials, n + 1)).collect();
                w.subset_sums = sums.into_iter().collect();
            }
            Mode::Combinatorial => {
                w.supports = t.generators().iter().map(|g| g.support()).collect();
                w.columns = t.union_support();
            }
        }
        Ok(w)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `ω(T, λ)`.
    pub fn omega(&self, lambda: &NormalizedOps) -> Result<i64> {
        check_lambda(self.n, lambda)?;
        let an = lambda.last();
        match self.mode {
            Mode::Exact => self
                .subset_sums
                .iter()
                .map(|s| dot(s, lambda.weights()) - self.kd * an)
                .min()
                .ok_or(Error::NoFeasibleAssignment),
            Mode::Combinatorial => self.assign(|e| affine_weight_monomial(e, lambda).expect("dimensions checked")),
        }
    }

    /// `-min sum <I_i, a>` for an arbitrary diagonal 1-PS with `sum a = 0`.
    pub fn mu_raw(&self, weights: &[i64]) -> Result<i64> {
        if weights.len() != self.n + 1 {
            return Err(Error::DimensionMismatch { expected: self.n + 1, got: weights.len() });
        }
        let min = match self.mode {
            Mode::Exact => self.subset_sums.iter().map(|s| dot(s, weights)).min().ok_or(Error::NoFeasibleAssignment)?,
            Mode::Combinatorial => self.assign(|e| pairing_raw(e, weights).expect("dimensions checked"))?,
        };
        Ok(-min)
    }

    fn assign(&self, cost: impl Fn(&ExponentVector) -> i64) -> Result<i64> {
        let col_cost: Vec<i64> = self.columns.iter().map(&cost).collect();
        let matrix: Vec<Vec<Option<i64>>> = self
            .supports
            .iter()
            .map(|s| self.columns.iter().zip(&col_cost).map(|(e, &c)| s.contains(e).then_some(c)).collect())
            .collect();
        min_cost_assignment(&matrix).map(|(c, _)| c).ok_or(Error::NoFeasibleAssignment)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `ω(T, λ)` in the given mode.
pub fn omega_tuple(t: &TuplePoint, lambda: &NormalizedOps, mode: Mode) -> Result<i64> {
    TupleWeigher::new(t, mode)?.omega(lambda)
}

/// The λ-order on monomials: affine weight, then lexicographic.
pub fn lambda_order(lambda: &NormalizedOps) -> impl Fn(&ExponentVector, &ExponentVector) -> Ordering + '_ {
    move |a, b| {
        let wa = affine_weight_monomial(a, lambda).expect("dimension");
        let wb = affine_weight_monomial(b, lambda).expect("dimension");
        wa.cmp(&wb).then_with(|| a.cmp(b))
    }
}

/// Reduced echelon basis of the linear system with columns in λ-order.
///
/// Every member's λ-minimal monomial is one of the pivots, and the pivots form
/// a minimum-weight Plücker subset, so their weight sum is the exact `ω(T, λ)`.
#[derive(Debug, Clone)]
pub struct LambdaEchelon {
    /// Pivot monomials in increasing λ-order.
    pub pivots: Vec<ExponentVector>,
    /// Basis member whose λ-minimal monomial is the matching pivot.
    pub rows: Vec<HypersurfaceForm>,
}

impl LambdaEchelon {
    pub fn new(t: &TuplePoint, lambda: &NormalizedOps) -> Result<Self> {
        check_lambda(t.ambient(), lambda)?;
        let mut columns = t.union_support();
        columns.sort_by(lambda_order(lambda));
        let matrix = t.coefficient_matrix(&columns);
        let ech = linalg::rref(&matrix);
        if ech.rank() < t.k() {
            let relation = linalg::left_kernel_vector(&matrix).unwrap_or_default();
            return Err(Error::DependentGenerators { relation });
        }
        let pivots = ech.pivots.iter().map(|&c| columns[c].clone()).collect();
        let rows = ech
            .rows
            .iter()
            .map(|row| HypersurfaceForm::new(t.ambient(), t.degree(), columns.iter().cloned().zip(row.iter().cloned())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pivots, rows })
    }

    pub fn omega(&self, lambda: &NormalizedOps) -> i64 {
        self.pivots.iter().map(|p| affine_weight_monomial(p, lambda).expect("dimension")).sum()
    }

    /// Position of the pivot equal to `e`.
    pub fn pivot_index(&self, e: &ExponentVector) -> Option<usize> {
        self.pivots.iter().position(|p| p == e)
    }
}

/// Exact `ω(T, λ)` via the greedy minimum-weight basis; an independent route
/// to the Plücker enumeration.
pub fn omega_exact_greedy(t: &TuplePoint, lambda: &NormalizedOps) -> Result<i64> {
    Ok(LambdaEchelon::new(t, lambda)?.omega(lambda))
}

/// How `ω` compares with the threshold at one λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    /// `ω > threshold`: unstable.
    DestabilizedBy,
    /// `ω = threshold`: not stable.
    EqualityAt,
    /// `ω < threshold`.
    CompatibleWithStable,
}

impl Classification {
    pub fn from_comparison(omega: &Rational, threshold: &Rational) -> Self {
        match omega.cmp(threshold) {
            Ordering::Greater => Self::DestabilizedBy,
            Ordering::Equal => Self::EqualityAt,
            Ordering::Less => Self::CompatibleWithStable,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DestabilizedBy => "destabilized",
            Self::EqualityAt => "equality",
            Self::CompatibleWithStable => "compatible-with-stable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaVerdict {
    pub lambda: NormalizedOps,
    pub omega: Rational,
    pub threshold: Rational,
    pub classification: Classification,
}

impl LambdaVerdict {
    pub fn new(lambda: NormalizedOps, omega: Rational, threshold: Rational) -> Self {
        let classification = Classification::from_comparison(&omega, &threshold);
        Self { lambda, omega, threshold, classification }
    }

    /// `(ω - threshold) / Λ`, comparable across rays.
    pub fn normalized_margin(&self) -> Rational {
        (&self.omega - &self.threshold) / Rational::from_integer(lambda_factor(&self.lambda).into())
    }
}

/// `(kd / (n + 1)) Λ(λ)`.
pub fn git_threshold(k: usize, d: u32, lambda: &NormalizedOps) -> Rational {
    let n = lambda.ambient();
    Rational::new((k as i64 * d as i64).into(), (n as i64 + 1).into())
        * Rational::from_integer(lambda_factor(lambda).into())
}

pub fn verdict_for_lambda(t: &TuplePoint, lambda: &NormalizedOps, mode: Mode) -> Result<LambdaVerdict> {
    let omega = omega_tuple(t, lambda, mode)?;
    Ok(LambdaVerdict::new(
        lambda.clone(),
        Rational::from_integer(omega.into()),
        git_threshold(t.k(), t.degree(), lambda),
    ))
}

pub fn verdict_for_lambda_hypersurface(f: &HypersurfaceForm, lambda: &NormalizedOps) -> Result<LambdaVerdict> {
    let omega = omega_hypersurface(f, lambda)?;
    Ok(LambdaVerdict::new(lambda.clone(), Rational::from_integer(omega.into()), git_threshold(1, f.degree(), lambda)))
}

/// Hyperplanes with positive rational parameters `t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VgitConfig {
    t: Vec<Rational>,
    hyperplanes: Vec<HyperplaneForm>,
}

impl VgitConfig {
    pub fn new(t: Vec<Rational>, hyperplanes: Vec<HyperplaneForm>) -> Result<Self> {
        Self::validate_hyperplanes(&hyperplanes)?;
        if t.len() != hyperplanes.len() {
            return Err(Error::InvalidConfig(format!("{} t values for {} hyperplanes", t.len(), hyperplanes.len())));
        }
        if let Some(bad) = t.iter().find(|x| !x.is_positive()) {
            return Err(Error::InvalidConfig(format!("t must be positive, got {bad}")));
        }
        Ok(Self { t, hyperplanes })
    }

    /// Checks `m >= 1`, a common ambient space and pairwise distinctness.
    pub fn validate_hyperplanes(hyperplanes: &[HyperplaneForm]) -> Result<()> {
        let first =
            hyperplanes.first().ok_or_else(|| Error::InvalidConfig("at least one hyperplane is required".into()))?;
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.ambient() != first.ambient() {
                return Err(Error::DimensionMismatch { expected: first.ambient() + 1, got: h.ambient() + 1 });
            }
            if hyperplanes[..i].iter().any(|g| g.is_proportional(h)) {
                return Err(Error::InvalidConfig(format!("hyperplane {i} repeats an earlier one")));
            }
        }
        Ok(())
    }

    pub fn t(&self) -> &[Rational] {
        &self.t
    }

    pub fn hyperplanes(&self) -> &[HyperplaneForm] {
        &self.hyperplanes
    }

    pub fn t_sum(&self) -> Rational {
        self.t.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn with_t(&self, t: Vec<Rational>) -> Result<Self> {
        Self::new(t, self.hyperplanes.clone())
    }
}

/// `((kd + sum t) / (n + 1)) Λ(λ)`.
pub fn vgit_threshold(k: usize, d: u32, cfg: &VgitConfig, lambda: &NormalizedOps) -> Rational {
    let n = lambda.ambient();
    let kd = Rational::from_integer((k as i64 * d as i64).into());
    (kd + cfg.t_sum()) / Rational::from_integer((n as i64 + 1).into())
        * Rational::from_integer(lambda_factor(lambda).into())
}

/// `sum t_i ω(H_i, λ)`.
pub fn hyperplane_term(cfg: &VgitConfig, lambda: &NormalizedOps) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (t, h) in cfg.t.iter().zip(&cfg.hyperplanes) {
        acc += t * Rational::from_integer(omega_hyperplane(h, lambda)?.into());
    }
    Ok(acc)
}

/// `ω(T, λ) + sum t_i ω(H_i, λ)`.
pub fn omega_vgit(t: &TuplePoint, cfg: &VgitConfig, lambda: &NormalizedOps, mode: Mode) -> Result<Rational> {
    let base = Rational::from_integer(omega_tuple(t, lambda, mode)?.into());
    Ok(base + hyperplane_term(cfg, lambda)?)
}

pub fn verdict_vgit_for_lambda(
    t: &TuplePoint,
    cfg: &VgitConfig,
    lambda: &NormalizedOps,
    mode: Mode,
) -> Result<LambdaVerdict> {
    check_lambda(cfg.hyperplanes[0].ambient(), lambda)?;
    Ok(LambdaVerdict::new(
        lambda.clone(),
        omega_vgit(t, cfg, lambda, mode)?,
        vgit_threshold(t.k(), t.degree(), cfg, lambda),
    ))
}

/// Members `g_1, ..., g_{k-1}` with `ω(T) = ω(f) + sum ω(g_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub lambda: NormalizedOps,
    pub mode: Mode,
    pub f_omega: i64,
    pub members: Vec<HypersurfaceForm>,
    pub member_omegas: Vec<i64>,
    pub tuple_omega: i64,
}

impl Decomposition {
    pub fn decomposed_sum(&self) -> i64 {
        self.f_omega + self.member_omegas.iter().sum::<i64>()
    }

    /// `max` over `f` and the `g_i`.
    pub fn max_omega(&self) -> i64 {
        self.member_omegas.iter().copied().fold(self.f_omega, i64::max)
    }
}

/// Builds `g_1, ..., g_{k-1}` by recursive minimal-monomial selection.
///
/// The basis is rearranged to start with `f`, followed by original generators
/// that keep it independent. Step `i` targets the λ-minimal monomial of
/// `Supp(B_{i+1})` outside the supports of `B_1..B_i` and takes the member
/// whose λ-minimal monomial is that target. Every ordering of the original
/// generators is tried; if none succeeds the first failure is reported. The
/// result is checked against `ω(T, λ)` in the requested mode.
pub fn decompose_omegas(
    t: &TuplePoint,
    f: &HypersurfaceForm,
    lambda: &NormalizedOps,
    mode: Mode,
) -> Result<Decomposition> {
    check_lambda(t.ambient(), lambda)?;
    if t.member_coordinates(f).is_none() {
        return Err(Error::MemberNotInSystem);
    }
    let tuple_omega = omega_tuple(t, lambda, mode)?;
    let f_omega = omega_hypersurface(f, lambda)?;
    let echelon = LambdaEchelon::new(t, lambda)?;
    let order = lambda_order(lambda);

    let mut first_failure = None;
    let mut tried: BTreeSet<Vec<usize>> = BTreeSet::new();
    for perm in Permutation::all(t.k()) {
        let basis = rearranged_basis(t, f, perm.images());
        if !tried.insert(basis.clone()) {
            continue;
        }
        let forms: Vec<&HypersurfaceForm> =
            std::iter::once(f).chain(basis.iter().map(|&i| &t.generators()[i])).collect();
        match select_members(&forms, &echelon, &order) {
            Ok(members) => {
                let member_omegas =
                    members.iter().map(|g| omega_hypersurface(g, lambda)).collect::<Result<Vec<_>>>()?;
                let d = Decomposition { lambda: lambda.clone(), mode, f_omega, members, member_omegas, tuple_omega };
                if d.decomposed_sum() == tuple_omega {
                    return Ok(d);
                }
                first_failure.get_or_insert(DecompositionFailure::WeightMismatch {
                    tuple_omega,
                    decomposed: d.decomposed_sum(),
                });
            }
            Err(e) => {
                first_failure.get_or_insert(e);
            }
        }
    }
    Err(Error::DecompositionFailed(first_failure.expect("at least one ordering")))
}

/// Indices of original generators completing `f` to a basis, in the given order.
fn rearranged_basis(t: &TuplePoint, f: &HypersurfaceForm, order: &[usize]) -> Vec<usize> {
    let columns = t.union_support();
    let row = |g: &HypersurfaceForm| columns.iter().map(|e| g.coefficient(e)).collect::<Vec<_>>();
    let mut rows = vec![row(f)];
    let mut picked = Vec::new();
    for &i in order {
        if picked.len() + 1 == t.k() {
            break;
        }
        rows.push(row(&t.generators()[i]));
        if linalg::rank(&rows) == rows.len() {
            picked.push(i);
        } else {
            rows.pop();
        }
    }
    picked
}

fn select_members(
    basis: &[&HypersurfaceForm],
    echelon: &LambdaEchelon,
    order: &impl Fn(&ExponentVector, &ExponentVector) -> Ordering,
) -> Result<Vec<HypersurfaceForm>, DecompositionFailure> {
    let mut seen: BTreeSet<ExponentVector> = basis[0].support();
    let mut members = Vec::with_capacity(basis.len() - 1);
    for (step, b) in basis.iter().enumerate().skip(1) {
        let target = b
            .terms()
            .keys()
            .filter(|e| !seen.contains(*e))
            .min_by(|x, y| order(x, y))
            .cloned()
            .ok_or(DecompositionFailure::EmptyDifference { step })?;
        let idx = echelon
            .pivot_index(&target)
            .ok_or_else(|| DecompositionFailure::NoMemberWithMinimum { step, monomial: target.exponents().to_vec() })?;
        members.push(echelon.rows[idx].clone());
        seen.extend(b.support());
    }
    Ok(members)
}

/// Members built from the λ-echelon basis: `f` plus the pivot rows not
/// leading `f`. Always satisfies the identity for the exact weight.
pub fn decompose_omegas_echelon(t: &TuplePoint, f: &HypersurfaceForm, lambda: &NormalizedOps) -> Result<Decomposition> {
    check_lambda(t.ambient(), lambda)?;
    if t.member_coordinates(f).is_none() {
        return Err(Error::MemberNotInSystem);
    }
    let echelon = LambdaEchelon::new(t, lambda)?;
    let lead = f.terms().keys().min_by(|a, b| lambda_order(lambda)(a, b)).expect("nonempty form");
    let skip = echelon.pivot_index(lead).expect("a member's λ-minimum is a pivot");
    let members: Vec<HypersurfaceForm> =
        echelon.rows.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, r)| r.clone()).collect();
    let member_omegas = members.iter().map(|g| omega_hypersurface(g, lambda)).collect::<Result<Vec<_>>>()?;
    Ok(Decomposition {
        lambda: lambda.clone(),
        mode: Mode::Exact,
        f_omega: omega_hypersurface(f, lambda)?,
        members,
        member_omegas,
        tuple_omega: echelon.omega(lambda),
    })
}
