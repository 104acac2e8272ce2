use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::candidates::CandidateSet;
use super::search::{TorusEvaluator, TorusKind};
use crate::error::{Error, Result};
use crate::forms::{HyperplaneForm, TuplePoint};
use crate::lattice::{lambda_factor, NormalizedOps};
use crate::weights::{omega_hyperplane, Mode, TupleWeigher, VgitConfig};
use crate::Rational;

fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// The equality locus `sum c_i t_i = constant` contributed by one ray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WallHyperplane {
    /// Normalized so the first nonzero coefficient is `1`.
    pub coefficients: Vec<Rational>,
    pub constant: Rational,
    pub rays: Vec<NormalizedOps>,
}

/// A wall value `t` (or a scale along a direction in `t`-space).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub value: Rational,
    pub rays: Vec<NormalizedOps>,
    /// `n sum t_i >= kd` at the wall, where the lct criterion for VGIT no longer applies.
    pub outside_regime: bool,
}

/// Per-ray linear equation `sum t_i (ω(H_i) - Λ/(n+1)) = kdΛ/(n+1) - ω(T)`.
fn ray_equation(
    weigher: &TupleWeigher,
    kd: i64,
    hyperplanes: &[HyperplaneForm],
    lambda: &NormalizedOps,
) -> Result<(Vec<Rational>, Rational)> {
    let n = lambda.ambient() as i64;
    let big_lambda = int(lambda_factor(lambda));
    let share = &big_lambda / int(n + 1);
    let coefficients =
        hyperplanes.iter().map(|h| Ok(int(omega_hyperplane(h, lambda)?) - &share)).collect::<Result<Vec<_>>>()?;
    let constant = int(kd) * &share - int(weigher.omega(lambda)?);
    Ok((coefficients, constant))
}

fn check_hyperplanes(t: &TuplePoint, hyperplanes: &[HyperplaneForm]) -> Result<()> {
    VgitConfig::validate_hyperplanes(hyperplanes)?;
    if hyperplanes[0].ambient() != t.ambient() {
        return Err(Error::DimensionMismatch { expected: t.ambient() + 1, got: hyperplanes[0].ambient() + 1 });
    }
    Ok(())
}

/// Wall hyperplanes in `t`-space, one per distinct nondegenerate ray equation.
pub fn vgit_wall_hyperplanes(
    t: &TuplePoint,
    hyperplanes: &[HyperplaneForm],
    candidates: &CandidateSet,
    mode: Mode,
) -> Result<Vec<WallHyperplane>> {
    check_hyperplanes(t, hyperplanes)?;
    let weigher = TupleWeigher::new(t, mode)?;
    let kd = t.k() as i64 * t.degree() as i64;
    let mut walls: BTreeMap<(Vec<Rational>, Rational), Vec<NormalizedOps>> = BTreeMap::new();
    for lambda in candidates.lambdas() {
        let (coeffs, constant) = ray_equation(&weigher, kd, hyperplanes, lambda)?;
        let Some(lead) = coeffs.iter().find(|c| !c.is_zero()).cloned() else { continue };
        let coeffs: Vec<Rational> = coeffs.iter().map(|c| c / &lead).collect();
        walls.entry((coeffs, constant / lead)).or_default().push(lambda.clone());
    }
    Ok(walls
        .into_iter()
        .map(|((coefficients, constant), rays)| WallHyperplane { coefficients, constant, rays })
        .collect())
}

/// Positive scales `s` at which some ray's equation holds for `t = s·direction`,
/// sorted and deduplicated. With one hyperplane and direction `(1)` these are
/// the wall values of `t`.
pub fn vgit_walls_along(
    t: &TuplePoint,
    hyperplanes: &[HyperplaneForm],
    direction: &[Rational],
    candidates: &CandidateSet,
    mode: Mode,
) -> Result<Vec<Wall>> {
    check_hyperplanes(t, hyperplanes)?;
    if direction.len() != hyperplanes.len() {
        return Err(Error::InvalidConfig(format!(
            "direction has {} entries for {} hyperplanes",
            direction.len(),
            hyperplanes.len()
        )));
    }
    if direction.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidConfig("direction entries must be positive".into()));
    }
    let weigher = TupleWeigher::new(t, mode)?;
    let kd = t.k() as i64 * t.degree() as i64;
    let n = t.ambient() as i64;
    let dir_sum: Rational = direction.iter().fold(Rational::zero(), |a, b| a + b);
    let mut walls: BTreeMap<Rational, Vec<NormalizedOps>> = BTreeMap::new();
    for lambda in candidates.lambdas() {
        let (coeffs, constant) = ray_equation(&weigher, kd, hyperplanes, lambda)?;
        let slope = coeffs.iter().zip(direction).fold(Rational::zero(), |a, (c, d)| a + c * d);
        if slope.is_zero() {
            continue;
        }
        let s = constant / slope;
        if s.is_positive() {
            walls.entry(s).or_default().push(lambda.clone());
        }
    }
    Ok(walls
        .into_iter()
        .map(|(value, rays)| {
            let outside_regime = int(n) * &value * &dir_sum >= int(kd);
            Wall { value, rays, outside_regime }
        })
        .collect())
}

/// Wall values for a single hyperplane.
pub fn vgit_walls(
    t: &TuplePoint,
    hyperplane: &HyperplaneForm,
    candidates: &CandidateSet,
    mode: Mode,
) -> Result<Vec<Wall>> {
    vgit_walls_along(t, std::slice::from_ref(hyperplane), &[Rational::from_integer(1.into())], candidates, mode)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanPoint {
    pub scale: Rational,
    pub kind: TorusKind,
    pub outside_regime: bool,
}

/// Torus verdicts at `t = s·direction` for each `s` in the grid, on a fixed candidate set.
pub fn scan_t(
    t: &TuplePoint,
    hyperplanes: &[HyperplaneForm],
    direction: &[Rational],
    grid: &[Rational],
    candidates: &CandidateSet,
    mode: Mode,
) -> Result<Vec<ScanPoint>> {
    let kd = int(t.k() as i64 * t.degree() as i64);
    let n = int(t.ambient() as i64);
    grid.iter()
        .map(|s| {
            let tv: Vec<Rational> = direction.iter().map(|d| d * s).collect();
            let sum: Rational = tv.iter().fold(Rational::zero(), |a, b| a + b);
            let cfg = VgitConfig::new(tv, hyperplanes.to_vec())?;
            let kind = TorusEvaluator::new(t, Some(&cfg), mode)?.torus_verdict(candidates)?.kind;
            Ok(ScanPoint { scale: s.clone(), kind, outside_regime: &n * sum >= kd })
        })
        .collect()
}

/// Whether the scanned verdict is constant on each open interval between
/// consecutive walls (grid points lying on a wall are not constrained).
pub fn constant_between_walls(points: &[ScanPoint], walls: &[Wall]) -> bool {
    let cell = |s: &Rational| -> Option<usize> {
        if walls.iter().any(|w| &w.value == s) {
            return None;
        }
        Some(walls.iter().filter(|w| &w.value < s).count())
    };
    let mut seen: BTreeMap<usize, TorusKind> = BTreeMap::new();
    for p in points {
        if let Some(c) = cell(&p.scale) {
            if *seen.entry(c).or_insert(p.kind) != p.kind {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::tests::{form, q};
    use crate::opssearch::candidate_lambdas;

    fn setup() -> (TuplePoint, HyperplaneForm, CandidateSet) {
        let t = TuplePoint::single(form(&[(1, &[2, 1, 0])]));
        let h = HyperplaneForm::coordinate(2, 2);
        let cfg = VgitConfig::new(vec![q(1)], vec![h.clone()]).unwrap();
        let c = candidate_lambdas(&t, Some(&cfg)).unwrap();
        (t, h, c)
    }

    #[test]
    fn monomial_walls() {
        let (t, h, c) = setup();
        let walls = vgit_walls(&t, &h, &c, Mode::Exact).unwrap();
        let values: Vec<Rational> = walls.iter().map(|w| w.value.clone()).collect();
        assert_eq!(values, vec![Rational::new(3.into(), 2.into()), q(2), q(3)]);
        assert_eq!(walls[1].rays[0].weights(), &[1, 0, -1]);
        assert!(walls.iter().all(|w| w.outside_regime));
    }

    #[test]
    fn grid_scan_is_constant_between_walls() {
        let (t, h, c) = setup();
        let walls = vgit_walls(&t, &h, &c, Mode::Exact).unwrap();
        let grid: Vec<Rational> = (1..=32).map(|i| Rational::new(i.into(), 8.into())).collect();
        let points = scan_t(&t, &[h], &[q(1)], &grid, &c, Mode::Exact).unwrap();
        assert!(constant_between_walls(&points, &walls));
        for p in &points {
            assert_eq!(p.kind == TorusKind::Unstable, p.scale < q(3), "t = {}", p.scale);
        }
    }

    #[test]
    fn two_hyperplanes_give_wall_hyperplanes() {
        let t = TuplePoint::single(form(&[(1, &[2, 1, 0])]));
        let hs = vec![HyperplaneForm::coordinate(2, 2), HyperplaneForm::coordinate(2, 0)];
        let cfg = VgitConfig::new(vec![q(1), q(1)], hs.clone()).unwrap();
        let c = candidate_lambdas(&t, Some(&cfg)).unwrap();
        let walls = vgit_wall_hyperplanes(&t, &hs, &c, Mode::Exact).unwrap();
        assert!(!walls.is_empty());
        for w in &walls {
            assert_eq!(w.coefficients.iter().find(|x| !x.is_zero()), Some(&q(1)));
        }
        let dup = vec![HyperplaneForm::coordinate(2, 2), HyperplaneForm::coordinate(2, 2)];
        assert!(matches!(vgit_wall_hyperplanes(&t, &dup, &c, Mode::Exact), Err(Error::InvalidConfig(_))));
    }
}
