use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{combinations, plucker_support, TuplePoint};
use crate::lattice::NormalizedOps;
use crate::linalg::int_kernel_ray;
use crate::weights::{exponent_sum, Mode, VgitConfig};

/// A hyperplane through the origin cutting the normalized cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutHyperplane {
    /// The cone facet `a_j = a_{j+1}`.
    Facet(usize),
    /// `a_j = 0`; added for hyperplane-augmented tuples.
    Coordinate(usize),
    /// A tie `<σ_S - σ_S', a> = 0` between two subset sums.
    Tie(Vec<i64>),
}

impl CutHyperplane {
    fn normal(&self, len: usize) -> Vec<i64> {
        match self {
            Self::Facet(j) => {
                let mut v = vec![0; len];
                v[*j] = 1;
                v[*j + 1] = -1;
                v
            }
            Self::Coordinate(j) => {
                let mut v = vec![0; len];
                v[*j] = 1;
                v
            }
            Self::Tie(v) => v.clone(),
        }
    }
}

/// Which tie hyperplanes refine the cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Refinement {
    /// Every pair of distinct linear pieces.
    #[default]
    AllPairs,
    /// Only pieces not dominated on the whole cone by another piece. These
    /// carry the lower envelope, so the resulting rays still decide the sign
    /// of `ω - threshold`.
    LowerEnvelope,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRay {
    pub lambda: NormalizedOps,
    /// The `n - 1` hyperplanes whose intersection with the cone first produced the ray.
    pub origin: Vec<CutHyperplane>,
}

/// Primitive rays of the normalized cone refined by tie hyperplanes, in
/// lexicographic order of their weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub rays: Vec<CandidateRay>,
    /// Number of linear pieces `σ_S` used.
    pub pieces: usize,
    /// Number of tie hyperplanes meeting the cone.
    pub ties: usize,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn lambdas(&self) -> impl Iterator<Item = &NormalizedOps> {
        self.rays.iter().map(|r| &r.lambda)
    }

    pub fn contains(&self, weights: &[i64]) -> bool {
        self.rays.iter().any(|r| r.lambda.weights() == weights)
    }
}

/// Exponent sums of the `k`-subsets whose weight sums are the linear pieces of
/// `ω(T, ·)`: Plücker-support subsets in exact mode, distinct support tuples in
/// combinatorial mode.
pub fn linear_pieces(t: &TuplePoint, mode: Mode) -> Result<Vec<Vec<i64>>> {
    let len = t.ambient() + 1;
    let set: BTreeSet<Vec<i64>> = match mode {
        Mode::Exact => plucker_support(t)?.subsets.iter().map(|s| exponent_sum(&s.monomials, len)).collect(),
        Mode::Combinatorial => t.distinct_support_tuples().map(|tup| exponent_sum(&tup, len)).collect(),
    };
    Ok(set.into_iter().collect())
}

fn prefix_sums(v: &[i64]) -> Vec<i64> {
    v.iter()
        .scan(0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Pieces not dominated on the cone. `σ'` lies below `σ` on every ray iff
/// each prefix sum of `σ'` is at most that of `σ`.
pub fn undominated(pieces: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let prefixes: Vec<Vec<i64>> = pieces.iter().map(|p| prefix_sums(p)).collect();
    let dominated = |i: usize| {
        prefixes
            .iter()
            .enumerate()
            .any(|(j, q)| j != i && q.iter().zip(&prefixes[i]).all(|(a, b)| a <= b) && q != &prefixes[i])
    };
    (0..pieces.len()).filter(|&i| !dominated(i)).map(|i| pieces[i].clone()).collect()
}

fn canonical_normal(mut v: Vec<i64>) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    let sign = if v.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 { -g } else { g };
    v.iter_mut().for_each(|x| *x /= sign);
    Some(v)
}

/// Tie normals whose hyperplane is not strictly one-signed on the cone.
fn tie_normals(pieces: &[Vec<i64>], refinement: Refinement, n: usize) -> Vec<Vec<i64>> {
    let used: Vec<Vec<i64>> = match refinement {
        Refinement::AllPairs => pieces.to_vec(),
        Refinement::LowerEnvelope => undominated(pieces),
    };
    let rays = NormalizedOps::cone_extreme_rays(n);
    let mut normals = BTreeSet::new();
    for (i, a) in used.iter().enumerate() {
        for b in &used[i + 1..] {
            let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let Some(normal) = canonical_normal(diff) else { continue };
            let signs: Vec<i64> =
                rays.iter().map(|r| normal.iter().zip(r.weights()).map(|(x, y)| x * y).sum::<i64>().signum()).collect();
            if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
                continue;
            }
            normals.insert(normal);
        }
    }
    normals.into_iter().collect()
}

/// Rays of the normalized cone in dimension `n` refined by the given
/// hyperplanes (normals of length `n + 1`).
pub fn refine_cone(n: usize, cuts: &[CutHyperplane]) -> Result<Vec<CandidateRay>> {
    let len = n + 1;
    let mut pool: Vec<CutHyperplane> = (0..n).map(CutHyperplane::Facet).collect();
    pool.extend(cuts.iter().filter(|c| !pool.contains(c)).cloned().collect::<Vec<_>>());
    let normals: Vec<Vec<i64>> = pool.iter().map(|c| c.normal(len)).collect();
    let choose = n - 1;

    let solve = |combo: &[usize]| -> Result<Option<Vec<i64>>> {
        let mut rows: Vec<Vec<i64>> = vec![vec![1; len]];
        rows.extend(combo.iter().map(|&i| normals[i].clone()));
        let Some(ray) = int_kernel_ray(&rows).ok_or(Error::Overflow("candidate ray minors"))? else {
            return Ok(None);
        };
        let nonincreasing = |v: &[i64]| v.windows(2).all(|w| w[0] >= w[1]);
        if nonincreasing(&ray) {
            return Ok(Some(ray));
        }
        let neg: Vec<i64> = ray.iter().map(|x| -x).collect();
        Ok(nonincreasing(&neg).then_some(neg))
    };

    let found: Vec<(Vec<i64>, Vec<usize>)> = if choose == 0 {
        solve(&[])?.map(|r| (r, Vec::new())).into_iter().collect()
    } else {
        let per_first: Vec<Vec<_>> = (0..pool.len())
            .into_par_iter()
            .map(|first| {
                let rest = pool.len() - first - 1;
                let mut out = Vec::new();
                for tail in combinations(rest, choose - 1) {
                    let combo: Vec<usize> = std::iter::once(first).chain(tail.iter().map(|&i| i + first + 1)).collect();
                    if let Some(r) = solve(&combo)? {
                        out.push((r, combo));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        per_first.into_iter().flatten().collect()
    };

    let mut rays: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (r, combo) in found {
        rays.entry(r).or_insert(combo);
    }
    Ok(rays
        .into_iter()
        .map(|(w, combo)| CandidateRay {
            lambda: NormalizedOps::new(w).expect("kernel rays are primitive and normalized"),
            origin: combo.into_iter().map(|i| pool[i].clone()).collect(),
        })
        .collect())
}

/// Candidate rays with explicit piece source and refinement policy.
pub fn candidate_lambdas_with(
    t: &TuplePoint,
    cfg: Option<&VgitConfig>,
    mode: Mode,
    refinement: Refinement,
) -> Result<CandidateSet> {
    let n = t.ambient();
    if let Some(cfg) = cfg {
        let m = cfg.hyperplanes()[0].ambient();
        if m != n {
            return Err(Error::DimensionMismatch { expected: n + 1, got: m + 1 });
        }
    }
    let pieces = linear_pieces(t, mode)?;
    let ties = tie_normals(&pieces, refinement, n);
    let mut cuts: Vec<CutHyperplane> = Vec::new();
    if cfg.is_some() {
        cuts.extend((1..n).map(CutHyperplane::Coordinate));
    }
    cuts.extend(ties.iter().cloned().map(CutHyperplane::Tie));
    let rays = refine_cone(n, &cuts)?;
    Ok(CandidateSet { rays, pieces: pieces.len(), ties: ties.len() })
}

/// Every primitive ray of the normalized cone refined by all pairwise ties of
/// the combinatorial pieces (which include the exact ones), plus coordinate
/// hyperplanes when hyperplanes are attached.
pub fn candidate_lambdas(t: &TuplePoint, cfg: Option<&VgitConfig>) -> Result<CandidateSet> {
    candidate_lambdas_with(t, cfg, Mode::Combinatorial, Refinement::AllPairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::tests::{form, q, tuple};
    use crate::forms::HyperplaneForm;

    #[test]
    fn extreme_rays_always_present() {
        let t = TuplePoint::single(form(&[(1, &[3, 0, 0]), (-1, &[0, 2, 1])]));
        let c = candidate_lambdas(&t, None).unwrap();
        let got: Vec<&[i64]> = c.lambdas().map(|l| l.weights()).collect();
        assert_eq!(got, vec![&[1, 1, -2][..], &[2, -1, -1][..]]);
    }

    #[test]
    fn tie_ray_from_balanced_monomial() {
        let t = TuplePoint::single(form(&[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3]), (1, &[1, 1, 1])]));
        let c = candidate_lambdas(&t, None).unwrap();
        assert!(c.contains(&[1, 0, -1]));
        assert!(c.contains(&[1, 1, -2]) && c.contains(&[2, -1, -1]));
    }

    #[test]
    fn hyperplanes_add_coordinate_cuts() {
        let t = TuplePoint::single(form(&[(1, &[2, 1, 0])]));
        let cfg = VgitConfig::new(vec![q(1)], vec![HyperplaneForm::coordinate(2, 2)]).unwrap();
        let c = candidate_lambdas(&t, Some(&cfg)).unwrap();
        let got: Vec<&[i64]> = c.lambdas().map(|l| l.weights()).collect();
        assert_eq!(got, vec![&[1, 0, -1][..], &[1, 1, -2][..], &[2, -1, -1][..]]);
    }

    #[test]
    fn dominance_matches_pointwise_comparison() {
        let pieces = vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3], vec![1, 1, 1]];
        assert_eq!(undominated(&pieces), vec![vec![0, 0, 3]]);
        let pieces = vec![vec![2, 0, 1], vec![0, 3, 0]];
        assert_eq!(undominated(&pieces).len(), 2);
    }

    #[test]
    fn cusp_tie_ray_in_dimension_two() {
        let t = TuplePoint::single(form(&[(1, &[2, 0, 1]), (-1, &[0, 3, 0])]));
        let c = candidate_lambdas_with(&t, None, Mode::Exact, Refinement::LowerEnvelope).unwrap();
        assert!(c.contains(&[4, 1, -5]));
    }

    #[test]
    fn three_dimensional_cone() {
        let t = tuple(&[&[(1, &[2, 0, 0, 0]), (1, &[0, 1, 1, 0])], &[(1, &[0, 0, 1, 1]), (1, &[1, 0, 0, 1])]]);
        let c = candidate_lambdas(&t, None).unwrap();
        for r in NormalizedOps::cone_extreme_rays(3) {
            assert!(c.contains(r.weights()));
        }
        assert!(c.rays.iter().all(|r| r.origin.len() == 2));
    }
}
