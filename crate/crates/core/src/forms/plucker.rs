use num_traits::Zero;

use super::TuplePoint;
use crate::error::{Error, Result};
use crate::lattice::ExponentVector;
use crate::linalg;
use crate::Rational;

/// A `k`-subset of monomials with a nonzero maximal minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerSubset {
    /// Monomials in descending lexicographic order (the column order of the minor).
    pub monomials: Vec<ExponentVector>,
    pub minor: Rational,
}

/// The nonzero Plücker coordinates of a tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerSupport {
    pub subsets: Vec<PluckerSubset>,
}

impl PluckerSupport {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn contains(&self, monomials: &[ExponentVector]) -> bool {
        let mut key = monomials.to_vec();
        key.sort_by(|a, b| b.cmp(a));
        self.subsets.iter().any(|s| s.monomials == key)
    }
}

/// Every `k x k` minor of the coefficient matrix over the union of supports,
/// keeping the nonzero ones. Subsets are listed in lexicographic order of
/// their (descending) column lists.
pub fn plucker_support(t: &TuplePoint) -> Result<PluckerSupport> {
    let mut columns = t.union_support();
    columns.reverse();
    let matrix = t.coefficient_matrix(&columns);
    if let Some(relation) = linalg::left_kernel_vector(&matrix) {
        return Err(Error::DependentGenerators { relation });
    }
    let k = t.k();
    let mut subsets = Vec::new();
    for combo in combinations(columns.len(), k) {
        let sub: Vec<Vec<Rational>> =
            matrix.iter().map(|row| combo.iter().map(|&c| row[c].clone()).collect()).collect();
        let minor = linalg::determinant(&sub);
        if !minor.is_zero() {
            subsets.push(PluckerSubset { monomials: combo.iter().map(|&c| columns[c].clone()).collect(), minor });
        }
    }
    Ok(PluckerSupport { subsets })
}

/// All increasing `k`-combinations of `0..m`, lexicographically.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::{ev, form, q, tuple};
    use super::super::{HypersurfaceForm, TuplePoint};
    use super::*;

    #[test]
    fn degenerate_pencil_has_one_coordinate() {
        let t = tuple(&[&[(1, &[3, 0, 0]), (1, &[2, 1, 0])], &[(1, &[3, 0, 0]), (-1, &[2, 1, 0])]]);
        let ps = plucker_support(&t).unwrap();
        assert_eq!(ps.subsets, vec![PluckerSubset { monomials: vec![ev(&[3, 0, 0]), ev(&[2, 1, 0])], minor: q(-2) }]);
    }

    #[test]
    fn vanishing_minor_is_excluded() {
        let t = tuple(&[&[(1, &[0, 3, 0]), (1, &[0, 0, 3])], &[(1, &[0, 3, 0]), (1, &[0, 0, 3]), (1, &[3, 0, 0])]]);
        let ps = plucker_support(&t).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps.contains(&[ev(&[0, 3, 0]), ev(&[3, 0, 0])]));
        assert!(ps.contains(&[ev(&[0, 0, 3]), ev(&[3, 0, 0])]));
        assert!(!ps.contains(&[ev(&[0, 3, 0]), ev(&[0, 0, 3])]));
    }

    #[test]
    fn dependent_generators_error() {
        // bypass the constructor check to exercise the guard
        let f = form(&[(1, &[3, 0, 0])]);
        let t = TuplePoint { n: 2, degree: 3, generators: vec![f.clone(), f.scaled(&q(2)).unwrap()] };
        assert!(matches!(plucker_support(&t), Err(Error::DependentGenerators { .. })));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn basis_change_scales_all_minors(
                c1 in proptest::collection::vec(-3i64..=3, 6),
                c2 in proptest::collection::vec(-3i64..=3, 6),
                m in proptest::collection::vec(-3i64..=3, 4),
            ) {
                let monos: [&[u32]; 6] = [&[3, 0, 0], &[2, 1, 0], &[1, 1, 1], &[0, 3, 0], &[0, 1, 2], &[0, 0, 3]];
                let mk = |c: &[i64]| {
                    let terms: Vec<(i64, &[u32])> = c.iter().zip(monos).map(|(&a, e)| (a, e)).collect();
                    HypersurfaceForm::from_int_terms(2, 3, &terms)
                };
                let (Ok(f1), Ok(f2)) = (mk(&c1), mk(&c2)) else { return Ok(()) };
                let Ok(t) = TuplePoint::new(vec![f1, f2]) else { return Ok(()) };
                let det = m[0] * m[3] - m[1] * m[2];
                prop_assume!(det != 0);
                let g1 = t.member(&[q(m[0]), q(m[1])]).unwrap();
                let g2 = t.member(&[q(m[2]), q(m[3])]).unwrap();
                let t2 = TuplePoint::new(vec![g1, g2]).unwrap();
                let a = plucker_support(&t).unwrap();
                let b = plucker_support(&t2).unwrap();
                let a_sets: Vec<_> = a.subsets.iter().map(|s| &s.monomials).collect();
                let b_sets: Vec<_> = b.subsets.iter().map(|s| &s.monomials).collect();
                prop_assert_eq!(a_sets, b_sets);
                for (x, y) in a.subsets.iter().zip(&b.subsets) {
                    prop_assert_eq!(&y.minor / &x.minor, q(det));
                }
            }

            #[test]
            fn nonzero_minors_admit_distinct_representatives(
                c1 in proptest::collection::vec(-2i64..=2, 6),
                c2 in proptest::collection::vec(-2i64..=2, 6),
            ) {
                let monos: [&[u32]; 6] = [&[3, 0, 0], &[2, 1, 0], &[1, 1, 1], &[0, 3, 0], &[0, 1, 2], &[0, 0, 3]];
                let mk = |c: &[i64]| {
                    let terms: Vec<(i64, &[u32])> = c.iter().zip(monos).map(|(&a, e)| (a, e)).collect();
                    HypersurfaceForm::from_int_terms(2, 3, &terms)
                };
                let (Ok(f1), Ok(f2)) = (mk(&c1), mk(&c2)) else { return Ok(()) };
                let Ok(t) = TuplePoint::new(vec![f1, f2]) else { return Ok(()) };
                let tuples: Vec<Vec<ExponentVector>> = t
                    .distinct_support_tuples()
                    .map(|mut v| { v.sort_by(|a, b| b.cmp(a)); v })
                    .collect();
                for s in plucker_support(&t).unwrap().subsets {
                    prop_assert!(tuples.contains(&s.monomials));
                }
            }
        }
    }
}
