//! Exponent vectors, normalized one-parameter subgroups and the weight
//! pairings between them.
//!
//! A normalized one-parameter subgroup of the diagonal torus is stored as a
//! primitive integer vector `a_0 >= a_1 >= ... >= a_n` with `sum a_i = 0`.
//! Every stability predicate is invariant under positive rescaling, so the
//! primitive representative is canonical.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A degree-`d` monomial `x_0^{e_0} ... x_n^{e_n}` in `n + 1` variables.
///
/// Ordered lexicographically on the exponent list, which is the fixed
/// tie-break order used throughout the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        Ok(Self(exponents))
    }

    /// Builds an exponent vector and checks it has the expected degree.
    pub fn with_degree(exponents: Vec<u32>, degree: u32) -> Result<Self> {
        let ev = Self::new(exponents)?;
        if ev.degree() != degree {
            return Err(Error::WrongDegree { exponents: ev.0, degree });
        }
        Ok(ev)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of projective coordinates minus one.
    pub fn ambient(&self) -> usize {
        self.0.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The pure power `x_j^d`.
    pub fn power(n: usize, j: usize, d: u32) -> Self {
        let mut e = vec![0; n + 1];
        e[j] = d;
        Self(e)
    }

    pub fn permuted(&self, perm: &Permutation) -> Self {
        let mut out = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[perm.image(i)] = e;
        }
        Self(out)
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A bijection of `{0, ..., n}`; `image(i)` is where coordinate `i` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Self((0..len).collect())
    }

    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || seen[i] {
                return Err(Error::InvalidConfig(format!("not a permutation: {image:?}")));
            }
            seen[i] = true;
        }
        Ok(Self(image))
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// Moves entry `i` of `values` to position `image(i)`.
    pub fn apply<T: Clone>(&self, values: &[T]) -> Vec<T> {
        let mut out = values.to_vec();
        for (i, v) in values.iter().enumerate() {
            out[self.0[i]] = v.clone();
        }
        out
    }

    /// All permutations of `len` points in lexicographic order of their image lists.
    pub fn all(len: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..len).collect();
        loop {
            out.push(Permutation(current.clone()));
            // next lexicographic permutation
            let Some(i) = (0..len.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..len).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

/// A normalized one-parameter subgroup `Diag(s^{a_0}, ..., s^{a_n})`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalizedOps(Vec<i64>);

impl NormalizedOps {
    /// Validates an already-normalized primitive weight vector.
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: weights.len() });
        }
        let sum: i64 = weights.iter().sum();
        if sum != 0 {
            return Err(Error::NonzeroWeightSum(sum));
        }
        if weights.iter().all(|&a| a == 0) {
            return Err(Error::TrivialSubgroup);
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotNormalized(weights));
        }
        if weights.iter().fold(0i64, |g, &a| g.gcd(&a)) != 1 {
            return Err(Error::NotPrimitive(weights));
        }
        Ok(Self(weights))
    }

    /// Normalizes a nonincreasing zero-sum vector by dividing out its content.
    pub fn from_sorted(weights: Vec<i64>) -> Result<Self> {
        let g = weights.iter().fold(0i64, |g, &a| g.gcd(&a));
        if g == 0 {
            return Err(Error::TrivialSubgroup);
        }
        Self::new(weights.into_iter().map(|a| a / g).collect())
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn ambient(&self) -> usize {
        self.0.len() - 1
    }

    /// `a_n`, the smallest weight.
    pub fn last(&self) -> i64 {
        *self.0.last().unwrap()
    }

    /// The generating rays of the normalized cone in dimension `n`:
    /// `j` copies of `n + 1 - j` followed by `n + 1 - j` copies of `-j`, reduced.
    pub fn cone_extreme_rays(n: usize) -> Vec<NormalizedOps> {
        (1..=n)
            .map(|j| {
                let hi = (n + 1 - j) as i64;
                let lo = -(j as i64);
                let w: Vec<i64> = (0..=n).map(|i| if i < j { hi } else { lo }).collect();
                Self::from_sorted(w).expect("extreme ray is nontrivial")
            })
            .collect()
    }
}

impl fmt::Debug for NormalizedOps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ{:?}", self.0)
    }
}

impl fmt::Display for NormalizedOps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sorts raw zero-sum weights into nonincreasing order and reduces them to a
/// primitive vector. The permutation sends original positions to sorted
/// positions; ties keep their original relative order.
pub fn make_normalized_ops(raw: &[i64]) -> Result<(NormalizedOps, Permutation)> {
    let sum: i64 = raw.iter().sum();
    if sum != 0 {
        return Err(Error::NonzeroWeightSum(sum));
    }
    if raw.iter().all(|&a| a == 0) {
        return Err(Error::TrivialSubgroup);
    }
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| raw[j].cmp(&raw[i]).then(i.cmp(&j)));
    let mut image = vec![0; raw.len()];
    for (pos, &orig) in order.iter().enumerate() {
        image[orig] = pos;
    }
    let sorted: Vec<i64> = order.iter().map(|&i| raw[i]).collect();
    Ok((NormalizedOps::from_sorted(sorted)?, Permutation(image)))
}

fn check_dims(i: &ExponentVector, len: usize) -> Result<()> {
    if i.0.len() != len {
        return Err(Error::DimensionMismatch { expected: len, got: i.0.len() });
    }
    Ok(())
}

/// `<x^I, a> = sum d_i a_i` for an arbitrary diagonal weight vector.
pub fn pairing_raw(i: &ExponentVector, weights: &[i64]) -> Result<i64> {
    check_dims(i, weights.len())?;
    Ok(i.0.iter().zip(weights).map(|(&d, &a)| d as i64 * a).sum())
}

pub fn pairing(i: &ExponentVector, lambda: &NormalizedOps) -> Result<i64> {
    pairing_raw(i, &lambda.0)
}

/// The affine weight `sum_{j<n} d_j (a_j - a_n)` of a single monomial.
pub fn affine_weight_monomial(i: &ExponentVector, lambda: &NormalizedOps) -> Result<i64> {
    check_dims(i, lambda.0.len())?;
    let an = lambda.last();
    let n = lambda.ambient();
    Ok(i.0[..n].iter().zip(&lambda.0[..n]).map(|(&d, &a)| d as i64 * (a - an)).sum())
}

/// `sum_{k<n} a_k - n a_n`, which equals `-(n + 1) a_n` and is positive.
pub fn lambda_factor(lambda: &NormalizedOps) -> i64 {
    let n = lambda.ambient();
    lambda.0[..n].iter().sum::<i64>() - n as i64 * lambda.last()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec()).unwrap()
    }

    fn ops(w: &[i64]) -> NormalizedOps {
        NormalizedOps::new(w.to_vec()).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&ev(&[2, 1, 0]), &ops(&[1, 0, -1])).unwrap(), 2);
        assert_eq!(pairing(&ev(&[1, 1, 1]), &ops(&[1, 0, -1])).unwrap(), 0);
        assert_eq!(pairing(&ev(&[2, 0, 1]), &ops(&[4, 1, -5])).unwrap(), 3);
        assert_eq!(pairing(&ev(&[0, 2, 1]), &ops(&[4, 1, -5])).unwrap(), -3);
        assert!(matches!(pairing(&ev(&[1, 1]), &ops(&[1, 0, -1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn affine_weight_examples() {
        assert_eq!(affine_weight_monomial(&ev(&[2, 1, 0]), &ops(&[1, 0, -1])).unwrap(), 5);
        assert_eq!(affine_weight_monomial(&ev(&[0, 0, 4]), &ops(&[4, 1, -5])).unwrap(), 0);
        assert_eq!(affine_weight_monomial(&ev(&[3, 0, 0]), &ops(&[1, 1, -2])).unwrap(), 9);
    }

    #[test]
    fn lambda_factor_examples() {
        assert_eq!(lambda_factor(&ops(&[1, 0, -1])), 3);
        assert_eq!(lambda_factor(&ops(&[1, 1, -2])), 6);
        assert_eq!(lambda_factor(&ops(&[3, 1, -1, -3])), 12);
    }

    #[test]
    fn normalization_examples() {
        let (l, p) = make_normalized_ops(&[1, 4, -5]).unwrap();
        assert_eq!(l.weights(), &[4, 1, -5]);
        assert_eq!(p.images(), &[1, 0, 2]);

        let (l, p) = make_normalized_ops(&[2, -1, -1]).unwrap();
        assert_eq!(l.weights(), &[2, -1, -1]);
        assert!(p.is_identity());

        let (l, p) = make_normalized_ops(&[2, 0, -2]).unwrap();
        assert_eq!(l.weights(), &[1, 0, -1]);
        assert!(p.is_identity());

        assert_eq!(make_normalized_ops(&[1, 1, 0]), Err(Error::NonzeroWeightSum(2)));
        assert_eq!(make_normalized_ops(&[0, 0, 0]), Err(Error::TrivialSubgroup));
    }

    #[test]
    fn constructor_rejects_bad_vectors() {
        assert!(matches!(NormalizedOps::new(vec![-1, 0, 1]), Err(Error::NotNormalized(_))));
        assert!(matches!(NormalizedOps::new(vec![2, 0, -2]), Err(Error::NotPrimitive(_))));
        assert!(matches!(NormalizedOps::new(vec![0, 0]), Err(Error::TrivialSubgroup)));
    }

    #[test]
    fn extreme_rays_of_plane_cone() {
        let rays = NormalizedOps::cone_extreme_rays(2);
        assert_eq!(rays, vec![ops(&[2, -1, -1]), ops(&[1, 1, -2])]);
        assert_eq!(NormalizedOps::cone_extreme_rays(1), vec![ops(&[1, -1])]);
    }

    #[test]
    fn permutations_enumerate_in_order() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert!(all[0].is_identity());
        assert_eq!(all[2].images(), &[1, 0, 2]);
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert_eq!(p.apply(&p.inverse().apply(&[7, 8, 9])), vec![7, 8, 9]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn raw_zero_sum(n: usize) -> impl Strategy<Value = Vec<i64>> {
            proptest::collection::vec(-9i64..=9, n).prop_map(|mut v| {
                let s: i64 = v.iter().sum();
                v.push(-s);
                v
            })
        }

        proptest! {
            #[test]
            fn affine_weight_is_shifted_pairing(
                raw in (1usize..5).prop_flat_map(raw_zero_sum),
                seed in proptest::collection::vec(0u32..4, 6),
            ) {
                prop_assume!(raw.iter().any(|&a| a != 0));
                let (l, _) = make_normalized_ops(&raw).unwrap();
                let n = l.ambient();
                let e: Vec<u32> = (0..=n).map(|i| seed[i % seed.len()]).collect();
                let i = ExponentVector::new(e).unwrap();
                let d = i.degree() as i64;
                let aff = affine_weight_monomial(&i, &l).unwrap();
                prop_assert_eq!(aff, pairing(&i, &l).unwrap() - d * l.last());
                prop_assert!(aff >= 0);
                prop_assert_eq!(lambda_factor(&l), -((n as i64) + 1) * l.last());
                prop_assert!(lambda_factor(&l) > 0);
            }

            #[test]
            fn normalization_is_a_sorted_reduction(
                raw in (1usize..5).prop_flat_map(raw_zero_sum),
            ) {
                prop_assume!(raw.iter().any(|&a| a != 0));
                let (l, p) = make_normalized_ops(&raw).unwrap();
                let g = raw.iter().fold(0i64, |g, &a| g.gcd(&a));
                let reduced: Vec<i64> = raw.iter().map(|a| a / g).collect();
                prop_assert_eq!(p.apply(&reduced), l.weights().to_vec());
            }
        }
    }
}
