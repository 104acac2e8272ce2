//! Sparse degree-`d` forms, tuples of forms as points of a Grassmannian,
//! hyperplanes and projective points.
//!
//! Everything is exact over `Q`. Iteration orders follow the lexicographic
//! order on exponent vectors so outputs are reproducible.

mod plucker;
mod transform;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

pub(crate) use plucker::combinations;
pub use plucker::{plucker_support, PluckerSubset, PluckerSupport};
pub(crate) use transform::point_to_last_transform;
pub use transform::{move_point_to_last_coordinate, ProjectiveTransform, Transformable};

use crate::error::{Error, Result};
use crate::lattice::ExponentVector;
use crate::linalg;
use crate::Rational;

/// A nonzero homogeneous form of degree `d` in `x_0, ..., x_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HypersurfaceForm {
    n: usize,
    degree: u32,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl HypersurfaceForm {
    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn new(n: usize, degree: u32, terms: impl IntoIterator<Item = (ExponentVector, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.exponents().len() != n + 1 {
                return Err(Error::DimensionMismatch { expected: n + 1, got: e.exponents().len() });
            }
            if e.degree() != degree {
                return Err(Error::WrongDegree { exponents: e.exponents().to_vec(), degree });
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(Error::EmptyForm);
        }
        Ok(Self { n, degree, terms: map })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(n: usize, degree: u32, terms: &[(i64, &[u32])]) -> Result<Self> {
        let mut collected = Vec::with_capacity(terms.len());
        for &(c, e) in terms {
            collected.push((ExponentVector::new(e.to_vec())?, Rational::from_integer(c.into())));
        }
        Self::new(n, degree, collected)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// The monomials with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.n + 1 {
            return Err(Error::DimensionMismatch { expected: self.n + 1, got: point.len() });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &p) in point.iter().zip(e.exponents()) {
                if p > 0 {
                    term *= num_traits::pow(x.clone(), p as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// `sum_i z_i * forms_i`, or `EmptyForm` if everything cancels.
    pub fn linear_combination(forms: &[&HypersurfaceForm], z: &[Rational]) -> Result<Self> {
        let first = forms.first().ok_or(Error::EmptyTuple)?;
        if forms.len() != z.len() {
            return Err(Error::DimensionMismatch { expected: forms.len(), got: z.len() });
        }
        let mut terms: Vec<(ExponentVector, Rational)> = Vec::new();
        for (f, c) in forms.iter().zip(z) {
            if c.is_zero() {
                continue;
            }
            if f.n != first.n || f.degree != first.degree {
                return Err(Error::DimensionMismatch { expected: first.n + 1, got: f.n + 1 });
            }
            terms.extend(f.terms.iter().map(|(e, a)| (e.clone(), a * c)));
        }
        Self::new(first.n, first.degree, terms)
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        Self::new(self.n, self.degree, self.terms.iter().map(|(e, a)| (e.clone(), a * c)))
    }

    /// Rescales so that the lexicographically largest monomial has coefficient 1.
    pub fn monic(&self) -> Self {
        let lead = self.terms.values().next_back().unwrap().clone();
        self.scaled(&lead.recip()).expect("rescaling a nonzero form")
    }

    /// Whether the two forms agree up to a nonzero scalar.
    pub fn is_proportional(&self, other: &Self) -> bool {
        self.n == other.n && self.degree == other.degree && self.monic() == other.monic()
    }
}

impl fmt::Debug for HypersurfaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HypersurfaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{abs}*{e}")?;
            }
        }
        Ok(())
    }
}

/// A linear form `sum h_j x_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HyperplaneForm {
    coefficients: Vec<Rational>,
}

impl HyperplaneForm {
    pub fn new(coefficients: Vec<Rational>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: coefficients.len() });
        }
        if coefficients.iter().all(Zero::is_zero) {
            return Err(Error::ZeroHyperplane);
        }
        Ok(Self { coefficients })
    }

    /// The coordinate hyperplane `x_j = 0`.
    pub fn coordinate(n: usize, j: usize) -> Self {
        let coefficients = (0..=n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
        Self { coefficients }
    }

    pub fn ambient(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Indices `j` with `h_j != 0`.
    pub fn support(&self) -> Vec<usize> {
        self.coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, _)| j).collect()
    }

    pub fn as_form(&self) -> HypersurfaceForm {
        let n = self.ambient();
        let terms = self.support().into_iter().map(|j| (ExponentVector::power(n, j, 1), self.coefficients[j].clone()));
        HypersurfaceForm::new(n, 1, terms).expect("hyperplane is nonzero")
    }

    pub fn is_proportional(&self, other: &Self) -> bool {
        self.as_form().is_proportional(&other.as_form())
    }
}

impl fmt::Debug for HyperplaneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_form())
    }
}

/// A point of projective space, normalized so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint(Vec<Rational>);

impl ProjectivePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::ZeroPoint);
        };
        Ok(Self(coords.into_iter().map(|c| c / &lead).collect()))
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// The coordinate point with a 1 in position `j`.
    pub fn coordinate(n: usize, j: usize) -> Self {
        Self((0..=n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn ambient(&self) -> usize {
        self.0.len() - 1
    }

    /// `Some(j)` when this is the coordinate point `e_j`.
    pub fn coordinate_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// An ordered basis `f_1, ..., f_k` of a `k`-dimensional linear system of
/// degree-`d` forms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TuplePoint {
    n: usize,
    degree: u32,
    generators: Vec<HypersurfaceForm>,
}

impl TuplePoint {
    /// Checks that the generators share `n` and `d` and are linearly independent.
    pub fn new(generators: Vec<HypersurfaceForm>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyTuple)?;
        let (n, degree) = (first.n, first.degree);
        for g in &generators {
            if g.n != n {
                return Err(Error::DimensionMismatch { expected: n + 1, got: g.n + 1 });
            }
            if g.degree != degree {
                return Err(Error::InvalidConfig(format!("generators have mixed degrees {degree} and {}", g.degree)));
            }
        }
        let tuple = Self { n, degree, generators };
        let matrix = tuple.coefficient_matrix(&tuple.union_support());
        if let Some(relation) = linalg::left_kernel_vector(&matrix) {
            return Err(Error::DependentGenerators { relation });
        }
        Ok(tuple)
    }

    pub fn single(form: HypersurfaceForm) -> Self {
        Self { n: form.n, degree: form.degree, generators: vec![form] }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[HypersurfaceForm] {
        &self.generators
    }

    /// Sorted union of the generator supports.
    pub fn union_support(&self) -> Vec<ExponentVector> {
        let set: BTreeSet<ExponentVector> = self.generators.iter().flat_map(|g| g.terms.keys().cloned()).collect();
        set.into_iter().collect()
    }

    /// Rows are generators, columns are the given monomials.
    pub fn coefficient_matrix(&self, columns: &[ExponentVector]) -> Vec<Vec<Rational>> {
        self.generators.iter().map(|g| columns.iter().map(|e| g.coefficient(e)).collect()).collect()
    }

    /// The member `sum z_i f_i` of the linear system.
    pub fn member(&self, z: &[Rational]) -> Result<HypersurfaceForm> {
        if z.len() != self.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), got: z.len() });
        }
        if z.iter().all(Zero::is_zero) {
            return Err(Error::ZeroPoint);
        }
        let refs: Vec<&HypersurfaceForm> = self.generators.iter().collect();
        HypersurfaceForm::linear_combination(&refs, z)
    }

    /// The coordinates `z` of `f` in this basis, if `f` lies in the span.
    pub fn member_coordinates(&self, f: &HypersurfaceForm) -> Option<Vec<Rational>> {
        if f.n != self.n || f.degree != self.degree {
            return None;
        }
        let columns = self.union_support();
        for e in f.terms.keys() {
            if columns.binary_search(e).is_err() {
                return None;
            }
        }
        let matrix = self.coefficient_matrix(&columns);
        let target: Vec<Rational> = columns.iter().map(|e| f.coefficient(e)).collect();
        linalg::solve_combination(&matrix, &target)
    }

    /// All `(I_1, ..., I_k)` with `I_i` in `Supp(f_i)` and pairwise distinct,
    /// in lexicographic order of index tuples. Depends on the chosen basis.
    pub fn distinct_support_tuples(&self) -> DistinctSupportTuples {
        DistinctSupportTuples::new(self.generators.iter().map(|g| g.terms.keys().cloned().collect()).collect())
    }

    pub fn is_base_point(&self, p: &ProjectivePoint) -> Result<bool> {
        for g in &self.generators {
            if !g.evaluate(p.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for TuplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.generators.iter()).finish()
    }
}

/// Iterator over systems of distinct representatives of the generator supports.
pub struct DistinctSupportTuples {
    supports: Vec<Vec<ExponentVector>>,
    index: Vec<usize>,
    done: bool,
}

impl DistinctSupportTuples {
    fn new(supports: Vec<Vec<ExponentVector>>) -> Self {
        let done = supports.iter().any(|s| s.is_empty());
        let index = vec![0; supports.len()];
        Self { supports, index, done }
    }

    fn advance(&mut self) {
        for pos in (0..self.index.len()).rev() {
            self.index[pos] += 1;
            if self.index[pos] < self.supports[pos].len() {
                return;
            }
            self.index[pos] = 0;
        }
        self.done = true;
    }
}

impl Iterator for DistinctSupportTuples {
    type Item = Vec<ExponentVector>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let pick: Vec<&ExponentVector> = self.index.iter().zip(&self.supports).map(|(&i, s)| &s[i]).collect();
            let distinct = (0..pick.len()).all(|a| (a + 1..pick.len()).all(|b| pick[a] != pick[b]));
            let item = distinct.then(|| pick.into_iter().cloned().collect());
            self.advance();
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    pub(crate) fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec()).unwrap()
    }

    pub(crate) fn form(terms: &[(i64, &[u32])]) -> HypersurfaceForm {
        let n = terms[0].1.len() - 1;
        let d = terms[0].1.iter().sum();
        HypersurfaceForm::from_int_terms(n, d, terms).unwrap()
    }

    pub(crate) fn tuple(gens: &[&[(i64, &[u32])]]) -> TuplePoint {
        TuplePoint::new(gens.iter().map(|g| form(g)).collect()).unwrap()
    }

    #[test]
    fn support_examples() {
        let f = form(&[(1, &[3, 0, 0]), (1, &[0, 2, 1])]);
        assert_eq!(f.support(), [ev(&[3, 0, 0]), ev(&[0, 2, 1])].into_iter().collect());
        let g = form(&[(2, &[3, 0, 0])]);
        assert_eq!(g.support().len(), 1);
        let cancelled = HypersurfaceForm::from_int_terms(2, 3, &[(1, &[3, 0, 0]), (-1, &[3, 0, 0])]);
        assert_eq!(cancelled, Err(Error::EmptyForm));
        assert!(matches!(HypersurfaceForm::from_int_terms(2, 3, &[(1, &[2, 0, 0])]), Err(Error::WrongDegree { .. })));
    }

    #[test]
    fn member_examples() {
        let t = tuple(&[&[(1, &[3, 0, 0]), (1, &[2, 1, 0])], &[(1, &[3, 0, 0]), (-1, &[2, 1, 0])]]);
        assert_eq!(t.member(&[q(1), q(1)]).unwrap(), form(&[(2, &[3, 0, 0])]));

        let t = tuple(&[&[(1, &[3, 0, 0])], &[(1, &[0, 3, 0])]]);
        assert_eq!(t.member(&[q(1), q(0)]).unwrap(), form(&[(1, &[3, 0, 0])]));

        let t = tuple(&[&[(1, &[0, 3, 0]), (1, &[0, 0, 3])], &[(1, &[0, 3, 0]), (1, &[0, 0, 3]), (1, &[3, 0, 0])]]);
        assert_eq!(t.member(&[q(-1), q(1)]).unwrap(), form(&[(1, &[3, 0, 0])]));
        assert_eq!(t.member(&[q(0), q(0)]), Err(Error::ZeroPoint));
    }

    #[test]
    fn dependent_generators_are_rejected_with_relation() {
        let err = TuplePoint::new(vec![form(&[(1, &[3, 0, 0])]), form(&[(2, &[3, 0, 0])])]);
        let Err(Error::DependentGenerators { relation }) = err else { panic!("{err:?}") };
        assert_eq!(&relation[0] * q(1) + &relation[1] * q(2), q(0));
    }

    #[test]
    fn distinct_tuples_examples() {
        let (a, b, c) = (&[3u32, 0, 0][..], &[0u32, 3, 0][..], &[0u32, 0, 3][..]);
        let t = tuple(&[&[(1, a), (1, b)], &[(1, b), (2, c)]]);
        let got: Vec<_> = t.distinct_support_tuples().collect();
        // supports are sorted lexicographically: B < A and C < B
        let expect: BTreeSet<Vec<ExponentVector>> =
            [vec![ev(a), ev(b)], vec![ev(a), ev(c)], vec![ev(b), ev(c)]].into_iter().collect();
        assert_eq!(got.len(), 3);
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), expect);

        let t = tuple(&[&[(1, a), (1, b)]]);
        assert_eq!(t.distinct_support_tuples().count(), 2);

        let t = tuple(&[&[(1, a), (1, b)], &[(1, a), (2, b)]]);
        let got: BTreeSet<_> = t.distinct_support_tuples().collect();
        assert_eq!(got, [vec![ev(a), ev(b)], vec![ev(b), ev(a)]].into_iter().collect());
    }

    #[test]
    fn base_point_examples() {
        let t = tuple(&[&[(1, &[2, 1, 0])], &[(1, &[1, 2, 0])]]);
        assert!(t.is_base_point(&ProjectivePoint::from_ints(&[0, 0, 1]).unwrap()).unwrap());
        let t = tuple(&[&[(1, &[3, 0, 0])], &[(1, &[0, 3, 0])]]);
        assert!(t.is_base_point(&ProjectivePoint::from_ints(&[0, 0, 1]).unwrap()).unwrap());
        let t = tuple(&[&[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3])], &[(1, &[1, 1, 1])]]);
        assert!(!t.is_base_point(&ProjectivePoint::from_ints(&[1, 0, 0]).unwrap()).unwrap());
    }

    #[test]
    fn member_coordinates_recovers_z() {
        let t = tuple(&[&[(1, &[3, 0, 0]), (1, &[0, 3, 0])], &[(1, &[0, 3, 0]), (1, &[0, 0, 3])]]);
        let f = t.member(&[q(2), q(-3)]).unwrap();
        assert_eq!(t.member_coordinates(&f), Some(vec![q(2), q(-3)]));
        assert_eq!(t.member_coordinates(&form(&[(1, &[1, 1, 1])])), None);
        assert_eq!(t.member_coordinates(&form(&[(1, &[3, 0, 0])])), None);
    }

    #[test]
    fn projective_point_is_canonical() {
        let p = ProjectivePoint::from_ints(&[0, 2, 4]).unwrap();
        assert_eq!(p.coords(), &[q(0), q(1), q(2)]);
        assert_eq!(ProjectivePoint::from_ints(&[0, 0]), Err(Error::ZeroPoint));
        assert_eq!(ProjectivePoint::from_ints(&[0, 0, 5]).unwrap().coordinate_index(), Some(2));
    }

    #[test]
    fn display_forms() {
        let f = form(&[(1, &[0, 2, 1]), (-1, &[3, 0, 0])]);
        assert_eq!(f.to_string(), "-x0^3 + x1^2*x2");
        assert_eq!(form(&[(2, &[1, 1, 1]), (-1, &[0, 0, 3])]).to_string(), "2*x0*x1*x2 - x2^3");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        type Terms = Vec<(i64, Vec<u32>)>;

        fn small_tuple() -> impl Strategy<Value = (Vec<Terms>, Vec<i64>)> {
            let mono = prop_oneof![
                Just(vec![3, 0, 0]),
                Just(vec![2, 1, 0]),
                Just(vec![1, 1, 1]),
                Just(vec![0, 3, 0]),
                Just(vec![0, 1, 2]),
                Just(vec![0, 0, 3]),
            ];
            let gen = proptest::collection::vec((-3i64..=3, mono), 1..4);
            (proptest::collection::vec(gen, 2), proptest::collection::vec(-4i64..=4, 2))
        }

        proptest! {
            #[test]
            fn members_live_in_the_span((gens, z) in small_tuple()) {
                let forms: Result<Vec<HypersurfaceForm>> = gens
                    .iter()
                    .map(|g| {
                        let terms: Vec<(i64, &[u32])> = g.iter().map(|(c, e)| (*c, e.as_slice())).collect();
                        HypersurfaceForm::from_int_terms(2, 3, &terms)
                    })
                    .collect();
                let Ok(forms) = forms else { return Ok(()) };
                let Ok(t) = TuplePoint::new(forms) else { return Ok(()) };
                let zq: Vec<Rational> = z.iter().map(|&c| q(c)).collect();
                let Ok(m) = t.member(&zq) else { return Ok(()) };
                let union: BTreeSet<_> = t.union_support().into_iter().collect();
                prop_assert!(m.support().is_subset(&union));
                prop_assert_eq!(t.member_coordinates(&m), Some(zq));
            }
        }
    }
}
