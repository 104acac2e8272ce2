use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{HyperplaneForm, HypersurfaceForm, ProjectivePoint, TuplePoint};
use crate::error::{Error, Result};
use crate::lattice::{ExponentVector, Permutation};
use crate::linalg;
use crate::Rational;

/// An invertible `(n+1) x (n+1)` rational matrix acting by `(A.f)(x) = f(Ax)`.
///
/// The determinant is not normalized to 1; all predicates here are invariant
/// under rescaling `A`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveTransform {
    matrix: Vec<Vec<Rational>>,
}

impl ProjectiveTransform {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let size = matrix.len();
        if size < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: size });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != size) {
            return Err(Error::DimensionMismatch { expected: size, got: row.len() });
        }
        if linalg::determinant(&matrix).is_zero() {
            return Err(Error::SingularTransform);
        }
        Ok(Self { matrix })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..=n)
            .map(|i| (0..=n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self { matrix }
    }

    /// The substitution `x_i -> x_{perm(i)}`, which sends `x^I` to `x^{perm(I)}`.
    pub fn permutation(perm: &Permutation) -> Self {
        let size = perm.len();
        let matrix = (0..size)
            .map(|i| (0..size).map(|j| if perm.image(i) == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self { matrix }
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn ambient(&self) -> usize {
        self.matrix.len() - 1
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.ambient())
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: linalg::inverse(&self.matrix).expect("transform is invertible") }
    }

    /// `self` applied after `other`: `(A.(B.f))(x) = f(BAx)`, i.e. the matrix `B*A`.
    pub fn then(&self, other: &Self) -> Self {
        Self { matrix: linalg::mat_mul(&other.matrix, &self.matrix) }
    }

    /// The point `A p`.
    pub fn map_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let v: Vec<Rational> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(p.coords()).fold(Rational::zero(), |acc, (a, x)| acc + a * x))
            .collect();
        ProjectivePoint::new(v).expect("invertible map keeps points nonzero")
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if self.ambient() != n {
            return Err(Error::DimensionMismatch { expected: n + 1, got: self.matrix.len() });
        }
        Ok(())
    }
}

impl std::fmt::Debug for ProjectiveTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> =
            self.matrix.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Things the projective linear group acts on.
pub trait Transformable: Sized {
    fn transform(&self, a: &ProjectiveTransform) -> Result<Self>;
}

type Poly = BTreeMap<Vec<u32>, Rational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl Transformable for HypersurfaceForm {
    fn transform(&self, a: &ProjectiveTransform) -> Result<Self> {
        a.check_ambient(self.n)?;
        let size = self.n + 1;
        // (Ax)_j as a linear polynomial
        let linear: Vec<Poly> = a
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| {
                        let mut e = vec![0; size];
                        e[i] = 1;
                        (e, c.clone())
                    })
                    .collect()
            })
            .collect();
        let one: Poly = [(vec![0; size], Rational::one())].into_iter().collect();
        let mut powers: Vec<Vec<Poly>> = linear.iter().map(|_| vec![one.clone()]).collect();
        for (j, pw) in powers.iter_mut().enumerate() {
            for _ in 0..self.degree {
                let next = poly_mul(pw.last().unwrap(), &linear[j]);
                pw.push(next);
            }
        }
        let mut acc = Poly::new();
        for (e, c) in &self.terms {
            let mut term: Poly = [(vec![0; size], c.clone())].into_iter().collect();
            for (j, &p) in e.exponents().iter().enumerate() {
                if p > 0 {
                    term = poly_mul(&term, &powers[j][p as usize]);
                }
            }
            for (e2, c2) in term {
                *acc.entry(e2).or_insert_with(Rational::zero) += c2;
            }
        }
        let terms = acc.into_iter().map(|(e, c)| (ExponentVector::new(e).expect("nonempty"), c));
        HypersurfaceForm::new(self.n, self.degree, terms).map_err(|_| Error::SingularTransform)
    }
}

impl Transformable for TuplePoint {
    fn transform(&self, a: &ProjectiveTransform) -> Result<Self> {
        let gens = self.generators.iter().map(|g| g.transform(a)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n: self.n, degree: self.degree, generators: gens })
    }
}

impl Transformable for HyperplaneForm {
    fn transform(&self, a: &ProjectiveTransform) -> Result<Self> {
        a.check_ambient(self.ambient())?;
        let size = self.coefficients.len();
        let coefficients = (0..size)
            .map(|i| (0..size).fold(Rational::zero(), |acc, j| acc + &self.coefficients[j] * &a.matrix[j][i]))
            .collect();
        HyperplaneForm::new(coefficients)
    }
}

/// Returns `A` with `A(0:...:0:1) = p` together with `A.T`, so that `p`
/// becomes the last coordinate point of the transformed tuple.
///
/// Coordinate points give a transposition; otherwise the last column of the
/// identity is replaced by `p`, after swapping in `e_n` when `p_n = 0`.
pub fn move_point_to_last_coordinate(t: &TuplePoint, p: &ProjectivePoint) -> Result<(TuplePoint, ProjectiveTransform)> {
    let a = point_to_last_transform(p);
    a.check_ambient(t.ambient())?;
    Ok((t.transform(&a)?, a))
}

pub(crate) fn point_to_last_transform(p: &ProjectivePoint) -> ProjectiveTransform {
    let n = p.ambient();
    let mut m = ProjectiveTransform::identity(n).matrix;
    let j = (0..=n).rev().find(|&i| !p.coords()[i].is_zero()).expect("point is nonzero");
    if j != n {
        // column j becomes e_n
        for (r, row) in m.iter_mut().enumerate() {
            row[j] = if r == n { Rational::one() } else { Rational::zero() };
        }
    }
    for (r, row) in m.iter_mut().enumerate() {
        row[n] = p.coords()[r].clone();
    }
    ProjectiveTransform::new(m).expect("completion of a nonzero point is invertible")
}

#[cfg(test)]
mod tests {
    use super::super::tests::{form, q, tuple};
    use super::*;

    #[test]
    fn permutation_relabels_monomials() {
        let f = form(&[(1, &[2, 1, 0])]);
        let swap = ProjectiveTransform::permutation(&Permutation::new(vec![1, 0, 2]).unwrap());
        assert_eq!(f.transform(&swap).unwrap(), form(&[(1, &[1, 2, 0])]));
        let g = form(&[(1, &[2, 0])]);
        assert_eq!(g.transform(&ProjectiveTransform::identity(1)).unwrap(), g);
    }

    #[test]
    fn substitution_expands_exactly() {
        // (x0 + x1)^2 under x0 -> x0 - x1
        let f = form(&[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])]);
        let a = ProjectiveTransform::from_ints(&[&[1, -1], &[0, 1]]).unwrap();
        assert_eq!(f.transform(&a).unwrap(), form(&[(1, &[2, 0])]));
    }

    #[test]
    fn singular_matrices_are_rejected() {
        assert_eq!(ProjectiveTransform::from_ints(&[&[1, 2], &[2, 4]]), Err(Error::SingularTransform));
    }

    #[test]
    fn round_trip_through_inverse() {
        let f = form(&[(1, &[3, 0, 0]), (-2, &[1, 1, 1]), (5, &[0, 1, 2])]);
        let a = ProjectiveTransform::from_ints(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 1]]).unwrap();
        let back = f.transform(&a).unwrap().transform(&a.inverse()).unwrap();
        assert_eq!(back, f);
        let h = HyperplaneForm::new(vec![q(1), q(0), q(2)]).unwrap();
        assert_eq!(h.transform(&a).unwrap().transform(&a.inverse()).unwrap(), h);
    }

    #[test]
    fn move_point_examples() {
        let t = tuple(&[&[(1, &[2, 1, 0])], &[(1, &[1, 2, 0])]]);
        let (_, a) = move_point_to_last_coordinate(&t, &ProjectivePoint::from_ints(&[0, 0, 1]).unwrap()).unwrap();
        assert!(a.is_identity());

        let (_, a) = move_point_to_last_coordinate(&t, &ProjectivePoint::from_ints(&[1, 0, 0]).unwrap()).unwrap();
        let swap = ProjectiveTransform::permutation(&Permutation::new(vec![2, 1, 0]).unwrap());
        assert_eq!(a, swap);

        // pencil through (1:1:1)
        let t = tuple(&[&[(1, &[1, 0, 0]), (-1, &[0, 1, 0])], &[(1, &[0, 1, 0]), (-1, &[0, 0, 1])]]);
        let p = ProjectivePoint::from_ints(&[1, 1, 1]).unwrap();
        let (moved, a) = move_point_to_last_coordinate(&t, &p).unwrap();
        assert_eq!(a.map_point(&ProjectivePoint::coordinate(2, 2)), p);
        assert!(moved.is_base_point(&ProjectivePoint::coordinate(2, 2)).unwrap());

        let p = ProjectivePoint::from_ints(&[1, 1, 0]).unwrap();
        let a = point_to_last_transform(&p);
        assert_eq!(a.map_point(&ProjectivePoint::coordinate(2, 2)), p);
    }

    #[test]
    fn composition_order() {
        let f = form(&[(1, &[2, 1, 0]), (1, &[0, 0, 3])]);
        let a = ProjectiveTransform::from_ints(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let b = ProjectiveTransform::permutation(&Permutation::new(vec![2, 0, 1]).unwrap());
        let stepwise = f.transform(&b).unwrap().transform(&a).unwrap();
        assert_eq!(f.transform(&a.then(&b)).unwrap(), stepwise);
    }
}
