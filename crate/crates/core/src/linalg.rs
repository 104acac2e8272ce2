//! Small exact linear algebra over `Q` and `Z`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

/// Row echelon data of a rational matrix.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Reduced row echelon form, only the nonzero rows.
    pub rows: Vec<Vec<Rational>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination, scanning columns in the order given by `column_order`.
pub fn rref_with_order(matrix: &[Vec<Rational>], column_order: &[usize]) -> Echelon {
    let mut rows: Vec<Vec<Rational>> = matrix.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in column_order {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            let (pivot_row, other) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (x, y) in other.iter_mut().zip(pivot_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

pub fn rref(matrix: &[Vec<Rational>]) -> Echelon {
    let cols = matrix.first().map_or(0, |r| r.len());
    rref_with_order(matrix, &(0..cols).collect::<Vec<_>>())
}

pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    rref(matrix).rank()
}

pub fn transpose(matrix: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = matrix.first().map_or(0, |r| r.len());
    (0..cols).map(|c| matrix.iter().map(|row| row[c].clone()).collect()).collect()
}

/// A nonzero vector of the right kernel, if one exists.
pub fn kernel_vector(matrix: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let cols = matrix.first().map_or(0, |r| r.len());
    let ech = rref(matrix);
    let free = (0..cols).find(|c| !ech.pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        v[p] = -row[free].clone();
    }
    Some(v)
}

/// A nonzero `z` with `sum_i z_i * row_i = 0`, if the rows are dependent.
pub fn left_kernel_vector(matrix: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    if matrix.is_empty() {
        return None;
    }
    kernel_vector(&transpose(matrix))
}

/// Solves `sum_i z_i * row_i = target` for `z`.
pub fn solve_combination(matrix: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = matrix.len();
    // augmented system: columns are rows of `matrix`, rhs is target
    let aug: Vec<Vec<Rational>> = (0..target.len())
        .map(|c| {
            let mut r: Vec<Rational> = matrix.iter().map(|row| row[c].clone()).collect();
            r.push(target[c].clone());
            r
        })
        .collect();
    let ech = rref(&aug);
    if ech.pivots.contains(&k) {
        return None;
    }
    let mut z = vec![Rational::zero(); k];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        z[p] = row[k].clone();
    }
    Some(z)
}

pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let (top, bottom) = m.split_at_mut(i);
            for (x, y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn inverse(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let aug: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let ech = rref_with_order(&aug, &(0..n).collect::<Vec<_>>());
    if ech.rank() < n {
        return None;
    }
    Some(ech.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(Rational::zero(), |acc, t| acc + &row[t] * &b[t][j])).collect())
        .collect()
}

/// Fraction-free (Bareiss) determinant of a small integer matrix.
pub fn int_determinant(matrix: &[Vec<i128>]) -> Option<i128> {
    let n = matrix.len();
    if n == 0 {
        return Some(1);
    }
    let mut m = matrix.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Some(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = num / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

/// The kernel generator of an `r x (r + 1)` integer matrix of full rank, as
/// the vector of signed maximal minors divided by their gcd. `Some(None)`
/// means the rank is deficient; `None` reports overflow.
pub fn int_kernel_ray(rows: &[Vec<i64>]) -> Option<Option<Vec<i64>>> {
    let r = rows.len();
    let cols = r + 1;
    debug_assert!(rows.iter().all(|row| row.len() == cols));
    let mut v = Vec::with_capacity(cols);
    for skip in 0..cols {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x as i128).collect())
            .collect();
        let det = int_determinant(&minor)?;
        v.push(if skip % 2 == 0 { det } else { -det });
    }
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return Some(None);
    }
    let mut out = Vec::with_capacity(cols);
    for x in v {
        out.push(i64::try_from(x / g).ok()?);
    }
    Some(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn qm(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let m = qm(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, qm(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&qm(&[&[1, 2], &[2, 4]])).is_none());
        assert_eq!(determinant(&qm(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), q(-1));
    }

    #[test]
    fn kernels() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let z = left_kernel_vector(&m).unwrap();
        assert_eq!(&z[0] * q(1) + &z[1] * q(2), q(0));
        assert!(left_kernel_vector(&qm(&[&[1, 0], &[0, 1]])).is_none());
        let target = vec![q(3), q(6), q(9)];
        let m2 = qm(&[&[1, 2, 3], &[0, 1, 1]]);
        assert_eq!(solve_combination(&m2, &target), Some(vec![q(3), q(0)]));
        assert_eq!(solve_combination(&m2, &[q(0), q(0), q(1)]), None);
    }

    #[test]
    fn integer_kernel_ray() {
        // a1 = 0 together with a0 + a1 + a2 = 0
        let ray = int_kernel_ray(&[vec![0, 1, 0], vec![1, 1, 1]]).unwrap().unwrap();
        assert!(ray == vec![1, 0, -1] || ray == vec![-1, 0, 1]);
        assert_eq!(int_kernel_ray(&[vec![1, 1, 1], vec![2, 2, 2]]).unwrap(), None);
        assert_eq!(int_determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]), Some(0));
        assert_eq!(int_determinant(&[vec![0, 1], vec![1, 0]]), Some(-1));
    }
}
