//! Exact linear algebra over the rationals.
//!
//! Everything here works with [`Rational`] entries and never rounds. Subspaces
//! are kept in reduced row-echelon form, so two equal subspaces always compare
//! equal entry by entry.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::LinalgError;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` into a rational. The denominator must be positive.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let src = src.trim();
    match src.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if !d.is_positive() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => src.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Dense rational matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must share `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        echelon(self).1.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Gauss-Jordan elimination. Returns the reduced matrix (zero rows kept at the
/// bottom) and its pivot columns.
fn echelon(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut r = m.clone();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..r.cols {
        if lead == r.rows {
            break;
        }
        let Some(found) = (lead..r.rows).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        r.swap_rows(lead, found);
        let inv = r[(lead, col)].recip();
        for j in col..r.cols {
            let scaled = &r[(lead, j)] * &inv;
            r[(lead, j)] = scaled;
        }
        for i in 0..r.rows {
            if i == lead || r[(i, col)].is_zero() {
                continue;
            }
            let factor = r[(i, col)].clone();
            for j in col..r.cols {
                if r[(lead, j)].is_zero() {
                    continue;
                }
                let delta = &factor * &r[(lead, j)];
                r[(i, j)] -= delta;
            }
        }
        pivots.push(col);
        lead += 1;
    }
    (r, pivots)
}

/// Reduced row-echelon form: the pivot is the first nonzero column, rows are
/// scanned top-down.
pub fn rref(m: &Matrix) -> Matrix {
    echelon(m).0
}

/// Basis of `{ v : m v = 0 }` in canonical form.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let (r, pivots) = echelon(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = zero_vec(m.cols);
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[(i, free)].clone();
        }
        vectors.push(v);
    }
    Subspace::from_vectors(m.cols, vectors)
}

/// A solution set `particular + span(homogeneous)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Rational>,
    pub homogeneous: Subspace,
}

/// Solves `m x = b`. The particular solution has every free variable set to
/// zero. Returns `Ok(None)` for an inconsistent system.
pub fn solve(m: &Matrix, b: &[Rational]) -> Result<Option<Solution>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let (r, pivots) = echelon(&aug);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut particular = zero_vec(m.cols);
    for (i, &p) in pivots.iter().enumerate() {
        particular[p] = r[(i, m.cols)].clone();
    }
    Ok(Some(Solution {
        particular,
        homogeneous: kernel_basis(m),
    }))
}

/// A linear subspace of `Q^n`, stored as the nonzero rows of an RREF matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Self {
        let m = Matrix::from_rows(ambient_dim, vectors);
        Subspace::row_space(&m)
    }

    pub fn row_space(m: &Matrix) -> Self {
        let (r, pivots) = echelon(m);
        let rank = pivots.len();
        let basis = Matrix::from_rows(m.cols, (0..rank).map(|i| r.row(i).to_vec()).collect());
        Subspace {
            ambient_dim: m.cols,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` against the stored basis, or `None` when `v` is not
    /// in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
        self.check_len(v.len())?;
        // RREF rows carry a 1 at their own pivot and 0 at every other pivot.
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    residual[j] -= c * b;
                }
            }
        }
        Ok(is_zero_vec(&residual).then_some(coords))
    }

    pub fn member(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_len(other.ambient_dim)?;
        let mut rows = self.vectors();
        rows.extend(other.vectors());
        Ok(Subspace::from_vectors(self.ambient_dim, rows))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_len(other.ambient_dim)?;
        // Solve sum a_i u_i - sum b_j w_j = 0 and map the `a` part back.
        let n = self.dim() + other.dim();
        let mut m = Matrix::zeros(self.ambient_dim, n);
        for (i, row) in self.basis.row_vectors().into_iter().enumerate() {
            for (r, x) in row.into_iter().enumerate() {
                m[(r, i)] = x;
            }
        }
        for (j, row) in other.basis.row_vectors().into_iter().enumerate() {
            for (r, x) in row.into_iter().enumerate() {
                m[(r, self.dim() + j)] = -x;
            }
        }
        let vectors = kernel_basis(&m)
            .vectors()
            .into_iter()
            .map(|k| {
                let mut v = zero_vec(self.ambient_dim);
                for (i, a) in k.iter().take(self.dim()).enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (r, b) in self.basis.row(i).iter().enumerate() {
                        v[r] += a * b;
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::from_vectors(self.ambient_dim, vectors))
    }

    fn check_len(&self, len: usize) -> Result<(), LinalgError> {
        if len == self.ambient_dim {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: len,
            })
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(Q^{}, {:?})", self.ambient_dim, self.basis)
    }
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    a.sum(b)
}

pub fn member(s: &Subspace, v: &[Rational]) -> Result<bool, LinalgError> {
    s.member(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_examples() {
        assert_eq!(
            rref(&Matrix::from_i64(&[&[2, 4], &[1, 2]])),
            Matrix::from_i64(&[&[1, 2], &[0, 0]])
        );
        assert_eq!(rref(&Matrix::identity(3)), Matrix::identity(3));
        assert_eq!(
            rref(&Matrix::from_i64(&[&[0, 1], &[1, 0]])),
            Matrix::identity(2)
        );
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&Matrix::from_i64(&[&[1, 2]]));
        assert_eq!(k.vectors(), vec![vec![rat(1), ratio(-1, 2)]]);
        assert_eq!(kernel_basis(&Matrix::identity(3)).dim(), 0);
        assert_eq!(kernel_basis(&Matrix::zeros(2, 2)), Subspace::full(2));
    }

    #[test]
    fn solve_examples() {
        let s = solve(&Matrix::identity(2), &v(&[3, 5])).unwrap().unwrap();
        assert_eq!(s.particular, v(&[3, 5]));
        assert_eq!(s.homogeneous.dim(), 0);

        let s = solve(&Matrix::from_i64(&[&[1, 1]]), &v(&[2]))
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, v(&[2, 0]));
        assert_eq!(s.homogeneous, Subspace::from_vectors(2, vec![v(&[1, -1])]));

        assert_eq!(solve(&Matrix::from_i64(&[&[0]]), &v(&[1])).unwrap(), None);
        assert!(solve(&Matrix::identity(2), &v(&[1])).is_err());
    }

    #[test]
    fn member_examples() {
        let plane = Subspace::full(2);
        assert!(plane.member(&v(&[1, 1])).unwrap());
        let line = Subspace::from_vectors(2, vec![v(&[0, 1])]);
        assert!(!line.member(&v(&[1, 0])).unwrap());
        assert!(Subspace::zero(2).member(&v(&[0, 0])).unwrap());
        assert!(line.member(&v(&[1, 0, 0])).is_err());
    }

    #[test]
    fn sum_examples() {
        let x = Subspace::from_vectors(2, vec![v(&[1, 0])]);
        let y = Subspace::from_vectors(2, vec![v(&[0, 1])]);
        assert_eq!(subspace_sum(&x, &y).unwrap(), Subspace::full(2));
        assert_eq!(subspace_sum(&x, &Subspace::zero(2)).unwrap(), x);
        let d1 = Subspace::from_vectors(2, vec![v(&[1, 1])]);
        let d2 = Subspace::from_vectors(2, vec![v(&[2, 2])]);
        assert_eq!(subspace_sum(&d1, &d2).unwrap(), d1);
        assert!(subspace_sum(&x, &Subspace::zero(3)).is_err());
    }

    #[test]
    fn intersection_of_planes_in_space() {
        let a = Subspace::from_vectors(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::from_vectors(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(
            a.intersection(&b).unwrap(),
            Subspace::from_vectors(3, vec![v(&[0, 1, 0])])
        );
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational(" 7 "), Some(rat(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(format_rational(&ratio(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat(0)), "0");
    }
}
