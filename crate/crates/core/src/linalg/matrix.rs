use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{IndexSet, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer-entry convenience constructor, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(rows.len(), c, |i, j| Rational::from_integer(rows[i][j].into()))
    }

    /// Entries given as `(numerator, denominator)` pairs.
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Self {
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(rows.len(), c, |i, j| {
            let (p, q) = rows[i][j];
            Rational::new(p.into(), q.into())
        })
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Submatrix indexed by 1-based index sets, with range checking.
    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        check_range(rows, self.rows)?;
        check_range(cols, self.cols)?;
        Ok(self.select(&rows.zero_based(), &cols.zero_based()))
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[RationalMatrix]) -> Result<Self> {
        let cols = parts.first().map_or(0, |p| p.cols);
        if parts.iter().any(|p| p.cols != cols) {
            return Err(Error::ShapeMismatch("vstack with unequal column counts".into()));
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let data = parts.iter().flat_map(|p| p.data.iter().cloned()).collect();
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn hstack(parts: &[RationalMatrix]) -> Result<Self> {
        let rows = parts.first().map_or(0, |p| p.rows);
        if parts.iter().any(|p| p.rows != rows) {
            return Err(Error::ShapeMismatch("hstack with unequal row counts".into()));
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        Ok(Self::from_fn(rows, cols, |i, mut j| {
            for p in parts {
                if j < p.cols {
                    return p[(i, j)].clone();
                }
                j -= p.cols;
            }
            unreachable!()
        }))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| rational_to_f64(&self[(i, j)]))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination on the
    /// row-scaled integer matrix.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scale *= l;
        }
        Ok(Rational::new(bareiss(&mut a), scale))
    }

    pub fn minor(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Rational> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch(format!(
                "{} rows vs {} columns",
                rows.len(),
                cols.len()
            )));
        }
        self.submatrix(rows, cols)?.det()
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(Error::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.axpy_row(r, col, &f);
                    inv.axpy_row(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, col)].recip();
            a.scale_row(r, &inv);
            for i in 0..self.rows {
                if i != r && !a[(i, col)].is_zero() {
                    let f = a[(i, col)].clone();
                    a.axpy_row(i, r, &f);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the column space, as the nonzero columns of the reduced
    /// column echelon form (leftmost pivots first).
    pub fn column_space_basis(&self) -> Self {
        let (r, pivots) = self.transpose().rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..r.cols).collect();
        r.select(&keep, &all).transpose()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &Rational) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = &*x * s;
        }
    }

    /// row[dst] -= f * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, f: &Rational) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let v = s * f;
            let x = &mut self.data[dst * self.cols + j];
            *x = &*x - v;
        }
    }
}

/// Fraction-free Gaussian elimination; consumes the working matrix.
fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn check_range(set: &IndexSet, bound: usize) -> Result<()> {
    match set.iter().find(|&i| i > bound) {
        Some(index) => Err(Error::IndexOutOfRange { index, bound }),
        None => Ok(()),
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflow f64; fall back to scaled division
        let bits = x.numer().bits().max(x.denom().bits()) as i64 - 1000;
        let shift = bits.max(0) as u32;
        let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

pub fn sign_of(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;
    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;
    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn det_examples() {
        assert_eq!(RationalMatrix::identity(3).det().unwrap(), rat(1, 1));
        let k = RationalMatrix::from_i64(&[&[1, 1, 0], &[1, -1, 1], &[0, 1, 1]]);
        assert_eq!(k.det().unwrap(), rat(-3, 1));
        let l = RationalMatrix::from_i64(&[&[1, 1], &[-1, 1]]);
        assert_eq!(l.det().unwrap(), rat(2, 1));
        assert_eq!(RationalMatrix::zeros(0, 0).det().unwrap(), rat(1, 1));
    }

    #[test]
    fn det_non_square() {
        let m = RationalMatrix::zeros(2, 3);
        assert_eq!(m.det(), Err(Error::NonSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn det_with_fractions_and_pivoting() {
        // [[0, 1/2], [1/3, 5]] -> -1/6
        let m = RationalMatrix::from_ratios(&[&[(0, 1), (1, 2)], &[(1, 3), (5, 1)]]);
        assert_eq!(m.det().unwrap(), rat(-1, 6));
    }

    #[test]
    fn minor_examples() {
        let i3 = RationalMatrix::identity(3);
        let s = IndexSet::new(vec![1, 2], 3).unwrap();
        assert_eq!(i3.minor(&s, &s).unwrap(), rat(1, 1));
        let e = IndexSet::empty();
        assert_eq!(i3.minor(&e, &e).unwrap(), rat(1, 1));
        let bad = IndexSet::new(vec![1], 3).unwrap();
        assert!(matches!(i3.minor(&s, &bad), Err(Error::SizeMismatch(_))));
        let far = IndexSet::new(vec![4], 4).unwrap();
        assert!(matches!(
            i3.minor(&bad, &far),
            Err(Error::IndexOutOfRange { index: 4, bound: 3 })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            RationalMatrix::identity(4).inverse().unwrap(),
            RationalMatrix::identity(4)
        );
        let two = RationalMatrix::from_i64(&[&[2]]);
        assert_eq!(two.inverse().unwrap(), RationalMatrix::from_ratios(&[&[(1, 2)]]));
        let sing = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.inverse(), Err(Error::Singular));
        let k = RationalMatrix::from_i64(&[&[1, 1, 0], &[1, -1, 1], &[0, 1, 1]]);
        assert_eq!(&k * &k.inverse().unwrap(), RationalMatrix::identity(3));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(RationalMatrix::identity(5).rank(), 5);
        let a_r = RationalMatrix::from_ratios(&[
            &[(2, 3), (2, 3), (0, 1)],
            &[(1, 3), (1, 3), (0, 1)],
            &[(-1, 3), (-1, 3), (0, 1)],
        ]);
        assert_eq!(a_r.rank(), 1);
    }

    #[test]
    fn column_space_basis_spans() {
        let m = RationalMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        let b = m.column_space_basis();
        assert_eq!(b.cols(), 2);
        assert_eq!(RationalMatrix::hstack(&[b, m]).unwrap().rank(), 2);
    }
}
