//! Dense exact matrices over the integers and the rationals.
//!
//! Everything here is arbitrary precision. Normal forms are computed with
//! elementary row/column operations, always pivoting on the entry of smallest
//! absolute value so intermediate growth stays modest at the sizes we care
//! about (rank up to about 16).

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<Rat>;

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::new(r, c, rows.iter().flatten().cloned().collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_vecs().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Rows `rows` (in the given order) of `self`.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let data = rows.iter().flat_map(|&i| self.row(i).iter().cloned()).collect();
        Matrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self[(i, j)].clone())).collect();
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T> Mul<&'a Matrix<T>> for &'a Matrix<T>
where
    T: Clone + Zero,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    type Output = Matrix<T>;
    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = &self[(i, k)];
                    if !a.is_zero() {
                        acc = acc + a * &rhs[(k, j)];
                    }
                }
                data.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: rhs.cols, data }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Matrix::from_rows(&rows)
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(|x| Rat::from_integer(x.clone()))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(source, j)] * k;
            self[(target, j)] += v;
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, source)] * k;
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl RatMatrix {
    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        self.map(|x| x * k)
    }

    /// `Some(integer matrix)` when every entry is an integer.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    /// Least common multiple of all denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

/// Multiplies a row vector by a matrix: `v·A`.
pub fn row_times(v: &[Rat], a: &RatMatrix) -> Vec<Rat> {
    assert_eq!(v.len(), a.rows());
    (0..a.cols())
        .map(|j| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| x * &a[(i, j)]).sum())
        .collect()
}

/// `A·v` for a column vector `v`.
pub fn times_col(a: &RatMatrix, v: &[Rat]) -> Vec<Rat> {
    assert_eq!(v.len(), a.cols());
    (0..a.rows()).map(|i| a.row(i).iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Bilinear form `xᵀ·G·y`.
pub fn bilinear(g: &RatMatrix, x: &[Rat], y: &[Rat]) -> Rat {
    x.iter().zip(times_col(g, y)).map(|(a, b)| a * b).sum()
}

// -- normal forms -- //

/// Row Hermite normal form: returns `(H, T)` with `H = T·A`, `T` unimodular.
///
/// Pivots of `H` are positive and entries above each pivot lie in `[0, pivot)`;
/// zero rows collect at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut t = IntMatrix::identity(a.rows());
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        loop {
            // smallest nonzero entry in column c at or below row r
            let pivot = (r..h.rows())
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&i, &j| h[(i, c)].abs().cmp(&h[(j, c)].abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            t.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..h.rows() {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                t.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            t.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, t)
}

/// Result of [`snf`]: `U·A·V = D`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn divisors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for k in 0..m.min(n) {
        loop {
            let pivot = (k..m)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[(i, j)].is_zero())
                .min_by(|&p, &q| d[p].abs().cmp(&d[q].abs()));
            let Some((pi, pj)) = pivot else { break };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut clean = true;
            for i in k + 1..m {
                let q = -d[(i, k)].div_floor(&d[(k, k)]);
                d.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                clean &= d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                let q = -d[(k, j)].div_floor(&d[(k, k)]);
                d.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                clean &= d[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold any offending row into row k and go again
            let offender = (k + 1..m).find(|&i| (k + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(k, k)])));
            match offender {
                Some(i) => {
                    d.add_row_multiple(k, i, &BigInt::one());
                    u.add_row_multiple(k, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    SmithDecomposition { d, u, v }
}

// -- determinants and inverses -- //

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMatrix) -> BigInt {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

/// Exact determinant of a rational matrix by Gaussian elimination.
pub fn det_rat(a: &RatMatrix) -> Rat {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut acc = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            m.swap_rows(k, p);
            acc = -acc;
        }
        let pivot = m[(k, k)].clone();
        acc *= &pivot;
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] / &pivot;
            for j in k..n {
                let v = &m[(k, j)] * &f;
                m[(i, j)] -= v;
            }
        }
    }
    acc
}

/// Exact inverse of a rational matrix by Gauss-Jordan elimination.
pub fn inverse_rat(a: &RatMatrix) -> Result<RatMatrix> {
    assert!(a.is_square(), "inverse of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut inv = RatMatrix::identity(n);
    for k in 0..n {
        let p = (k..n).find(|&i| !m[(i, k)].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap_rows(k, p);
        inv.swap_rows(k, p);
        let pivot = m[(k, k)].recip();
        for j in 0..n {
            m[(k, j)] *= &pivot;
            inv[(k, j)] *= &pivot;
        }
        for i in 0..n {
            if i == k || m[(i, k)].is_zero() {
                continue;
            }
            let f = m[(i, k)].clone();
            for j in 0..n {
                let a = &m[(k, j)] * &f;
                m[(i, j)] -= a;
                let b = &inv[(k, j)] * &f;
                inv[(i, j)] -= b;
            }
        }
    }
    Ok(inv)
}

pub fn inverse(a: &IntMatrix) -> Result<RatMatrix> {
    inverse_rat(&a.to_rat())
}

/// Square-root-free Cholesky factorization `G = L·diag(pivots)·Lᵀ` with `L`
/// unit lower triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct Ldl {
    pub lower: RatMatrix,
    pub pivots: Vec<Rat>,
}

impl Ldl {
    pub fn reconstruct(&self) -> RatMatrix {
        let d = RatMatrix::diagonal(&self.pivots);
        &(&self.lower * &d) * &self.lower.transpose()
    }
}

/// Succeeds exactly when `g` is positive definite.
pub fn rational_cholesky(g: &RatMatrix) -> Result<Ldl> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric(format!("{}x{} input", g.rows(), g.cols())));
    }
    let n = g.rows();
    let mut lower = RatMatrix::identity(n);
    let mut pivots: Vec<Rat> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = g[(j, j)].clone();
        for k in 0..j {
            dj -= &lower[(j, k)] * &lower[(j, k)] * &pivots[k];
        }
        if !dj.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for i in j + 1..n {
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                s -= &lower[(i, k)] * &lower[(j, k)] * &pivots[k];
            }
            lower[(i, j)] = s / &dj;
        }
        pivots.push(dj);
    }
    Ok(Ldl { lower, pivots })
}
