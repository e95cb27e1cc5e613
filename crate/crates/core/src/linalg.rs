//! Exact dense linear algebra over `BigInt` and `BigRational`.
//!
//! Everything here is exact. Integer determinants go through fraction-free
//! Bareiss elimination; rational determinants are reduced to the integer case
//! by clearing denominators row by row.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Scalar = BigRational;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<BigRational>;
pub type IntMatrix = Matrix<BigInt>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }
}

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {ncols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Self { rows: nrows, cols: ncols, data })
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!("expected a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
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

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(l, j)];
                    out[(i, j)] += &prod;
                }
            }
        }
        Ok(out)
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }
}

impl RatMatrix {
    /// Converts to an integer matrix, failing on the first non-integral entry.
    pub fn to_integer(&self) -> Result<IntMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for (idx, x) in self.data.iter().enumerate() {
            if !x.is_integer() {
                return Err(Error::NonIntegral { row: idx / self.cols, col: idx % self.cols });
            }
            data.push(x.to_integer());
        }
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }
}

/// Fraction-free Bareiss determinant of a square integer matrix.
pub fn bareiss_determinant(m: &IntMatrix) -> Result<BigInt> {
    m.require_square()?;
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            let aik = a[(i, k)].clone();
            for j in k + 1..n {
                let v = &pivot * &a[(i, j)] - &aik * &a[(k, j)];
                // exact by Sylvester's identity
                a[(i, j)] = v / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = pivot;
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Exact determinant of a square rational matrix.
///
/// Each row is multiplied by the lcm of its denominators, the resulting
/// integer matrix goes through Bareiss, and the scaling is divided back out.
pub fn determinant(m: &RatMatrix) -> Result<BigRational> {
    m.require_square()?;
    let mut scale = BigInt::one();
    let mut data = Vec::with_capacity(m.data.len());
    for i in 0..m.rows {
        let row = m.row(i);
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for x in row {
            data.push(x.numer() * (&lcm / x.denom()));
        }
        scale *= lcm;
    }
    let int = IntMatrix { rows: m.rows, cols: m.cols, data };
    Ok(BigRational::new(bareiss_determinant(&int)?, scale))
}

/// Invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Positive invariant factors `d_1 | d_2 | ... | d_r`.
    pub invariants: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    pub fn product(&self) -> BigInt {
        self.invariants.iter().product()
    }
}

/// Smith normal form by unimodular row and column operations.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut invariants = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_axpy(&mut a, i, t, &q);
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_axpy(&mut a, j, t, &q);
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder appeared in row/column t; pivot on it
                let (pi, pj) = min_abs_cross(&a, t);
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    // row t += row i, then the column sweep produces a remainder
                    row_axpy(&mut a, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        invariants.push(a[(t, t)].abs());
        t += 1;
    }
    let rank = invariants.len();
    SmithForm { invariants, rank }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let candidates = (t..a.rows).map(|i| (i, t)).chain((t + 1..a.cols).map(|j| (t, j)));
    for (i, j) in candidates {
        let x = &a[(i, j)];
        if !x.is_zero() && (a[best].is_zero() || x.abs() < a[best].abs()) {
            best = (i, j);
        }
    }
    best
}

/// row[dst] -= q * row[src]
fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..a.cols {
        if a[(src, j)].is_zero() {
            continue;
        }
        let d = q * &a[(src, j)];
        a[(dst, j)] -= d;
    }
}

/// col[dst] -= q * col[src]
fn col_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for i in 0..a.rows {
        if a[(i, src)].is_zero() {
            continue;
        }
        let d = q * &a[(i, src)];
        a[(i, dst)] -= d;
    }
}

/// Index of a full-rank sublattice given by the integer coordinates of its
/// basis in a basis of the superlattice (one row per sublattice vector).
pub fn sublattice_index(coords: &IntMatrix) -> Result<BigInt> {
    let snf = smith_normal_form(coords);
    let expected = coords.rows.max(coords.cols);
    if snf.rank < expected {
        return Err(Error::RankDeficient { rank: snf.rank, expected });
    }
    Ok(snf.product())
}

/// Row-reduced factorization of a set of basis vectors, reusable for many
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct BasisSolver {
    dim: usize,
    len: usize,
    /// `transform * basis_columns` is in reduced row echelon form.
    transform: RatMatrix,
    /// pivot row `r` corresponds to basis vector `pivots[r]`
    pivots: Vec<usize>,
}

impl BasisSolver {
    /// `basis` holds coordinate vectors of equal length; they must be
    /// linearly independent.
    pub fn new(basis: &[Vec<BigRational>]) -> Result<Self> {
        let len = basis.len();
        let dim = basis.first().map_or(0, Vec::len);
        if let Some(v) = basis.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension(format!("basis vectors of lengths {dim} and {}", v.len())));
        }
        // columns = basis vectors, augmented with the identity
        let mut a = RatMatrix::zeros(dim, len);
        for (j, v) in basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                a[(i, j)] = x.clone();
            }
        }
        let mut transform = RatMatrix::identity(dim);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..len {
            let Some(p) = (r..dim).find(|&i| !a[(i, c)].is_zero()) else { continue };
            a.swap_rows(r, p);
            transform.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            scale_row(&mut a, r, &inv);
            scale_row(&mut transform, r, &inv);
            for i in 0..dim {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                sub_row(&mut a, i, r, &f);
                sub_row(&mut transform, i, r, &f);
            }
            pivots.push(c);
            r += 1;
        }
        if pivots.len() < len {
            return Err(Error::RankDeficient { rank: pivots.len(), expected: len });
        }
        Ok(Self { dim, len, transform, pivots })
    }

    pub fn solve(&self, target: &[BigRational]) -> Result<Vec<BigRational>> {
        if target.len() != self.dim {
            return Err(Error::Dimension(format!(
                "target of length {} in ambient dimension {}",
                target.len(),
                self.dim
            )));
        }
        let apply = |i: usize| -> BigRational {
            let mut acc = BigRational::zero();
            for (t, x) in self.transform.row(i).iter().zip(target) {
                if !t.is_zero() && !x.is_zero() {
                    acc += t * x;
                }
            }
            acc
        };
        if (self.len..self.dim).any(|i| !apply(i).is_zero()) {
            return Err(Error::Unsolvable);
        }
        let mut out = vec![BigRational::zero(); self.len];
        for (r, &c) in self.pivots.iter().enumerate() {
            out[c] = apply(r);
        }
        Ok(out)
    }
}

fn scale_row(a: &mut RatMatrix, i: usize, f: &BigRational) {
    for j in 0..a.cols {
        if !a[(i, j)].is_zero() {
            a[(i, j)] *= f;
        }
    }
}

fn sub_row(a: &mut RatMatrix, dst: usize, src: usize, f: &BigRational) {
    for j in 0..a.cols {
        if a[(src, j)].is_zero() {
            continue;
        }
        let d = f * &a[(src, j)];
        a[(dst, j)] -= d;
    }
}

/// Exact coordinates of `target` in `basis`.
pub fn solve_in_basis(basis: &[Vec<BigRational>], target: &[BigRational]) -> Result<Vec<BigRational>> {
    BasisSolver::new(basis)?.solve(target)
}

/// Inverse of a nonsingular rational matrix.
pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    m.require_square()?;
    // row i of the inverse holds the coordinates of e_i in the rows of m
    let solver = BasisSolver::new(&m.to_rows())?;
    let n = m.rows;
    let mut inv = RatMatrix::zeros(n, n);
    for i in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[i] = BigRational::one();
        let c = solver.solve(&e)?;
        for (j, x) in c.into_iter().enumerate() {
            inv[(i, j)] = x;
        }
    }
    Ok(inv)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
