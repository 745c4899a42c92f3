//! Exact rational scalars, vectors and dense matrices.
//!
//! Scalars are [`num_rational::BigRational`], which reduces to lowest terms
//! after every operation and prints as `p/q` (or `p` when `q = 1`).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Dense vector of rationals.
pub type RatVector = Vec<Rational>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// `J_n`, the matrix with every entry `1/n`.
    pub fn uniform(n: usize) -> Self {
        let v = Rational::new(BigInt::one(), BigInt::from(n));
        RatMatrix { rows: n, cols: n, entries: vec![v; n * n] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, entries }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(RatMatrix { rows: r, cols: c, entries })
    }

    /// Integer matrix scaled by `1/den`; handy for the literature's
    /// `(1/d)(...)` notation.
    pub fn from_scaled_ints(den: i64, rows: &[&[i64]]) -> Result<Self> {
        let d = BigInt::from(den);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::new(BigInt::from(v), d.clone())).collect())
                .collect(),
        )
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

    pub(crate) fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Returns `B` with `B[i][j] = self[row_order[i]][col_order[j]]`.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        Self::from_fn(row_order.len(), col_order.len(), |i, j| {
            self[(row_order[i], col_order[j])].clone()
        })
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: &Rational, other: &RatMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.entries.len(),
                found: other.entries.len(),
            });
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a += factor * b;
            }
        }
        Ok(())
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<RatVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.row(i).iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn col_sum(&self, j: usize) -> Rational {
        (0..self.rows).fold(Rational::zero(), |acc, i| acc + &self[(i, j)])
    }

    pub fn has_negative_entry(&self) -> bool {
        self.entries.iter().any(Signed::is_negative)
    }

    /// Least common multiple of the entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

/// Sum of squares of all entries.
pub fn frobenius_norm_sq(m: &RatMatrix) -> Rational {
    m.entries.iter().filter(|e| !e.is_zero()).fold(Rational::zero(), |acc, e| acc + e * e)
}

/// True iff every entry lies in `[0, 1]` and every row and column sums to 1.
pub fn is_bistochastic(m: &RatMatrix) -> bool {
    if !m.is_square() || m.rows == 0 {
        return false;
    }
    let one = Rational::one();
    if m.entries.iter().any(|e| e.is_negative() || *e > one) {
        return false;
    }
    (0..m.rows).all(|i| m.row_sum(i).is_one() && m.col_sum(i).is_one())
}

/// Solves `a * x = b` by Gaussian elimination, pivoting on the first nonzero
/// entry of each column.
pub fn solve_linear(a: &RatMatrix, b: &[Rational]) -> Result<RatVector> {
    let n = a.square_dim()?;
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    // augmented rows
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for v in aug[col][col..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col {
                continue;
            }
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    Ok(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Incremental row-echelon basis used to pick a first-wins maximal
/// independent subset.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, RatVector)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the remainder.
    fn reduce(&self, mut v: RatVector) -> RatVector {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the basis. Returns whether it was added.
    pub fn insert(&mut self, v: RatVector) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].recip();
        let v = v.into_iter().map(|x| x * &inv).collect();
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: RatVector) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Rank over the rationals and the indices of a greedily chosen maximal
/// independent subset (earliest vectors win).
pub fn rank_and_independent_subset(vectors: &[RatVector]) -> Result<(usize, Vec<usize>)> {
    if let Some(first) = vectors.first() {
        if let Some(bad) = vectors.iter().find(|v| v.len() != first.len()) {
            return Err(Error::DimensionMismatch { expected: first.len(), found: bad.len() });
        }
    }
    let mut basis = EchelonBasis::new();
    let mut picked = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        if basis.insert(v.clone()) {
            picked.push(idx);
        }
    }
    Ok((basis.rank(), picked))
}
