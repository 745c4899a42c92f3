//! Zero/nonzero patterns of square matrices.
//!
//! A [`Skeleton`] stores one bitmask per row (bit `j` set iff column `j` is
//! nonzero). Skeletons are ordered by inclusion, and two skeletons are
//! equivalent when one is `L·S·R` or `L·Sᵀ·R` of the other for permutation
//! matrices `L`, `R`. [`canonical_key`] picks one representative per
//! equivalence class.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Num, Zero};

use crate::exactnum::RatMatrix;
use crate::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 12;

/// Binary `n x n` pattern.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Skeleton {
    n: u8,
    rows: [u16; MAX_DIM],
}

fn row_mask(n: usize) -> u16 {
    ((1u32 << n) - 1) as u16
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        Err(Error::DimensionTooLarge { n, max: MAX_DIM })
    } else {
        Ok(())
    }
}

impl Skeleton {
    pub fn empty(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Skeleton { n: n as u8, rows: [0; MAX_DIM] })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.rows[..n].fill(row_mask(n));
        Ok(s)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for i in 0..n {
            s.rows[i] = 1 << i;
        }
        Ok(s)
    }

    /// Builds a skeleton from per-row column masks.
    pub fn from_rows(rows: &[u16]) -> Result<Self> {
        let n = rows.len();
        let mut s = Self::empty(n)?;
        for (i, &r) in rows.iter().enumerate() {
            if r & !row_mask(n) != 0 {
                return Err(Error::DimensionMismatch { expected: n, found: 16 - r.leading_zeros() as usize });
            }
            s.rows[i] = r;
        }
        Ok(s)
    }

    /// Row-major flat bitmask, bit `i*n + j` for entry `(i, j)`. Needs `n <= 8`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 8 {
            return Err(Error::DimensionTooLarge { n, max: 8 });
        }
        let mut s = Self::empty(n)?;
        for i in 0..n {
            s.rows[i] = ((mask >> (i * n)) as u16) & row_mask(n);
        }
        Ok(s)
    }

    pub fn to_mask(&self) -> Option<u64> {
        let n = self.dim();
        (n <= 8).then(|| {
            self.rows[..n].iter().enumerate().fold(0u64, |acc, (i, &r)| acc | (r as u64) << (i * n))
        })
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, on: bool) {
        if on {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Column mask of row `i`.
    pub fn row(&self, i: usize) -> u16 {
        self.rows[i]
    }

    pub fn row_masks(&self) -> &[u16] {
        &self.rows[..self.dim()]
    }

    /// Row mask of column `j` (bit `i` set iff `(i, j)` is set).
    pub fn col(&self, j: usize) -> u16 {
        self.rows[..self.dim()]
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | ((r >> j) & 1) << i)
    }

    pub fn count_ones(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for j in 0..self.dim() {
            t.rows[j] = self.col(j);
        }
        t
    }

    /// Returns `B` with `B[i][j] = self[row_order[i]][col_order[j]]`.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        let n = self.dim();
        let mut out = *self;
        for (i, &r) in row_order[..n].iter().enumerate() {
            let src = self.rows[r];
            out.rows[i] = (0..n).fold(0, |acc, j| acc | ((src >> col_order[j]) & 1) << j);
        }
        out
    }

    pub fn union(&self, other: &Skeleton) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = *self;
        for (a, b) in out.rows.iter_mut().zip(other.rows) {
            *a |= b;
        }
        Ok(out)
    }

    pub fn is_subset_of(&self, other: &Skeleton) -> bool {
        self.n == other.n && self.rows.iter().zip(other.rows).all(|(a, b)| a & !b == 0)
    }

    fn same_dim(&self, other: &Skeleton) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() })
        } else {
            Ok(())
        }
    }

    /// Lowercase hex of the flat row-major bit string, bit `i*n + j` being
    /// the `2^(i*n+j)` place.
    pub fn to_hex(&self) -> String {
        let n = self.dim();
        let mut bits = BigUint::zero();
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) {
                    bits.set_bit((i * n + j) as u64, true);
                }
            }
        }
        bits.to_str_radix(16)
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let bits =
            BigUint::from_str_radix(hex, 16).map_err(|_| Error::InvalidSpec("bad skeleton hex"))?;
        if bits.bits() > (n * n) as u64 {
            return Err(Error::InvalidSpec("skeleton hex has bits beyond n*n"));
        }
        let mut s = Self::empty(n)?;
        for i in 0..n {
            for j in 0..n {
                s.set(i, j, bits.bit((i * n + j) as u64));
            }
        }
        Ok(s)
    }
}

impl fmt::Debug for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Skeleton(")?;
        for i in 0..self.dim() {
            if i > 0 {
                f.write_str("/")?;
            }
            for j in 0..self.dim() {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        f.write_str(")")
    }
}

/// `n` lines of `n` characters from `{0, 1}`.
impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl FromStr for Skeleton {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let n = lines.len();
        check_dim(n)?;
        let mut rows = Vec::with_capacity(n);
        for line in lines {
            let cells: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
            if cells.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: cells.len() });
            }
            let mut r = 0u16;
            for (j, c) in cells.into_iter().enumerate() {
                match c {
                    '1' => r |= 1 << j,
                    '0' => {}
                    _ => return Err(Error::InvalidSpec("skeleton cells must be 0 or 1")),
                }
            }
            rows.push(r);
        }
        Skeleton::from_rows(&rows)
    }
}

/// Nonzero pattern of a square matrix.
pub fn skel(m: &RatMatrix) -> Result<Skeleton> {
    let n = m.square_dim()?;
    let mut s = Skeleton::empty(n)?;
    for i in 0..n {
        for j in 0..n {
            if !m[(i, j)].is_zero() {
                s.set(i, j, true);
            }
        }
    }
    Ok(s)
}

/// `a <= b` in the skeleton poset, i.e. every bit of `a` is also in `b`.
pub fn poset_leq(a: &Skeleton, b: &Skeleton) -> Result<bool> {
    a.same_dim(b)?;
    Ok(a.is_subset_of(b))
}

/// Orbit representative under `S -> L·S·R` and `S -> L·Sᵀ·R`.
///
/// Orders by the row-major bit string of the pattern, `(0, 0)` first, and is
/// equal for two skeletons iff they are equivalent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey {
    n: u8,
    // row codes with column 0 as the most significant bit
    rows: [u16; MAX_DIM],
}

impl CanonicalKey {
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// The minimal skeleton of the orbit.
    pub fn representative(&self) -> Skeleton {
        let n = self.dim();
        let mut s = Skeleton { n: self.n, rows: [0; MAX_DIM] };
        for i in 0..n {
            for j in 0..n {
                if self.rows[i] >> (n - 1 - j) & 1 == 1 {
                    s.set(i, j, true);
                }
            }
        }
        s
    }

    /// The row-major bit string as an integer, first character most
    /// significant. Needs `n <= 8`.
    pub fn code(&self) -> Option<u64> {
        let n = self.dim();
        (n <= 8).then(|| self.rows[..n].iter().fold(0u64, |acc, &r| acc << n | r as u64))
    }

    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        if n > 8 {
            return Err(Error::DimensionTooLarge { n, max: 8 });
        }
        if n < 8 && code >> (n * n) != 0 {
            return Err(Error::InvalidSpec("canonical code has bits beyond n*n"));
        }
        let mut rows = [0u16; MAX_DIM];
        for (i, r) in rows[..n].iter_mut().enumerate() {
            *r = ((code >> ((n - 1 - i) * n)) as u16) & row_mask(n);
        }
        Ok(CanonicalKey { n: n as u8, rows })
    }
}

struct CanonSearch {
    n: usize,
    best: [u16; MAX_DIM],
}

impl CanonSearch {
    // Rows are placed one at a time. For a fixed row order the optimal column
    // order sorts columns by their top-to-bottom reading, so the first `d`
    // result rows depend only on the first `d` chosen rows; branches whose
    // partial result already exceeds the best are cut.
    fn search(&mut self, rows: &[u16], depth: usize, prefixes: &[u16; MAX_DIM], used: u16) {
        let n = self.n;
        if depth == n {
            return;
        }
        let mut tried: [u16; MAX_DIM] = [0; MAX_DIM];
        let mut tried_len = 0;
        for (idx, &r) in rows.iter().enumerate() {
            if used >> idx & 1 == 1 || tried[..tried_len].contains(&r) {
                continue;
            }
            tried[tried_len] = r;
            tried_len += 1;

            let mut next = *prefixes;
            for (j, p) in next[..n].iter_mut().enumerate() {
                *p = *p << 1 | (r >> j & 1);
            }
            let mut sorted = next;
            sorted[..n].sort_unstable();
            let code = sorted[..n].iter().fold(0u16, |acc, p| acc << 1 | (p & 1));
            if code > self.best[depth] {
                continue;
            }
            if code < self.best[depth] {
                self.best[depth] = code;
                self.best[depth + 1..n].fill(u16::MAX);
            }
            self.search(rows, depth + 1, &next, used | 1 << idx);
        }
    }
}

pub fn canonical_key(s: &Skeleton) -> CanonicalKey {
    let n = s.dim();
    let mut search = CanonSearch { n, best: [u16::MAX; MAX_DIM] };
    let start = [0u16; MAX_DIM];
    search.search(s.row_masks(), 0, &start, 0);
    let t = s.transpose();
    search.search(t.row_masks(), 0, &start, 0);
    let mut rows = [0u16; MAX_DIM];
    rows[..n].copy_from_slice(&search.best[..n]);
    CanonicalKey { n: n as u8, rows }
}

/// Kuhn's augmenting-path matching on bitmask adjacency; `rows` lists the
/// allowed columns of each left vertex. Returns true iff every row is matched.
pub(crate) fn has_perfect_matching(rows: &[u16]) -> bool {
    fn augment(rows: &[u16], r: usize, seen: &mut u16, owner: &mut [usize; MAX_DIM]) -> bool {
        let mut cand = rows[r] & !*seen;
        while cand != 0 {
            let c = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            *seen |= 1 << c;
            if owner[c] == usize::MAX || augment(rows, owner[c], seen, owner) {
                owner[c] = r;
                return true;
            }
        }
        false
    }
    let mut owner = [usize::MAX; MAX_DIM];
    (0..rows.len()).all(|r| {
        let mut seen = 0u16;
        augment(rows, r, &mut seen, &mut owner)
    })
}

/// Total support: nonempty, and every set bit lies on a permutation
/// contained in the pattern.
pub fn is_admissible(s: &Skeleton) -> bool {
    let n = s.dim();
    if s.is_empty() || !has_perfect_matching(s.row_masks()) {
        return false;
    }
    let mut minor = [0u16; MAX_DIM];
    for i in 0..n {
        let mut bits = s.row(i);
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            // delete row i and column j, then compact the remaining columns
            let low = (1u16 << j) - 1;
            let mut k = 0;
            for (r, &row) in s.row_masks().iter().enumerate() {
                if r != i {
                    minor[k] = (row & low) | ((row >> 1) & !low);
                    k += 1;
                }
            }
            if !has_perfect_matching(&minor[..n - 1]) {
                return false;
            }
        }
    }
    true
}
