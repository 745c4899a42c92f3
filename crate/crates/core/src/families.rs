//! Closed-form RCDS families: `X^(r,s,n)`, the zig-zag staircase
//! `X^(r̄,s̄)` and the block matrix `X^ᾱ`.
//!
//! The zig-zag matrix has block rows of heights `r_1..r_k` and block columns
//! of widths `s_1..s_{k+1}`; block row `i` is nonzero only in block columns
//! `i` and `i+1`, with constant values `α_{i,i}` and `α_{i,i+1}`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactnum::{RatMatrix, Rational};
use crate::rcds::UVDecomposition;
use crate::skeleton::{skel, Skeleton};
use crate::{Error, Result};

fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `X^(r,s,n)` for `0 < s < r < n`.
pub fn make_x_rsn(r: usize, s: usize, n: usize) -> Result<RatMatrix> {
    if !(0 < s && s < r && r < n) {
        return Err(Error::InvalidTriple { r, s, n });
    }
    make_zigzag(&rsn_as_zigzag(r, s, n))
}

fn rsn_as_zigzag(r: usize, s: usize, n: usize) -> ZigzagSpec {
    ZigzagSpec { r: vec![r, n - r], s: vec![s, n - s, 0] }
}

/// Block sizes of a zig-zag matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagSpec {
    r: Vec<usize>,
    s: Vec<usize>,
}

impl ZigzagSpec {
    /// `r` has length `k`, `s` has length `k + 1`; only the last `s` may be 0.
    /// Requires `Σr = Σs` and `s_1+..+s_t < r_1+..+r_t < s_1+..+s_{t+1}`
    /// for `1 <= t < k`.
    pub fn new(r: Vec<usize>, s: Vec<usize>) -> Result<Self> {
        let k = r.len();
        if k == 0 {
            return Err(Error::InvalidSpec("zig-zag needs at least one block row"));
        }
        if s.len() != k + 1 {
            return Err(Error::InvalidSpec("zig-zag needs exactly one more column block than row blocks"));
        }
        if r.contains(&0) || s[..k].contains(&0) {
            return Err(Error::InvalidSpec("zig-zag block sizes must be positive (except the last column block)"));
        }
        if r.iter().sum::<usize>() != s.iter().sum::<usize>() {
            return Err(Error::InvalidSpec("zig-zag row and column block sizes must have equal sums"));
        }
        let (mut rsum, mut ssum) = (0, 0);
        for t in 0..k - 1 {
            rsum += r[t];
            ssum += s[t];
            if !(ssum < rsum && rsum < ssum + s[t + 1]) {
                return Err(Error::InvalidSpec("zig-zag interlacing condition fails"));
            }
        }
        Ok(ZigzagSpec { r, s })
    }

    pub fn k(&self) -> usize {
        self.r.len()
    }

    pub fn dim(&self) -> usize {
        self.r.iter().sum()
    }

    pub fn row_blocks(&self) -> &[usize] {
        &self.r
    }

    pub fn col_blocks(&self) -> &[usize] {
        &self.s
    }

    fn has_last_block(&self) -> bool {
        self.s[self.k()] > 0
    }

    /// Block index of every row and every column.
    fn block_of(sizes: &[usize]) -> Vec<usize> {
        sizes.iter().enumerate().flat_map(|(b, &len)| core::iter::repeat_n(b, len)).collect()
    }
}

/// The block values `α_{i,i}` and `α_{i,i+1}` (0-indexed here).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockAlphas {
    pub diag: Vec<Rational>,
    /// `α_{i,i+1}`; one shorter than `diag` when the last column block is void.
    pub upper: Vec<Rational>,
}

impl BlockAlphas {
    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        if j == i {
            self.diag.get(i)
        } else if j == i + 1 {
            self.upper.get(i)
        } else {
            None
        }
    }

    /// `α_{1,1}, α_{1,2}, α_{2,2}, α_{2,3}, ...`.
    pub fn in_order(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.diag.len() + self.upper.len());
        for i in 0..self.diag.len() {
            out.push(self.diag[i].clone());
            if let Some(a) = self.upper.get(i) {
                out.push(a.clone());
            }
        }
        out
    }
}

/// `α_{i,i} = (s_1+..+s_i − r_1−..−r_{i−1}) / (r_i s_i)`,
/// `α_{i,i+1} = (r_1+..+r_i − s_1−..−s_i) / (r_i s_{i+1})`.
pub fn zigzag_alphas(spec: &ZigzagSpec) -> BlockAlphas {
    let k = spec.k();
    let (mut rsum, mut ssum) = (0usize, 0usize);
    let mut diag = Vec::with_capacity(k);
    let mut upper = Vec::with_capacity(k);
    for i in 0..k {
        ssum += spec.s[i];
        diag.push(ratio(ssum - rsum, spec.r[i] * spec.s[i]));
        rsum += spec.r[i];
        if spec.s[i + 1] > 0 {
            upper.push(ratio(rsum - ssum, spec.r[i] * spec.s[i + 1]));
        }
    }
    BlockAlphas { diag, upper }
}

pub fn make_zigzag(spec: &ZigzagSpec) -> Result<RatMatrix> {
    let n = spec.dim();
    let alphas = zigzag_alphas(spec);
    let row_block = ZigzagSpec::block_of(&spec.r);
    let col_block = ZigzagSpec::block_of(&spec.s);
    Ok(RatMatrix::from_fn(n, n, |i, j| {
        alphas.get(row_block[i], col_block[j]).cloned().unwrap_or_else(Rational::zero)
    }))
}

/// `p x p` 0/1 circulant with ones in columns `i..i+k (mod p)` of row `i`.
pub fn circulant_regular(p: usize, k: usize) -> Result<Skeleton> {
    if k == 0 || k > p {
        return Err(Error::InvalidSpec("circulant needs 1 <= k <= p"));
    }
    let mut s = Skeleton::empty(p)?;
    for i in 0..p {
        for d in 0..k {
            s.set(i, (i + d) % p, true);
        }
    }
    Ok(s)
}

/// Parameters of `X^ᾱ = (1/(α1α4+α2α3)) [[α4·A1, α3·A2], [α2·A3, α1·A4]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSpec {
    p: usize,
    alpha: [usize; 4],
    blocks: [Skeleton; 4],
}

impl AlphaSpec {
    /// Block `i` must have exactly `alpha[i]` ones in every row and column,
    /// and `α1 + α4 = α2 + α3`.
    pub fn new(p: usize, alpha: [usize; 4], blocks: [Skeleton; 4]) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSpec("alpha family needs p >= 1"));
        }
        if alpha.iter().any(|&a| a == 0 || a > p) {
            return Err(Error::InvalidSpec("alpha entries must lie in 1..=p"));
        }
        if alpha[0] + alpha[3] != alpha[1] + alpha[2] {
            return Err(Error::InvalidSpec("alpha must satisfy a1 + a4 = a2 + a3"));
        }
        for (b, &a) in blocks.iter().zip(&alpha) {
            if b.dim() != p {
                return Err(Error::InvalidSpec("alpha block has the wrong size"));
            }
            let regular = (0..p).all(|i| b.row(i).count_ones() as usize == a && b.col(i).count_ones() as usize == a);
            if !regular {
                return Err(Error::InvalidSpec("alpha block is not regular with the given alpha"));
            }
        }
        Ok(AlphaSpec { p, alpha, blocks })
    }

    /// Every block is [`circulant_regular`].
    pub fn circulant(p: usize, alpha: [usize; 4]) -> Result<Self> {
        let mut blocks = [Skeleton::empty(p)?; 4];
        for (b, &a) in blocks.iter_mut().zip(&alpha) {
            *b = circulant_regular(p, a).map_err(|_| Error::InvalidSpec("alpha entries must lie in 1..=p"))?;
        }
        Self::new(p, alpha, blocks)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn alpha(&self) -> [usize; 4] {
        self.alpha
    }

    fn scale(&self) -> usize {
        let [a1, a2, a3, a4] = self.alpha;
        a1 * a4 + a2 * a3
    }
}

pub fn make_x_alpha(spec: &AlphaSpec) -> Result<RatMatrix> {
    let p = spec.p;
    let d = spec.scale();
    let [a1, a2, a3, a4] = spec.alpha;
    // (block index, weight) by quadrant
    let quad = [(0, a4), (1, a3), (2, a2), (3, a1)];
    Ok(RatMatrix::from_fn(2 * p, 2 * p, |i, j| {
        let (b, w) = quad[(i / p) * 2 + j / p];
        if spec.blocks[b].get(i % p, j % p) {
            ratio(w, d)
        } else {
            Rational::zero()
        }
    }))
}

/// Any of the three families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Rsn { r: usize, s: usize, n: usize },
    Zigzag(ZigzagSpec),
    Alpha(AlphaSpec),
}

impl FamilySpec {
    pub fn build(&self) -> Result<RatMatrix> {
        match self {
            FamilySpec::Rsn { r, s, n } => make_x_rsn(*r, *s, *n),
            FamilySpec::Zigzag(z) => make_zigzag(z),
            FamilySpec::Alpha(a) => make_x_alpha(a),
        }
    }
}

/// Closed-form `(u, v)` of a family matrix.
///
/// Zig-zag: block-constant `u`, `v` with `u_1 = 0` and
/// `u_i + v_j = α_{i,j}` on the two nonzero block diagonals. `X^ᾱ`: the
/// explicit values `(−α1−α2+3α3+3α4, 3α1+3α2−α3−α4)` for `u` and
/// `(−α1+3α2−α3+3α4, 3α1−α2+3α3−α4)` for `v`, over `8(α1α4+α2α3)`.
pub fn family_uv_vectors(spec: &FamilySpec) -> Result<UVDecomposition> {
    match spec {
        FamilySpec::Rsn { r, s, n } => {
            if !(0 < *s && s < r && r < n) {
                return Err(Error::InvalidTriple { r: *r, s: *s, n: *n });
            }
            family_uv_vectors(&FamilySpec::Zigzag(rsn_as_zigzag(*r, *s, *n)))
        }
        FamilySpec::Zigzag(z) => {
            let (bu, bv) = zigzag_block_uv(z);
            let u = ZigzagSpec::block_of(&z.r).into_iter().map(|b| bu[b].clone()).collect();
            let v = ZigzagSpec::block_of(&z.s).into_iter().map(|b| bv[b].clone()).collect();
            Ok(UVDecomposition { u, v, skeleton: skel(&make_zigzag(z)?)? })
        }
        FamilySpec::Alpha(a) => {
            let [a1, a2, a3, a4] = a.alpha.map(|x| x as i64);
            let den = BigInt::from(8 * a.scale());
            let val = |num: i64| Rational::new(BigInt::from(num), den.clone());
            let (u_top, u_bot) = (val(-a1 - a2 + 3 * a3 + 3 * a4), val(3 * a1 + 3 * a2 - a3 - a4));
            let (v_left, v_right) = (val(-a1 + 3 * a2 - a3 + 3 * a4), val(3 * a1 - a2 + 3 * a3 - a4));
            let p = a.p;
            let u = (0..2 * p).map(|i| if i < p { u_top.clone() } else { u_bot.clone() }).collect();
            let v = (0..2 * p).map(|j| if j < p { v_left.clone() } else { v_right.clone() }).collect();
            Ok(UVDecomposition { u, v, skeleton: skel(&make_x_alpha(a)?)? })
        }
    }
}

/// Contracted `(ū, v̄)` of a zig-zag matrix, one value per block.
pub fn zigzag_block_uv(spec: &ZigzagSpec) -> (Vec<Rational>, Vec<Rational>) {
    let k = spec.k();
    let alphas = zigzag_alphas(spec);
    let mut u = vec![Rational::zero(); k];
    let mut v = vec![Rational::zero(); k + 1];
    for i in 0..k {
        if i > 0 {
            u[i] = &alphas.diag[i] - &v[i];
        }
        if i == 0 {
            v[0] = alphas.diag[0].clone();
        }
        if let Some(a) = alphas.upper.get(i) {
            v[i + 1] = a - &u[i];
        }
    }
    if !spec.has_last_block() {
        // no columns in the void block; keep the value the staircase implies
        v[k] = Rational::zero();
    }
    (u, v)
}
