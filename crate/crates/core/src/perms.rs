//! Permutations, the inner permutations of a skeleton, and Birkhoff
//! decompositions over them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exactnum::{is_bistochastic, RatMatrix, RatVector, Rational};
use crate::skeleton::{skel, Skeleton, MAX_DIM};
use crate::{Error, Result};

/// Element of `S_n` in one-line notation: `image[i] = σ(i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || core::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation);
            }
        }
        Ok(Permutation { image })
    }

    pub fn dim(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.dim()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// Number of positions where the two permutations agree, i.e. the
    /// Frobenius inner product of their matrices.
    pub fn agreement(&self, other: &Permutation) -> usize {
        self.image.iter().zip(&other.image).filter(|(a, b)| a == b).count()
    }

    /// True iff every `(i, σ(i))` is set in `s`.
    pub fn is_inner(&self, s: &Skeleton) -> bool {
        self.dim() == s.dim() && self.image.iter().enumerate().all(|(i, &j)| s.get(i, j))
    }

    pub fn as_skeleton(&self) -> Result<Skeleton> {
        let mut s = Skeleton::empty(self.dim())?;
        for (i, &j) in self.image.iter().enumerate() {
            s.set(i, j, true);
        }
        Ok(s)
    }

    pub fn to_matrix(&self) -> RatMatrix {
        let n = self.dim();
        RatMatrix::from_fn(n, n, |i, j| {
            if self.image[i] == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Row-major flattening of the permutation matrix.
    pub fn to_vector(&self) -> RatVector {
        let n = self.dim();
        let mut v = vec![Rational::zero(); n * n];
        for (i, &j) in self.image.iter().enumerate() {
            v[i * n + j] = Rational::one();
        }
        v
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.image)
    }
}

/// One-line notation, e.g. `[1,0,2]`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, v) in self.image.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Calls `visit` on every permutation of `0..n` in lexicographic order of
/// the image. `allowed[i]` restricts the columns row `i` may use.
fn visit_restricted(allowed: &[u16], visit: &mut impl FnMut(&[usize])) {
    fn go(allowed: &[u16], row: usize, used: u16, image: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if row == allowed.len() {
            visit(image);
            return;
        }
        let mut cand = allowed[row] & !used;
        while cand != 0 {
            let c = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            image[row] = c;
            go(allowed, row + 1, used | 1 << c, image, visit);
        }
    }
    let mut image = [0usize; MAX_DIM];
    go(allowed, 0, 0, &mut image[..allowed.len()], visit);
}

/// Visits all `n!` permutations in lexicographic order without allocating
/// one `Permutation` per element. Needs `n <= MAX_DIM`.
pub fn visit_permutations(n: usize, mut visit: impl FnMut(&[usize])) {
    assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
    let full = ((1u32 << n) - 1) as u16;
    visit_restricted(&vec![full; n], &mut visit);
}

pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    visit_permutations(n, |img| out.push(Permutation { image: img.to_vec() }));
    out
}

/// `P_n(S)`: permutations whose pattern is contained in `s`, in
/// lexicographic order.
pub fn inner_permutations(s: &Skeleton) -> Vec<Permutation> {
    let mut out = Vec::new();
    visit_restricted(s.row_masks(), &mut |img| out.push(Permutation { image: img.to_vec() }));
    out
}

pub fn count_inner_permutations(s: &Skeleton) -> usize {
    let mut count = 0;
    visit_restricted(s.row_masks(), &mut |_| count += 1);
    count
}

/// Lexicographically first inner permutation, if any.
pub fn first_inner_permutation(s: &Skeleton) -> Option<Permutation> {
    fn go(allowed: &[u16], row: usize, used: u16, image: &mut Vec<usize>) -> bool {
        if row == allowed.len() {
            return true;
        }
        let mut cand = allowed[row] & !used;
        while cand != 0 {
            let c = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            image.push(c);
            if go(allowed, row + 1, used | 1 << c, image) {
                return true;
            }
            image.pop();
        }
        false
    }
    let mut image = Vec::with_capacity(s.dim());
    go(s.row_masks(), 0, 0, &mut image).then_some(Permutation { image })
}

/// `tr_σ(M) = Σ_i M[i][σ(i)]`.
pub fn sigma_trace(m: &RatMatrix, sigma: &Permutation) -> Result<Rational> {
    let n = m.square_dim()?;
    if sigma.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: sigma.dim() });
    }
    Ok(sigma.image.iter().enumerate().fold(Rational::zero(), |acc, (i, &j)| acc + &m[(i, j)]))
}

/// Convex combination of permutation matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirkhoffExpansion {
    pub terms: Vec<(Rational, Permutation)>,
}

impl BirkhoffExpansion {
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (c, _)| acc + c)
    }

    pub fn coefficient_of(&self, sigma: &Permutation) -> Option<&Rational> {
        self.terms.iter().find(|(_, p)| p == sigma).map(|(c, _)| c)
    }

    pub fn reconstruct(&self, n: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        for (c, p) in &self.terms {
            for (i, &j) in p.image.iter().enumerate() {
                m[(i, j)] += c;
            }
        }
        m
    }
}

/// Greedy Birkhoff algorithm: peel off the lexicographically first inner
/// permutation of the remainder, weighted by its smallest entry.
pub fn birkhoff_decompose(m: &RatMatrix) -> Result<BirkhoffExpansion> {
    if !is_bistochastic(m) {
        return Err(Error::NotBistochastic);
    }
    greedy(m.clone())
}

fn greedy(mut rest: RatMatrix) -> Result<BirkhoffExpansion> {
    let mut terms = Vec::new();
    loop {
        let s = skel(&rest)?;
        if s.is_empty() {
            break;
        }
        // a positive multiple of a bistochastic matrix always has one
        let sigma = first_inner_permutation(&s).ok_or(Error::NotBistochastic)?;
        let coeff = sigma
            .image
            .iter()
            .enumerate()
            .map(|(i, &j)| &rest[(i, j)])
            .min()
            .cloned()
            .expect("nonempty permutation");
        for (i, &j) in sigma.image.iter().enumerate() {
            rest[(i, j)] -= &coeff;
        }
        terms.push((coeff, sigma));
    }
    Ok(BirkhoffExpansion { terms })
}

/// Birkhoff expansion guaranteed to use `sigma0` with a positive weight.
///
/// With `ε = min_j M[j][σ0(j)]`, decomposes `G = (1+ε)M − εσ0` greedily and
/// returns `M = (εσ0 + Σ a_i σ_i) / (1+ε)`, merging `σ0` if `G` also uses it.
pub fn birkhoff_decompose_through(m: &RatMatrix, sigma0: &Permutation) -> Result<BirkhoffExpansion> {
    if !is_bistochastic(m) {
        return Err(Error::NotBistochastic);
    }
    let n = m.rows();
    if sigma0.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: sigma0.dim() });
    }
    if !sigma0.is_inner(&skel(m)?) {
        return Err(Error::NotInnerPermutation);
    }
    let eps = sigma0
        .image
        .iter()
        .enumerate()
        .map(|(i, &j)| &m[(i, j)])
        .min()
        .cloned()
        .expect("nonempty permutation");
    let one_plus = Rational::one() + &eps;
    let mut g = m.scaled(&one_plus);
    g.add_scaled(&-eps.clone(), &sigma0.to_matrix())?;
    let inner = greedy(g)?;

    let mut terms = vec![(eps / &one_plus, sigma0.clone())];
    for (a, p) in inner.terms {
        let c = a / &one_plus;
        if p == *sigma0 {
            terms[0].0 += c;
        } else {
            terms.push((c, p));
        }
    }
    Ok(BirkhoffExpansion { terms })
}

/// Average of [`birkhoff_decompose_through`] over every inner permutation:
/// an expansion in which all of `P_n(M)` appears with positive weight.
pub fn birkhoff_decompose_all(m: &RatMatrix) -> Result<BirkhoffExpansion> {
    if !is_bistochastic(m) {
        return Err(Error::NotBistochastic);
    }
    let inner = inner_permutations(&skel(m)?);
    let weight = Rational::new(1.into(), inner.len().into());
    let mut acc: BTreeMap<Permutation, Rational> = BTreeMap::new();
    for sigma in &inner {
        for (c, p) in birkhoff_decompose_through(m, sigma)?.terms {
            *acc.entry(p).or_insert_with(Rational::zero) += c * &weight;
        }
    }
    Ok(BirkhoffExpansion { terms: acc.into_iter().map(|(p, c)| (c, p)).collect() })
}
