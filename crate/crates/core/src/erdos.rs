//! Maxtrace, the per-skeleton Erdős candidate, and record verification.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{frobenius_norm_sq, is_bistochastic, solve_linear, EchelonBasis, RatMatrix, RatVector, Rational};
use crate::perms::{all_permutations, count_inner_permutations, inner_permutations, sigma_trace, Permutation};
use crate::skeleton::{is_admissible, skel, Skeleton, MAX_DIM};
use crate::{Error, Result};

fn bnb<T>(w: &[Vec<T>]) -> (T, Vec<usize>)
where
    T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>,
{
    struct State<'a, T> {
        w: &'a [Vec<T>],
        image: Vec<usize>,
        best: Option<(T, Vec<usize>)>,
    }

    fn bound<T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>>(w: &[Vec<T>], row: usize, used: u16) -> T {
        let n = w.len();
        w[row..].iter().fold(T::zero(), |acc, r| {
            let m = (0..n).filter(|&c| used >> c & 1 == 0).map(|c| &r[c]).max();
            match m {
                Some(m) => acc + m,
                None => acc,
            }
        })
    }

    fn go<T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>>(st: &mut State<'_, T>, row: usize, used: u16, acc: T) {
        let n = st.w.len();
        if row == n {
            if st.best.as_ref().is_none_or(|(b, _)| acc > *b) {
                st.best = Some((acc, st.image.clone()));
            }
            return;
        }
        if let Some((b, _)) = &st.best {
            if acc.clone() + &bound(st.w, row, used) <= *b {
                return;
            }
        }
        for c in 0..n {
            if used >> c & 1 == 1 {
                continue;
            }
            st.image[row] = c;
            let next = acc.clone() + &st.w[row][c];
            go(st, row + 1, used | 1 << c, next);
        }
    }

    let mut st = State { w, image: alloc::vec![0; w.len()], best: None };
    go(&mut st, 0, 0, T::zero());
    st.best.expect("at least one permutation")
}

/// Largest diagonal sum over all permutations, with the lexicographically
/// least maximizer. Exact branch and bound on the entries scaled to
/// integers.
pub fn maxtrace(m: &RatMatrix) -> Result<(Rational, Permutation)> {
    let n = m.square_dim()?;
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge { n, max: MAX_DIM });
    }
    if n == 0 {
        return Ok((Rational::zero(), Permutation::identity(0)));
    }
    let den = m.common_denominator();
    let scaled: Vec<Vec<BigInt>> = (0..n)
        .map(|i| m.row(i).iter().map(|e| e.numer() * (&den / e.denom())).collect())
        .collect();
    let limit = BigInt::from(i64::MAX / (MAX_DIM as i64 + 1));
    let small = scaled.iter().flatten().all(|v| v.abs() < limit);
    let (value, image) = if small {
        let w: Vec<Vec<i64>> =
            scaled.iter().map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect()).collect();
        let (v, img) = bnb(&w);
        (BigInt::from(v), img)
    } else {
        bnb(&scaled)
    };
    Ok((Rational::new(value, den), Permutation::from_image(image)?))
}

/// Bistochastic with maxtrace equal to the squared Frobenius norm.
pub fn is_erdos(m: &RatMatrix) -> bool {
    if !is_bistochastic(m) {
        return false;
    }
    match maxtrace(m) {
        Ok((mt, _)) => mt == frobenius_norm_sq(m),
        Err(_) => false,
    }
}

/// A verified Erdős matrix and the data that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErdosRecord {
    pub skeleton: Skeleton,
    pub matrix: RatMatrix,
    pub maxtrace: Rational,
    /// Linearly independent inner permutations spanning the face.
    pub basis: Vec<Permutation>,
    /// `matrix = Σ coefficients[i] · basis[i]`; may contain negatives.
    pub coefficients: RatVector,
    pub common_denominator: BigInt,
    pub distinct_nonzero_entries: usize,
    pub zero_count: usize,
    /// All inner permutations are linearly independent.
    pub is_simplicial_face: bool,
}

fn distinct_nonzero(m: &RatMatrix) -> usize {
    m.entries().iter().filter(|e| !e.is_zero()).collect::<BTreeSet<_>>().len()
}

impl ErdosRecord {
    /// Fills in the derived fields.
    pub fn new(
        skeleton: Skeleton,
        matrix: RatMatrix,
        maxtrace: Rational,
        basis: Vec<Permutation>,
        coefficients: RatVector,
        inner_count: usize,
    ) -> Self {
        ErdosRecord {
            common_denominator: matrix.common_denominator(),
            distinct_nonzero_entries: distinct_nonzero(&matrix),
            zero_count: matrix.entries().iter().filter(|e| e.is_zero()).count(),
            is_simplicial_face: inner_count == basis.len(),
            skeleton,
            matrix,
            maxtrace,
            basis,
            coefficients,
        }
    }

    pub fn all_nonzero_distinct(&self) -> bool {
        let n = self.matrix.rows();
        self.distinct_nonzero_entries + self.zero_count == n * n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Erdos,
    NegativeEntry,
    OuterTraceExcess,
    NegativeAndExcess,
    /// Passes every check, but its pattern is strictly smaller than the skeleton.
    SkeletonShrink,
}

/// Result of evaluating the candidate of one admissible skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateOutcome {
    pub skeleton: Skeleton,
    pub verdict: Verdict,
    /// `E_S`, the unique affine combination of the basis with all inner
    /// traces equal to its squared Frobenius norm.
    pub candidate: RatMatrix,
    pub inner_count: usize,
    pub basis_len: usize,
    /// Present iff `verdict == Verdict::Erdos`.
    pub record: Option<ErdosRecord>,
}

impl CandidateOutcome {
    pub fn is_simplicial(&self) -> bool {
        self.inner_count == self.basis_len
    }
}

/// Builds and classifies the only possible Erdős matrix with skeleton `s`.
///
/// Picks a maximal independent set of inner permutations, solves
/// `G·y = 1` for their Gram matrix `G`, normalizes `x = y / Σy`, forms
/// `E = Σ x_i σ_i` and checks nonnegativity, that no outer permutation
/// beats the common inner trace, and that the skeleton did not shrink.
pub fn candidate_for_skeleton(s: &Skeleton) -> Result<CandidateOutcome> {
    if !is_admissible(s) {
        return Err(Error::NotAdmissible);
    }
    let n = s.dim();
    let inner = inner_permutations(s);
    let max_rank = (n - 1) * (n - 1) + 1;
    let mut echelon = EchelonBasis::new();
    let mut basis = Vec::new();
    for p in &inner {
        if echelon.insert(p.to_vector()) {
            basis.push(p.clone());
            if basis.len() == max_rank {
                break;
            }
        }
    }

    let l = basis.len();
    let gram = RatMatrix::from_fn(l, l, |i, j| Rational::from_integer(basis[i].agreement(&basis[j]).into()));
    let y = solve_linear(&gram, &alloc::vec![Rational::one(); l])?;
    let total = y.iter().fold(Rational::zero(), |acc, v| acc + v);
    debug_assert!(total.is_positive());
    let x: RatVector = y.into_iter().map(|v| v / &total).collect();

    let mut e = RatMatrix::zeros(n, n);
    for (c, p) in x.iter().zip(&basis) {
        for (i, &j) in p.image().iter().enumerate() {
            e[(i, j)] += c;
        }
    }

    let inner_trace = sigma_trace(&e, &basis[0])?;
    let negative = e.has_negative_entry();
    let (mt, _) = maxtrace(&e)?;
    let excess = mt > inner_trace;
    let verdict = match (negative, excess) {
        (true, true) => Verdict::NegativeAndExcess,
        (true, false) => Verdict::NegativeEntry,
        (false, true) => Verdict::OuterTraceExcess,
        (false, false) if skel(&e)? != *s => Verdict::SkeletonShrink,
        (false, false) => Verdict::Erdos,
    };
    let record = (verdict == Verdict::Erdos)
        .then(|| ErdosRecord::new(*s, e.clone(), mt, basis.clone(), x, inner.len()));
    Ok(CandidateOutcome { skeleton: *s, verdict, candidate: e, inner_count: inner.len(), basis_len: l, record })
}

/// Re-checks every invariant of a record from scratch.
pub fn verify_record(r: &ErdosRecord) -> bool {
    let n = r.skeleton.dim();
    if r.matrix.rows() != n || !r.matrix.is_square() || r.basis.len() != r.coefficients.len() {
        return false;
    }
    if skel(&r.matrix).ok() != Some(r.skeleton) || !is_bistochastic(&r.matrix) {
        return false;
    }
    if r.basis.iter().any(|p| !p.is_inner(&r.skeleton)) {
        return false;
    }
    let mut rebuilt = RatMatrix::zeros(n, n);
    for (c, p) in r.coefficients.iter().zip(&r.basis) {
        if rebuilt.add_scaled(c, &p.to_matrix()).is_err() {
            return false;
        }
    }
    if rebuilt != r.matrix || !r.coefficients.iter().fold(Rational::zero(), |a, c| a + c).is_one() {
        return false;
    }
    let mut echelon = EchelonBasis::new();
    if !r.basis.iter().all(|p| echelon.insert(p.to_vector())) {
        return false;
    }
    let Ok((mt, _)) = maxtrace(&r.matrix) else { return false };
    mt == r.maxtrace
        && mt == frobenius_norm_sq(&r.matrix)
        && r.common_denominator == r.matrix.common_denominator()
        && r.distinct_nonzero_entries == distinct_nonzero(&r.matrix)
        && r.zero_count == r.matrix.entries().iter().filter(|e| e.is_zero()).count()
        && r.is_simplicial_face == (count_inner_permutations(&r.skeleton) == r.basis.len())
}

/// True iff `b = L·a·R` or `b = L·aᵀ·R` for some permutation matrices.
pub fn are_equivalent(a: &RatMatrix, b: &RatMatrix) -> bool {
    let n = a.rows();
    if !a.is_square() || !b.is_square() || b.rows() != n {
        return false;
    }
    let sorted_cols = |m: &RatMatrix| {
        let mut cols: Vec<Vec<Rational>> = (0..n).map(|j| (0..n).map(|i| m[(i, j)].clone()).collect()).collect();
        cols.sort();
        cols
    };
    let mut a_sorted = a.entries().to_vec();
    let mut b_sorted = b.entries().to_vec();
    a_sorted.sort();
    b_sorted.sort();
    if a_sorted != b_sorted {
        return false;
    }
    let target = sorted_cols(b);
    let cols: Vec<usize> = (0..n).collect();
    [a.clone(), a.transpose()].iter().any(|base| {
        all_permutations(n)
            .iter()
            .any(|l| sorted_cols(&base.permuted(l.image(), &cols)) == target)
    })
}
