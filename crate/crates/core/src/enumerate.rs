//! Sequential building blocks of the skeleton sweep.
//!
//! The sweep runs in two phases. Phase one walks a range of the bitmask
//! space, drops masks that cannot matter or are redundant within their
//! orbit, and collects canonical keys. Phase two evaluates the candidate of
//! each distinct admissible key. Both phases are pure, so drivers may split
//! them across threads or checkpoints freely.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::ops::Range;

use crate::erdos::{candidate_for_skeleton, CandidateOutcome, ErdosRecord, Verdict};
use crate::skeleton::{canonical_key, is_admissible, CanonicalKey, Skeleton};
use crate::{Error, Result};

/// Largest `n` the sweep accepts.
pub const MAX_ENUM_DIM: usize = 6;

/// The masks visited for one `n`: all `2^(n²)` of them, or only the
/// `2^(n²−n)` that contain the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaskSpace {
    n: usize,
    fix_identity: bool,
    free: u64,
    diag: u64,
    col_masks: [u64; 8],
}

impl MaskSpace {
    pub fn new(n: usize, fix_identity: bool) -> Result<Self> {
        if n == 0 || n > MAX_ENUM_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_ENUM_DIM });
        }
        let all = (1u64 << (n * n)) - 1;
        let diag = (0..n).fold(0u64, |acc, i| acc | 1 << (i * n + i));
        let free = if fix_identity { all & !diag } else { all };
        let mut col_masks = [0u64; 8];
        for (j, c) in col_masks[..n].iter_mut().enumerate() {
            *c = (0..n).fold(0, |acc, i| acc | 1 << (i * n + j));
        }
        Ok(MaskSpace { n, fix_identity, free, diag: if fix_identity { diag } else { 0 }, col_masks })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn fix_identity(&self) -> bool {
        self.fix_identity
    }

    /// Number of masks in the space.
    pub fn len(&self) -> u64 {
        1u64 << self.free.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `index`-th mask: the bits of `index` scattered into the free
    /// positions, plus the fixed diagonal.
    pub fn mask_at(&self, index: u64) -> u64 {
        let mut out = 0u64;
        let mut free = self.free;
        let mut k = 0;
        while free != 0 {
            let bit = free & free.wrapping_neg();
            if index >> k & 1 == 1 {
                out |= bit;
            }
            free ^= bit;
            k += 1;
        }
        out | self.diag
    }

    /// Cheap rejection before canonicalization. Keeps masks with no empty
    /// row or column whose degrees are sorted: independently for rows and
    /// columns, or, with the diagonal fixed, as `(row degree, column degree)`
    /// pairs per index, since only simultaneous permutations keep the
    /// diagonal in place. Every orbit keeps at least one member.
    pub fn prefilter(&self, mask: u64) -> bool {
        let n = self.n;
        let row_bits = (1u64 << n) - 1;
        let mut prev_row = 0u32;
        let mut prev_pair = (0u32, 0u32);
        let mut prev_col = 0u32;
        for i in 0..n {
            let rd = (mask >> (i * n) & row_bits).count_ones();
            let cd = (mask & self.col_masks[i]).count_ones();
            if rd == 0 || cd == 0 {
                return false;
            }
            if self.fix_identity {
                if (rd, cd) < prev_pair {
                    return false;
                }
                prev_pair = (rd, cd);
            } else {
                if rd < prev_row || cd < prev_col {
                    return false;
                }
                prev_row = rd;
                prev_col = cd;
            }
        }
        true
    }

    /// Canonical keys of the masks with indices in `range` that pass the
    /// prefilter.
    pub fn scan(&self, range: Range<u64>) -> BTreeSet<CanonicalKey> {
        let mut keys = BTreeSet::new();
        if range.is_empty() {
            return keys;
        }
        let mut sub = self.mask_at(range.start) & self.free;
        for _ in range {
            let mask = sub | self.diag;
            if self.prefilter(mask) {
                let s = Skeleton::from_mask(self.n, mask).expect("n <= 8");
                keys.insert(canonical_key(&s));
            }
            // next subset of `free` in increasing order
            sub = sub.wrapping_sub(self.free) & self.free;
        }
        keys
    }
}

/// Evaluates the class of `key`; `None` when it is not admissible.
pub fn evaluate_key(key: &CanonicalKey) -> Option<CandidateOutcome> {
    let s = key.representative();
    if !is_admissible(&s) {
        return None;
    }
    Some(candidate_for_skeleton(&s).expect("admissible skeleton"))
}

/// Counts per verdict class and the Erdős records of one sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    pub n: usize,
    pub admissible_classes: usize,
    pub erdos_count: usize,
    pub shrink_count: usize,
    /// Negative entry only.
    pub negative_count: usize,
    /// Outer trace excess only.
    pub outer_excess_count: usize,
    pub both_count: usize,
    pub simplicial_admissible: usize,
    pub simplicial_failures: usize,
    /// Sorted by canonical key of the skeleton.
    pub records: Vec<ErdosRecord>,
}

impl EnumerationReport {
    pub fn new(n: usize) -> Self {
        EnumerationReport {
            n,
            admissible_classes: 0,
            erdos_count: 0,
            shrink_count: 0,
            negative_count: 0,
            outer_excess_count: 0,
            both_count: 0,
            simplicial_admissible: 0,
            simplicial_failures: 0,
            records: Vec::new(),
        }
    }

    pub fn absorb(&mut self, outcome: CandidateOutcome) {
        self.admissible_classes += 1;
        let simplicial = outcome.is_simplicial();
        if simplicial {
            self.simplicial_admissible += 1;
            if outcome.verdict != Verdict::Erdos {
                self.simplicial_failures += 1;
            }
        }
        match outcome.verdict {
            Verdict::Erdos => {
                self.erdos_count += 1;
                self.records.push(outcome.record.expect("Erdős outcome carries a record"));
            }
            Verdict::SkeletonShrink => self.shrink_count += 1,
            Verdict::NegativeEntry => self.negative_count += 1,
            Verdict::OuterTraceExcess => self.outer_excess_count += 1,
            Verdict::NegativeAndExcess => self.both_count += 1,
        }
    }

    /// Adds the counts and records of `other`; call [`finalize`] afterwards.
    ///
    /// [`finalize`]: EnumerationReport::finalize
    pub fn merge(&mut self, other: EnumerationReport) {
        self.admissible_classes += other.admissible_classes;
        self.erdos_count += other.erdos_count;
        self.shrink_count += other.shrink_count;
        self.negative_count += other.negative_count;
        self.outer_excess_count += other.outer_excess_count;
        self.both_count += other.both_count;
        self.simplicial_admissible += other.simplicial_admissible;
        self.simplicial_failures += other.simplicial_failures;
        self.records.extend(other.records);
    }

    pub fn finalize(&mut self) {
        self.records.sort_by_cached_key(|r| canonical_key(&r.skeleton));
    }

    /// Classes whose candidate has a negative entry (with or without excess).
    pub fn negative_total(&self) -> usize {
        self.negative_count + self.both_count
    }

    /// Classes whose candidate's maxtrace beats the inner trace.
    pub fn outer_excess_total(&self) -> usize {
        self.outer_excess_count + self.both_count
    }

    pub fn failures(&self) -> usize {
        self.admissible_classes - self.erdos_count
    }

    /// `count / (2^(n²) / (2 (n!)²))`, the count relative to the naive
    /// orbit-size estimate.
    pub fn estimate_ratio(&self) -> f64 {
        let n = self.n as u32;
        let fact: f64 = (1..=n).map(f64::from).product();
        let estimate = (2f64).powi((n * n) as i32) / (2.0 * fact * fact);
        self.erdos_count as f64 / estimate
    }

    pub fn check_consistency(&self) -> bool {
        let keys: BTreeSet<_> = self.records.iter().map(|r| canonical_key(&r.skeleton)).collect();
        self.admissible_classes
            == self.erdos_count + self.shrink_count + self.negative_count + self.outer_excess_count + self.both_count
            && self.records.len() == self.erdos_count
            && keys.len() == self.records.len()
    }
}

/// Whole sweep on the current thread.
pub fn enumerate_sequential(n: usize, fix_identity: bool) -> Result<EnumerationReport> {
    let space = MaskSpace::new(n, fix_identity)?;
    let keys = space.scan(0..space.len());
    let mut report = EnumerationReport::new(n);
    for outcome in keys.iter().filter_map(evaluate_key) {
        report.absorb(outcome);
    }
    report.finalize();
    Ok(report)
}

/// Records whose nonzero entries are pairwise distinct, fewest zeros first,
/// then largest denominator.
pub fn query_distinct_entries(report: &EnumerationReport) -> Vec<&ErdosRecord> {
    let mut out: Vec<&ErdosRecord> = report.records.iter().filter(|r| r.all_nonzero_distinct()).collect();
    out.sort_by_key(|r| (r.zero_count, Reverse(r.common_denominator.clone())));
    out
}

/// The record with the largest common denominator; ties go to the smaller
/// canonical key.
pub fn max_denominator(report: &EnumerationReport) -> Result<&ErdosRecord> {
    report
        .records
        .iter()
        .min_by_key(|r| (Reverse(r.common_denominator.clone()), canonical_key(&r.skeleton)))
        .ok_or(Error::EmptyReport)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RatMatrix;
    use num_bigint::BigInt;

    #[test]
    fn mask_space_sizes() {
        assert_eq!(MaskSpace::new(3, false).unwrap().len(), 512);
        assert_eq!(MaskSpace::new(3, true).unwrap().len(), 64);
        assert!(MaskSpace::new(7, true).is_err());
        assert!(MaskSpace::new(0, true).is_err());
    }

    #[test]
    fn mask_at_agrees_with_incremental_walk() {
        let space = MaskSpace::new(3, true).unwrap();
        let mut sub = 0u64;
        for idx in 0..space.len() {
            assert_eq!(space.mask_at(idx), sub | space.diag);
            sub = sub.wrapping_sub(space.free) & space.free;
        }
        assert_eq!(sub, 0);
    }

    #[test]
    fn split_scans_merge_to_whole() {
        let space = MaskSpace::new(3, false).unwrap();
        let whole = space.scan(0..space.len());
        let mut parts = space.scan(0..100);
        parts.extend(space.scan(100..333));
        parts.extend(space.scan(333..space.len()));
        assert_eq!(whole, parts);
    }

    #[test]
    fn small_counts() {
        for (n, erdos, admissible) in [(1, 1, 1), (2, 2, 2), (3, 6, 6)] {
            let r = enumerate_sequential(n, true).unwrap();
            assert_eq!((r.erdos_count, r.admissible_classes), (erdos, admissible));
            assert!(r.check_consistency());
            assert_eq!(r, enumerate_sequential(n, false).unwrap());
        }
    }

    #[test]
    fn queries_on_small_reports() {
        let r2 = enumerate_sequential(2, true).unwrap();
        assert_eq!(max_denominator(&r2).unwrap().matrix, RatMatrix::uniform(2));
        let r3 = enumerate_sequential(3, true).unwrap();
        assert_eq!(max_denominator(&r3).unwrap().common_denominator, BigInt::from(5));
        assert!(query_distinct_entries(&r3).is_empty());
        assert_eq!(max_denominator(&EnumerationReport::new(3)), Err(Error::EmptyReport));
    }

    #[test]
    fn estimate_ratio_matches_table_rounding() {
        let r3 = enumerate_sequential(3, true).unwrap();
        assert!((r3.estimate_ratio() - 0.84).abs() < 0.005);
    }
}
