//! JSON encodings of records, `(u, v)` decompositions and sweep summaries.
//!
//! Every rational is a `"p/q"` string. Struct field order fixes the key
//! order of the output.

use erdos_core::enumerate::EnumerationReport;
use erdos_core::erdos::{verify_record, ErdosRecord};
use erdos_core::perms::Permutation;
use erdos_core::rcds::UVDecomposition;
use erdos_core::{RatMatrix, Rational, Skeleton};
use serde::{Deserialize, Serialize};

use crate::format::{format_rational, parse_rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub n: usize,
    pub skeleton_hex: String,
    pub matrix: Vec<Vec<String>>,
    pub maxtrace: String,
    /// Permutation images, 0-based.
    pub basis: Vec<Vec<usize>>,
    pub coefficients: Vec<String>,
    pub denominator: String,
    pub distinct_nonzero: usize,
    pub zeros: usize,
    pub simplicial: bool,
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn rationals(values: &[String]) -> Result<Vec<Rational>> {
    values.iter().map(|s| parse_rational(s)).collect()
}

impl From<&ErdosRecord> for RecordJson {
    fn from(r: &ErdosRecord) -> Self {
        let n = r.skeleton.dim();
        RecordJson {
            n,
            skeleton_hex: r.skeleton.to_hex(),
            matrix: (0..n).map(|i| strings(r.matrix.row(i))).collect(),
            maxtrace: format_rational(&r.maxtrace),
            basis: r.basis.iter().map(|p| p.image().to_vec()).collect(),
            coefficients: strings(&r.coefficients),
            denominator: r.common_denominator.to_string(),
            distinct_nonzero: r.distinct_nonzero_entries,
            zeros: r.zero_count,
            simplicial: r.is_simplicial_face,
        }
    }
}

impl RecordJson {
    /// Rebuilds the record, recomputing derived fields, and rejects it
    /// unless it passes [`verify_record`] and the stored derived fields agree.
    pub fn to_record(&self) -> Result<ErdosRecord> {
        let bad = |what: &str| Error::InvalidRecord(format!("{what} (skeleton {})", self.skeleton_hex));
        let skeleton = Skeleton::from_hex(self.n, &self.skeleton_hex)?;
        let rows = self.matrix.iter().map(|r| rationals(r)).collect::<Result<Vec<_>>>()?;
        let matrix = RatMatrix::from_rows(rows)?;
        let basis = self
            .basis
            .iter()
            .map(|img| Permutation::from_image(img.clone()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let coefficients = rationals(&self.coefficients)?;
        let maxtrace = parse_rational(&self.maxtrace)?;
        // the simplicial flag cannot be rederived without the full inner set
        let inner_count = if self.simplicial { basis.len() } else { basis.len() + 1 };
        let record = ErdosRecord::new(skeleton, matrix, maxtrace, basis, coefficients, inner_count);
        if record.common_denominator.to_string() != self.denominator
            || record.distinct_nonzero_entries != self.distinct_nonzero
            || record.zero_count != self.zeros
        {
            return Err(bad("derived fields disagree with the matrix"));
        }
        if !verify_record(&record) {
            return Err(bad("record fails verification"));
        }
        Ok(record)
    }
}

pub fn record_to_line(r: &ErdosRecord) -> String {
    serde_json::to_string(&RecordJson::from(r)).expect("plain data serializes")
}

/// Parses a JSON-lines file of records, verifying each one.
pub fn parse_records(text: &str) -> Result<Vec<ErdosRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let json: RecordJson =
                serde_json::from_str(line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            json.to_record()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UvJson {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub skeleton_hex: String,
}

impl From<&UVDecomposition> for UvJson {
    fn from(d: &UVDecomposition) -> Self {
        UvJson { u: strings(&d.u), v: strings(&d.v), skeleton_hex: d.skeleton.to_hex() }
    }
}

impl UvJson {
    pub fn to_decomposition(&self) -> Result<UVDecomposition> {
        let n = self.u.len();
        if self.v.len() != n {
            return Err(Error::Parse("u and v have different lengths".into()));
        }
        Ok(UVDecomposition {
            u: rationals(&self.u)?,
            v: rationals(&self.v)?,
            skeleton: Skeleton::from_hex(n, &self.skeleton_hex)?,
        })
    }
}

/// Counts of one sweep, without the records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryJson {
    pub n: usize,
    pub admissible: usize,
    pub erdos: usize,
    pub shrink: usize,
    pub negative_only: usize,
    pub excess_only: usize,
    pub both: usize,
    pub negative_total: usize,
    pub excess_total: usize,
    pub simplicial_admissible: usize,
    pub simplicial_failures: usize,
}

impl From<&EnumerationReport> for SummaryJson {
    fn from(r: &EnumerationReport) -> Self {
        SummaryJson {
            n: r.n,
            admissible: r.admissible_classes,
            erdos: r.erdos_count,
            shrink: r.shrink_count,
            negative_only: r.negative_count,
            excess_only: r.outer_excess_count,
            both: r.both_count,
            negative_total: r.negative_total(),
            excess_total: r.outer_excess_total(),
            simplicial_admissible: r.simplicial_admissible,
            simplicial_failures: r.simplicial_failures,
        }
    }
}

impl SummaryJson {
    /// Report with these counts and the given records.
    pub fn to_report(&self, records: Vec<ErdosRecord>) -> EnumerationReport {
        let mut r = EnumerationReport::new(self.n);
        r.admissible_classes = self.admissible;
        r.erdos_count = self.erdos;
        r.shrink_count = self.shrink;
        r.negative_count = self.negative_only;
        r.outer_excess_count = self.excess_only;
        r.both_count = self.both;
        r.simplicial_admissible = self.simplicial_admissible;
        r.simplicial_failures = self.simplicial_failures;
        r.records = records;
        r
    }
}

pub const CSV_HEADER: &str = "n,count,total";

/// `n,count,total` row: Erdős classes and admissible classes.
pub fn csv_row(r: &EnumerationReport) -> String {
    format!("{},{},{}", r.n, r.erdos_count, r.admissible_classes)
}
