//! The `erdos` command line.
//!
//! Exit status is 0 on success, 1 when the input fails the check being
//! asked for, and 2 on usage, parse or file errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use erdos_core::enumerate::{max_denominator, query_distinct_entries, EnumerationReport};
use erdos_core::erdos::{maxtrace, ErdosRecord};
use erdos_core::exactnum::{frobenius_norm_sq, is_bistochastic};
use erdos_core::rcds::{erdos_criterion, inner_traces, is_rcds, uv_decompose};
use erdos_core::skeleton::{canonical_key, is_admissible};
use erdos_core::{RatMatrix, Rational};
use num_bigint::BigInt;
use num_traits::One;

use crate::driver::{run_sweep, Progress, SweepOptions, SweepOutcome};
use crate::format::{approx, format_matrix, format_matrix_approx, format_rational, format_set, format_vector};
use crate::json::{csv_row, parse_records, record_to_line, SummaryJson, UvJson, CSV_HEADER};
use crate::spec::parse_family_spec;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "erdos", version, about = "Enumerate, verify and construct Erdős matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep all n×n skeletons and classify their candidates.
    Enumerate(EnumerateArgs),
    /// Check a matrix: bistochastic, RCDS, Erdős, maxtrace, inner traces.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        /// Also show decimal approximations.
        #[arg(long)]
        approx: bool,
    },
    /// Build a family matrix from a descriptor such as `xrsn:3,1,5`.
    Family {
        #[arg(long)]
        spec: String,
        /// Append a `#` line with the RCDS and Erdős verdicts.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        approx: bool,
    },
    /// Print the (u, v) decomposition of an RCDS matrix and the criterion verdict.
    Rcds {
        #[arg(long)]
        matrix: PathBuf,
        /// Emit the decomposition as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the maximum diagonal sum and a permutation attaining it.
    Maxtrace {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        approx: bool,
    },
    /// Print the canonical representative of a 0/1 skeleton's class.
    Canonical {
        #[arg(long)]
        skeleton: PathBuf,
    },
    /// Recompute the class statistics of an enumeration output.
    Stats {
        #[arg(long)]
        records: PathBuf,
        /// Summary written by `enumerate`; defaults to `<records>.summary.json`.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Select extremal records from an enumeration output.
    #[command(group(ArgGroup::new("select").required(true).args(["distinct", "max_denominator"])))]
    Query {
        #[arg(long)]
        records: PathBuf,
        /// Records whose nonzero entries are pairwise distinct.
        #[arg(long)]
        distinct: bool,
        /// The record with the largest common denominator.
        #[arg(long)]
        max_denominator: bool,
        /// Print at most this many records.
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    n: u8,
    /// Only visit skeletons containing the identity.
    #[arg(long)]
    fix_identity: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// JSON-lines file of Erdős records.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON; defaults to `<out>.summary.json` when `--out` is given.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// CSV file with the `n,count,total` row.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Resume from and keep updating this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Permit the hours-scale n = 6 sweep.
    #[arg(long)]
    allow_n6: bool,
    /// Report progress on stderr.
    #[arg(long)]
    progress: bool,
    /// Stop after this many work units (for testing resumption).
    #[arg(long, hide = true)]
    stop_after: Option<usize>,
}

enum Status {
    Ok,
    Failed,
}

struct Usage(String);

enum Failure {
    Usage(Usage),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<erdos_core::Error> for Failure {
    fn from(e: erdos_core::Error) -> Self {
        Failure::Run(e.into())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(Error::Io { path: PathBuf::from("<stdout>"), source: e })
    }
}

type CmdResult = std::result::Result<Status, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Status::Ok) => 0,
        Ok(Status::Failed) => 1,
        Err(Failure::Usage(Usage(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Enumerate(args) => enumerate(args, out, err),
        Command::Verify { matrix, approx } => verify(&read_matrix(&matrix)?, approx, out),
        Command::Family { spec, verify, approx } => family(&spec, verify, approx, out),
        Command::Rcds { matrix, json } => rcds(&read_matrix(&matrix)?, json, out),
        Command::Maxtrace { matrix, approx } => max_trace(&read_matrix(&matrix)?, approx, out),
        Command::Canonical { skeleton } => canonical(&skeleton, out),
        Command::Stats { records, summary } => stats(&records, summary, out),
        Command::Query { records, distinct, max_denominator: _, limit } => query(&records, distinct, limit, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Io { .. } => e,
        other => Error::Parse(format!("{}: {other}", path.display())),
    }
}

fn read_matrix(path: &Path) -> Result<RatMatrix> {
    crate::format::parse_matrix(&read(path)?).map_err(|e| in_file(path, e))
}

fn require_square(m: &RatMatrix) -> std::result::Result<(), Failure> {
    if m.rows() != m.cols() {
        return Err(Failure::Usage(Usage(format!("matrix is {}x{}, expected square", m.rows(), m.cols()))));
    }
    Ok(())
}

fn enumerate(args: EnumerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let n = args.n as usize;
    if n == 6 && !args.allow_n6 {
        return Err(Failure::Usage(Usage("--n 6 runs for a long time; pass --allow-n6 to confirm".into())));
    }
    if n == 6 && args.checkpoint.is_none() {
        return Err(Failure::Usage(Usage("--n 6 requires --checkpoint FILE".into())));
    }
    let opts = SweepOptions {
        n,
        fix_identity: args.fix_identity,
        workers: args.workers,
        checkpoint: args.checkpoint.clone(),
        stop_after: args.stop_after,
    };
    let mut report_progress = |p: &Progress| {
        if args.progress {
            let keys = p.keys.map_or_else(|| "?".to_string(), |k| k.to_string());
            let _ = writeln!(err, "chunks {}/{} keys {}/{}", p.chunks_done, p.chunks, p.keys_done, keys);
        }
    };
    let report = match run_sweep(&opts, &mut report_progress)? {
        SweepOutcome::Complete(report) => report,
        SweepOutcome::Interrupted(p) => {
            writeln!(out, "interrupted n={n} chunks={}/{} keys={}", p.chunks_done, p.chunks, p.keys_done)?;
            return Ok(Status::Ok);
        }
    };
    if let Some(path) = &args.out {
        let text: String = report.records.iter().map(|r| record_to_line(r) + "\n").collect();
        write_file(path, &text)?;
    }
    let summary_path = args.summary.clone().or_else(|| args.out.as_ref().map(|p| summary_sibling(p)));
    if let Some(path) = summary_path {
        let text = serde_json::to_string_pretty(&SummaryJson::from(&report)).expect("plain data serializes");
        write_file(&path, &(text + "\n"))?;
    }
    if let Some(path) = &args.csv {
        write_file(path, &format!("{CSV_HEADER}\n{}\n", csv_row(&report)))?;
    }
    writeln!(out, "n={n} erdos={} admissible={}", report.erdos_count, report.admissible_classes)?;
    write_breakdown(&report, out)?;
    Ok(Status::Ok)
}

fn summary_sibling(records: &Path) -> PathBuf {
    let mut name = records.as_os_str().to_owned();
    name.push(".summary.json");
    PathBuf::from(name)
}

fn write_breakdown(r: &EnumerationReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "shrink={} negative_total={} excess_total={} both={} negative_only={} excess_only={}",
        r.shrink_count,
        r.negative_total(),
        r.outer_excess_total(),
        r.both_count,
        r.negative_count,
        r.outer_excess_count
    )?;
    writeln!(
        out,
        "simplicial_admissible={}/{} simplicial_failures={}/{}",
        r.simplicial_admissible,
        r.admissible_classes,
        r.simplicial_failures,
        r.failures()
    )
}

fn verify(m: &RatMatrix, show_approx: bool, out: &mut dyn Write) -> CmdResult {
    require_square(m)?;
    let bistochastic = is_bistochastic(m);
    let rcds = bistochastic && is_rcds(m)?;
    let traces = inner_traces(m)?;
    let (mt, _) = maxtrace(m)?;
    let erdos = bistochastic && mt == frobenius_norm_sq(m);
    write!(
        out,
        "bistochastic={bistochastic} rcds={rcds} inner_traces={} erdos={erdos} maxtrace={}",
        format_set(&traces),
        format_rational(&mt)
    )?;
    if show_approx {
        write!(out, " maxtrace~{:.6}", approx(&mt))?;
    }
    writeln!(out)?;
    Ok(if erdos { Status::Ok } else { Status::Failed })
}

/// Rewrites `values` over their least common denominator.
fn over_common_denominator(values: &[Rational]) -> Vec<String> {
    let den = values.iter().fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
    values.iter().map(|v| format!("{}/{den}", v.numer() * (&den / v.denom()))).collect()
}

fn family(spec: &str, check: bool, show_approx: bool, out: &mut dyn Write) -> CmdResult {
    let m = parse_family_spec(spec)?.build()?;
    write!(out, "{}", format_matrix(&m))?;
    if show_approx {
        for line in format_matrix_approx(&m).lines() {
            writeln!(out, "# {line}")?;
        }
    }
    if !check {
        return Ok(Status::Ok);
    }
    let rcds = is_rcds(&m)?;
    let traces = inner_traces(&m)?;
    let (mt, _) = maxtrace(&m)?;
    let erdos = mt == frobenius_norm_sq(&m);
    if let [t] = &traces[..] {
        let both = over_common_denominator(&[t.clone(), mt]);
        writeln!(out, "# rcds={rcds} inner_trace={} maxtrace={} erdos={erdos}", both[0], both[1])?;
    } else {
        writeln!(out, "# rcds={rcds} inner_traces={} maxtrace={} erdos={erdos}", format_set(&traces), format_rational(&mt))?;
    }
    Ok(if erdos { Status::Ok } else { Status::Failed })
}

fn rcds(m: &RatMatrix, json: bool, out: &mut dyn Write) -> CmdResult {
    require_square(m)?;
    if !is_bistochastic(m) {
        writeln!(out, "bistochastic=false")?;
        return Ok(Status::Failed);
    }
    if !is_rcds(m)? {
        writeln!(out, "rcds=false inner_traces={}", format_set(&inner_traces(m)?))?;
        return Ok(Status::Failed);
    }
    let d = uv_decompose(m)?;
    let criterion = erdos_criterion(&d);
    if json {
        writeln!(out, "{}", serde_json::to_string(&UvJson::from(&d)).expect("plain data serializes"))?;
    } else {
        writeln!(out, "u={}", format_vector(&d.u))?;
        writeln!(out, "v={}", format_vector(&d.v))?;
    }
    writeln!(out, "criterion={criterion}")?;
    Ok(if criterion { Status::Ok } else { Status::Failed })
}

fn max_trace(m: &RatMatrix, show_approx: bool, out: &mut dyn Write) -> CmdResult {
    require_square(m)?;
    let (mt, sigma) = maxtrace(m)?;
    write!(out, "maxtrace={} permutation={sigma}", format_rational(&mt))?;
    if show_approx {
        write!(out, " maxtrace~{:.6}", approx(&mt))?;
    }
    writeln!(out)?;
    Ok(Status::Ok)
}

fn canonical(path: &Path, out: &mut dyn Write) -> CmdResult {
    let s = crate::format::parse_skeleton(&read(path)?).map_err(|e| in_file(path, e))?;
    let rep = canonical_key(&s).representative();
    writeln!(out, "# key={} admissible={}", rep.to_hex(), is_admissible(&s))?;
    write!(out, "{rep}")?;
    Ok(Status::Ok)
}

fn load_records(path: &Path) -> Result<Vec<ErdosRecord>> {
    parse_records(&read(path)?).map_err(|e| in_file(path, e))
}

fn stats(records_path: &Path, summary: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let records = load_records(records_path)?;
    let summary_path = summary.unwrap_or_else(|| summary_sibling(records_path));
    let summary: SummaryJson = serde_json::from_str(&read(&summary_path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", summary_path.display())))?;
    let dims: Vec<usize> = records.iter().map(|r| r.skeleton.dim()).collect();
    if dims.iter().any(|&d| d != summary.n) {
        return Err(Error::Parse(format!("{}: records and summary disagree on n", records_path.display())).into());
    }
    let mut report = summary.to_report(records);
    report.finalize();
    let consistent = report.check_consistency();
    let simplicial_erdos = report.records.iter().filter(|r| r.is_simplicial_face).count();
    let simplicial_ok = simplicial_erdos + report.simplicial_failures == report.simplicial_admissible;
    writeln!(out, "n={} erdos={} admissible={}", report.n, report.erdos_count, report.admissible_classes)?;
    write_breakdown(&report, out)?;
    writeln!(out, "simplicial_erdos={simplicial_erdos} consistent={}", consistent && simplicial_ok)?;
    Ok(if consistent && simplicial_ok { Status::Ok } else { Status::Failed })
}

fn write_record(r: &ErdosRecord, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "# denominator={} distinct_nonzero={} zeros={} simplicial={} skeleton_hex={}",
        r.common_denominator,
        r.distinct_nonzero_entries,
        r.zero_count,
        r.is_simplicial_face,
        r.skeleton.to_hex()
    )?;
    write!(out, "{}", format_matrix(&r.matrix))
}

fn query(path: &Path, distinct: bool, limit: Option<usize>, out: &mut dyn Write) -> CmdResult {
    let records = load_records(path)?;
    let n = records.first().map_or(0, |r| r.skeleton.dim());
    if records.iter().any(|r| r.skeleton.dim() != n) {
        return Err(Error::Parse(format!("{}: records of mixed dimension", path.display())).into());
    }
    let mut report = EnumerationReport::new(n);
    report.erdos_count = records.len();
    report.records = records;
    report.finalize();
    if distinct {
        let hits = query_distinct_entries(&report);
        writeln!(out, "# distinct={}", hits.len())?;
        for r in hits.into_iter().take(limit.unwrap_or(usize::MAX)) {
            write_record(r, out)?;
        }
    } else {
        write_record(max_denominator(&report)?, out)?;
    }
    Ok(Status::Ok)
}
