//! Parallel, resumable skeleton sweep.
//!
//! Phase one splits the mask space into a fixed number of contiguous chunks
//! and scans them in parallel batches, merging canonical keys. Phase two
//! evaluates the sorted keys in parallel batches and absorbs the outcomes in
//! key order. After every batch the state can be written to a checkpoint
//! file, so an interrupted run resumes where it stopped and ends with the
//! same report as an uninterrupted one.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use erdos_core::enumerate::{evaluate_key, EnumerationReport, MaskSpace};
use erdos_core::skeleton::CanonicalKey;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::json::{RecordJson, SummaryJson};
use crate::{Error, Result};

const CHECKPOINT_VERSION: u32 = 1;
const MAX_CHUNKS: u64 = 1024;
const KEYS_PER_UNIT: usize = 256;

/// Settings of one sweep.
#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub n: usize,
    pub fix_identity: bool,
    /// Thread count; `0` lets the pool choose.
    pub workers: usize,
    /// Read on start when present, rewritten after every batch.
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many work units in this invocation. A unit is one
    /// mask chunk in phase one or a batch of keys in phase two.
    pub stop_after: Option<usize>,
}

impl SweepOptions {
    pub fn new(n: usize, fix_identity: bool, workers: usize) -> Self {
        SweepOptions { n, fix_identity, workers, checkpoint: None, stop_after: None }
    }
}

/// Where a sweep stands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub chunks_done: u64,
    pub chunks: u64,
    pub keys_done: usize,
    /// Known only once phase one is complete.
    pub keys: Option<usize>,
}

impl Progress {
    pub fn is_complete(&self) -> bool {
        self.keys == Some(self.keys_done)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepOutcome {
    Complete(EnumerationReport),
    Interrupted(Progress),
}

struct State {
    space: MaskSpace,
    chunks: u64,
    chunks_done: u64,
    keys: BTreeSet<CanonicalKey>,
    sorted: Vec<CanonicalKey>,
    keys_done: usize,
    report: EnumerationReport,
}

impl State {
    fn fresh(n: usize, fix_identity: bool) -> Result<Self> {
        let space = MaskSpace::new(n, fix_identity)?;
        Ok(State {
            space,
            chunks: space.len().min(MAX_CHUNKS),
            chunks_done: 0,
            keys: BTreeSet::new(),
            sorted: Vec::new(),
            keys_done: 0,
            report: EnumerationReport::new(n),
        })
    }

    fn chunk(&self, c: u64) -> std::ops::Range<u64> {
        let len = self.space.len() as u128;
        let at = |c: u64| (len * c as u128 / self.chunks as u128) as u64;
        at(c)..at(c + 1)
    }

    fn phase_one_done(&self) -> bool {
        self.chunks_done == self.chunks
    }

    fn progress(&self) -> Progress {
        Progress {
            chunks_done: self.chunks_done,
            chunks: self.chunks,
            keys_done: self.keys_done,
            keys: self.phase_one_done().then_some(self.sorted.len()),
        }
    }
}

/// Sweep without checkpointing.
pub fn enumerate_erdos(n: usize, fix_identity: bool, workers: usize) -> Result<EnumerationReport> {
    match run_sweep(&SweepOptions::new(n, fix_identity, workers), &mut |_| {})? {
        SweepOutcome::Complete(report) => Ok(report),
        SweepOutcome::Interrupted(_) => unreachable!("no stop budget was set"),
    }
}

/// Runs or resumes a sweep, calling `on_progress` after every batch.
pub fn run_sweep(opts: &SweepOptions, on_progress: &mut dyn FnMut(&Progress)) -> Result<SweepOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let mut state = match &opts.checkpoint {
        Some(path) if path.exists() => load_checkpoint(path, opts.n, opts.fix_identity)?,
        _ => State::fresh(opts.n, opts.fix_identity)?,
    };
    let threads = pool.current_num_threads() as u64;
    let mut budget = opts.stop_after.unwrap_or(usize::MAX);

    while !state.phase_one_done() {
        if budget == 0 {
            return Ok(SweepOutcome::Interrupted(state.progress()));
        }
        let take = (threads * 4).min(state.chunks - state.chunks_done).min(budget as u64);
        let ranges: Vec<_> = (state.chunks_done..state.chunks_done + take).map(|c| state.chunk(c)).collect();
        let space = state.space;
        let found = pool.install(|| {
            ranges.into_par_iter().map(|r| space.scan(r)).reduce(BTreeSet::new, |mut a, mut b| {
                if a.len() < b.len() {
                    std::mem::swap(&mut a, &mut b);
                }
                a.extend(b);
                a
            })
        });
        state.keys.extend(found);
        state.chunks_done += take;
        budget -= take as usize;
        if state.phase_one_done() {
            state.sorted = std::mem::take(&mut state.keys).into_iter().collect();
        }
        save_if_requested(opts, &state)?;
        on_progress(&state.progress());
    }

    while state.keys_done < state.sorted.len() {
        if budget == 0 {
            return Ok(SweepOutcome::Interrupted(state.progress()));
        }
        let units = (threads as usize * 4).min(budget);
        let end = (state.keys_done + units * KEYS_PER_UNIT).min(state.sorted.len());
        let batch = &state.sorted[state.keys_done..end];
        let outcomes: Vec<_> = pool.install(|| batch.par_iter().map(evaluate_key).collect());
        for outcome in outcomes.into_iter().flatten() {
            state.report.absorb(outcome);
        }
        budget -= (end - state.keys_done).div_ceil(KEYS_PER_UNIT);
        state.keys_done = end;
        save_if_requested(opts, &state)?;
        on_progress(&state.progress());
    }

    if opts.checkpoint.is_some() && state.sorted.is_empty() {
        save_if_requested(opts, &state)?;
    }
    let mut report = state.report;
    report.finalize();
    Ok(SweepOutcome::Complete(report))
}

#[derive(Serialize, Deserialize)]
struct CheckpointBody {
    version: u32,
    n: usize,
    fix_identity: bool,
    chunks: u64,
    chunks_done: u64,
    /// Canonical codes in hex; sorted once phase one is done.
    keys: Vec<String>,
    keys_done: usize,
    summary: SummaryJson,
    records: Vec<RecordJson>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    digest: String,
    body: CheckpointBody,
}

fn digest_of(body: &CheckpointBody) -> String {
    let bytes = serde_json::to_vec(body).expect("plain data serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn save_if_requested(opts: &SweepOptions, state: &State) -> Result<()> {
    let Some(path) = &opts.checkpoint else {
        return Ok(());
    };
    let keys = if state.phase_one_done() { &state.sorted[..] } else { &[] };
    let codes = keys
        .iter()
        .chain(state.keys.iter())
        .map(|k| format!("{:x}", k.code().expect("sweep dimension fits a code")))
        .collect();
    let body = CheckpointBody {
        version: CHECKPOINT_VERSION,
        n: state.space.dim(),
        fix_identity: state.space.fix_identity(),
        chunks: state.chunks,
        chunks_done: state.chunks_done,
        keys: codes,
        keys_done: state.keys_done,
        summary: SummaryJson::from(&state.report),
        records: state.report.records.iter().map(RecordJson::from).collect(),
    };
    let file = CheckpointFile { digest: digest_of(&body), body };
    let text = serde_json::to_string(&file).expect("plain data serializes");
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|source| Error::Io { path: tmp.clone(), source })?;
    fs::rename(&tmp, path).map_err(|source| Error::Io { path: path.clone(), source })
}

fn load_checkpoint(path: &Path, n: usize, fix_identity: bool) -> Result<State> {
    let corrupt = |why: String| Error::CorruptCheckpoint { path: path.to_path_buf(), reason: why };
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let file: CheckpointFile = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
    if digest_of(&file.body) != file.digest {
        return Err(corrupt("digest mismatch".into()));
    }
    let body = file.body;
    if body.version != CHECKPOINT_VERSION {
        return Err(corrupt(format!("unsupported version {}", body.version)));
    }
    if body.n != n || body.fix_identity != fix_identity {
        return Err(corrupt(format!(
            "written for n={} fix_identity={}, requested n={n} fix_identity={fix_identity}",
            body.n, body.fix_identity
        )));
    }
    let mut state = State::fresh(n, fix_identity)?;
    if body.chunks != state.chunks || body.chunks_done > body.chunks {
        return Err(corrupt("chunk layout does not match".into()));
    }
    state.chunks_done = body.chunks_done;
    let keys = body
        .keys
        .iter()
        .map(|h| {
            let code = u64::from_str_radix(h, 16).map_err(|_| corrupt(format!("bad key {h:?}")))?;
            CanonicalKey::from_code(n, code).map_err(|e| corrupt(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    if state.phase_one_done() {
        state.sorted = keys;
        if !state.sorted.windows(2).all(|w| w[0] < w[1]) || body.keys_done > state.sorted.len() {
            return Err(corrupt("key list is inconsistent".into()));
        }
        state.keys_done = body.keys_done;
    } else {
        state.keys = keys.into_iter().collect();
    }
    let records = body.records.iter().map(RecordJson::to_record).collect::<Result<Vec<_>>>()?;
    state.report = body.summary.to_report(records);
    if state.report.n != n || !state.report.check_consistency() {
        return Err(corrupt("partial report is inconsistent".into()));
    }
    Ok(state)
}
