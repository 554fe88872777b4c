//! Range-scan driver: sharding, worker pool, ordered output, checkpoint/resume.
//!
//! The coordinator walks the shard's odd `n` in blocks. A block is evaluated in
//! parallel, its records are collected in `n` order, appended to the output,
//! flushed, and only then is the checkpoint advanced. Workers never write.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::biquad::{search_biquadratic, BiquadConjecture};
use crate::bricks;
use crate::checkpoint::Checkpoint;
use crate::cuboids::{self, ConjectureSet};
use crate::error::{Error, Result};
use crate::pythag;
use crate::record::{load_records, write_records, HitRecord, Solid, Task, Witness, SCHEMA_VERSION};

pub const DEFAULT_STRIDE: u64 = 1024;
pub const WORKERS_ENV: &str = "BRICKSCAN_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BiquadParams {
    pub conjecture: BiquadConjecture,
    pub bound: u64,
    pub scale_bound: u64,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub task: Task,
    pub n_min: u64,
    pub n_max: u64,
    pub conjectures: ConjectureSet,
    pub strict: bool,
    pub shard_index: u64,
    pub shard_count: u64,
    pub biquad: Option<BiquadParams>,
    pub output_path: Option<PathBuf>,
    pub checkpoint_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
    pub worker_count: usize,
    /// Odd values of `n` per block; the checkpoint advances once per block.
    pub stride: u64,
    pub overwrite: bool,
    /// Continue from the checkpoint instead of starting fresh.
    pub resume: bool,
    /// Stop (as if interrupted) once every shard value `≤ stop_after` is done.
    pub stop_after: Option<u64>,
}

impl SearchConfig {
    pub fn new(task: Task, n_min: u64, n_max: u64) -> Self {
        SearchConfig {
            task,
            n_min,
            n_max,
            conjectures: ConjectureSet::ALL,
            strict: false,
            shard_index: 0,
            shard_count: 1,
            biquad: None,
            output_path: None,
            checkpoint_path: None,
            summary_path: None,
            worker_count: default_workers(),
            stride: DEFAULT_STRIDE,
            overwrite: false,
            resume: false,
            stop_after: None,
        }
    }

    pub fn biquad(params: BiquadParams) -> Self {
        SearchConfig {
            biquad: Some(params),
            strict: true,
            ..SearchConfig::new(Task::Biquad, 3, 3)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        match self.task {
            Task::Bricks | Task::Cuboids => {
                if self.n_min < 3 || self.n_min > self.n_max {
                    return bad(format!(
                        "need 3 <= n_min <= n_max, got {}..{}",
                        self.n_min, self.n_max
                    ));
                }
            }
            Task::Biquad => {
                if self.biquad.is_none() {
                    return bad("biquad task needs its parameters".into());
                }
            }
        }
        if self.shard_count == 0 || self.shard_index >= self.shard_count {
            return bad(format!(
                "need 0 <= shard_index < shard_count, got {}/{}",
                self.shard_index, self.shard_count
            ));
        }
        if self.worker_count == 0 {
            return bad("worker count must be >= 1".into());
        }
        if self.stride == 0 {
            return bad("checkpoint stride must be >= 1".into());
        }
        if self.checkpoint_path.is_some() && self.output_path.is_none() {
            return bad("a checkpoint needs an output file".into());
        }
        if self.resume && self.checkpoint_path.is_none() {
            return bad("resume needs a checkpoint path".into());
        }
        Ok(())
    }

    fn search_identity(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "task": self.task,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "conjectures": self.conjectures.indices(),
            "strict": self.strict,
            "biquad": self.biquad,
        })
    }

    /// Hash of everything that determines which records exist. Shard layout is
    /// excluded so shard outputs concatenate into the unsharded output.
    pub fn content_fingerprint(&self) -> String {
        hash_json(&self.search_identity())
    }

    /// Hash that a checkpoint must match: search identity plus shard layout.
    pub fn run_fingerprint(&self) -> String {
        let mut v = self.search_identity();
        v["shard_index"] = self.shard_index.into();
        v["shard_count"] = self.shard_count.into();
        hash_json(&v)
    }

    /// Odd `n` in range owned by this shard, ascending.
    pub fn shard_values(&self) -> impl Iterator<Item = u64> + '_ {
        let lo_rank = self.n_min / 2; // rank of the first odd >= n_min
        let hi_rank = (self.n_max - 1) / 2;
        let k = self.shard_count;
        let first = lo_rank + (self.shard_index + k - lo_rank % k) % k;
        (first..=hi_rank).step_by(k as usize).map(|r| 2 * r + 1)
    }
}

fn hash_json(v: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(v).expect("fingerprint json");
    hex::encode(Sha256::digest(bytes))
}

pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Rank of odd `n` among odd integers (1 ↦ 0, 3 ↦ 1, …).
pub fn odd_rank(n: u64) -> u64 {
    n / 2
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub task: String,
    pub fingerprint: String,
    pub n_scanned: u64,
    pub last_completed_n: Option<u64>,
    pub completed: bool,
    pub records: u64,
    pub primitive_records: u64,
    pub degenerate_records: u64,
    /// Brick witnesses by type 1..=3, all and primitive non-degenerate.
    pub bricks_by_type: [u64; 3],
    pub primitive_bricks_by_type: [u64; 3],
    /// Cuboid witnesses by conjecture 1..=6.
    pub cuboids_by_conjecture: [u64; 6],
    pub biquad_hits: u64,
    pub anomalies: u64,
    /// Largest number of witnesses at a single `n` and the smallest such `n`.
    pub max_multiplicity: u64,
    pub max_multiplicity_n: Option<u64>,
    pub wall_seconds: f64,
}

impl Summary {
    /// Adds records to the counts. Records for one n must arrive together.
    pub fn absorb(&mut self, recs: &[HitRecord]) {
        let mut i = 0;
        while i < recs.len() {
            let n = recs[i].n;
            let mut j = i;
            while j < recs.len() && recs[j].n == n {
                j += 1;
            }
            if let Some(n) = n {
                let mult = (j - i) as u64;
                if mult > self.max_multiplicity {
                    self.max_multiplicity = mult;
                    self.max_multiplicity_n = Some(n);
                }
            }
            i = j;
        }
        for r in recs {
            self.records += 1;
            self.primitive_records += r.primitive as u64;
            self.degenerate_records += r.degenerate as u64;
            self.anomalies += r.anomaly as u64;
            match &r.witness {
                Witness::Brick(w) => {
                    let k = w.brick_type.index() as usize - 1;
                    self.bricks_by_type[k] += 1;
                    if r.primitive && !r.degenerate {
                        self.primitive_bricks_by_type[k] += 1;
                    }
                }
                Witness::Cuboid(w) => self.cuboids_by_conjecture[w.conjecture as usize - 1] += 1,
                Witness::Biquad(_) => self.biquad_hits += 1,
            }
        }
    }

    pub fn primitive_bricks(&self) -> u64 {
        self.primitive_bricks_by_type.iter().sum()
    }

    /// 0 normally, 3 when an anomaly was recorded.
    pub fn exit_code(&self) -> i32 {
        if self.anomalies > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_csv(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("task".into(), self.task.clone()),
            ("fingerprint".into(), self.fingerprint.clone()),
            ("n_scanned".into(), self.n_scanned.to_string()),
            (
                "last_completed_n".into(),
                self.last_completed_n.map_or(String::new(), |n| n.to_string()),
            ),
            ("completed".into(), self.completed.to_string()),
            ("records".into(), self.records.to_string()),
            ("primitive_records".into(), self.primitive_records.to_string()),
            ("degenerate_records".into(), self.degenerate_records.to_string()),
        ];
        for (i, c) in self.bricks_by_type.iter().enumerate() {
            rows.push((format!("bricks_type{}", i + 1), c.to_string()));
        }
        for (i, c) in self.primitive_bricks_by_type.iter().enumerate() {
            rows.push((format!("primitive_bricks_type{}", i + 1), c.to_string()));
        }
        for (i, c) in self.cuboids_by_conjecture.iter().enumerate() {
            rows.push((format!("cuboids_conjecture{}", i + 1), c.to_string()));
        }
        rows.push(("biquad_hits".into(), self.biquad_hits.to_string()));
        rows.push(("anomalies".into(), self.anomalies.to_string()));
        rows.push(("max_multiplicity".into(), self.max_multiplicity.to_string()));
        rows.push((
            "max_multiplicity_n".into(),
            self.max_multiplicity_n.map_or(String::new(), |n| n.to_string()),
        ));
        rows.push(("wall_seconds".into(), format!("{:.3}", self.wall_seconds)));
        let mut out = String::from("key,value\n");
        for (k, v) in rows {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

/// What a run produced. `records` holds everything when no output file was given.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: Summary,
    pub records: Vec<HitRecord>,
}

/// Records for one value of `n`, in canonical witness order.
pub fn records_for_n(cfg: &SearchConfig, n: u64, fingerprint: &str) -> Result<Vec<HitRecord>> {
    let reps = pythag::diff_square_reps(n)?;
    match cfg.task {
        Task::Bricks => {
            let mut ws = bricks::witnesses_from_reps(n, &reps, cfg.strict)?;
            ws.sort();
            ws.into_iter().map(|w| HitRecord::brick(w, fingerprint)).collect()
        }
        Task::Cuboids => cuboids::witnesses_from_reps(n, &reps, cfg.conjectures, cfg.strict)?
            .into_iter()
            .map(|w| HitRecord::cuboid(w, fingerprint))
            .collect(),
        Task::Biquad => Err(Error::InvalidInput("biquad is not a range task".into())),
    }
}

fn count_through(cfg: &SearchConfig, last: u64) -> u64 {
    cfg.shard_values().take_while(|&n| n <= last).count() as u64
}

/// Truncates `path` to its first `lines` lines.
fn truncate_to_lines(path: &Path, lines: u64) -> Result<()> {
    let data = fs::read(path)?;
    let mut seen = 0u64;
    let mut cut = 0usize;
    for (i, b) in data.iter().enumerate() {
        if seen == lines {
            break;
        }
        if *b == b'\n' {
            seen += 1;
            cut = i + 1;
        }
    }
    if seen < lines {
        return Err(Error::CorruptCheckpoint {
            path: path.to_owned(),
            reason: format!("output holds {seen} complete records, checkpoint claims {lines}"),
        });
    }
    OpenOptions::new().write(true).open(path)?.set_len(cut as u64)?;
    Ok(())
}

/// Runs (or resumes) the configured search.
pub fn run_search(cfg: &SearchConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let fingerprint = cfg.content_fingerprint();
    let mut summary = Summary {
        task: cfg.task.to_string(),
        fingerprint: fingerprint.clone(),
        ..Summary::default()
    };

    if cfg.task == Task::Biquad {
        return run_biquad(cfg, summary, started);
    }

    let run_fp = cfg.run_fingerprint();
    let mut resume_after: Option<u64> = None;
    let mut kept: Vec<HitRecord> = Vec::new();

    if let Some(ck_path) = &cfg.checkpoint_path {
        let out_path = cfg.output_path.as_ref().expect("validated");
        if cfg.resume {
            let ck = Checkpoint::load(ck_path)?;
            if ck.fingerprint != run_fp {
                return Err(Error::FingerprintMismatch {
                    path: ck_path.clone(),
                    expected: run_fp,
                    found: ck.fingerprint,
                });
            }
            let existing = load_records(out_path, Some(ck.record_count as usize))
                .map_err(|e| Error::CorruptCheckpoint {
                    path: ck_path.clone(),
                    reason: format!("output does not match: {e}"),
                })?;
            if existing.len() as u64 != ck.record_count {
                return Err(Error::CorruptCheckpoint {
                    path: ck_path.clone(),
                    reason: format!(
                        "checkpoint claims {} records, output has {}",
                        ck.record_count,
                        existing.len()
                    ),
                });
            }
            truncate_to_lines(out_path, ck.record_count)?;
            resume_after = Some(ck.last_completed_n);
            kept = existing;
        } else if ck_path.exists() && !cfg.overwrite {
            return Err(Error::OutputExists(ck_path.clone()));
        }
    }

    let mut writer = match &cfg.output_path {
        Some(p) if resume_after.is_some() => Some(BufWriter::new(OpenOptions::new().append(true).open(p)?)),
        Some(p) => {
            if p.exists() && !cfg.overwrite {
                return Err(Error::OutputExists(p.clone()));
            }
            Some(BufWriter::new(File::create(p)?))
        }
        None => None,
    };

    summary.absorb(&kept);
    if let Some(last) = resume_after {
        summary.last_completed_n = Some(last);
        summary.n_scanned = count_through(cfg, last);
    }
    let mut in_memory = if writer.is_none() { kept } else { Vec::new() };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;

    let pending: Vec<u64> = cfg
        .shard_values()
        .skip_while(|&n| resume_after.is_some_and(|last| n <= last))
        .collect();
    for block in pending.chunks(cfg.stride as usize) {
        let block: Vec<u64> = match cfg.stop_after {
            Some(stop) => block.iter().copied().take_while(|&n| n <= stop).collect(),
            None => block.to_vec(),
        };
        if block.is_empty() {
            break;
        }
        let per_n: Vec<Vec<HitRecord>> = pool.install(|| {
            block
                .par_iter()
                .map(|&n| records_for_n(cfg, n, &fingerprint))
                .collect::<Result<_>>()
        })?;
        let recs: Vec<HitRecord> = per_n.into_iter().flatten().collect();
        summary.absorb(&recs);
        summary.n_scanned += block.len() as u64;
        let last = *block.last().unwrap();
        summary.last_completed_n = Some(last);
        match writer.as_mut() {
            Some(w) => {
                write_records(w, &recs)?;
                w.flush()?;
                w.get_ref().sync_data()?;
            }
            None => in_memory.extend(recs),
        }
        if let Some(ck_path) = &cfg.checkpoint_path {
            Checkpoint {
                fingerprint: run_fp.clone(),
                last_completed_n: last,
                record_count: summary.records,
            }
            .store(ck_path)?;
        }
        if cfg.stop_after.is_some_and(|stop| last >= stop) {
            break;
        }
    }
    let final_n = cfg.shard_values().last();
    summary.completed = final_n.is_none() || summary.last_completed_n == final_n;
    summary.wall_seconds = started.elapsed().as_secs_f64();
    finish(cfg, &summary)?;
    Ok(RunOutcome {
        summary,
        records: in_memory,
    })
}

fn run_biquad(cfg: &SearchConfig, mut summary: Summary, started: Instant) -> Result<RunOutcome> {
    let p = cfg.biquad.expect("validated");
    if let Some(path) = &cfg.output_path {
        if path.exists() && !cfg.overwrite {
            return Err(Error::OutputExists(path.clone()));
        }
    }
    let hits = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?
        .install(|| search_biquadratic(p.conjecture, p.bound, p.scale_bound, cfg.strict))?;
    let records = hits
        .into_iter()
        .map(|h| HitRecord::biquad(h, &summary.fingerprint))
        .collect::<Result<Vec<_>>>()?;
    summary.absorb(&records);
    summary.completed = true;
    summary.wall_seconds = started.elapsed().as_secs_f64();
    let records = match &cfg.output_path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_records(&mut w, &records)?;
            w.flush()?;
            Vec::new()
        }
        None => records,
    };
    finish(cfg, &summary)?;
    Ok(RunOutcome { summary, records })
}

fn finish(cfg: &SearchConfig, summary: &Summary) -> Result<()> {
    if let Some(path) = &cfg.summary_path {
        fs::write(path, summary.to_csv())?;
    }
    Ok(())
}

/// Resumes the run described by `cfg` from its checkpoint.
pub fn resume(cfg: &SearchConfig) -> Result<RunOutcome> {
    let cfg = SearchConfig {
        resume: true,
        ..cfg.clone()
    };
    run_search(&cfg)
}

/// Only the solid, for callers that print records compactly.
pub fn solid_text(r: &HitRecord) -> String {
    match &r.solid {
        Solid::Brick(b) => b.to_string(),
        Solid::Cuboid(c) => c.to_string(),
        Solid::None => String::new(),
    }
}
