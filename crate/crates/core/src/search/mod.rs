//! Deterministic, partitionable exhaustive search.
//!
//! Ranks in `[begin, end)` are visited in ascending order. Each rank decodes
//! to a recursion plan; the permuted text is scored and a
//! [`CandidateRecord`] is emitted when any scorer reaches the threshold.
//! Work is split into batches; a batch is evaluated in parallel, written to
//! the sink in rank order, and then checkpointed.
//!
//! Sink lines are JSON objects with the fields, in order:
//! `rank` (decimal string), `tuple` (one `{topology, dirs, skip, offset}`
//! object per level), `scores` (scorer name to value), `excerpt` and
//! `digest` (SHA-256 of the full permuted text, UTF-8, lowercase hex).
//!
//! The checkpoint file has three lines: spec digest, next unprocessed rank,
//! records emitted so far.

mod space;

pub use space::{LevelParams, ParamTuple, SearchSpace};

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Symbol, SymbolText};
use crate::engine::SkipRule;
use crate::error::{Error, Result};
use crate::layout::{Direction, GridShape, ReadDirections, Topology};
use crate::scoring::Scorer;

pub const DEFAULT_BATCH: u64 = 4096;
pub const DEFAULT_EXCERPT: usize = 40;

/// Everything that determines a search's output.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    /// Where the text came from; informational only.
    pub corpus_label: String,
    pub text: SymbolText,
    pub shape: GridShape,
    pub direction: Direction,
    pub level: u32,
    pub skip_rule: SkipRule,
    /// Emit a record when any score is `>= threshold`. `-inf` disables the filter.
    pub threshold: f64,
    pub begin: BigUint,
    /// Exclusive end; `None` means the whole space.
    pub end: Option<BigUint>,
    pub excerpt_len: usize,
    /// Ranks per checkpointed batch. Does not affect output.
    pub batch_size: u64,
    pub sink: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl SearchSpec {
    pub fn new(text: SymbolText, shape: GridShape) -> Self {
        SearchSpec {
            corpus_label: String::new(),
            text,
            shape,
            direction: Direction::East,
            level: 1,
            skip_rule: SkipRule::Full,
            threshold: f64::NEG_INFINITY,
            begin: BigUint::zero(),
            end: None,
            excerpt_len: DEFAULT_EXCERPT,
            batch_size: DEFAULT_BATCH,
            sink: None,
            checkpoint: None,
        }
    }
}

/// One level of a record's tuple, in replayable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub topology: Vec<usize>,
    pub dirs: String,
    pub skip: usize,
    pub offset: usize,
}

/// A scored point of the space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    #[serde(with = "decimal")]
    pub rank: BigUint,
    pub tuple: Vec<LevelRecord>,
    pub scores: BTreeMap<String, f64>,
    pub excerpt: String,
    pub digest: String,
}

impl CandidateRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Parse(format!("bad record line: {e}")))
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Reads all records from a JSONL file.
pub fn read_records(path: &Path) -> Result<Vec<CandidateRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    BufReader::new(file)
        .lines()
        .map(|l| l.map_err(|e| Error::io(path, e)))
        .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
        .map(|l| CandidateRecord::from_json_line(&l?))
        .collect()
}

pub fn text_digest(text: &[Symbol]) -> String {
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 4];
    for c in text {
        hasher.update(c.encode_utf8(&mut buf).as_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Resumable progress of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub spec_digest: String,
    pub next_rank: BigUint,
    pub emitted: u64,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n{}\n", self.spec_digest, self.next_rank, self.emitted)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().collect();
        let bad = || Error::Parse("checkpoint must hold digest, next rank and emitted count lines".into());
        let [digest, next, emitted] = lines[..] else {
            return Err(bad());
        };
        Ok(Checkpoint {
            spec_digest: digest.trim().to_string(),
            next_rank: next.trim().parse().map_err(|_| bad())?,
            emitted: emitted.trim().parse().map_err(|_| bad())?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Checkpoint::parse(&s)
    }

    /// Writes to a sibling temporary file, syncs it, then renames over `path`.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
            f.write_all(self.to_text().as_bytes()).map_err(|e| Error::io(&tmp, e))?;
            f.sync_all().map_err(|e| Error::io(&tmp, e))?;
        }
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }
}

/// Per-invocation knobs that never change the output.
#[derive(Default)]
pub struct RunControl<'a> {
    /// Worker threads; 0 means one per core.
    pub workers: usize,
    /// Stop (with a checkpoint) after roughly this many ranks.
    pub stop_after: Option<u64>,
    pub progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
}

#[derive(Clone, Debug)]
pub struct Progress {
    pub processed: u64,
    pub emitted: u64,
    pub next_rank: BigUint,
    pub elapsed: Duration,
}

impl Progress {
    pub fn ranks_per_sec(&self) -> f64 {
        self.processed as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    /// Ranks evaluated by this invocation.
    pub processed: u64,
    /// Records emitted by this invocation.
    pub emitted: u64,
    /// Ranks evaluated since `begin`, across resumes.
    pub total_processed: BigUint,
    /// Records emitted since `begin`, across resumes.
    pub total_emitted: u64,
    pub next_rank: BigUint,
    pub complete: bool,
    pub elapsed: Duration,
}

impl RunSummary {
    pub fn ranks_per_sec(&self) -> f64 {
        self.processed as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

/// A validated search ready to run.
pub struct Search {
    spec: SearchSpec,
    scorers: Vec<Box<dyn Scorer>>,
    space: SearchSpace,
    end: BigUint,
    digest: String,
}

impl Search {
    pub fn new(spec: SearchSpec, scorers: Vec<Box<dyn Scorer>>) -> Result<Self> {
        spec.shape.check_len(spec.text.len())?;
        let space = SearchSpace::new(spec.shape.clone(), spec.direction, spec.skip_rule, spec.level)?;
        let total = space.total();
        let end = spec.end.clone().unwrap_or_else(|| total.clone());
        if !(spec.begin < end && end <= total) {
            return Err(Error::Range(format!(
                "rank range [{}, {end}) must be non-empty and within [0, {total})",
                spec.begin
            )));
        }
        if spec.batch_size == 0 {
            return Err(Error::Config("batch size must be positive".into()));
        }
        if spec.threshold.is_nan() {
            return Err(Error::Config("threshold is NaN".into()));
        }
        // scorers must accept texts of this length
        for s in &scorers {
            s.score(spec.text.as_slice())?;
        }
        let digest = spec_digest(&spec, &end, &scorers);
        Ok(Search {
            spec,
            scorers,
            space,
            end,
            digest,
        })
    }

    pub fn spec(&self) -> &SearchSpec {
        &self.spec
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn scorers(&self) -> &[Box<dyn Scorer>] {
        &self.scorers
    }

    pub fn begin(&self) -> &BigUint {
        &self.spec.begin
    }

    pub fn end(&self) -> &BigUint {
        &self.end
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    /// Number of ranks in the configured range.
    pub fn range_len(&self) -> BigUint {
        &self.end - &self.spec.begin
    }

    /// Permuted text of a tuple.
    pub fn text_for(&self, levels: &[LevelParams]) -> Result<SymbolText> {
        let (mut c, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
        self.space.fill_composite(levels, &mut c, &mut a, &mut b)?;
        Ok(self.spec.text.gather(&c))
    }

    /// Regenerates the text a record describes.
    pub fn replay(&self, record: &CandidateRecord) -> Result<SymbolText> {
        let levels = self.decode_record(record)?;
        self.text_for(&levels)
    }

    /// Tuple digits of a record, checked against its rank.
    pub fn decode_record(&self, record: &CandidateRecord) -> Result<Vec<LevelParams>> {
        let levels = record
            .tuple
            .iter()
            .map(|l| self.level_params(l))
            .collect::<Result<Vec<_>>>()?;
        if self.space.rank_of(&levels)? != record.rank {
            return Err(Error::Parse(format!("record tuple does not match its rank {}", record.rank)));
        }
        Ok(levels)
    }

    fn level_params(&self, l: &LevelRecord) -> Result<LevelParams> {
        let topology = Topology::new(l.topology.clone())?;
        let dirs: ReadDirections = l.dirs.parse()?;
        if topology.rows() != self.space.rows() || dirs.rows() != self.space.rows() {
            return Err(Error::Promotion(format!(
                "tuple is for {} rows, layout {} has {}",
                topology.rows(),
                self.space.shape(),
                self.space.rows()
            )));
        }
        let skip_index = self
            .space
            .skip_index(l.skip)
            .ok_or_else(|| Error::Range(format!("skip {} is not admissible for this layout", l.skip)))?;
        if l.offset >= self.space.len() {
            return Err(Error::Range(format!("offset {} out of range", l.offset)));
        }
        Ok(LevelParams {
            topology: topology.rank(),
            dirs: dirs.index(),
            skip_index,
            offset: l.offset as u64,
        })
    }

    fn level_record(&self, lp: &LevelParams) -> Result<LevelRecord> {
        let key = self.space.key(lp);
        Ok(LevelRecord {
            topology: self.space.topology(lp.topology)?.row_order().to_vec(),
            dirs: self.space.read_directions(lp.dirs)?.to_string(),
            skip: key.skip,
            offset: key.offset,
        })
    }

    fn passes(&self, scores: &BTreeMap<String, f64>) -> bool {
        self.spec.threshold == f64::NEG_INFINITY || scores.values().any(|&s| s >= self.spec.threshold)
    }

    fn evaluate(&self, levels: &[LevelParams], scratch: &mut Scratch) -> Result<Option<CandidateRecord>> {
        self.space
            .fill_composite(levels, &mut scratch.composite, &mut scratch.step, &mut scratch.next)?;
        let text = self.spec.text.as_slice();
        scratch.symbols.clear();
        scratch.symbols.extend(scratch.composite.iter().map(|&i| text[i]));
        let mut scores = BTreeMap::new();
        for s in &self.scorers {
            scores.insert(s.name().to_string(), s.score(&scratch.symbols)?);
        }
        if !self.passes(&scores) {
            return Ok(None);
        }
        Ok(Some(CandidateRecord {
            rank: self.space.rank_of(levels)?,
            tuple: levels.iter().map(|lp| self.level_record(lp)).collect::<Result<_>>()?,
            scores,
            excerpt: scratch.symbols.iter().take(self.spec.excerpt_len).collect(),
            digest: text_digest(&scratch.symbols),
        }))
    }

    /// Evaluates `count` ranks from `start` sequentially.
    fn evaluate_run(&self, start: &BigUint, count: u64) -> Result<Vec<CandidateRecord>> {
        let mut levels = self.space.rank_to_tuple(start)?.levels;
        let mut scratch = Scratch::default();
        let mut out = Vec::new();
        for i in 0..count {
            if i > 0 {
                self.space.increment(&mut levels);
            }
            if let Some(r) = self.evaluate(&levels, &mut scratch)? {
                out.push(r);
            }
        }
        Ok(out)
    }

    /// Evaluates `count` ranks from `start` on `pool`, records in rank order.
    fn evaluate_batch(&self, pool: &rayon::ThreadPool, start: &BigUint, count: u64) -> Result<Vec<CandidateRecord>> {
        let chunks = (pool.current_num_threads() as u64 * 4).clamp(1, count.max(1));
        let per = count.div_ceil(chunks);
        let pieces: Vec<(BigUint, u64)> = (0..chunks)
            .map(|k| (k * per, ((k + 1) * per).min(count)))
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (start + a, b - a))
            .collect();
        let results: Vec<Result<Vec<CandidateRecord>>> =
            pool.install(|| pieces.par_iter().map(|(s, n)| self.evaluate_run(s, *n)).collect());
        let mut out = Vec::new();
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }

    /// Visits `count` ranks from `start` in batches, handing each batch's
    /// records and the next unprocessed rank to `on_batch`.
    pub fn scan<F>(&self, start: &BigUint, count: u64, workers: usize, mut on_batch: F) -> Result<()>
    where
        F: FnMut(Vec<CandidateRecord>, &BigUint, u64) -> Result<bool>,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        let mut next = start.clone();
        let mut left = count;
        while left > 0 {
            let n = left.min(self.spec.batch_size);
            let records = self.evaluate_batch(&pool, &next, n)?;
            next += n;
            left -= n;
            if !on_batch(records, &next, n)? {
                break;
            }
        }
        Ok(())
    }

    /// All records of the configured range, in memory.
    pub fn collect(&self, workers: usize) -> Result<Vec<CandidateRecord>> {
        let count = self.range_u64(&self.range_len())?;
        let mut all = Vec::new();
        self.scan(&self.spec.begin, count, workers, |batch, _, _| {
            all.extend(batch);
            Ok(true)
        })?;
        Ok(all)
    }

    fn range_u64(&self, n: &BigUint) -> Result<u64> {
        n.to_u64().ok_or_else(|| {
            Error::Range(format!("{n} ranks do not fit one run; partition the range with begin/end"))
        })
    }

    /// Runs the configured range from `begin`, truncating the sink.
    pub fn run(&self, control: &RunControl<'_>) -> Result<RunSummary> {
        let sink_path = self.sink_path()?;
        let file = File::create(sink_path).map_err(|e| Error::io(sink_path, e))?;
        let start = Checkpoint {
            spec_digest: self.digest.clone(),
            next_rank: self.spec.begin.clone(),
            emitted: 0,
        };
        if let Some(cp) = &self.spec.checkpoint {
            start.store(cp)?;
        }
        self.drive_file(file, start, control)
    }

    /// Continues from the checkpoint. The sink is cut back to the records the
    /// checkpoint accounts for, so output equals an uninterrupted run.
    pub fn resume(&self, control: &RunControl<'_>) -> Result<RunSummary> {
        let cp_path = self
            .spec
            .checkpoint
            .as_deref()
            .ok_or_else(|| Error::Config("resume needs a checkpoint path".into()))?;
        let checkpoint = Checkpoint::load(cp_path)?;
        if checkpoint.spec_digest != self.digest {
            return Err(Error::StaleCheckpoint {
                path: cp_path.to_path_buf(),
                expected: self.digest.clone(),
                found: checkpoint.spec_digest,
            });
        }
        if checkpoint.next_rank < self.spec.begin || checkpoint.next_rank > self.end {
            return Err(Error::Range(format!(
                "checkpoint rank {} outside [{}, {}]",
                checkpoint.next_rank, self.spec.begin, self.end
            )));
        }
        let sink_path = self.sink_path()?;
        let file = truncate_lines(sink_path, checkpoint.emitted)?;
        self.drive_file(file, checkpoint, control)
    }

    fn sink_path(&self) -> Result<&Path> {
        self.spec
            .sink
            .as_deref()
            .ok_or_else(|| Error::Config("search run needs a sink path".into()))
    }

    /// Runs the configured range from `begin`, writing records to `out`.
    /// No checkpoint is kept.
    pub fn stream(&self, out: &mut dyn Write, control: &RunControl<'_>) -> Result<RunSummary> {
        let start = Checkpoint {
            spec_digest: self.digest.clone(),
            next_rank: self.spec.begin.clone(),
            emitted: 0,
        };
        self.drive(Sink::Stream(out), start, None, control)
    }

    fn drive_file(&self, file: File, start: Checkpoint, control: &RunControl<'_>) -> Result<RunSummary> {
        let sink_path = self.sink_path()?;
        let mut writer = BufWriter::new(file);
        self.drive(Sink::File(&mut writer, sink_path), start, self.spec.checkpoint.as_deref(), control)
    }

    fn drive(
        &self,
        mut sink: Sink<'_>,
        start: Checkpoint,
        checkpoint: Option<&Path>,
        control: &RunControl<'_>,
    ) -> Result<RunSummary> {
        let clock = Instant::now();
        let remaining = self.range_u64(&(&self.end - &start.next_rank))?;
        let budget = control.stop_after.map_or(remaining, |s| s.min(remaining));
        let mut state = start;
        let mut processed = 0u64;
        let mut emitted = 0u64;

        self.scan(&state.next_rank.clone(), budget, control.workers, |records, next, n| {
            sink.write_batch(&records)?;
            processed += n;
            emitted += records.len() as u64;
            state.next_rank = next.clone();
            state.emitted += records.len() as u64;
            if let Some(cp) = checkpoint {
                state.store(cp)?;
            }
            if let Some(report) = control.progress {
                report(&Progress {
                    processed,
                    emitted,
                    next_rank: next.clone(),
                    elapsed: clock.elapsed(),
                });
            }
            Ok(true)
        })?;

        Ok(RunSummary {
            processed,
            emitted,
            total_processed: &state.next_rank - &self.spec.begin,
            total_emitted: state.emitted,
            complete: state.next_rank == self.end,
            next_rank: state.next_rank,
            elapsed: clock.elapsed(),
        })
    }
}

enum Sink<'a> {
    /// Flushed and synced after every batch, before the checkpoint moves.
    File(&'a mut BufWriter<File>, &'a Path),
    Stream(&'a mut dyn Write),
}

impl Sink<'_> {
    fn write_batch(&mut self, records: &[CandidateRecord]) -> Result<()> {
        match self {
            Sink::File(w, path) => {
                let io = |e| Error::io(*path, e);
                for r in records {
                    writeln!(w, "{}", r.to_json_line()).map_err(io)?;
                }
                w.flush().map_err(io)?;
                w.get_ref().sync_data().map_err(io)
            }
            Sink::Stream(w) => {
                let io = |e| Error::io(Path::new("<stream>"), e);
                for r in records {
                    writeln!(w, "{}", r.to_json_line()).map_err(io)?;
                }
                w.flush().map_err(io)
            }
        }
    }
}

#[derive(Default)]
struct Scratch {
    composite: Vec<usize>,
    step: Vec<usize>,
    next: Vec<usize>,
    symbols: Vec<Symbol>,
}

fn spec_digest(spec: &SearchSpec, end: &BigUint, scorers: &[Box<dyn Scorer>]) -> String {
    let mut canon = String::from("elsperm-search v1\n");
    canon += &format!("text {} {}\n", spec.text.len(), text_digest(spec.text.as_slice()));
    canon += &format!("shape {}\n", spec.shape);
    canon += &format!("direction {}\n", spec.direction);
    canon += &format!("level {}\n", spec.level);
    canon += &format!("skips {}\n", spec.skip_rule);
    canon += &format!("threshold {:016x}\n", spec.threshold.to_bits());
    canon += &format!("range {} {}\n", spec.begin, end);
    canon += &format!("excerpt {}\n", spec.excerpt_len);
    for s in scorers {
        canon += &format!("scorer {} {}\n", s.name(), s.fingerprint());
    }
    hex::encode(Sha256::digest(canon.as_bytes()))
}

/// Opens `path` for appending after its first `lines` lines.
fn truncate_lines(path: &Path, lines: u64) -> Result<File> {
    let mut keep = 0u64;
    if lines > 0 {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = BufReader::new(file);
        let mut buf = Vec::new();
        for _ in 0..lines {
            buf.clear();
            let n = reader.read_until(b'\n', &mut buf).map_err(|e| Error::io(path, e))?;
            if n == 0 || buf.last() != Some(&b'\n') {
                return Err(Error::Parse(format!(
                    "sink {} holds fewer than the {lines} records the checkpoint reports",
                    path.display()
                )));
            }
            keep += n as u64;
        }
    }
    let file = OpenOptions::new()
        .write(true)
        .create(true)
        .truncate(false)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    file.set_len(keep).map_err(|e| Error::io(path, e))?;
    let mut file = file;
    std::io::Seek::seek(&mut file, std::io::SeekFrom::End(0)).map_err(|e| Error::io(path, e))?;
    Ok(file)
}

/// How promoted tuples choose skips and offsets on the target layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PromoteMode {
    /// Keep each level's skip and offset; tuples invalid on the target are dropped.
    Carry,
    /// Enumerate every target skip and offset under the carried topologies
    /// and read directions, up to `limit` tuples per input record.
    Enumerate { limit: Option<u64> },
}

#[derive(Clone, Debug, Default)]
pub struct Promotion {
    pub records: Vec<CandidateRecord>,
    /// Input records whose carried skip or offset is not valid on the target.
    pub dropped: u64,
}

/// Re-applies the topology and read-direction choices of `records` to the
/// target search's text, rescoring with the target's scorers and threshold.
pub fn promote<I>(records: I, target: &Search, mode: PromoteMode) -> Result<Promotion>
where
    I: IntoIterator<Item = CandidateRecord>,
{
    let space = target.space();
    let mut out = Promotion::default();
    let mut scratch = Scratch::default();
    for record in records {
        if record.tuple.len() != space.level() as usize {
            return Err(Error::Promotion(format!(
                "record has {} levels, target searches {}",
                record.tuple.len(),
                space.level()
            )));
        }
        let mut carried = Vec::with_capacity(record.tuple.len());
        for l in &record.tuple {
            let topology = Topology::new(l.topology.clone())?;
            let dirs: ReadDirections = l.dirs.parse()?;
            if topology.rows() != space.rows() || dirs.rows() != space.rows() {
                return Err(Error::Promotion(format!(
                    "record layout has {} rows, target layout {} has {}",
                    topology.rows(),
                    space.shape(),
                    space.rows()
                )));
            }
            carried.push((topology.rank(), dirs.index(), l.skip, l.offset));
        }
        match mode {
            PromoteMode::Carry => {
                let levels: Option<Vec<LevelParams>> = carried
                    .iter()
                    .map(|&(topology, dirs, skip, offset)| {
                        let skip_index = space.skip_index(skip)?;
                        (offset < space.len()).then_some(LevelParams {
                            topology,
                            dirs,
                            skip_index,
                            offset: offset as u64,
                        })
                    })
                    .collect();
                match levels {
                    Some(levels) => out.records.extend(target.evaluate(&levels, &mut scratch)?),
                    None => out.dropped += 1,
                }
            }
            PromoteMode::Enumerate { limit } => {
                let mut levels: Vec<LevelParams> = carried
                    .iter()
                    .map(|&(topology, dirs, _, _)| LevelParams {
                        topology,
                        dirs,
                        skip_index: 0,
                        offset: 0,
                    })
                    .collect();
                let skips = space.skips().len() as u64;
                let offsets = space.len() as u64;
                let mut produced = 0u64;
                loop {
                    if limit.is_some_and(|l| produced >= l) {
                        break;
                    }
                    out.records.extend(target.evaluate(&levels, &mut scratch)?);
                    produced += 1;
                    // odometer over (skip, offset) of every level
                    let mut carry = true;
                    for lp in levels.iter_mut().rev() {
                        lp.offset += 1;
                        if lp.offset < offsets {
                            carry = false;
                            break;
                        }
                        lp.offset = 0;
                        lp.skip_index += 1;
                        if lp.skip_index < skips {
                            carry = false;
                            break;
                        }
                        lp.skip_index = 0;
                    }
                    if carry {
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}
