use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use clap::{ArgGroup, Args, ValueEnum};
use elsperm_core::corpus::{factorize, Selector};
use elsperm_core::engine::{
    apply_plan, count_space, scientific, PermutationPass, RecursionPlan, SkipKey, SkipRule, SpaceFactors,
};
use elsperm_core::interlock::{directional_interlock, topological_interlock};
use elsperm_core::layout::{
    candidate_shapes, cell_label, AxisOrder, Corner, Direction, Grid, GridShape, ReadDirections, Topology, Traversal,
};
use elsperm_core::scoring::{calibrate, EntropyScorer, NGramModel};
use elsperm_core::search::{promote, read_records, PromoteMode, Progress, RunControl, Search, SearchSpec};
use num_bigint::BigUint;

use crate::input::{entry, parse_threshold, Banner, InputArgs, Output, ScorerArgs};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Further section combinations to tabulate, e.g. `T1,N1,T2` (needs --markers).
    #[arg(long = "combo", requires = "markers")]
    combos: Vec<Selector>,

    /// Skip rule for the per-layout space sizes: full or half.
    #[arg(long, default_value = "full")]
    skips: SkipRule,

    /// Calibrate the scorers over this many seeded shuffles of the text.
    #[arg(long, requires = "seed")]
    calibrate: Option<usize>,

    /// Shuffle seed for --calibrate.
    #[arg(long)]
    seed: Option<u64>,

    #[command(flatten)]
    scorers: ScorerArgs,
}

fn factor_row(label: &str, len: usize) -> Result<String> {
    let report = factorize(len as u64)?;
    let factors: Vec<String> = report.prime_factors.iter().map(u64::to_string).collect();
    let note = if report.is_prime { "  (prime)" } else { "" };
    Ok(format!(
        "{label:<16}{len:>10}  {:>7}  {}{note}",
        report.factor_count(),
        factors.join(", ")
    ))
}

pub fn analyze(args: AnalyzeArgs, out: &Output) -> Result<()> {
    let mut banner = Banner::new();
    let loaded = args.input.load(&mut banner)?;
    entry(&mut banner, "skips", args.skips);
    let scorers = if args.calibrate.is_some() {
        let mut s = args.scorers.build(&args.input, &mut banner)?;
        if s.is_empty() {
            s.push(Box::new(EntropyScorer));
        }
        entry(&mut banner, "calibrate", format!("{} shuffles, seed {}", args.calibrate.unwrap(), args.seed.unwrap()));
        s
    } else {
        Vec::new()
    };
    out.banner("analyze", &banner)?;

    out.data(&format!("{:<16}{:>10}  {:>7}  prime factors", "text", "length", "factors"))?;
    match &loaded.sections {
        Some(sc) => {
            let defaults = ["T1,N1,T2,N2,T3", "T1,T2,T3", "T2", "T1", "T3"];
            let mut selectors: Vec<Selector> = defaults.iter().map(|s| s.parse().unwrap()).collect();
            for c in &args.combos {
                if !selectors.contains(c) {
                    selectors.push(*c);
                }
            }
            for sel in selectors {
                let len = sc.recombine(sel)?.len();
                out.data(&factor_row(&sel.to_string(), len)?)?;
            }
        }
        None => out.data(&factor_row("text", loaded.full.len())?)?,
    }

    let text = &loaded.text;
    out.data("")?;
    out.data(&format!("layouts for L = {}", text.len()))?;
    out.data(&format!(
        "{:<14}{:>6}{:>14}{:>12}{:>10}{:>10}  level-1 size",
        "shape", "rows", "topologies", "directions", "skips", "offsets"
    ))?;
    for shape in candidate_shapes(text.len()) {
        let line = match SpaceFactors::for_layout(&shape, args.skips) {
            Ok(f) => format!(
                "{:<14}{:>6}{:>14}{:>12}{:>10}{:>10}  {}",
                shape.to_string(),
                shape.rows(),
                f.topologies,
                f.read_directions,
                f.skips,
                f.offsets,
                scientific(&f.per_level(), 3)
            ),
            Err(e) => format!("{:<14}{:>6}  intractable: {e}", shape.to_string(), shape.rows()),
        };
        out.data(&line)?;
    }

    if let (Some(shuffles), Some(seed)) = (args.calibrate, args.seed) {
        out.data("")?;
        out.data("calibration")?;
        for s in &scorers {
            let c = calibrate(s.as_ref(), text, shuffles, seed)?;
            let original = s.score(text.as_slice())?;
            out.data(&format!(
                "{:<10} mean={:.6} stddev={:.6} original={:.6} z={:.3}",
                s.name(),
                c.mean,
                c.stddev,
                original,
                c.z_score(original)
            ))?;
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PermuteArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Layout as `L`, `RxC` or `AxBxC`; defaults to the linear layout.
    #[arg(long)]
    shape: Option<GridShape>,

    /// Row order, e.g. `2,0,1`; defaults to document order.
    #[arg(long)]
    topology: Option<Topology>,

    /// Reversed rows as a bit string, e.g. `010`; defaults to none.
    #[arg(long)]
    dirs: Option<ReadDirections>,

    /// Traversal of a planar layout: east, south, west or north.
    #[arg(long, default_value = "east")]
    direction: Direction,

    /// Starting corner of a cuboid walk, e.g. `011`.
    #[arg(long)]
    corner: Option<Corner>,

    /// Cuboid axis nesting, slowest first, e.g. `2,0,1`.
    #[arg(long)]
    axis_order: Option<AxisOrder>,

    /// Skip distance D of the first pass.
    #[arg(long)]
    skip: usize,

    /// Starting offset of the first pass.
    #[arg(long, default_value_t = 0)]
    offset: usize,

    /// A further pass on the same layout, applied after the previous ones:
    /// `skip=D;offset=O;direction=..;topology=..;dirs=..;corner=..;axis-order=..`
    /// (only skip is required).
    #[arg(long = "pass")]
    passes: Vec<String>,

    /// Print the result folded into the layout instead of as one line.
    #[arg(long)]
    grid: bool,
}

struct PassParts {
    topology: Option<Topology>,
    dirs: Option<ReadDirections>,
    direction: Direction,
    corner: Option<Corner>,
    axis_order: Option<AxisOrder>,
    key: SkipKey,
}

impl PassParts {
    fn parse(spec: &str) -> Result<Self> {
        let mut parts = PassParts {
            topology: None,
            dirs: None,
            direction: Direction::East,
            corner: None,
            axis_order: None,
            key: SkipKey::new(0, 0),
        };
        let mut skip = None;
        for field in spec.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (k, v) = field
                .split_once('=')
                .with_context(|| format!("pass field `{field}` is not key=value"))?;
            match k.trim() {
                "skip" => skip = Some(v.trim().parse::<usize>().with_context(|| format!("bad skip `{v}`"))?),
                "offset" => parts.key.offset = v.trim().parse().with_context(|| format!("bad offset `{v}`"))?,
                "direction" => parts.direction = v.parse()?,
                "topology" => parts.topology = Some(v.parse()?),
                "dirs" => parts.dirs = Some(v.parse()?),
                "corner" => parts.corner = Some(v.parse()?),
                "axis-order" => parts.axis_order = Some(v.parse()?),
                other => bail!("unknown pass field `{other}` in `{spec}`"),
            }
        }
        parts.key.skip = skip.with_context(|| format!("pass `{spec}` has no skip"))?;
        Ok(parts)
    }

    fn build(self, shape: &GridShape) -> Result<PermutationPass> {
        let rows = shape.rows();
        let traversal = if shape.rank() == 3 {
            Traversal::Cuboid {
                corner: self.corner.unwrap_or_default(),
                axis_order: self.axis_order.unwrap_or(AxisOrder::NATURAL),
            }
        } else {
            ensure!(
                self.corner.is_none() && self.axis_order.is_none(),
                "corner and axis order apply to cuboid layouts only; {shape} is not one"
            );
            Traversal::Planar(self.direction)
        };
        let pass = PermutationPass {
            shape: shape.clone(),
            topology: self.topology.unwrap_or_else(|| Topology::identity(rows)),
            dirs: self.dirs.unwrap_or_else(|| ReadDirections::forward(rows)),
            traversal,
            key: self.key,
        };
        pass.validate(shape.cell_count())?;
        Ok(pass)
    }
}

pub fn permute(args: PermuteArgs, out: &Output) -> Result<()> {
    let mut banner = Banner::new();
    let text = args.input.load(&mut banner)?.text;
    let shape = match args.shape {
        Some(s) => s,
        None => GridShape::linear(text.len())?,
    };
    shape.check_len(text.len())?;
    entry(&mut banner, "shape", &shape);

    let first = PassParts {
        topology: args.topology,
        dirs: args.dirs,
        direction: args.direction,
        corner: args.corner,
        axis_order: args.axis_order,
        key: SkipKey::new(args.skip, args.offset),
    };
    let mut passes = vec![first.build(&shape)?];
    for spec in &args.passes {
        passes.push(PassParts::parse(spec)?.build(&shape)?);
    }
    for (i, p) in passes.iter().enumerate() {
        entry(
            &mut banner,
            &format!("pass {}", i + 1),
            format!("topology={} dirs={} traversal={} {}", p.topology, p.dirs, p.traversal, p.key),
        );
    }
    out.banner("permute", &banner)?;

    let result = apply_plan(&text, &RecursionPlan::new(passes))?;
    if args.grid {
        let grid = Grid::from_cells(shape, result.as_slice().to_vec())?;
        out.data(grid.render().trim_end())?;
    } else {
        out.data(&result.to_string())?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum InterlockMode {
    /// Horizontal (East) against vertical (South) components.
    Topological,
    /// North, South, East and West components.
    Directional,
}

#[derive(Args, Debug)]
pub struct InterlockArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Planar layout `RxC` (or `L` for a single row).
    #[arg(long)]
    shape: GridShape,

    #[arg(long)]
    topology: Option<Topology>,

    #[arg(long)]
    dirs: Option<ReadDirections>,

    /// ELS skip distance D.
    #[arg(long)]
    skip: usize,

    #[arg(long, default_value_t = 0)]
    offset: usize,

    #[arg(long, value_enum, default_value_t = InterlockMode::Topological)]
    mode: InterlockMode,
}

fn labelled(grid: &Grid) -> String {
    let (rows, cols) = (grid.rows(), grid.shape().cols());
    let width = rows.to_string().len();
    let mut s = String::new();
    if cols <= 26 {
        let header: Vec<String> = (0..cols).map(|c| cell_label(cols, c).trim_end_matches('1').to_string()).collect();
        s += &format!("{:width$}  {}\n", "", header.join(" "));
    }
    for (r, line) in grid.render().lines().enumerate() {
        s += &format!("{:>width$}  {line}\n", r + 1);
    }
    s
}

pub fn interlock(args: InterlockArgs, out: &Output) -> Result<()> {
    let mut banner = Banner::new();
    let text = args.input.load(&mut banner)?.text;
    let shape = args.shape;
    ensure!(shape.rank() <= 2, "interlock tests need a planar layout, got {shape}");
    let rows = shape.rows();
    let topology = args.topology.unwrap_or_else(|| Topology::identity(rows));
    let dirs = args.dirs.unwrap_or_else(|| ReadDirections::forward(rows));
    let key = SkipKey::new(args.skip, args.offset);
    entry(&mut banner, "shape", &shape);
    entry(&mut banner, "topology", &topology);
    entry(&mut banner, "dirs", &dirs);
    entry(&mut banner, "key", key);
    entry(&mut banner, "mode", format!("{:?}", args.mode).to_lowercase());
    out.banner("interlock", &banner)?;

    let report = match args.mode {
        InterlockMode::Topological => {
            let (c, report) = topological_interlock(&text, &shape, &topology, &dirs, key)?;
            out.data("horizontal component")?;
            out.data(&labelled(&c.horizontal))?;
            out.data("vertical component")?;
            out.data(&labelled(&c.vertical))?;
            report
        }
        InterlockMode::Directional => {
            let (c, report) = directional_interlock(&text, &shape, &topology, &dirs, key)?;
            for d in [Direction::North, Direction::West, Direction::East, Direction::South] {
                out.data(&format!("{d} component"))?;
                out.data(&labelled(c.get(d)))?;
            }
            report
        }
    };
    if report.degenerate {
        out.info("notice: single-row layout; the components coincide and the interlock test is degenerate")?;
    }
    out.data(report.to_string().trim_end())?;
    Ok(())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Preset {
    /// The 85-symbol middle section as 5x17 with the half-range skip rule.
    T2,
    /// The three main sections as 5x60961 with the full skip rule.
    T1t2t3,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["factors", "preset", "shape"])))]
pub struct CountArgs {
    /// Per-level factors: topologies,directions,skips,offsets.
    #[arg(long, value_delimiter = ',')]
    factors: Option<Vec<u64>>,

    #[arg(long, value_enum)]
    preset: Option<Preset>,

    /// Derive the factors from a layout.
    #[arg(long)]
    shape: Option<GridShape>,

    /// Skip rule used with --shape: full or half.
    #[arg(long, default_value = "full")]
    skips: SkipRule,

    /// Recursion level (at least 1).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    level: u32,

    /// Print every level from 1 to --level.
    #[arg(long)]
    table: bool,
}

pub fn count(args: CountArgs, out: &Output) -> Result<()> {
    let mut banner = Banner::new();
    let factors = match (&args.factors, args.preset, &args.shape) {
        (Some(f), _, _) => match f[..] {
            [t, d, s, o] => SpaceFactors::new(t, d, s, o),
            _ => bail!("--factors needs four values: topologies,directions,skips,offsets"),
        },
        (None, Some(Preset::T2), _) => SpaceFactors::new(120, 32, 32, 85),
        (None, Some(Preset::T1t2t3), _) => SpaceFactors::new(120, 32, 243_839, 304_805),
        (None, None, Some(shape)) => {
            entry(&mut banner, "shape", shape);
            entry(&mut banner, "skips", args.skips);
            SpaceFactors::for_layout(shape, args.skips)?
        }
        (None, None, None) => unreachable!("clap requires a factor source"),
    };
    let [t, d, s, o] = factors.as_array();
    entry(&mut banner, "factors", format!("{t},{d},{s},{o}"));
    entry(&mut banner, "level", args.level);
    out.banner("count", &banner)?;

    let first = if args.table { 1 } else { args.level };
    for level in first..=args.level {
        let n = count_space(factors, level)?;
        out.data(&format!("{level}\t{n}\t{}", scientific(&n, 3)))?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Layout `RxC` (or `L`, or `AxBxC`).
    #[arg(long)]
    shape: GridShape,

    /// Traversal used by every pass.
    #[arg(long, default_value = "east")]
    direction: Direction,

    /// Recursion level (at least 1).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    level: u32,

    /// Skip rule: full or half.
    #[arg(long, default_value = "full")]
    skips: SkipRule,

    #[command(flatten)]
    scorers: ScorerArgs,

    /// Emit a record when any score reaches this value; -inf emits every rank.
    #[arg(long, default_value = "-inf", allow_hyphen_values = true, value_parser = parse_threshold)]
    threshold: f64,

    /// First rank, inclusive.
    #[arg(long, default_value = "0")]
    begin: BigUint,

    /// Last rank, exclusive; defaults to the size of the space.
    #[arg(long)]
    end: Option<BigUint>,

    /// JSONL result file; records go to stdout when absent.
    #[arg(long)]
    sink: Option<PathBuf>,

    /// Checkpoint file, rewritten after every batch.
    #[arg(long, requires = "sink")]
    checkpoint: Option<PathBuf>,

    /// Continue from --checkpoint instead of starting over.
    #[arg(long, requires = "checkpoint")]
    resume: bool,

    /// Worker threads; 0 uses every core. Does not change the output.
    #[arg(long, default_value_t = 0)]
    workers: usize,

    /// Symbols of each text kept in its record.
    #[arg(long, default_value_t = elsperm_core::search::DEFAULT_EXCERPT)]
    excerpt: usize,

    /// Ranks per checkpointed batch. Does not change the output.
    #[arg(long, default_value_t = elsperm_core::search::DEFAULT_BATCH)]
    batch: u64,

    /// Do not print progress lines on stderr.
    #[arg(long)]
    no_progress: bool,

    #[arg(long, hide = true)]
    stop_after: Option<u64>,
}

fn progress_printer() -> impl Fn(&Progress) + Sync {
    let last = Mutex::new(Instant::now());
    move |p: &Progress| {
        let mut last = last.lock().unwrap();
        if last.elapsed() >= Duration::from_secs(2) {
            *last = Instant::now();
            eprintln!(
                "progress: {} ranks, {} records, next rank {}, {:.0} ranks/sec",
                p.processed,
                p.emitted,
                p.next_rank,
                p.ranks_per_sec()
            );
        }
    }
}

pub fn search(args: SearchArgs, out: &Output) -> Result<()> {
    let mut banner = Banner::new();
    let loaded = args.input.load(&mut banner)?;
    let scorers = args.scorers.build(&args.input, &mut banner)?;
    if scorers.is_empty() && args.threshold != f64::NEG_INFINITY {
        bail!("no scorers configured, so nothing can reach threshold {}; add a scorer or use --threshold -inf", args.threshold);
    }

    let mut spec = SearchSpec::new(loaded.text, args.shape);
    spec.corpus_label = banner[0].1.clone();
    spec.direction = args.direction;
    spec.level = args.level;
    spec.skip_rule = args.skips;
    spec.threshold = args.threshold;
    spec.begin = args.begin;
    spec.end = args.end;
    spec.excerpt_len = args.excerpt;
    spec.batch_size = args.batch;
    spec.sink = args.sink.clone();
    spec.checkpoint = args.checkpoint.clone();
    let search = Search::new(spec, scorers)?;

    let factors = search.space().factors();
    let [t, d, s, o] = factors.as_array();
    entry(&mut banner, "shape", search.space().shape());
    entry(&mut banner, "direction", args.direction);
    entry(&mut banner, "level", args.level);
    entry(&mut banner, "skips", args.skips);
    entry(&mut banner, "factors", format!("{t},{d},{s},{o}"));
    entry(&mut banner, "space size", search.space().total());
    entry(&mut banner, "threshold", args.threshold);
    entry(&mut banner, "range", format!("[{}, {})", search.begin(), search.end()));
    entry(&mut banner, "excerpt", args.excerpt);
    entry(&mut banner, "sink", args.sink.as_ref().map_or("stdout".into(), |p| p.display().to_string()));
    if let Some(cp) = &args.checkpoint {
        entry(&mut banner, "checkpoint", cp.display());
    }
    entry(&mut banner, "spec digest", search.digest());
    entry(&mut banner, "workers", args.workers);
    out.banner(if args.resume { "search (resume)" } else { "search" }, &banner)?;

    let printer = progress_printer();
    let control = RunControl {
        workers: args.workers,
        stop_after: args.stop_after,
        progress: if args.no_progress { None } else { Some(&printer) },
    };
    let summary = if args.resume {
        search.resume(&control)?
    } else if args.sink.is_some() {
        search.run(&control)?
    } else {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        search.stream(&mut lock, &control)?
    };

    out.info(&format!(
        "processed {} ranks ({} of {} in range), emitted {} records ({} in total), {:.0} ranks/sec",
        summary.processed,
        summary.total_processed,
        search.range_len(),
        summary.emitted,
        summary.total_emitted,
        summary.ranks_per_sec()
    ))?;
    if summary.complete {
        out.info("complete")?;
    } else {
        out.info(&format!("stopped; next rank {}", summary.next_rank))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PromoteModeArg {
    /// Keep each record's skips and offsets.
    Carry,
    /// Try every target skip and offset under the carried topologies and read directions.
    Enumerate,
}

#[derive(Args, Debug)]
pub struct PromoteArgs {
    /// Records from a search of the index layout.
    #[arg(long)]
    records: PathBuf,

    #[command(flatten)]
    input: InputArgs,

    /// Target layout; must have the same row count as the records.
    #[arg(long)]
    shape: GridShape,

    #[arg(long, default_value = "east")]
    direction: Direction,

    /// Recursion level of the records.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    level: u32,

    #[arg(long, default_value = "full")]
    skips: SkipRule,

    #[command(flatten)]
    scorers: ScorerArgs,

    #[arg(long, default_value = "-inf", allow_hyphen_values = true, value_parser = parse_threshold)]
    threshold: f64,

    #[arg(long, value_enum, default_value_t = PromoteModeArg::Enumerate)]
    mode: PromoteModeArg,

    /// Most target tuples per record in enumerate mode.
    #[arg(long)]
    limit: Option<u64>,

    #[arg(long, default_value_t = elsperm_core::search::DEFAULT_EXCERPT)]
    excerpt: usize,

    /// JSONL output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn promote_cmd(args: PromoteArgs, out: &Output) -> Result<()> {
    let mut banner = Banner::new();
    entry(&mut banner, "records", args.records.display());
    let loaded = args.input.load(&mut banner)?;
    let scorers = args.scorers.build(&args.input, &mut banner)?;
    let records = read_records(&args.records)?;

    let mut spec = SearchSpec::new(loaded.text, args.shape);
    spec.direction = args.direction;
    spec.level = args.level;
    spec.skip_rule = args.skips;
    spec.threshold = args.threshold;
    spec.excerpt_len = args.excerpt;
    let target = Search::new(spec, scorers)?;
    let mode = match args.mode {
        PromoteModeArg::Carry => PromoteMode::Carry,
        PromoteModeArg::Enumerate => PromoteMode::Enumerate { limit: args.limit },
    };
    entry(&mut banner, "shape", target.space().shape());
    entry(&mut banner, "direction", args.direction);
    entry(&mut banner, "level", args.level);
    entry(&mut banner, "skips", args.skips);
    entry(&mut banner, "threshold", args.threshold);
    entry(&mut banner, "mode", format!("{mode:?}"));
    entry(&mut banner, "out", args.out.as_ref().map_or("stdout".into(), |p| p.display().to_string()));
    out.banner("promote", &banner)?;

    let count = records.len();
    let promoted = promote(records, &target, mode)?;
    let mut sink: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    };
    for r in &promoted.records {
        writeln!(sink, "{}", r.to_json_line())?;
    }
    sink.flush()?;
    out.info(&format!(
        "promoted {count} records into {} target records; {} dropped as invalid on the target",
        promoted.records.len(),
        promoted.dropped
    ))?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    input: InputArgs,

    #[arg(long, default_value_t = NGramModel::DEFAULT_ORDER)]
    order: usize,

    #[arg(long, default_value_t = NGramModel::DEFAULT_SMOOTHING)]
    smoothing: f64,

    /// Where to write the model table.
    #[arg(long)]
    out: PathBuf,
}

pub fn train(args: TrainArgs, out: &Output) -> Result<()> {
    let mut banner = Banner::new();
    let text = args.input.load(&mut banner)?.text;
    entry(&mut banner, "order", args.order);
    entry(&mut banner, "smoothing", args.smoothing);
    entry(&mut banner, "out", args.out.display());
    out.banner("train-ngram", &banner)?;
    let model = NGramModel::train(text.as_slice(), args.order, args.smoothing)?;
    model.save(&args.out)?;
    out.info(&format!(
        "wrote {}-gram model over {} symbols to {}",
        model.order(),
        model.alphabet().len(),
        args.out.display()
    ))?;
    Ok(())
}
