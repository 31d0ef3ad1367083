//! Subcommand implementations for the `tropcay` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use tropcay::enumeration::{Counters, EnumerationFilters, EnumerationOptions, Enumerator};
use tropcay::geometry::{cayley_config, simplex_lattice_points, Block};
use tropcay::graphs::{census, CensusConvention, ClassEntry};
use tropcay::io::{
    parse_triangulation_line, read_json, write_json, TriangulationRecord, CONFIG_FORMAT, CURVE_FORMAT,
    POLYNOMIAL_FORMAT,
};
use tropcay::triangulation::{builtin_symmetry, BuiltinSymmetry};
use tropcay::tropical::{curve_report, dual_curve_planar, tropicalize_pair, Valuation};
use tropcay::{ClassTable, CurveGraph, CurveReport, Geometry, PointConfiguration, SymmetryGroup, ValuedPolynomial};

pub const CHECKPOINT_EVERY_ENV: &str = "TROPCAY_CHECKPOINT_EVERY";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tropcay::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(tropcay::Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use tropcay::Error as E;
        match self {
            CliError::Core(E::NotTriangulation { .. } | E::Degenerate(_)) => 2,
            CliError::Core(E::NotUnimodular { .. }) => 3,
            CliError::Core(E::Io(_)) | CliError::File { .. } => 4,
            CliError::Core(E::CheckpointMismatch(_) | E::CorruptCheckpoint(_)) => 5,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| CliError::File { path: path.to_owned(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::File { path: path.to_owned(), source })
}

#[derive(Clone, Copy, Debug)]
pub enum ConfigKind {
    Simplex { dim: usize, dilation: u32 },
    Cayley { dim: usize, d: u32, e: u32 },
}

pub fn cmd_config(kind: ConfigKind) -> Result<PointConfiguration> {
    Ok(match kind {
        ConfigKind::Simplex { dim, dilation } => simplex_lattice_points(dim, dilation)?,
        ConfigKind::Cayley { dim, d, e } => {
            cayley_config(&simplex_lattice_points(dim, d)?, &simplex_lattice_points(dim, e)?)?
        }
    })
}

pub fn read_config(path: &Path) -> Result<PointConfiguration> {
    Ok(read_json(path, CONFIG_FORMAT)?)
}

pub fn write_config(path: &Path, config: &PointConfiguration) -> Result<()> {
    Ok(write_json(path, CONFIG_FORMAT, config)?)
}

/// How polynomial files are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PolynomialInput {
    #[default]
    Json,
    Text(Valuation),
}

pub fn read_polynomial(path: &Path, input: PolynomialInput) -> Result<ValuedPolynomial> {
    match input {
        PolynomialInput::Json => Ok(read_json(path, POLYNOMIAL_FORMAT)?),
        PolynomialInput::Text(v) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::File { path: path.to_owned(), source })?;
            Ok(ValuedPolynomial::parse(&text, v)?)
        }
    }
}

/// Runs the pipeline on a pair of polynomial files and writes
/// `curve.json` and `curve.dot` into `out` when given.
pub fn cmd_tropicalize(f1: &Path, f2: &Path, out: Option<&Path>, input: PolynomialInput) -> Result<CurveReport> {
    let p1 = read_polynomial(f1, input)?;
    let p2 = read_polynomial(f2, input)?;
    let report = tropicalize_pair(&p1, &p2)?;
    if let Some(dir) = out {
        create_dir(dir)?;
        write_json(&dir.join("curve.json"), CURVE_FORMAT, &report)?;
        write_file(&dir.join("curve.dot"), &report.dot)?;
    }
    Ok(report)
}

pub fn parse_group(geom: &Geometry, name: &str) -> Result<SymmetryGroup> {
    let kind: BuiltinSymmetry = name.parse()?;
    Ok(builtin_symmetry(geom, kind)?)
}

#[derive(Clone, Debug)]
pub struct EnumerateArgs {
    pub config: PathBuf,
    pub group: String,
    pub filters: EnumerationFilters,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    pub jobs: usize,
    pub checkpoint_every: u64,
    /// Stop (with a checkpoint) after this many emitted triangulations.
    pub limit: Option<u64>,
    pub progress_every: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerateSummary {
    pub counters: Counters,
    pub emitted_now: u64,
    pub complete: bool,
    pub halted: bool,
}

/// Checkpoint cadence, with the environment taking precedence over the flag.
pub fn checkpoint_every(flag: u64) -> Result<u64> {
    match std::env::var(CHECKPOINT_EVERY_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{CHECKPOINT_EVERY_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(flag),
    }
}

/// Streams one JSON line per triangulation into `sink`. Setting `stop`
/// ends the run after writing a checkpoint.
pub fn cmd_enumerate(args: &EnumerateArgs, sink: &mut dyn Write, stop: Arc<AtomicBool>) -> Result<EnumerateSummary> {
    let config = read_config(&args.config)?;
    let geom = Geometry::new(config.clone())?;
    let group = parse_group(&geom, &args.group)?;
    let opts = EnumerationOptions {
        jobs: args.jobs.max(1),
        checkpoint: args.checkpoint.clone(),
        checkpoint_every: checkpoint_every(args.checkpoint_every)?.max(1),
        ..Default::default()
    };
    let mut e = match (&args.checkpoint, args.resume) {
        (Some(path), true) => Enumerator::resume(path, &geom, &group, args.filters, opts)?,
        (None, true) => return Err(CliError::Usage("--resume needs --checkpoint".into())),
        _ => Enumerator::new(&geom, &group, args.filters, opts)?,
    };
    let handle = e.stop_handle();
    let mut emitted_now = 0;
    loop {
        if stop.load(Ordering::Relaxed) || args.limit.is_some_and(|l| emitted_now >= l) {
            handle.store(true, Ordering::Relaxed);
        }
        let Some(t) = e.next() else { break };
        let t = t?;
        writeln!(sink, "{}", TriangulationRecord::new(&t, &config).to_line())?;
        emitted_now += 1;
        if args.progress_every > 0 && emitted_now % args.progress_every == 0 {
            let c = e.counters();
            info!("visited={} emitted={} frontier={}", c.visited, c.emitted, e.frontier_len());
        }
    }
    sink.flush()?;
    let c = e.counters();
    info!("done: visited={} emitted={} frontier={} complete={}", c.visited, c.emitted, e.frontier_len(), e.is_complete());
    Ok(EnumerateSummary { counters: c, emitted_now, complete: e.is_complete(), halted: e.halted() })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifySummary {
    pub classes: usize,
    pub total: u64,
    pub cycle_histogram: BTreeMap<String, usize>,
    /// `(line number, message)` for every skipped input line.
    pub errors: Vec<(usize, String)>,
}

enum CurveKind {
    Planar,
    Cayley(u32, u32),
}

fn curve_kind(geom: &Geometry) -> Result<CurveKind> {
    let config = geom.config();
    if geom.dim() == 2 {
        return Ok(CurveKind::Planar);
    }
    if geom.dim() == 4 && config.cayley_blocks().is_some() {
        let degree = |b: Block| {
            let blocks = config.cayley_blocks().unwrap_or_default();
            config
                .points()
                .iter()
                .zip(&blocks)
                .filter(|(_, &k)| k == b)
                .map(|(p, _)| p[2..].iter().sum::<i64>() as u32)
                .max()
                .unwrap_or(0)
        };
        return Ok(CurveKind::Cayley(degree(Block::First), degree(Block::Second)));
    }
    Err(CliError::Usage(format!(
        "classification needs a polygon or a Cayley configuration in 3-space, got dimension {}",
        geom.dim()
    )))
}

fn curve_of(geom: &Geometry, kind: &CurveKind, line: &str) -> tropcay::Result<(CurveGraph, String)> {
    let t = parse_triangulation_line(line, geom.config())?;
    t.validate(geom)?;
    if let Some(c) = t.cells().iter().find(|c| geom.det_cell(**c).unsigned_abs() != 1) {
        return Err(tropcay::Error::NotUnimodular {
            cell: c.indices(),
            volume: geom.det_cell(*c).unsigned_abs() as u64,
        });
    }
    let graph = match kind {
        CurveKind::Planar => dual_curve_planar(geom, &t)?,
        CurveKind::Cayley(d, e) => curve_report(geom, &t, (*d, *e))?.graph,
    };
    Ok((graph, t.to_letters(geom.config())))
}

/// Classifies the curves of a triangulation stream and writes
/// `classes.json`, `atlas.txt` and one DOT file per class into `out`.
pub fn cmd_classify(
    config: &Path,
    input: &mut dyn BufRead,
    out: &Path,
    use_colors: bool,
    jobs: usize,
) -> Result<ClassifySummary> {
    let config = read_config(config)?;
    let geom = Geometry::new(config.clone())?;
    let kind = curve_kind(&geom)?;
    let mut lines = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push((i + 1, line));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let (table, mut errors) = pool.install(|| {
        lines
            .par_chunks(256)
            .map(|chunk| {
                let mut table = ClassTable::new(use_colors);
                let mut errors = Vec::new();
                for (no, line) in chunk {
                    match curve_of(&geom, &kind, line) {
                        Ok((graph, letters)) => table.insert(&graph, &letters, *no as u64),
                        Err(e) => errors.push((*no, e.to_string())),
                    }
                }
                (table, errors)
            })
            .reduce(
                || (ClassTable::new(use_colors), Vec::new()),
                |(mut a, mut ea), (b, eb)| {
                    a.merge(b);
                    ea.extend(eb);
                    (a, ea)
                },
            )
    });
    errors.sort();
    for (no, msg) in &errors {
        warn!("line {no}: {msg}");
    }

    create_dir(out)?;
    let dot_dir = out.join("dot");
    create_dir(&dot_dir)?;
    let entries = table.entries();
    let mut json = serde_json::to_string_pretty(&table.to_json()).map_err(tropcay::Error::from)?;
    json.push('\n');
    write_file(&out.join("classes.json"), &json)?;
    write_file(&out.join("atlas.txt"), &atlas(&config, &entries, table.total()))?;
    for e in &entries {
        let labels: Vec<String> = if e.graph.cells.is_empty() {
            (0..e.graph.vertex_count()).map(|v| v.to_string()).collect()
        } else {
            e.graph.cells.iter().map(|c| c.iter().map(|&i| config.labels()[i].as_str()).collect()).collect()
        };
        write_file(&dot_dir.join(format!("class_{:05}.dot", e.id)), &e.graph.to_dot(&format!("class {}", e.id), Some(&labels)))?;
    }
    let cycle_histogram = table
        .cycle_histogram()
        .into_iter()
        .map(|(k, v)| (k.map_or_else(|| "none".to_owned(), |k| k.to_string()), v))
        .collect();
    Ok(ClassifySummary { classes: entries.len(), total: table.total(), cycle_histogram, errors })
}

/// Wraps each cell of a letter encoding in `[blue]`/`[red]` when it spans a
/// mixed cell of the corresponding kind.
pub fn color_markup(letters: &str, config: &PointConfiguration) -> String {
    let Some(blocks) = config.cayley_blocks() else { return letters.replace(',', " ") };
    let Ok(t) = tropcay::Triangulation::from_letters(letters, config) else { return letters.to_owned() };
    let pieces: Vec<&str> = letters.split(',').collect();
    t.cells()
        .iter()
        .zip(pieces)
        .map(|(c, s)| {
            let a = c.iter().filter(|&i| blocks[i] == Block::First).count();
            let b = c.len() - a;
            match (a, b) {
                (3, 2) => format!("[blue]{s}[/blue]"),
                (2, 3) => format!("[red]{s}[/red]"),
                _ => s.to_owned(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Plain-text atlas: a label table followed by one block per class.
pub fn atlas(config: &PointConfiguration, entries: &[ClassEntry], total: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# tropcay atlas");
    let _ = writeln!(s, "# {} classes from {} inputs", entries.len(), total);
    let _ = writeln!(s, "# classes are ordered by cycle length, then by canonical edge list");
    if config.cayley_blocks().is_some() {
        let _ = writeln!(s, "# [blue]: three uppercase and two lowercase vertices; [red]: two uppercase and three lowercase");
    }
    let _ = writeln!(s, "#");
    let _ = writeln!(s, "# labels:");
    for (l, p) in config.labels().iter().zip(config.points()) {
        let coords: Vec<String> = p.iter().map(i64::to_string).collect();
        let _ = writeln!(s, "#   {l} = ({})", coords.join(","));
    }
    for e in entries {
        let _ = writeln!(s);
        let cycle = e.cycle_length.map_or_else(|| "-".to_owned(), |k| k.to_string());
        let _ = writeln!(s, "ID {}  cycle length {}  members {}", e.id, cycle, e.members);
        let _ = writeln!(s, "  triangulation: {}", color_markup(&e.representative, config));
        let edges: Vec<String> = e.graph.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        let _ = writeln!(s, "  edges: {}", edges.join(" "));
        let rays: Vec<String> = e.graph.rays.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "  rays: {}", rays.join(" "));
    }
    s
}

pub fn cmd_census(v: usize, e: usize, max_degree: usize, convention: CensusConvention) -> Result<u64> {
    Ok(census(v, e, max_degree, convention)?)
}

