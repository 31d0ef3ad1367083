//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet};
use std::hash::{Hash, Hasher};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropcay::enumeration::EnumerationFilters;
use tropcay::geometry::{normalized_volume, regular_subdivision, simplex_lattice_points, Subdivision, VolumeTarget};
use tropcay::graphs::{canonical_form, relabel, CensusConvention};
use tropcay::io::parse_triangulation_line;
use tropcay::triangulation::{apply_symmetry, builtin_symmetry, flip_along, flips, is_regular, BuiltinSymmetry};
use tropcay::tropical::{curve_report, dual_curve_planar, genus, Valuation};
use tropcay::{CurveReport, Geometry, Triangulation};
use tropcay_cli::{
    cmd_census, cmd_classify, cmd_config, cmd_enumerate, cmd_tropicalize, read_config, write_config, ConfigKind,
    EnumerateArgs, EnumerateSummary, PolynomialInput,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn polynomials() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/polynomials")
}

/// Collects emitted lines: a digest of every line plus every `keep_every`-th
/// line in full.
struct LineSink {
    buf: Vec<u8>,
    digests: Vec<u64>,
    kept: Vec<String>,
    keep_every: usize,
}

impl LineSink {
    fn new(keep_every: usize) -> Self {
        Self { buf: Vec::new(), digests: Vec::new(), kept: Vec::new(), keep_every }
    }

    fn lines(&self) -> usize {
        self.digests.len()
    }
}

impl Write for LineSink {
    fn write(&mut self, data: &[u8]) -> io::Result<usize> {
        self.buf.extend_from_slice(data);
        while let Some(pos) = self.buf.iter().position(|&b| b == b'\n') {
            let line: Vec<u8> = self.buf.drain(..=pos).collect();
            let line = String::from_utf8_lossy(&line[..pos]).into_owned();
            let mut h = DefaultHasher::new();
            line.hash(&mut h);
            if self.digests.len() % self.keep_every == 0 {
                self.kept.push(line);
            }
            self.digests.push(h.finish());
        }
        Ok(data.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().expect("temporary directory") }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn config(&self, name: &str, kind: ConfigKind) -> PathBuf {
        let path = self.path(name);
        write_config(&path, &cmd_config(kind).expect("config")).expect("write config");
        path
    }
}

fn enumerate_args(config: &Path, group: &str, filters: EnumerationFilters) -> EnumerateArgs {
    EnumerateArgs {
        config: config.to_owned(),
        group: group.into(),
        filters,
        checkpoint: None,
        resume: false,
        jobs: 1,
        checkpoint_every: 10_000,
        limit: None,
        progress_every: 0,
    }
}

fn run_enumerate(args: &EnumerateArgs, keep_every: usize) -> Result<(LineSink, EnumerateSummary), String> {
    let mut sink = LineSink::new(keep_every);
    let summary = cmd_enumerate(args, &mut sink, Arc::new(AtomicBool::new(false))).map_err(|e| e.to_string())?;
    Ok((sink, summary))
}

fn enumerate_text(args: &EnumerateArgs) -> Result<Vec<String>, String> {
    let (sink, _) = run_enumerate(args, 1)?;
    Ok(sink.kept)
}

fn planar(ws: &Workspace) -> Result<usize, String> {
    let config = ws.config("cubic.json", ConfigKind::Simplex { dim: 2, dilation: 3 });
    let all = enumerate_text(&enumerate_args(&config, "trivial", EnumerationFilters::unimodular()))?;
    ensure(all.len() == 79, format!("{} triangulations with the trivial group", all.len()))?;
    let reps = enumerate_text(&enumerate_args(&config, "s3", EnumerationFilters::unimodular()))?;
    ensure(reps.len() == 18, format!("{} orbit representatives", reps.len()))?;

    let input = all.join("\n");
    let out = ws.path("classes");
    let summary = cmd_classify(&config, &mut input.as_bytes(), &out, false, 1).map_err(|e| e.to_string())?;
    ensure(summary.errors.is_empty(), format!("classify reported {:?}", summary.errors))?;
    ensure(summary.total == 79, format!("classified {} inputs", summary.total))?;
    ensure(summary.classes == 18, format!("{} classes", summary.classes))?;
    let expected: BTreeMap<String, usize> =
        [(3, 2), (4, 4), (5, 4), (6, 4), (7, 2), (8, 1), (9, 1)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    ensure(summary.cycle_histogram == expected, format!("histogram {:?}", summary.cycle_histogram))?;
    ensure(out.join("atlas.txt").is_file() && out.join("dot/class_00017.dot").is_file(), "missing atlas output")?;
    Ok(summary.classes)
}

fn quadric_invariants(r: &CurveReport) -> Result<(), String> {
    let g = &r.graph;
    ensure(r.cells.len() == 32, format!("{} cells", r.cells.len()))?;
    ensure(r.mixed == 16 && r.unmixed == 16, format!("{} mixed, {} unmixed", r.mixed, r.unmixed))?;
    ensure(r.blue == 8 && r.red == 8, format!("{} blue, {} red", r.blue, r.red))?;
    ensure(g.vertex_count() == 16 && g.edge_count() == 16, format!("{} vertices, {} edges", g.vertex_count(), g.edge_count()))?;
    ensure(g.is_connected(), "dual graph is disconnected")?;
    ensure(g.max_degree() <= 3, format!("max degree {}", g.max_degree()))?;
    ensure(r.genus == 1 && genus(g) == 1, format!("genus {}", r.genus))?;
    ensure(r.minkowski_volume == 64 && r.mixed * 3 + r.unmixed == 64, format!("Minkowski volume {}", r.minkowski_volume))?;
    Ok(())
}

fn tropicalize(stem: &str, input: PolynomialInput, ext: &str, out: Option<&Path>) -> Result<CurveReport, String> {
    let dir = polynomials();
    cmd_tropicalize(&dir.join(format!("{stem}_f1.{ext}")), &dir.join(format!("{stem}_f2.{ext}")), out, input)
        .map_err(|e| format!("{stem}: {e}"))
}

fn criterion_1(ws: &Workspace) -> Check {
    planar(ws).map(|_| "79 triangulations, 18 orbits, 18 classes with the expected cycle histogram".into())
}

fn criterion_2(ws: &Workspace) -> Check {
    let mut lengths = Vec::new();
    let mut slowest = Duration::ZERO;
    for k in 3..=16 {
        let stem = format!("cycle{k:02}");
        let start = Instant::now();
        let r = tropicalize(&stem, PolynomialInput::Json, "json", Some(&ws.path(&stem)))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        quadric_invariants(&r).map_err(|e| format!("{stem}: {e}"))?;
        ensure(elapsed < Duration::from_secs(10), format!("{stem} took {elapsed:?}"))?;
        ensure(ws.path(&stem).join("curve.json").is_file(), format!("{stem}: curve.json not written"))?;
        lengths.push(r.cycle_length.unwrap_or(0));
    }
    ensure(lengths == (3..=16).collect::<Vec<_>>(), format!("cycle lengths {lengths:?}"))?;
    Ok(format!("14 pairs, cycle lengths 3..=16 in order, slowest {:.2}s", slowest.as_secs_f64()))
}

fn criterion_3() -> Check {
    let r = tropicalize("two_adic", PolynomialInput::Text(Valuation::PAdic(2)), "txt", None)?;
    quadric_invariants(&r)?;
    ensure(r.cycle_length == Some(8), format!("cycle length {:?}", r.cycle_length))?;
    Ok("integer coefficients under the 2-adic valuation give cycle length 8".into())
}

fn criterion_4() -> Check {
    let r = tropicalize("quadric_plane", PolynomialInput::Json, "json", None)?;
    let g = &r.graph;
    ensure(r.cells.len() == 15, format!("{} cells", r.cells.len()))?;
    ensure(r.mixed == 6 && r.unmixed == 9, format!("{} mixed, {} unmixed", r.mixed, r.unmixed))?;
    ensure(g.vertex_count() == 6 && g.edge_count() == 5, format!("{} vertices, {} edges", g.vertex_count(), g.edge_count()))?;
    ensure(g.is_connected() && r.genus == 0 && r.cycle_length.is_none(), "dual graph is not a tree")?;
    Ok("6 mixed + 9 unmixed cells, dual tree with 6 vertices and 5 edges".into())
}

fn criterion_5(ws: &Workspace) -> Check {
    let cayley = read_config(&ws.config("cayley22.json", ConfigKind::Cayley { dim: 3, d: 2, e: 2 }))
        .map_err(|e| e.to_string())?;
    let lift = normalized_volume(&Geometry::new(cayley).map_err(|e| e.to_string())?, VolumeTarget::Whole);
    let quartic = Geometry::new(simplex_lattice_points(3, 4).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let sum = normalized_volume(&quartic, VolumeTarget::Whole);
    ensure(lift == 32, format!("Cayley volume {lift}"))?;
    ensure(sum == 64, format!("quartic simplex volume {sum}"))?;
    for k in 3..=16 {
        let r = tropicalize(&format!("cycle{k:02}"), PolynomialInput::Json, "json", None)?;
        ensure(r.mixed * 3 + r.unmixed == sum as usize, format!("cycle{k:02}: accounting fails"))?;
    }
    Ok("volumes 32 and 64, 16*1 + 16*3 = 64 on all 14 pairs".into())
}

fn criterion_6(classes: usize) -> Check {
    let start = Instant::now();
    let n = cmd_census(9, 9, 3, CensusConvention::Simple).map_err(|e| e.to_string())?;
    ensure(n == 80, format!("census {n}"))?;
    let pct = 100.0 * classes as f64 / n as f64;
    ensure((pct - 22.5).abs() < 1e-9, format!("realized {pct}%"))?;
    Ok(format!(
        "census(9, 9, 3) = {n} with the {} convention, realized {classes}/{n} = {pct:.1}% in {:.2}s",
        CensusConvention::Simple,
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_7(ws: &Workspace) -> Check {
    let config_path = ws.config("cubic7.json", ConfigKind::Simplex { dim: 2, dilation: 3 });
    let config = read_config(&config_path).map_err(|e| e.to_string())?;
    let geom = Geometry::new(config.clone()).map_err(|e| e.to_string())?;
    let mut args = enumerate_args(&config_path, "trivial", EnumerationFilters::unimodular());
    let lines = enumerate_text(&args)?;
    let all: Vec<Triangulation> =
        lines.iter().map(|l| parse_triangulation_line(l, &config)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;

    for t in &all {
        for (c, t2) in flips(&geom, t) {
            ensure(flip_along(&t2, c.reversed()).as_ref() == Some(t), "flip is not an involution")?;
        }
        let w = is_regular(&geom, t).ok_or("enumerated triangulation has no witness")?;
        let back = regular_subdivision(&geom, &w).map_err(|e| e.to_string())?;
        ensure(back == Subdivision::from(t), "witness does not reproduce its triangulation")?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in &all {
        let curve = dual_curve_planar(&geom, t).map_err(|e| e.to_string())?;
        let form = canonical_form(&curve, false);
        let mut perm: Vec<usize> = (0..curve.vertex_count()).collect();
        for _ in 0..100 {
            perm.shuffle(&mut rng);
            ensure(canonical_form(&relabel(&curve, &perm), false) == form, "canonical form changed under relabeling")?;
        }
    }

    args.jobs = 8;
    ensure(enumerate_text(&args)? == lines, "--jobs 8 output differs from --jobs 1")?;
    args.jobs = 1;

    let checkpoint = ws.path("cubic.ckpt");
    args.checkpoint = Some(checkpoint);
    args.checkpoint_every = 7;
    args.limit = Some(30);
    let (first, summary) = run_enumerate(&args, 1)?;
    ensure(summary.halted && !summary.complete, "limited run did not halt")?;
    args.resume = true;
    args.limit = None;
    let (second, summary) = run_enumerate(&args, 1)?;
    ensure(summary.complete, "resumed run did not complete")?;
    let mut joined = first.kept.clone();
    joined.extend(second.kept);
    let fresh: HashSet<&String> = lines.iter().collect();
    let resumed: HashSet<&String> = joined.iter().collect();
    ensure(joined.len() == 79 && resumed == fresh, format!("halt and resume gave {} lines", joined.len()))?;

    let s3 = builtin_symmetry(&geom, BuiltinSymmetry::Simplex3d2).map_err(|e| e.to_string())?;
    for t in &all {
        for p in s3.elements() {
            let u = apply_symmetry(t, p);
            ensure(u.validate(&geom).is_ok() && u.is_unimodular(&geom), "symmetry broke unimodularity")?;
        }
    }
    Ok(format!(
        "flips, witnesses, 100 relabelings per curve, jobs 1 = jobs 8, halt after {} + resume = fresh, symmetries",
        first.lines()
    ))
}

fn criterion_8(ws: &Workspace) -> Check {
    const TARGET: u64 = 100_000;
    const HALT_AT: u64 = 40_000;
    const SAMPLE_EVERY: usize = 100;
    let start = Instant::now();
    let config_path = ws.config("cayley.json", ConfigKind::Cayley { dim: 3, d: 2, e: 2 });
    let config = read_config(&config_path).map_err(|e| e.to_string())?;
    let geom = Geometry::new(config.clone()).map_err(|e| e.to_string())?;
    let filters = EnumerationFilters { require_regular: true, require_unimodular: false, require_full: false };

    let mut args = enumerate_args(&config_path, "s4xz2", filters);
    args.jobs = 4;
    args.checkpoint = Some(ws.path("cayley.ckpt"));
    args.limit = Some(HALT_AT);
    let (first, summary) = run_enumerate(&args, SAMPLE_EVERY)?;
    ensure(summary.halted, "first leg did not halt")?;
    args.resume = true;
    args.limit = Some(TARGET - first.lines() as u64);
    let (second, _) = run_enumerate(&args, SAMPLE_EVERY)?;

    let mut joined = first.digests.clone();
    joined.extend(&second.digests);
    ensure(joined.len() as u64 >= TARGET, format!("streamed only {}", joined.len()))?;
    let distinct: HashSet<u64> = joined.iter().copied().collect();
    ensure(distinct.len() == joined.len(), "duplicate representatives across the checkpoint")?;

    let mut fresh_args = enumerate_args(&config_path, "s4xz2", filters);
    fresh_args.jobs = 4;
    fresh_args.limit = Some(joined.len() as u64);
    let (fresh, _) = run_enumerate(&fresh_args, usize::MAX)?;
    ensure(fresh.digests == joined, "resumed stream differs from an uninterrupted run")?;

    let mut sampled = 0;
    for line in first.kept.iter().chain(&second.kept) {
        let t = parse_triangulation_line(line, &config).map_err(|e| e.to_string())?;
        if !t.is_unimodular(&geom) {
            continue;
        }
        let r = curve_report(&geom, &t, (2, 2)).map_err(|e| e.to_string())?;
        quadric_invariants(&r).map_err(|e| format!("{}: {e}", t.to_letters(&config)))?;
        sampled += 1;
    }
    ensure(sampled > 0, "no unimodular representative sampled")?;
    Ok(format!(
        "substitute check: {} representatives, halted at {} and resumed, identical to an uninterrupted run, {sampled} sampled unimodular curves pass, {:.1}s",
        joined.len(),
        first.lines(),
        start.elapsed().as_secs_f64()
    ))
}

fn main() {
    let ws = Workspace::new();
    let planar_classes = planar(&Workspace::new()).unwrap_or(0);
    let results: Vec<(u32, Check)> = vec![
        (1, criterion_1(&ws)),
        (2, criterion_2(&ws)),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5(&ws)),
        (6, criterion_6(planar_classes)),
        (7, criterion_7(&ws)),
        (8, criterion_8(&ws)),
    ];
    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(msg) => println!("criterion {n}: PASS  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL  {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
