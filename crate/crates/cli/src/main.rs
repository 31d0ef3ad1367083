use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use tropcay::enumeration::EnumerationFilters;
use tropcay::graphs::CensusConvention;
use tropcay::io::CURVE_FORMAT;
use tropcay::tropical::Valuation;
use tropcay_cli::{
    cmd_census, cmd_classify, cmd_config, cmd_enumerate, cmd_tropicalize, write_config, CliError, ConfigKind,
    EnumerateArgs, PolynomialInput,
};

/// Exit status after an interrupted enumeration.
const EXIT_INTERRUPTED: u8 = 130;

#[derive(Parser)]
#[command(name = "tropcay", version, about = "Regular triangulations, Cayley polytopes and tropical curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a point configuration.
    Config {
        #[command(subcommand)]
        kind: ConfigCmd,
        /// Output file (standard output when omitted).
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Tropicalize a pair of valued polynomials.
    Tropicalize(TropicalizeArgs),
    /// Stream regular triangulations, one JSON line each.
    Enumerate(EnumerateCli),
    /// Classify the curves of a triangulation stream.
    Classify(ClassifyArgs),
    /// Count connected graphs with bounded degree up to isomorphism.
    Census(CensusArgs),
}

#[derive(Subcommand)]
enum ConfigCmd {
    /// Lattice points of a dilated standard simplex.
    Simplex {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        dilation: u32,
    },
    /// Cayley configuration of two dilated simplices.
    Cayley {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        e: u32,
    },
}

#[derive(Args)]
struct TropicalizeArgs {
    f1: PathBuf,
    f2: PathBuf,
    /// Directory for curve.json and curve.dot.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Read polynomials written as text, e.g. `t^3x^2 + xy + 1`.
    #[arg(long)]
    text: bool,
    /// With --text, value integer coefficients p-adically.
    #[arg(long, requires = "text")]
    p_adic: Option<u64>,
}

#[derive(Args)]
struct EnumerateCli {
    #[arg(long)]
    config: PathBuf,
    /// trivial, s3, s4xz2, simplex or cayley.
    #[arg(long, default_value = "trivial")]
    group: String,
    #[arg(long)]
    unimodular: bool,
    /// Only triangulations using every point.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Emissions between checkpoints; TROPCAY_CHECKPOINT_EVERY overrides.
    #[arg(long, default_value_t = 10_000)]
    checkpoint_every: u64,
    /// Halt after this many triangulations.
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    progress_every: u64,
    /// Output file (standard output when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    config: PathBuf,
    /// Triangulation stream (standard input when omitted).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
    /// Distinguish blue and red vertices.
    #[arg(long)]
    colors: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    v: usize,
    #[arg(long)]
    e: usize,
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
    /// simple, multigraph or multigraph+loops.
    #[arg(long, default_value = "simple")]
    convention: CensusConvention,
    /// Also report what fraction of the census this many classes make up.
    #[arg(long)]
    realized: Option<u64>,
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|source| CliError::File { path: p.clone(), source })?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Config { kind, out } => {
            let kind = match kind {
                ConfigCmd::Simplex { dim, dilation } => ConfigKind::Simplex { dim, dilation },
                ConfigCmd::Cayley { dim, d, e } => ConfigKind::Cayley { dim, d, e },
            };
            let config = cmd_config(kind)?;
            match out {
                Some(path) => write_config(&path, &config)?,
                None => {
                    let v = tropcay::io::to_versioned(tropcay::io::CONFIG_FORMAT, &config)?;
                    println!("{}", serde_json::to_string_pretty(&v).map_err(tropcay::Error::from)?);
                }
            }
        }
        Command::Tropicalize(a) => {
            let input = match (a.text, a.p_adic) {
                (false, _) => PolynomialInput::Json,
                (true, None) => PolynomialInput::Text(Valuation::Puiseux),
                (true, Some(p)) => PolynomialInput::Text(Valuation::PAdic(p)),
            };
            let report = cmd_tropicalize(&a.f1, &a.f2, a.out.as_deref(), input)?;
            if a.out.is_none() {
                let v = tropcay::io::to_versioned(CURVE_FORMAT, &report)?;
                println!("{}", serde_json::to_string_pretty(&v).map_err(tropcay::Error::from)?);
            }
            let cycle = report.cycle_length.map_or_else(|| "none".into(), |k| k.to_string());
            info!(
                "cells={} mixed={} unmixed={} blue={} red={} genus={} cycle_length={}",
                report.cells.len(),
                report.mixed,
                report.unmixed,
                report.blue,
                report.red,
                report.genus,
                cycle
            );
        }
        Command::Enumerate(a) => {
            let stop = Arc::new(AtomicBool::new(false));
            let flag = stop.clone();
            if let Err(e) = ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed)) {
                log::warn!("cannot install interrupt handler: {e}");
            }
            let args = EnumerateArgs {
                config: a.config,
                group: a.group,
                filters: EnumerationFilters { require_regular: true, require_unimodular: a.unimodular, require_full: a.full },
                checkpoint: a.checkpoint,
                resume: a.resume,
                jobs: a.jobs,
                checkpoint_every: a.checkpoint_every,
                limit: a.limit,
                progress_every: a.progress_every,
            };
            let mut sink = open_out(&a.out)?;
            let summary = cmd_enumerate(&args, &mut sink, stop.clone())?;
            if stop.load(Ordering::Relaxed) {
                info!("interrupted after {} triangulations", summary.emitted_now);
                return Ok(EXIT_INTERRUPTED);
            }
        }
        Command::Classify(a) => {
            let mut input: Box<dyn BufRead> = match &a.input {
                Some(p) => Box::new(BufReader::new(File::open(p).map_err(|source| CliError::File { path: p.clone(), source })?)),
                None => Box::new(io::stdin().lock()),
            };
            let summary = cmd_classify(&a.config, &mut input, &a.out, a.colors, a.jobs)?;
            println!("{}", serde_json::to_string(&summary).map_err(tropcay::Error::from)?);
        }
        Command::Census(a) => {
            let count = cmd_census(a.v, a.e, a.max_degree, a.convention)?;
            println!("{count}");
            if let Some(k) = a.realized {
                let pct = if count == 0 { 0.0 } else { 100.0 * k as f64 / count as f64 };
                println!("realized {k}/{count} = {pct:.1}%");
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
