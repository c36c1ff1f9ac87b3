//! The `mahc` command line.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::data::Dataset;
use crate::dtw::Dtw;
use crate::error::{Error, Result};
use crate::eval::{contingency, dataset_f_measure};
use crate::io::{load_segments, read_assignment, save_segments, write_assignment, write_stats, Mode, RunManifest};
use crate::mahc::{full_ahc, run, IterationStats, MahcConfig};
use crate::synth::{generate_synthetic, ClassSizes, SyntheticSpec};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "mahc", version, about = "Multi-stage hierarchical clustering of variable-length sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster a segment file.
    Run(RunArgs),
    /// Generate a labelled synthetic segment file.
    Gen(GenArgs),
    /// Score an assignment file against a labelled segment file.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "mahc-m")]
    pub mode: Mode,
    /// Line-delimited JSON segment file.
    #[arg(long, required_unless_present = "manifest")]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "manifest")]
    pub out_dir: Option<PathBuf>,
    /// Re-run exactly the configuration recorded in a manifest.
    #[arg(long, conflicts_with = "input")]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub p0: usize,
    /// Occupancy cap; defaults to ceil(N / p0).
    #[arg(long)]
    pub beta: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub max_iters: usize,
    /// Consecutive iterations with an unchanged subset count that end the
    /// run; 0 runs the full budget.
    #[arg(long, default_value_t = 2)]
    pub conv_window: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub final_k: Option<usize>,
    #[arg(long)]
    pub ward_on_squared: bool,
    #[arg(long)]
    pub l_refine: bool,
    #[arg(long)]
    pub dtw_normalize: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub classes: usize,
    /// Members per class; ignored when --min-size and --max-size are given.
    #[arg(long, default_value_t = 20)]
    pub per_class: usize,
    /// Smallest class of a skewed profile.
    #[arg(long, requires = "max_size")]
    pub min_size: Option<usize>,
    /// Largest class of a skewed profile.
    #[arg(long, requires = "min_size")]
    pub max_size: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 6)]
    pub min_len: usize,
    #[arg(long, default_value_t = 16)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0.15)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0.2)]
    pub warp: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Labelled segment file.
    #[arg(long)]
    pub input: PathBuf,
    /// `segment_id,cluster_id` CSV.
    #[arg(long)]
    pub assignment: PathBuf,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::CapExceeded { .. } => EXIT_INVARIANT,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn unix_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

/// Parses `args` and executes the selected command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Eval(a) => cmd_eval(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Resolved inputs of a run: from flags or from a manifest.
fn resolve(args: &RunArgs) -> Result<(Mode, PathBuf, PathBuf, Dataset, MahcConfig)> {
    if let Some(m) = &args.manifest {
        let manifest = RunManifest::load(m)?;
        let out_dir = args.out_dir.clone().unwrap_or(manifest.out_dir);
        let dataset = load_segments(&manifest.input)?;
        return Ok((manifest.mode, manifest.input, out_dir, dataset, manifest.config));
    }
    let input = args.input.clone().expect("clap requires --input");
    let out_dir = args.out_dir.clone().expect("clap requires --out-dir");
    let dataset = load_segments(&input)?;
    if args.p0 == 0 {
        return Err(Error::invalid("--p0 must be at least 1"));
    }
    let config = MahcConfig {
        p0: args.p0,
        beta: args.beta.unwrap_or_else(|| dataset.len().div_ceil(args.p0)),
        manage_size: args.mode == Mode::MahcM,
        max_iters: args.max_iters,
        convergence_window: args.conv_window,
        seed: args.seed,
        workers: args.workers,
        final_k: args.final_k,
        ward_on_squared: args.ward_on_squared,
        l_refine: args.l_refine,
        dtw: Dtw { normalize: args.dtw_normalize, ..Dtw::default() },
    };
    Ok((args.mode, input, out_dir, dataset, config))
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let started_unix_ms = unix_ms();
    let clock = Instant::now();
    let (mode, input, out_dir, dataset, mut config) = resolve(args)?;
    config.manage_size = mode == Mode::MahcM;
    std::fs::create_dir_all(&out_dir)?;

    let (assignment, k, stats, f) = match mode {
        Mode::AhcBaseline => {
            let b = full_ahc(&dataset, &config)?;
            let row = IterationStats {
                iteration: 0,
                subsets: 1,
                max_occupancy: dataset.len(),
                min_occupancy: dataset.len(),
                medoids: b.k,
                k_estimate: b.k,
                f_measure: b.f_measure,
                seconds: b.seconds,
                refined_max_occupancy: None,
            };
            (b.assignment, b.k, vec![row], b.f_measure)
        }
        Mode::Mahc | Mode::MahcM => {
            config.validate(dataset.len())?;
            let out = run(&dataset, &config)?;
            for w in &out.warnings {
                log::warn!("{w}");
            }
            let f = dataset.labels().map(|l| crate::eval::f_measure(&out.assignment, &l)).transpose()?;
            (out.assignment, out.k, out.stats, f)
        }
    };

    write_assignment(&dataset, &assignment, out_dir.join("assignment.csv"))?;
    write_stats(&stats, out_dir.join("stats.csv"))?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        mode,
        input,
        out_dir: out_dir.clone(),
        seed: config.seed,
        config,
        started_unix_ms,
        finished_unix_ms: unix_ms(),
    };
    manifest.save(out_dir.join("manifest.json"))?;

    let peak = stats.iter().map(|r| r.max_occupancy).max().unwrap_or(0);
    println!("mode: {}", mode.as_str());
    println!("segments: {}", dataset.len());
    println!("final K: {k}");
    if let Some(f) = f {
        println!("F-measure: {f:.6}");
    }
    println!("iterations: {}", stats.len());
    println!("peak subset size: {peak}");
    println!("total seconds: {:.3}", clock.elapsed().as_secs_f64());
    Ok(())
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let sizes = match (args.min_size, args.max_size) {
        (Some(min), Some(max)) => ClassSizes::Skewed { min, max },
        _ => ClassSizes::Fixed(args.per_class),
    };
    let spec = SyntheticSpec {
        classes: args.classes,
        sizes,
        dim: args.dim,
        min_len: args.min_len,
        max_len: args.max_len,
        jitter: args.jitter,
        warp: args.warp,
        seed: args.seed,
    };
    let dataset = generate_synthetic(&spec)?;
    save_segments(&dataset, &args.out)?;
    println!("wrote {} segments in {} classes to {}", dataset.len(), spec.classes, args.out.display());
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let dataset = load_segments(&args.input)?;
    let labels = dataset.labels().ok_or_else(|| Error::invalid("the segment file carries no labels"))?;
    let assignment = read_assignment(&dataset, &args.assignment)?;
    let table = contingency(&assignment, &labels)?;
    println!("segments: {}", table.total());
    println!("clusters: {}", table.clusters());
    println!("classes: {}", table.classes());
    println!("F-measure: {:.6}", dataset_f_measure(&table));
    Ok(())
}
