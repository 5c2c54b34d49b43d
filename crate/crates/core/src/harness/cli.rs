//! Command-line interface of the `radiocast` binary.
//!
//! Exit codes: 0 on success, 1 when a batch completes less often than
//! `--threshold`, 2 for invalid arguments, configurations or inputs.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{
    dumbbell_suite, generate, lowerbound_suite, run_batch, write_run_artifacts, DistSpec, GenKind,
    GraphSource, RunReport, SimConfig,
};
use crate::metrics::{write_summary_csv, ProtocolTag};
use crate::netgraph::write_graph;
use crate::protocols::{DEFAULT_BETA, DEFAULT_GOSSIP_MULTIPLIER, SPARSITY_WARNING};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "radiocast", version, about = "Radio-network broadcast and gossip simulator")]
pub struct Cli {
    /// Base seed; trial i uses seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub trials: usize,
    /// Output file (gen, dist, lowerbound) or directory (run).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit timestamps so identical inputs give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,
    /// Minimum completion rate for exit code 0.
    #[arg(long, global = true, default_value_t = 0.95)]
    pub threshold: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph file.
    Gen(GenArgs),
    /// Run a batch of trials.
    Run(RunArgs),
    /// Lower-bound experiments on the star/path network or the dumbbell.
    Lowerbound(LowerBoundArgs),
    /// Print a send-exponent table.
    Dist(DistArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "D", alias = "diameter")]
    pub diameter: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKindArg {
    Gnp,
    Lowerbound,
    Dumbbell,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolTag,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Read the graph from a file instead of generating it.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "gnp")]
    pub graph_kind: GraphKindArg,
    #[arg(long = "D", alias = "diameter")]
    pub diameter: Option<u64>,
    /// alpha, alpha-prime or point:K.
    #[arg(long, default_value = "alpha")]
    pub dist: DistSpec,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// `n` inside the distribution, if not the construction's.
    #[arg(long)]
    pub dist_n: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = SPARSITY_WARNING)]
    pub sparsity_warning: f64,
    #[arg(long, default_value_t = DEFAULT_GOSSIP_MULTIPLIER)]
    pub gossip_multiplier: f64,
    #[arg(long, default_value_t = 1.0)]
    pub cap_multiplier: f64,
    #[arg(long, default_value_t = 0)]
    pub source: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    Network,
    Dumbbell,
}

#[derive(Debug, Args)]
pub struct LowerBoundArgs {
    #[arg(long, value_enum, default_value = "network")]
    pub kind: SuiteKind,
    #[arg(long)]
    pub n: u64,
    #[arg(long = "D", alias = "diameter")]
    pub diameter: Option<u64>,
    #[arg(long, default_value = "alpha")]
    pub dist: DistSpec,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long)]
    pub round_cap: Option<u32>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long = "D", alias = "diameter")]
    pub diameter: u64,
    #[arg(long, default_value = "alpha")]
    pub dist: DistSpec,
    #[arg(long)]
    pub lambda: Option<f64>,
}

/// Outcome of a command that did not fail.
enum Outcome {
    Ok,
    BelowThreshold,
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidConfig(format!("missing --{flag}")))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<Outcome> {
    let source = match args.kind {
        GenKind::Gnp => GraphSource::Gnp {
            n: args.n as usize,
            p: need(args.p, "p")?,
        },
        GenKind::Lowerbound => GraphSource::LowerBound {
            n: args.n,
            diameter: need(args.diameter, "D")?,
        },
        GenKind::Dumbbell => GraphSource::Dumbbell { n: args.n as usize },
    };
    let (g, summary) = generate(&source, cli.seed)?;
    match &cli.out {
        Some(path) => {
            write_graph(&g, std::io::BufWriter::new(fs::File::create(path)?))?;
            println!("{summary}");
        }
        None => {
            write_graph(&g, std::io::stdout().lock())?;
            eprintln!("{summary}");
        }
    }
    Ok(Outcome::Ok)
}

fn run_config(cli: &Cli, args: &RunArgs) -> Result<SimConfig> {
    let graph = match (&args.graph, args.graph_kind) {
        (Some(path), _) => GraphSource::File(path.clone()),
        (None, GraphKindArg::Gnp) => GraphSource::Gnp {
            n: need(args.n, "n")? as usize,
            p: need(args.p, "p")?,
        },
        (None, GraphKindArg::Lowerbound) => GraphSource::LowerBound {
            n: need(args.n, "n")?,
            diameter: need(args.diameter, "D")?,
        },
        (None, GraphKindArg::Dumbbell) => GraphSource::Dumbbell {
            n: need(args.n, "n")? as usize,
        },
    };
    let mut cfg = SimConfig::new(args.protocol, graph);
    cfg.seed = cli.seed;
    cfg.trials = cli.trials;
    cfg.threshold = cli.threshold;
    cfg.source = args.source;
    cfg.p = args.p;
    cfg.diameter = args.diameter;
    cfg.dist = args.dist;
    cfg.dist_n = args.dist_n;
    cfg.lambda = args.lambda;
    cfg.beta = args.beta;
    cfg.sparsity_warning = args.sparsity_warning;
    cfg.gossip_multiplier = args.gossip_multiplier;
    cfg.cap_multiplier = args.cap_multiplier;
    Ok(cfg)
}

fn cmd_run(cli: &Cli, args: &RunArgs) -> Result<Outcome> {
    let cfg = run_config(cli, args)?;
    let batch = run_batch(&cfg)?;
    for w in batch.traces.iter().flat_map(|t| &t.warnings).take(1) {
        eprintln!("warning: {w}");
    }
    match &cli.out {
        Some(dir) => write_run_artifacts(&batch, dir, cli.reproducible)?,
        None => {
            let report = RunReport::new(&batch, cli.reproducible);
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    let mut csv = Vec::new();
    write_summary_csv(&mut csv, std::slice::from_ref(&batch.row))?;
    eprint!("{}", String::from_utf8_lossy(&csv));
    if batch.violations > 0 {
        eprintln!("trace check: {} violations", batch.violations);
    }
    Ok(if batch.passed() {
        Outcome::Ok
    } else {
        Outcome::BelowThreshold
    })
}

fn cmd_lowerbound(cli: &Cli, args: &LowerBoundArgs) -> Result<Outcome> {
    let (json, rate) = match args.kind {
        SuiteKind::Network => {
            let r = lowerbound_suite(
                args.n,
                need(args.diameter, "D")?,
                args.dist,
                args.lambda,
                cli.trials,
                cli.seed,
                args.beta,
                args.round_cap,
            )?;
            eprintln!(
                "completion {:.3}, mean tx/node {:.3}, min star rate {:.4} (star {})",
                r.completion_rate, r.tx_mean.mean, r.min_rate, r.min_rate_star
            );
            (serde_json::to_string_pretty(&r)?, r.completion_rate)
        }
        SuiteKind::Dumbbell => {
            if args.lambda.is_some() {
                return Err(Error::InvalidConfig("--lambda does not apply to the dumbbell".into()));
            }
            let r = dumbbell_suite(
                args.n as usize,
                args.diameter.unwrap_or(2),
                args.dist,
                cli.trials,
                cli.seed,
                args.beta,
                args.round_cap,
            )?;
            eprintln!(
                "success {:.3}, mean intermediate tx {:.2} vs n log n / 2 = {:.1}, \
                 destination rate {:.4} vs exact {:.4}",
                r.success_rate,
                r.intermediate_tx.mean,
                r.target,
                r.destination_rate,
                r.destination_oracle
            );
            (serde_json::to_string_pretty(&r)?, r.success_rate)
        }
    };
    emit(&cli.out, &(json + "\n"))?;
    Ok(if rate >= cli.threshold {
        Outcome::Ok
    } else {
        Outcome::BelowThreshold
    })
}

fn cmd_dist(cli: &Cli, args: &DistArgs) -> Result<Outcome> {
    let table = args.dist.build(args.n, args.diameter, args.lambda)?;
    let mut buf = Vec::new();
    table.write_to(&mut buf)?;
    emit(&cli.out, &String::from_utf8_lossy(&buf))?;
    Ok(Outcome::Ok)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.trials == 0 {
        eprintln!("error: --trials must be at least 1");
        return 2;
    }
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(&cli, a),
        Command::Run(a) => cmd_run(&cli, a),
        Command::Lowerbound(a) => cmd_lowerbound(&cli, a),
        Command::Dist(a) => cmd_dist(&cli, a),
    };
    match result {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::BelowThreshold) => {
            eprintln!("completion rate below threshold {}", cli.threshold);
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
