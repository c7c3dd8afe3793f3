//! `lwo`: run coverage experiments, evaluate on CSV data, inspect exact
//! dependence coefficients, and preview CSV chunking.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lwo_core::coeffs::{coverage_bounds, verify_inequalities, BoundInputs};
use lwo_core::harness::{run_trials, summarize, write_records, ConfigLayer, ExperimentConfig};
use lwo_core::processes::{gen_binary_ma, ingest_csv, FiniteProcess, MarkovChain};
use lwo_core::{Error, Result};

#[derive(Parser)]
#[command(name = "lwo", version, about = "Leave-a-window-out conformal prediction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated trials on a synthetic process.
    Simulate(RunArgs),
    /// Trials over chunks of a CSV column.
    Evaluate(RunArgs),
    /// Exact coefficients and inequality checks for a finite-alphabet law.
    Coeffs(CoeffArgs),
    /// Show how a CSV column would be cut into chunks.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ma1, sticky or iid (simulate); csv is implied by evaluate.
    #[arg(long)]
    process: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    /// CSV file (evaluate).
    #[arg(long)]
    path: Option<PathBuf>,
    /// 0-based CSV column (evaluate).
    #[arg(long)]
    column: Option<usize>,
    /// Rows skipped between chunks (evaluate).
    #[arg(long)]
    gap: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Memory L of the lifted covariates.
    #[arg(long)]
    memory: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    inflation: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Predictor specs such as knn:10, ridge:1, count:tree:5:2.
    #[arg(long = "predictor", value_delimiter = ',')]
    predictors: Vec<String>,
    /// Subset of split, jackknife, lwo.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    /// abs or l2.
    #[arg(long)]
    score: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Per-trial CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON; stderr when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffArgs {
    /// builtin:binary-ma, builtin:constant, builtin:iid or builtin:flip:<p>.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    chain: Option<String>,
    /// FiniteProcess JSON ({"alphabet_size", "m", "joint"}).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Builtin chains have length n + 1.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    tau: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Miscoverage used for the coverage bounds.
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Stability level used for the coverage bounds.
    #[arg(long, default_value_t = 0.0)]
    nu: f64,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    path: PathBuf,
    #[arg(long, default_value_t = 0)]
    column: usize,
    #[arg(long, default_value_t = 0)]
    memory: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    gap: usize,
}

impl RunArgs {
    fn layer(&self) -> ConfigLayer {
        let list = |v: &[String]| (!v.is_empty()).then(|| v.to_vec());
        ConfigLayer {
            process: self.process.clone(),
            dim: self.dim,
            rho: self.rho,
            path: self.path.clone(),
            column: self.column,
            gap: self.gap,
            n: self.n,
            memory: self.memory,
            tau: self.tau,
            alpha: self.alpha,
            inflation: self.inflation,
            trials: self.trials,
            predictors: list(&self.predictors),
            methods: list(&self.methods),
            score: self.score.clone(),
            seed: self.seed,
            output: self.out.clone(),
        }
    }

    fn resolve(&self, csv: bool) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(p) => ConfigLayer::from_file(p)?,
            None => ConfigLayer::default(),
        };
        let mut layer = file.merge(self.layer());
        if csv {
            match layer.process.as_deref() {
                None | Some("csv") => layer.process = Some("csv".into()),
                Some(other) => return Err(Error::InvalidParameter(format!("evaluate reads CSV data, not '{other}'"))),
            }
        }
        let cfg = layer.resolve()?;
        if !csv && !cfg.process.is_synthetic() {
            return Err(Error::InvalidParameter("simulate needs a synthetic process; use evaluate for CSV".into()));
        }
        Ok(cfg)
    }
}

fn run(args: &RunArgs, csv: bool) -> Result<()> {
    let cfg = args.resolve(csv)?;
    log::info!("running {} trials", cfg.trials);
    let records = run_trials(&cfg)?;
    match &cfg.output {
        Some(path) => write_records(BufWriter::new(File::create(path)?), &records)?,
        None => write_records(io::stdout().lock(), &records)?,
    }
    let text = if records.is_empty() { "{\n  \"rows\": []\n}".to_string() } else { summarize(&records)?.to_json() };
    match &args.summary {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

fn builtin_chain(name: &str, m: usize) -> Result<FiniteProcess> {
    let name = name.strip_prefix("builtin:").ok_or_else(|| Error::InvalidParameter(format!("unknown chain '{name}'")))?;
    match name {
        "binary-ma" => gen_binary_ma(m),
        "constant" => MarkovChain::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5])?.joint(m),
        "iid" => MarkovChain::new(vec![vec![0.5, 0.5]; 2], vec![0.5, 0.5])?.joint(m),
        _ => {
            let p: f64 = name
                .strip_prefix("flip:")
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("unknown chain 'builtin:{name}'")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("flip probability {p} outside [0, 1]")));
            }
            MarkovChain::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]], vec![0.5, 0.5])?.joint(m)
        }
    }
}

fn coeffs(args: &CoeffArgs) -> Result<()> {
    let process = match (&args.chain, &args.file) {
        (Some(chain), _) => builtin_chain(chain, args.n + 1)?,
        (None, Some(path)) => FiniteProcess::from_json(&std::fs::read_to_string(path)?)?,
        (None, None) => unreachable!("clap requires one of --chain/--file"),
    };
    let report = verify_inequalities(&process, args.tau, args.tol)?;
    let c = &report.coefficients;
    let bounds = match (c.beta, c.beta_star) {
        (Some(beta), Some(beta_star)) => Some(coverage_bounds(&BoundInputs {
            alpha: args.alpha,
            n: c.n,
            tau: c.tau,
            nu: args.nu,
            beta,
            beta_star,
            avg_switch: c.avg_switch,
            psi0: c.psi0,
            rho: Some(c.rho),
            rho_masked: Some(c.rho_masked),
        })),
        _ => None,
    };
    let out = serde_json::json!({
        "coefficients": report.coefficients,
        "checks": report.checks,
        "bounds": bounds,
    });
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{}", serde_json::to_string_pretty(&out).expect("report serializes"))?;
    Ok(())
}

fn ingest(args: &IngestArgs) -> Result<()> {
    let chunks = ingest_csv(&args.path, args.column, args.memory, args.n, args.gap)?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "chunks: {}", chunks.len())?;
    for (i, c) in chunks.iter().enumerate() {
        let test = c.sequence.points.last().and_then(|p| p.as_concrete());
        let y = test.map(|o| o.response[0]).unwrap_or(f64::NAN);
        writeln!(stdout, "{i}: rows {}..{} points {} test_response {y}", c.rows.start, c.rows.end, c.sequence.len())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match &cli.command {
        Command::Simulate(a) => run(a, false),
        Command::Evaluate(a) => run(a, true),
        Command::Coeffs(a) => coeffs(a),
        Command::Ingest(a) => ingest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { 3 } else { 2 })
        }
    }
}
