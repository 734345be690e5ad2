//! `mld`: exact ML decoding, FER simulation and minimum distance from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mld_core::bnb::{ml_decode, BnbParams};
use mld_core::channel::LlrVector;
use mld_core::cuts::CutoffMetric;
use mld_core::sim::{self, SimConfig, SimReport};
use mld_core::{alist, builtin, DecodeError, LinearCode};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "mld", version, about = "Exact maximum-likelihood decoding of binary linear codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decode one LLR vector read from a file.
    Decode {
        #[command(flatten)]
        code: CodeArg,
        /// File with n whitespace-separated LLR values.
        #[arg(long)]
        llr: PathBuf,
        /// Print the outcome as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        decoder: DecoderFlags,
    },
    /// Monte-Carlo frame error rate over an AWGN channel.
    Simulate {
        #[command(flatten)]
        code: CodeArg,
        /// Comma-separated Eb/N0 values in dB.
        #[arg(long, value_delimiter = ',', required = true)]
        snr: Vec<f64>,
        /// Frame errors to collect per SNR point.
        #[arg(long, default_value_t = 100)]
        errors: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_frames: u64,
        /// Master seed (the MLD_SEED environment variable takes precedence).
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Transmit the all-zero codeword and stop each decode at the first
        /// negative-objective codeword.
        #[arg(long)]
        all_zero: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// CSV output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the results as a JSON document.
        #[arg(long)]
        json_out: Option<PathBuf>,
        #[command(flatten)]
        decoder: DecoderFlags,
    },
    /// Minimum distance of a code.
    Mindist {
        #[command(flatten)]
        code: CodeArg,
        /// Only search codewords with c_0 = 1 (exact for codes with a transitive automorphism group).
        #[arg(long)]
        fix_first_bit: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        decoder: DecoderFlags,
    },
}

#[derive(Args, Debug)]
struct CodeArg {
    /// Path to an alist file, or `builtin:NAME` (hamming7, hamming15, tanner155, bch127).
    #[arg(long)]
    code: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Metric {
    L1,
    Euclidean,
}

/// Overrides of the decoder parameters; unset flags keep the mode's defaults.
#[derive(Args, Debug, Default)]
struct DecoderFlags {
    /// Best-bound selection period.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Best-bound margin.
    #[arg(long)]
    delta: Option<f64>,
    /// Cut count above which inactive cuts are purged.
    #[arg(long = "T")]
    t: Option<usize>,
    /// Redundant-check rounds per node.
    #[arg(long = "R")]
    r: Option<usize>,
    /// Redundant-check rounds on best-bound nodes.
    #[arg(long = "Rbb")]
    rbb: Option<usize>,
    /// Cut cutoff.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum)]
    cutoff_metric: Option<Metric>,
    /// Re-encoding order.
    #[arg(long)]
    order: Option<usize>,
    /// Sum-product iterations.
    #[arg(long)]
    sp_iters: Option<usize>,
}

impl DecoderFlags {
    fn apply(&self, mut p: BnbParams) -> BnbParams {
        if let Some(v) = self.m {
            p.best_bound_period = v;
        }
        if let Some(v) = self.delta {
            p.best_bound_margin = v;
        }
        if let Some(v) = self.t {
            p.zs.purge_threshold = v;
        }
        if let Some(v) = self.r {
            p.zs.max_redundant_rounds = v;
        }
        if let Some(v) = self.rbb {
            p.zs.max_redundant_rounds_best_bound = v;
        }
        if let Some(v) = self.gamma {
            p.zs.cutoff = v;
        }
        if let Some(v) = self.cutoff_metric {
            p.zs.cutoff_metric = match v {
                Metric::L1 => CutoffMetric::L1,
                Metric::Euclidean => CutoffMetric::Euclidean,
            };
        }
        if let Some(v) = self.order {
            p.sp.reencode_order = v;
        }
        if let Some(v) = self.sp_iters {
            p.sp.max_iterations = v;
        }
        p
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::Lp(e) => CliError::Numerical(e.to_string()),
            DecodeError::InvalidParams(m) => CliError::Usage(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn load_code(arg: &str) -> Result<LinearCode, CliError> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin::by_name(name)
            .map_err(|e| CliError::Input(format!("{e}; known builtins: {}", builtin::NAMES.join(", "))));
    }
    alist::read_alist(Path::new(arg)).map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

fn read_llr(path: &Path, n: usize) -> Result<LlrVector, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let values = text
        .split_whitespace()
        .enumerate()
        .map(|(i, tok)| {
            tok.parse::<f64>()
                .map_err(|_| CliError::Input(format!("{}: value {} ({tok:?}) is not a number", path.display(), i + 1)))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() != n {
        return Err(CliError::Input(format!(
            "{}: expected {n} LLR values for this code, found {}",
            path.display(),
            values.len()
        )));
    }
    LlrVector::new(values).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn seed_override(flag: u64) -> Result<u64, CliError> {
    match std::env::var("MLD_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("MLD_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn bits(c: &[u8]) -> String {
    c.iter().map(|b| char::from(b'0' + b)).collect()
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), CliError> {
    fs::write(path, data).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decode { code, llr, json, decoder } => {
            let code = load_code(&code.code)?;
            let params = decoder.apply(BnbParams::default());
            params.validate(&code)?;
            let llr = read_llr(&llr, code.n())?;
            let out = ml_decode(&code, &llr, &params, None)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&out).expect("outcome serializes"));
            } else {
                println!("codeword: {}", bits(&out.codeword));
                println!("objective: {}", out.objective);
                println!("nodes: {}", out.nodes_processed);
                println!("lp_solves: {}", out.lp_solves);
                println!("certified: {}", out.optimality_certified);
                println!("time_s: {:.6}", out.wall_time.as_secs_f64());
            }
        }
        Command::Simulate { code, snr, errors, max_frames, seed, all_zero, workers, out, json_out, decoder } => {
            let code = load_code(&code.code)?;
            let cfg = SimConfig {
                snr_db: snr,
                target_errors: errors,
                max_frames,
                seed: seed_override(seed)?,
                all_zero,
                params: decoder.apply(BnbParams::default()),
                workers,
            };
            let results = sim::simulate_with_progress(&code, &cfg, |r| {
                eprintln!(
                    "snr {} dB: {} errors / {} frames, FER {:.3e}, N_avg {:.3}, T_avg {:.4} s",
                    r.snr_db, r.errors, r.frames, r.fer, r.n_avg, r.t_avg_s
                );
                if r.numerical_failures > 0 {
                    eprintln!("  {} frames hit numerical failures (counted as errors)", r.numerical_failures);
                }
            })?;
            let mut csv = Vec::new();
            sim::write_csv(&results, &mut csv).expect("writing to memory");
            match out {
                Some(path) => write_file(&path, &csv)?,
                None => print!("{}", String::from_utf8(csv).expect("csv is utf-8")),
            }
            if let Some(path) = json_out {
                let report =
                    SimReport { code: code.name().to_string(), n: code.n(), k: code.k(), seed: cfg.seed, all_zero, points: results };
                let mut buf = Vec::new();
                sim::write_json(&report, &mut buf).expect("writing to memory");
                write_file(&path, &buf)?;
            }
        }
        Command::Mindist { code, fix_first_bit, json, decoder } => {
            let code = load_code(&code.code)?;
            let params = decoder.apply(BnbParams::min_distance_defaults());
            let report = sim::run_mindist(&code, &params, fix_first_bit)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("code: {} (n={}, k={})", report.code, report.n, report.k);
                println!("dmin: {}", report.dmin);
                println!("witness: {}", bits(&report.witness));
                println!("witness_checked: {}", report.witness_checked);
                println!("nodes: {}", report.nodes_processed);
                println!("time_s: {:.3}", report.wall_time_s);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
