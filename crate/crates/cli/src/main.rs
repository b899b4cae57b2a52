use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use inbl_core::analysis::{
    amplitude_range_experiment, identification_benchmark, identification_experiment, not_gate_demo, resolution_report,
    zero_probability_experiment, BenchConfig, ExperimentReport, RangeMode,
};
use inbl_core::Lambda;

#[derive(Parser, Debug)]
#[command(name = "inbl", version, about = "Noise-based logic experiments over random telegraph waves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Probability that the unit-amplitude uniform superposition reads non-zero.
    ZeroProb {
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Min/max magnitude of the uniform superposition.
    Range {
        #[arg(long)]
        bits: usize,
        /// Exact "p/q".
        #[arg(long)]
        lambda: Lambda,
        /// Enumerate every sign pattern (N <= 6) instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Amplitude bits needed to represent the uniform superposition.
    Resolution {
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        lambda: Lambda,
    },
    /// Time-shifted identification Monte Carlo, optionally with the baseline scan.
    Identify {
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        baseline: bool,
    },
    /// Scaling benchmark of both identification methods.
    Bench {
        /// Comma-separated noise-bit counts.
        #[arg(long, value_delimiter = ',', required = true)]
        bits: Vec<usize>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Include wall-clock columns (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// NOT at one bit of the uniform superposition, symbolic and waveform.
    NotDemo {
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        lambda: Lambda,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 1000)]
        periods: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cmd: Command) -> inbl_core::Result<ExperimentReport> {
    match cmd {
        Command::ZeroProb { bits, trials, seed } => zero_probability_experiment(bits, trials, seed),
        Command::Range { bits, lambda, exhaustive, trials, seed } => {
            let mode = if exhaustive { RangeMode::Exhaustive } else { RangeMode::MonteCarlo { trials, seed } };
            amplitude_range_experiment(bits, &lambda, mode)
        }
        Command::Resolution { bits, lambda } => resolution_report(bits, &lambda),
        Command::Identify { bits, epsilon, trials, seed, baseline } => {
            identification_experiment(bits, epsilon, trials, seed, baseline)
        }
        Command::Bench { bits, epsilon, trials, seed, timing } => {
            identification_benchmark(&BenchConfig { bits, epsilon, trials, seed, timing })
        }
        Command::NotDemo { bits, lambda, target, periods, seed } => not_gate_demo(bits, &lambda, target, periods, seed),
    }
}

fn render(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let body = render(&report, cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    eprint!("{}", report.summary());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
