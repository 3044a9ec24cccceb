use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wrswr_bench::{run_bench, write_csv, BenchAlgorithm, BenchScenario, WeightStructure};
use wrswr_cli::{run, CliAlgorithm, CliConfig, RowFormat, SampleOptions, WeightColumn};

/// Weighted random sampling with replacement over streams of rows.
#[derive(Debug, Parser)]
#[command(name = "wrswr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample rows of delimited text in proportion to a weight column.
    Sample(SampleArgs),
    /// Time the samplers and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// basic, heap, skip, parallel-skip or two-pass.
    #[arg(long = "algo", default_value = "skip")]
    algorithm: CliAlgorithm,
    /// Number of rows to draw.
    #[arg(short = 'm', long = "sample-size")]
    sample_size: usize,
    /// Seed; drawn from the OS when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// 1-based column index or header name. Defaults to the last column.
    #[arg(long = "weight-col")]
    weight_column: Option<WeightColumn>,
    #[arg(long, default_value_t = '\t')]
    delimiter: char,
    /// Drop zero-weight rows instead of rejecting them.
    #[arg(long)]
    lenient_zero: bool,
    /// Write here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Append `# total_weight=.. items=.. algo=.. seed=..`.
    #[arg(short, long)]
    verbose: bool,
    /// Input files; `-` is standard input.
    #[arg(default_value = "-")]
    inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Population size.
    #[arg(short, long, default_value_t = 1_000_000)]
    n: usize,
    /// Sample ratios m/n, comma separated. Ignored with --sample-sizes.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.001,0.01,0.05,0.1,0.2,0.5"
    )]
    ratios: Vec<f64>,
    /// Explicit sample sizes, comma separated.
    #[arg(short = 'm', long, value_delimiter = ',')]
    sample_sizes: Vec<usize>,
    /// constant, increasing or decreasing; comma separated.
    #[arg(long, value_delimiter = ',', default_value = "constant")]
    weights: Vec<WeightStructure>,
    /// basic, heap, skip, inverse-cdf, parallel-skip, two-pass; comma separated.
    #[arg(long, value_delimiter = ',', default_value = "heap,skip,inverse-cdf")]
    algorithms: Vec<BenchAlgorithm>,
    #[arg(short, long, default_value_t = 5)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn sample(args: SampleArgs) -> ExitCode {
    let config = CliConfig {
        options: SampleOptions {
            algorithm: args.algorithm,
            sample_size: args.sample_size,
            seed: args.seed.unwrap_or_else(rand::random),
            format: RowFormat {
                column: args.weight_column.unwrap_or(WeightColumn::Last),
                delimiter: args.delimiter,
                lenient_zero: args.lenient_zero,
            },
        },
        inputs: args.inputs,
        output: args.output,
        verbose: args.verbose,
    };
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wrswr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn bench(args: BenchArgs) -> Result<(), Box<dyn std::error::Error>> {
    let mut rows = Vec::new();
    for weights in args.weights {
        let mut scenario = BenchScenario::ratio_sweep(
            args.n,
            &args.ratios,
            weights,
            args.algorithms.clone(),
            args.repetitions,
            args.seed,
        );
        if !args.sample_sizes.is_empty() {
            scenario.sample_sizes = args.sample_sizes.clone();
        }
        rows.extend(run_bench(&scenario)?);
    }
    match args.output {
        Some(path) => write_csv(&rows, std::fs::File::create(path)?)?,
        None => {
            write_csv(&rows, io::stdout().lock())?;
            io::stdout().flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sample(args) => sample(args),
        Command::Bench(args) => match bench(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("wrswr bench: {e}");
                ExitCode::FAILURE
            }
        },
    }
}
