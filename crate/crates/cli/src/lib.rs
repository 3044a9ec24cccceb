//! Library side of the `wrswr` command: sample rows of delimited text in
//! proportion to a weight column.

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use wrswr::{
    merge_reduce, two_pass_sample, Algorithm, ParallelSampler, RandomSource, Sampler,
    SamplerConfig, SeedPlan, ZeroWeights,
};

mod rows;

pub use rows::{Input, RowFormat, Rows, WeightColumn};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{input}:{line}: {message}")]
    Malformed {
        input: String,
        line: usize,
        message: String,
    },
    #[error("no rows with positive weight in {0}")]
    Empty(String),
    #[error(transparent)]
    Sampling(#[from] wrswr::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Malformed { .. } => 2,
            CliError::Empty(_) => 3,
            CliError::Sampling(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CliAlgorithm {
    Basic,
    Heap,
    #[default]
    Skip,
    ParallelSkip,
    TwoPass,
}

impl CliAlgorithm {
    pub const ALL: [CliAlgorithm; 5] = [
        CliAlgorithm::Basic,
        CliAlgorithm::Heap,
        CliAlgorithm::Skip,
        CliAlgorithm::ParallelSkip,
        CliAlgorithm::TwoPass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CliAlgorithm::Basic => "basic",
            CliAlgorithm::Heap => "heap",
            CliAlgorithm::Skip => "skip",
            CliAlgorithm::ParallelSkip => "parallel-skip",
            CliAlgorithm::TwoPass => "two-pass",
        }
    }
}

impl fmt::Display for CliAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CliAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CliAlgorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Everything except where the rows come from and go to.
#[derive(Debug, Clone)]
pub struct SampleOptions {
    pub algorithm: CliAlgorithm,
    pub sample_size: usize,
    pub seed: u64,
    pub format: RowFormat,
}

/// A finished sample and the stream totals it was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub rows: Vec<String>,
    pub total_weight: f64,
    pub items: u64,
}

fn names(inputs: &[Input]) -> String {
    inputs
        .iter()
        .map(|i| i.name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn empty_as_cli(inputs: &str) -> impl Fn(wrswr::Error) -> CliError + '_ {
    move |e| match e {
        wrswr::Error::NoItems => CliError::Empty(inputs.to_string()),
        wrswr::Error::EmptyStream { .. } => CliError::Empty(inputs.to_string()),
        e => CliError::Sampling(e),
    }
}

/// Samples rows from `inputs`.
///
/// `basic`, `heap` and `skip` read the inputs one after another as a single
/// stream. `parallel-skip` samples each input on its own and merges the
/// results; `two-pass` loads every input first.
pub fn sample_inputs(inputs: Vec<Input>, options: &SampleOptions) -> Result<Sampled, CliError> {
    let config = SamplerConfig {
        zero_weights: if options.format.lenient_zero {
            ZeroWeights::Skip
        } else {
            ZeroWeights::Reject
        },
        ..SamplerConfig::default()
    };
    let m = options.sample_size;
    let described = names(&inputs);
    let empty = empty_as_cli(&described);

    let algorithm = match options.algorithm {
        CliAlgorithm::Basic => Algorithm::Basic,
        CliAlgorithm::Heap => Algorithm::Heap,
        CliAlgorithm::Skip => Algorithm::Skip,
        CliAlgorithm::ParallelSkip => {
            let streams: Vec<Rows> = inputs
                .into_iter()
                .map(|input| Rows::new(input, &options.format))
                .collect();
            let sampler =
                ParallelSampler::new(m, SeedPlan::Master(options.seed))?.with_config(config);
            let summaries = sampler.summarize(streams).map_err(|e| match e {
                CliError::Sampling(e) => empty(e),
                e => e,
            })?;
            let mut rng = RandomSource::new(SeedPlan::Master(options.seed).reduce_seed());
            let reservoir = merge_reduce(&summaries, m, &mut rng)?;
            return Ok(Sampled {
                rows: reservoir.into_vec(),
                total_weight: summaries.iter().map(|s| s.total_weight).sum(),
                items: summaries.iter().map(|s| s.item_count).sum(),
            });
        }
        CliAlgorithm::TwoPass => {
            let mut slices = Vec::with_capacity(inputs.len());
            for input in inputs {
                let rows: Vec<(String, f64)> =
                    Rows::new(input, &options.format).collect::<Result<_, _>>()?;
                slices.push(rows);
            }
            let kept = |s: &Vec<(String, f64)>| s.iter().filter(|(_, w)| *w > 0.0).count();
            let items: usize = slices.iter().map(kept).sum();
            if items == 0 {
                return Err(CliError::Empty(described.clone()));
            }
            // Zero-weight rows (lenient mode) can never be drawn.
            for slice in &mut slices {
                slice.retain(|(_, w)| *w > 0.0);
            }
            slices.retain(|s| !s.is_empty());
            let mut rng = RandomSource::new(options.seed);
            let reservoir = two_pass_sample(&slices, m, &mut rng)?;
            let total_weight = slices.iter().flatten().map(|(_, w)| w).sum();
            return Ok(Sampled {
                rows: reservoir.into_vec(),
                total_weight,
                items: items as u64,
            });
        }
    };

    let mut sampler = algorithm.sampler(m, RandomSource::new(options.seed), config)?;
    for input in inputs {
        for row in Rows::new(input, &options.format) {
            let (line, weight) = row?;
            sampler.observe(line, weight)?;
        }
    }
    let total = sampler.total();
    let reservoir = sampler.finish().map_err(&empty)?;
    Ok(Sampled {
        rows: reservoir.into_vec(),
        total_weight: total.value(),
        items: total.count(),
    })
}

/// A full `sample` invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub options: SampleOptions,
    /// File paths; `-` is standard input.
    pub inputs: Vec<PathBuf>,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    pub verbose: bool,
}

fn open(path: &PathBuf) -> Result<Input, CliError> {
    if path.as_os_str() == "-" {
        return Ok(Input::new("<stdin>", BufReader::new(io::stdin())));
    }
    let name = path.display().to_string();
    let file = File::open(path).map_err(|source| CliError::Io {
        path: name.clone(),
        source,
    })?;
    Ok(Input::new(name, BufReader::new(file)))
}

/// Writes one sampled row per line, then the summary comment if asked.
pub fn write_sample<W: Write>(
    out: &mut W,
    sampled: &Sampled,
    options: &SampleOptions,
    verbose: bool,
) -> io::Result<()> {
    for row in &sampled.rows {
        out.write_all(row.as_bytes())?;
        out.write_all(b"\n")?;
    }
    if verbose {
        writeln!(
            out,
            "# total_weight={} items={} algo={} seed={}",
            sampled.total_weight, sampled.items, options.algorithm, options.seed
        )?;
    }
    out.flush()
}

/// Opens the inputs, samples, and writes the result.
pub fn run(config: &CliConfig) -> Result<(), CliError> {
    let inputs = if config.inputs.is_empty() {
        vec![open(&PathBuf::from("-"))?]
    } else {
        config.inputs.iter().map(open).collect::<Result<_, _>>()?
    };
    let sampled = sample_inputs(inputs, &config.options)?;

    let (name, sink): (String, Box<dyn Write>) = match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            (path.display().to_string(), Box::new(file))
        }
        None => ("<stdout>".to_string(), Box::new(io::stdout().lock())),
    };
    let mut out = BufWriter::new(sink);
    write_sample(&mut out, &sampled, &config.options, config.verbose)
        .map_err(|source| CliError::Io { path: name, source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options(algorithm: CliAlgorithm, m: usize, seed: u64) -> SampleOptions {
        SampleOptions {
            algorithm,
            sample_size: m,
            seed,
            format: RowFormat::default(),
        }
    }

    fn one(text: &'static str) -> Vec<Input> {
        vec![Input::new("t", text.as_bytes())]
    }

    #[test]
    fn single_row_is_repeated() {
        for algorithm in CliAlgorithm::ALL {
            let got = sample_inputs(one("only\t2\n"), &options(algorithm, 3, 1)).unwrap();
            assert_eq!(got.rows, vec!["only\t2"; 3], "{algorithm}");
            assert_eq!((got.total_weight, got.items), (2.0, 1));
        }
    }

    #[test]
    fn empty_input_is_exit_three() {
        for algorithm in CliAlgorithm::ALL {
            let err = sample_inputs(one("\n"), &options(algorithm, 3, 1)).unwrap_err();
            assert_eq!(err.exit_code(), 3, "{algorithm}: {err}");
        }
    }

    #[test]
    fn malformed_row_is_exit_two() {
        for algorithm in CliAlgorithm::ALL {
            let err = sample_inputs(one("a\t1\nb\n"), &options(algorithm, 3, 1)).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{algorithm}");
            assert!(err.to_string().contains(":2:"), "{err}");
        }
    }

    #[test]
    fn lenient_zero_rows_are_never_drawn() {
        for algorithm in CliAlgorithm::ALL {
            let mut opts = options(algorithm, 20, 5);
            opts.format.lenient_zero = true;
            let got = sample_inputs(one("z\t0\na\t1\nz\t0\n"), &opts).unwrap();
            assert_eq!(got.rows, vec!["a\t1"; 20], "{algorithm}");
            assert_eq!(got.items, 1);
            let err = sample_inputs(one("z\t0\n"), &opts).unwrap_err();
            assert_eq!(err.exit_code(), 3, "{algorithm}");
        }
    }

    #[test]
    fn verbose_summary_line() {
        let opts = options(CliAlgorithm::Skip, 2, 42);
        let sampled = sample_inputs(one("a\t1\nb\t3\n"), &opts).unwrap();
        let mut out = Vec::new();
        write_sample(&mut out, &sampled, &opts, true).unwrap();
        let text = String::from_utf8(out).unwrap();
        let last = text.lines().last().unwrap();
        assert_eq!(last, "# total_weight=4 items=2 algo=skip seed=42");
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in CliAlgorithm::ALL {
            assert_eq!(a.name().parse::<CliAlgorithm>(), Ok(a));
        }
        assert!("fast".parse::<CliAlgorithm>().is_err());
    }
}
