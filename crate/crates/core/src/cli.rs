//! Command-line front end: `match`, `bench` and `gen`.
//!
//! Exit status is 0 on success, 1 when matching or benchmarking fails at run
//! time (unreadable files, empty dictionaries) and 2 on bad arguments.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{
    benchmark, sweep_file_sizes, sweep_prefixes, write_csv, write_csv_to, BenchParams, Preset,
};
use crate::corpus::{generate_corpus, CorpusSpec};
use crate::error::{Error, Result};
use crate::io::{load_input, load_patterns};
use crate::partition::run_partitioned;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "acmatch",
    version,
    about = "Multi-pattern matching with dictionary-partitioned workers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report every occurrence of every pattern in the input.
    Match(MatchArgs),
    /// Measure throughput across worker counts (and optionally input sizes).
    Bench(BenchArgs),
    /// Write a synthetic input and pattern file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Pattern file, one keyword per line.
    #[arg(long)]
    pub patterns: PathBuf,
    /// Input file, read as raw bytes.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = parse_workers)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    pub output: OutputFormat,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("sweep").args(["workers", "preset"]).required(true)))]
pub struct BenchArgs {
    #[arg(long, requires = "input", required_unless_present = "sizes")]
    pub patterns: Option<PathBuf>,
    #[arg(long, requires = "patterns", required_unless_present = "sizes")]
    pub input: Option<PathBuf>,
    /// Comma-separated worker counts.
    #[arg(long, value_delimiter = ',', value_parser = parse_workers)]
    pub workers: Vec<usize>,
    /// Worker counts of a reference machine.
    #[arg(long, value_parser = clap::builder::ValueParser::new(parse_preset))]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 5, value_parser = parse_workers)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1)]
    pub warmup: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Comma-separated input sizes in bytes (K/M/G suffixes allowed). Uses
    /// prefixes of --input, or a generated corpus when no files are given.
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    pub sizes: Option<Vec<usize>>,
    #[command(flatten)]
    pub corpus: CorpusArgs,
}

/// Corpus shape for generated sweeps.
#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Number of generated patterns.
    #[arg(long, default_value_t = 10_000)]
    pub dict_size: usize,
    #[arg(long, default_value_t = 8)]
    pub min_len: usize,
    #[arg(long, default_value_t = 16)]
    pub max_len: usize,
    /// Fraction of patterns planted into the input.
    #[arg(long, default_value_t = 0.5)]
    pub plant: f64,
    #[arg(long, default_value = "ACGT")]
    pub alphabet: String,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Input size in bytes (K/M/G suffixes allowed).
    #[arg(long, value_parser = parse_size)]
    pub size: usize,
    /// Number of patterns.
    #[arg(long)]
    pub patterns: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub min_len: usize,
    #[arg(long, default_value_t = 16)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0.5)]
    pub plant: f64,
    #[arg(long, default_value = "ACGT")]
    pub alphabet: String,
    #[arg(long, default_value = "input.txt")]
    pub out_input: PathBuf,
    #[arg(long, default_value = "patterns.txt")]
    pub out_patterns: PathBuf,
}

fn parse_workers(s: &str) -> std::result::Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    s.parse()
}

fn parse_size(s: &str) -> std::result::Result<usize, String> {
    let s = s.trim();
    let (digits, unit) = match s.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        Some((i, _)) => s.split_at(i),
        None => (s, ""),
    };
    let shift = match unit.to_ascii_uppercase().as_str() {
        "" | "B" => 0,
        "K" | "KB" | "KIB" => 10,
        "M" | "MB" | "MIB" => 20,
        "G" | "GB" | "GIB" => 30,
        _ => return Err(format!("unknown size unit `{unit}`")),
    };
    let n: usize = digits
        .parse()
        .map_err(|e| format!("invalid size `{s}`: {e}"))?;
    n.checked_mul(1usize << shift)
        .ok_or_else(|| format!("size `{s}` overflows"))
}

#[derive(Serialize)]
struct JsonMatch<'a> {
    end: usize,
    pattern_id: u32,
    pattern: std::borrow::Cow<'a, str>,
}

fn cmd_match(args: &MatchArgs, out: &mut dyn Write) -> Result<()> {
    let dictionary = load_patterns(&args.patterns)?;
    let input = load_input(&args.input)?;
    let run = run_partitioned(dictionary.patterns(), &input, args.workers)?;
    let stdout = |e| Error::io("<stdout>", e);
    match args.output {
        OutputFormat::Tsv => {
            for m in &run.matches {
                let pattern = &dictionary
                    .get(m.pattern_id)
                    .expect("match id from dictionary")
                    .bytes;
                write!(out, "{}\t{}\t", m.end, m.pattern_id).map_err(stdout)?;
                out.write_all(pattern).map_err(stdout)?;
                out.write_all(b"\n").map_err(stdout)?;
            }
        }
        OutputFormat::Json => {
            let records: Vec<JsonMatch> = run
                .matches
                .iter()
                .map(|m| JsonMatch {
                    end: m.end,
                    pattern_id: m.pattern_id.0,
                    pattern: String::from_utf8_lossy(
                        &dictionary
                            .get(m.pattern_id)
                            .expect("match id from dictionary")
                            .bytes,
                    ),
                })
                .collect();
            serde_json::to_writer(&mut *out, &records).map_err(|e| stdout(e.into()))?;
            out.write_all(b"\n").map_err(stdout)?;
        }
    }
    out.flush().map_err(stdout)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let mut worker_counts = args.workers.clone();
    if let Some(preset) = args.preset {
        worker_counts.extend(preset.worker_counts());
    }
    worker_counts.sort_unstable();
    worker_counts.dedup();
    let params = BenchParams {
        worker_counts,
        repeats: args.repeats,
        warmup: args.warmup,
        seed: args.seed,
    };
    params.validate()?;

    let rows = match (&args.patterns, &args.input, &args.sizes) {
        (Some(patterns), Some(input), sizes) => {
            let dictionary = load_patterns(patterns)?;
            let input = load_input(input)?;
            match sizes {
                Some(sizes) => sweep_prefixes(&dictionary, &input, sizes, &params)?,
                None => benchmark(&dictionary, &input, &params)?,
            }
        }
        (None, None, Some(sizes)) => {
            let c = &args.corpus;
            let spec = CorpusSpec {
                alphabet: c.alphabet.as_bytes().to_vec(),
                input_bytes: sizes.last().copied().unwrap_or(0),
                pattern_count: c.dict_size,
                min_len: c.min_len,
                max_len: c.max_len,
                plant_fraction: c.plant,
                seed: args.seed,
            };
            sweep_file_sizes(&params, sizes, &spec)?
        }
        _ => {
            return Err(Error::InvalidConfig(
                "give both --patterns and --input, or --sizes".into(),
            ))
        }
    };

    match &args.csv {
        Some(path) => write_csv(&rows, path),
        None => write_csv_to(&rows, out).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn write_file(path: &Path, data: &[u8]) -> Result<()> {
    fs::write(path, data).map_err(|e| Error::io(path, e))
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let spec = CorpusSpec {
        alphabet: args.alphabet.as_bytes().to_vec(),
        input_bytes: args.size,
        pattern_count: args.patterns,
        min_len: args.min_len,
        max_len: args.max_len,
        plant_fraction: args.plant,
        seed: args.seed,
    };
    let corpus = generate_corpus(&spec)?;
    write_file(&args.out_input, &corpus.input)?;
    write_file(&args.out_patterns, &corpus.dictionary.to_lines())?;
    writeln!(
        out,
        "input: {} bytes -> {}\npatterns: {} -> {}\nplanted: {}",
        corpus.input.len(),
        args.out_input.display(),
        corpus.dictionary.len(),
        args.out_patterns.display(),
        corpus.planted.len(),
    )
    .map_err(|e| Error::io("<stdout>", e))
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_) | Error::InvalidCorpus(_) | Error::InvalidWorkerCount(_) => {
            EXIT_USAGE
        }
        _ => EXIT_RUNTIME,
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Match(args) => cmd_match(args, out),
        Command::Bench(args) => cmd_bench(args, out),
        Command::Gen(args) => cmd_gen(args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
