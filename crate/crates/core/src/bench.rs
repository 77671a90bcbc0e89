//! Throughput measurement over worker counts and input sizes.
//!
//! Each configuration is measured with a few untimed warmup runs followed by
//! `repeats` timed runs of [`run_partitioned`]. Throughput is the number of
//! matched occurrences divided by the mean total run time. Files are loaded
//! before any timing starts.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::Pattern;
use crate::corpus::{generate_corpus, CorpusSpec};
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::io::{load_input, load_patterns};
use crate::partition::run_partitioned;

pub const CSV_HEADER: &str =
    "workers,input_bytes,dictionary_size,matches,avg_build_s,avg_scan_s,avg_total_s,stddev_total_s,throughput";

/// Significant digits written for every floating-point CSV column.
const CSV_SIGNIFICANT_DIGITS: usize = 12;

/// Matches per second.
pub fn throughput(matches: u64, avg_total_s: f64) -> Result<f64> {
    if avg_total_s.is_nan() || avg_total_s <= 0.0 {
        return Err(Error::ZeroTime(avg_total_s));
    }
    Ok(matches as f64 / avg_total_s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchParams {
    pub worker_counts: Vec<usize>,
    pub repeats: usize,
    pub warmup: usize,
    /// Seeds the order in which worker counts are measured.
    pub seed: u64,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams {
            worker_counts: vec![1],
            repeats: 5,
            warmup: 1,
            seed: 0,
        }
    }
}

impl BenchParams {
    pub fn validate(&self) -> Result<()> {
        if self.worker_counts.is_empty() {
            return Err(Error::InvalidConfig("no worker counts given".into()));
        }
        if let Some(&0) = self.worker_counts.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidWorkerCount(0));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub pattern_path: PathBuf,
    pub input_path: PathBuf,
    pub params: BenchParams,
}

/// Measured averages for one worker count and input size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub workers: usize,
    pub input_bytes: usize,
    pub dictionary_size: usize,
    pub matches: u64,
    pub avg_build_s: f64,
    pub avg_scan_s: f64,
    pub avg_total_s: f64,
    pub stddev_total_s: f64,
    pub throughput: f64,
}

/// Worker-count sweeps mirroring the optimum thread counts of four reference
/// machines: a single-core Pentium 4, a dual-core T4500, a 2-core/4-thread
/// Core i3 370M and an 8-core/16-thread Xeon X7560.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    P1Pentium4,
    P2T4500,
    P3CoreI3,
    P4Xeon,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::P1Pentium4,
        Preset::P2T4500,
        Preset::P3CoreI3,
        Preset::P4Xeon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::P1Pentium4 => "p1-pentium4",
            Preset::P2T4500 => "p2-t4500",
            Preset::P3CoreI3 => "p3-i3",
            Preset::P4Xeon => "p4-xeon",
        }
    }

    pub fn optimum_threads(self) -> usize {
        match self {
            Preset::P1Pentium4 => 1,
            Preset::P2T4500 => 2,
            Preset::P3CoreI3 => 4,
            Preset::P4Xeon => 16,
        }
    }

    /// Powers of two from 1 up to the optimum thread count.
    pub fn worker_counts(self) -> Vec<usize> {
        let top = self.optimum_threads();
        std::iter::successors(Some(1usize), |n| Some(n * 2))
            .take_while(|&n| n <= top)
            .collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == lower || p.name().split('-').next() == Some(lower.as_str()))
            .ok_or_else(|| {
                let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                format!(
                    "unknown preset `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Loads the configured files, then measures every worker count.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.params.validate()?;
    let dictionary = load_patterns(&config.pattern_path)?;
    let input = load_input(&config.input_path)?;
    benchmark(&dictionary, &input, &config.params)
}

/// Measures every worker count against an in-memory dictionary and input.
/// Rows come back ordered by worker count.
pub fn benchmark(
    dictionary: &Dictionary,
    input: &[u8],
    params: &BenchParams,
) -> Result<Vec<BenchRow>> {
    params.validate()?;
    let mut order = params.worker_counts.clone();
    order.sort_unstable();
    order.dedup();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(params.seed));

    let mut rows = order
        .into_iter()
        .map(|workers| measure(dictionary.patterns(), input, workers, params))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.workers);
    Ok(rows)
}

fn measure(
    patterns: &[Pattern],
    input: &[u8],
    workers: usize,
    params: &BenchParams,
) -> Result<BenchRow> {
    for _ in 0..params.warmup {
        run_partitioned(patterns, input, workers)?;
    }
    let mut build = Vec::with_capacity(params.repeats);
    let mut scan = Vec::with_capacity(params.repeats);
    let mut total = Vec::with_capacity(params.repeats);
    let mut matches = None;
    for _ in 0..params.repeats {
        let run = run_partitioned(patterns, input, workers)?;
        let count = run.matches.len() as u64;
        assert_eq!(
            *matches.get_or_insert(count),
            count,
            "match count changed between runs"
        );
        build.push(run.critical_build_time().as_secs_f64());
        scan.push(run.critical_scan_time().as_secs_f64());
        total.push(run.total_wall_time.as_secs_f64());
    }
    let matches = matches.unwrap_or(0);
    let avg_total_s = mean(&total);
    Ok(BenchRow {
        workers,
        input_bytes: input.len(),
        dictionary_size: patterns.len(),
        matches,
        avg_build_s: mean(&build),
        avg_scan_s: mean(&scan),
        avg_total_s,
        stddev_total_s: sample_stddev(&total),
        throughput: throughput(matches, avg_total_s)?,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

fn check_sizes(sizes: &[usize], available: usize) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::InvalidConfig("no input sizes given".into()));
    }
    if sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "input sizes must be positive and strictly increasing".into(),
        ));
    }
    let largest = sizes[sizes.len() - 1];
    if largest > available {
        return Err(Error::InvalidConfig(format!(
            "input size {largest} exceeds the {available} bytes available"
        )));
    }
    Ok(())
}

/// Benchmarks successive prefixes of `input`, so every larger input extends
/// the smaller ones.
pub fn sweep_prefixes(
    dictionary: &Dictionary,
    input: &[u8],
    sizes: &[usize],
    params: &BenchParams,
) -> Result<Vec<BenchRow>> {
    check_sizes(sizes, input.len())?;
    params.validate()?;
    let mut rows = Vec::with_capacity(sizes.len() * params.worker_counts.len());
    for &size in sizes {
        rows.extend(benchmark(dictionary, &input[..size], params)?);
    }
    Ok(rows)
}

/// Generates one corpus at the largest size with a fixed dictionary and
/// benchmarks its prefixes at each requested size.
pub fn sweep_file_sizes(
    params: &BenchParams,
    sizes: &[usize],
    corpus: &CorpusSpec,
) -> Result<Vec<BenchRow>> {
    check_sizes(sizes, usize::MAX)?;
    let spec = CorpusSpec {
        input_bytes: sizes[sizes.len() - 1],
        ..corpus.clone()
    };
    let corpus = generate_corpus(&spec)?;
    sweep_prefixes(&corpus.dictionary, &corpus.input, sizes, params)
}

/// `1 MiB, 2 MiB, .. 5 MiB`.
pub fn desk_scale_sizes() -> Vec<usize> {
    (1..=5).map(|mb| mb << 20).collect()
}

fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.prec$}", prec = CSV_SIGNIFICANT_DIGITS - 1);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (CSV_SIGNIFICANT_DIGITS as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_csv_to<W: Write>(rows: &[BenchRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.workers,
            r.input_bytes,
            r.dictionary_size,
            r.matches,
            format_float(r.avg_build_s),
            format_float(r.avg_scan_s),
            format_float(r.avg_total_s),
            format_float(r.stddev_total_s),
            format_float(r.throughput),
        )?;
    }
    out.flush()
}

pub fn write_csv(rows: &[BenchRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(rows, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
