use std::fs;

use ac_partition::bench::write_csv;
use ac_partition::{
    generate_corpus, run_benchmark, BenchConfig, BenchParams, CorpusSpec, Dictionary,
};

#[test]
fn run_benchmark_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let patterns = dir.path().join("patterns.txt");
    let input = dir.path().join("shers.txt");
    fs::write(&patterns, "HIS\nSHE\nHERS\n").unwrap();
    fs::write(&input, "SHERS").unwrap();
    let config = BenchConfig {
        pattern_path: patterns,
        input_path: input,
        params: BenchParams {
            worker_counts: vec![1, 2],
            repeats: 3,
            warmup: 1,
            seed: 1,
        },
    };
    let rows = run_benchmark(&config).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.matches == 2));

    let missing = BenchConfig {
        input_path: dir.path().join("nope"),
        ..config
    };
    assert!(run_benchmark(&missing).is_err());
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generate_corpus(&CorpusSpec {
        input_bytes: 20_000,
        pattern_count: 400,
        min_len: 3,
        max_len: 7,
        ..CorpusSpec::default()
    })
    .unwrap();
    let params = BenchParams {
        worker_counts: vec![1, 2, 3],
        repeats: 2,
        ..BenchParams::default()
    };
    let rows = ac_partition::bench::benchmark(&corpus.dictionary, &corpus.input, &params).unwrap();
    let path = dir.path().join("out.csv");
    write_csv(&rows, &path).unwrap();

    let mut reader = csv::Reader::from_path(&path).unwrap();
    let back: Vec<ac_partition::BenchRow> = reader.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(back.len(), rows.len());
    for (a, b) in rows.iter().zip(&back) {
        assert_eq!(
            (a.workers, a.input_bytes, a.dictionary_size, a.matches),
            (b.workers, b.input_bytes, b.dictionary_size, b.matches)
        );
        for (x, y) in [
            (a.avg_build_s, b.avg_build_s),
            (a.avg_scan_s, b.avg_scan_s),
            (a.avg_total_s, b.avg_total_s),
            (a.stddev_total_s, b.stddev_total_s),
            (a.throughput, b.throughput),
        ] {
            assert!((x - y).abs() <= 1e-11 * x.abs().max(1e-300), "{x} vs {y}");
        }
    }
}

/// Hardware-dependent: with a dictionary far larger than the input, building
/// the machine costs more than scanning with it.
#[test]
fn build_dominates_for_large_dictionaries() {
    let corpus = generate_corpus(&CorpusSpec {
        input_bytes: 64 << 10,
        pattern_count: 50_000,
        min_len: 8,
        max_len: 16,
        plant_fraction: 0.0,
        seed: 50,
        ..CorpusSpec::default()
    })
    .unwrap();
    let dict: &Dictionary = &corpus.dictionary;
    let params = BenchParams {
        worker_counts: vec![1],
        repeats: 3,
        ..BenchParams::default()
    };
    let rows = ac_partition::bench::benchmark(dict, &corpus.input, &params).unwrap();
    assert!(
        rows[0].avg_build_s > rows[0].avg_scan_s,
        "build {}s vs scan {}s",
        rows[0].avg_build_s,
        rows[0].avg_scan_s
    );
}
