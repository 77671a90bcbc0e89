//! Dictionary-partitioned parallel matching.
//!
//! The dictionary is cut into contiguous chunks, one per worker. Every worker
//! builds its own machine from its chunk and scans the whole input; the
//! per-worker match lists are merged once all workers have finished.

use std::ops::Range;
use std::thread;
use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::automaton::{Automaton, MatchRecord, Pattern, PatternId};
use crate::error::{Error, Result};

/// Assignment of dictionary positions to workers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPlan {
    chunks: Vec<Range<usize>>,
}

impl PartitionPlan {
    pub fn worker_count(&self) -> usize {
        self.chunks.len()
    }

    /// Dictionary positions owned by each worker. Trailing chunks are empty
    /// when there are more workers than patterns.
    pub fn chunks(&self) -> &[Range<usize>] {
        &self.chunks
    }

    pub fn chunk_sizes(&self) -> Vec<usize> {
        self.chunks.iter().map(|c| c.len()).collect()
    }

    pub fn empty_chunks(&self) -> usize {
        self.chunks.iter().filter(|c| c.is_empty()).count()
    }

    /// Pattern ids of chunk `k`, in dictionary order.
    pub fn chunk_ids(&self, patterns: &[Pattern], k: usize) -> Vec<PatternId> {
        patterns[self.chunks[k].clone()]
            .iter()
            .map(|p| p.id)
            .collect()
    }
}

/// Splits `pattern_count` patterns into `workers` contiguous chunks. The first
/// `pattern_count % workers` chunks get one extra pattern.
pub fn split_patterns(pattern_count: usize, workers: usize) -> Result<PartitionPlan> {
    if workers == 0 {
        return Err(Error::InvalidWorkerCount(workers));
    }
    if pattern_count == 0 {
        return Err(Error::EmptyDictionary);
    }
    let base = pattern_count / workers;
    let extra = pattern_count % workers;
    let mut start = 0;
    let chunks = (0..workers)
        .map(|k| {
            let len = base + usize::from(k < extra);
            let chunk = start..start + len;
            start += len;
            chunk
        })
        .collect();
    Ok(PartitionPlan { chunks })
}

/// Outcome of one partitioned run. Per-worker timings are listed for the
/// non-empty chunks only, in chunk order.
#[derive(Clone, Debug)]
pub struct PartitionedRun {
    pub matches: Vec<MatchRecord>,
    pub per_worker_build_time: Vec<Duration>,
    pub per_worker_scan_time: Vec<Duration>,
    pub per_worker_matches: Vec<usize>,
    /// Partitioning, every build and scan, and the merge.
    pub total_wall_time: Duration,
    pub skipped_workers: usize,
}

impl PartitionedRun {
    /// Slowest worker's build time.
    pub fn critical_build_time(&self) -> Duration {
        self.per_worker_build_time
            .iter()
            .copied()
            .max()
            .unwrap_or_default()
    }

    /// Slowest worker's scan time.
    pub fn critical_scan_time(&self) -> Duration {
        self.per_worker_scan_time
            .iter()
            .copied()
            .max()
            .unwrap_or_default()
    }
}

struct WorkerOutput {
    matches: Vec<MatchRecord>,
    build: Duration,
    scan: Duration,
}

fn run_worker(chunk: &[Pattern], input: &[u8]) -> Result<WorkerOutput> {
    let started = Instant::now();
    let automaton = Automaton::build(chunk)?;
    let build = started.elapsed();
    let started = Instant::now();
    let matches = automaton.scan(input);
    let scan = started.elapsed();
    Ok(WorkerOutput {
        matches,
        build,
        scan,
    })
}

/// Matches `patterns` against `input` with `workers` dictionary chunks
/// processed on separate threads.
pub fn run_partitioned(
    patterns: &[Pattern],
    input: &[u8],
    workers: usize,
) -> Result<PartitionedRun> {
    let started = Instant::now();
    let plan = split_patterns(patterns.len(), workers)?;
    let chunks: Vec<&[Pattern]> = plan
        .chunks()
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| &patterns[c.clone()])
        .collect();

    let outputs: Vec<Result<WorkerOutput>> = thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|&chunk| scope.spawn(move || run_worker(chunk, input)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|panic| std::panic::resume_unwind(panic))
            })
            .collect()
    });

    let outputs = outputs.into_iter().collect::<Result<Vec<_>>>()?;
    let per_worker_build_time = outputs.iter().map(|o| o.build).collect();
    let per_worker_scan_time = outputs.iter().map(|o| o.scan).collect();
    let per_worker_matches = outputs.iter().map(|o| o.matches.len()).collect();
    let matches = merge_matches(outputs.into_iter().map(|o| o.matches).collect());

    Ok(PartitionedRun {
        matches,
        per_worker_build_time,
        per_worker_scan_time,
        per_worker_matches,
        total_wall_time: started.elapsed(),
        skipped_workers: plan.empty_chunks(),
    })
}

/// K-way merge of individually sorted match lists into global
/// `(end, pattern_id)` order.
pub fn merge_matches(lists: Vec<Vec<MatchRecord>>) -> Vec<MatchRecord> {
    match lists.len() {
        0 => Vec::new(),
        1 => lists.into_iter().next().unwrap(),
        _ => {
            let total = lists.iter().map(Vec::len).sum();
            let mut merged = Vec::with_capacity(total);
            merged.extend(lists.into_iter().kmerge());
            merged
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::Dictionary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn classic() -> Dictionary {
        Dictionary::from_keywords(["HIS", "SHE", "HERS"])
    }

    #[test]
    fn chunk_size_rule() {
        assert_eq!(
            split_patterns(10, 4).unwrap().chunk_sizes(),
            vec![3, 3, 2, 2]
        );
        assert_eq!(split_patterns(7, 1).unwrap().chunks().to_vec(), vec![0..7]);
        let plan = split_patterns(3, 5).unwrap();
        assert_eq!(plan.chunk_sizes(), vec![1, 1, 1, 0, 0]);
        assert_eq!(plan.empty_chunks(), 2);
    }

    #[test]
    fn classic_split_in_two() {
        let d = classic();
        let plan = split_patterns(d.len(), 2).unwrap();
        assert_eq!(
            plan.chunk_ids(d.patterns(), 0),
            vec![PatternId(0), PatternId(1)]
        );
        assert_eq!(plan.chunk_ids(d.patterns(), 1), vec![PatternId(2)]);
    }

    #[test]
    fn split_errors() {
        assert!(matches!(
            split_patterns(3, 0),
            Err(Error::InvalidWorkerCount(0))
        ));
        assert!(matches!(split_patterns(0, 2), Err(Error::EmptyDictionary)));
        assert!(matches!(
            run_partitioned(classic().patterns(), b"SHERS", 0),
            Err(Error::InvalidWorkerCount(0))
        ));
    }

    #[test]
    fn chunks_cover_dictionary_once() {
        for m in 1..40 {
            for n in 1..20 {
                let plan = split_patterns(m, n).unwrap();
                assert_eq!(plan.worker_count(), n);
                let flat: Vec<usize> = plan.chunks().iter().flat_map(|c| c.clone()).collect();
                assert_eq!(flat, (0..m).collect::<Vec<_>>());
                let sizes = plan.chunk_sizes();
                assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            }
        }
    }

    #[test]
    fn classic_any_worker_count() {
        let d = classic();
        let expected = vec![
            MatchRecord::new(PatternId(1), 2),
            MatchRecord::new(PatternId(2), 4),
        ];
        for n in 1..=4 {
            let run = run_partitioned(d.patterns(), b"SHERS", n).unwrap();
            assert_eq!(run.matches, expected, "n={n}");
            assert_eq!(run.per_worker_build_time.len(), n.min(3));
            assert_eq!(run.skipped_workers, n.saturating_sub(3));
            assert_eq!(run.per_worker_matches.iter().sum::<usize>(), 2);
        }
    }

    #[test]
    fn single_worker_is_sequential_scan() {
        let d = Dictionary::from_keywords(["AC", "CA", "ACA", "A"]);
        let input = b"ACACAGTACA";
        let run = run_partitioned(d.patterns(), input, 1).unwrap();
        assert_eq!(
            run.matches,
            Automaton::build(d.patterns()).unwrap().scan(input)
        );
    }

    #[test]
    fn errors_from_workers_fail_the_run() {
        let patterns = vec![
            Pattern::new(0, "A"),
            Pattern::new(1, "C"),
            Pattern::new(2, ""),
        ];
        assert!(matches!(
            run_partitioned(&patterns, b"AC", 3),
            Err(Error::EmptyPattern(PatternId(2)))
        ));
    }

    #[test]
    fn wall_time_covers_slowest_worker() {
        let d = Dictionary::from_keywords((0..2000).map(|i| format!("{i:08b}")));
        let input: Vec<u8> = (0..50_000)
            .map(|i| b"01"[(i * 7 % 3 == 0) as usize])
            .collect();
        let run = run_partitioned(d.patterns(), &input, 3).unwrap();
        let slowest = run
            .per_worker_build_time
            .iter()
            .zip(&run.per_worker_scan_time)
            .map(|(b, s)| *b + *s)
            .max()
            .unwrap();
        assert!(run.total_wall_time >= slowest);
    }

    #[test]
    fn merge_examples() {
        let she = MatchRecord::new(PatternId(1), 2);
        let hers = MatchRecord::new(PatternId(2), 4);
        assert_eq!(merge_matches(vec![vec![she], vec![hers]]), vec![she, hers]);
        assert_eq!(merge_matches(vec![vec![hers], vec![she]]), vec![she, hers]);
        assert!(merge_matches(vec![vec![], vec![]]).is_empty());
        assert!(merge_matches(vec![]).is_empty());
    }

    #[test]
    fn merge_equals_sorted_concat() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let mut lists: Vec<Vec<MatchRecord>> = vec![Vec::new(); 4];
            for id in 0..40u32 {
                let owner = rng.gen_range(0..4);
                for _ in 0..rng.gen_range(0..5) {
                    lists[owner].push(MatchRecord::new(PatternId(id), rng.gen_range(0..100)));
                }
            }
            for l in &mut lists {
                l.sort();
            }
            let mut expected: Vec<MatchRecord> = lists.concat();
            expected.sort();
            assert_eq!(merge_matches(lists), expected);
        }
    }
}
