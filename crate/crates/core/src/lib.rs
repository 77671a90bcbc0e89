//! Aho-Corasick multi-pattern matching with dictionary-partitioned workers.
//!
//! [`Automaton`] is the single-threaded matching machine. [`run_partitioned`]
//! splits a dictionary into contiguous chunks, builds one machine per chunk on
//! its own thread and scans the same input with each. The [`bench`] module
//! measures throughput (matches per second) across worker counts and input
//! sizes, and [`corpus`] generates synthetic inputs with planted keywords.

pub mod automaton;
pub mod bench;
pub mod cli;
pub mod corpus;
pub mod dictionary;
pub mod error;
pub mod io;
pub mod partition;

pub use automaton::{
    match_count, Automaton, MatchRecord, Pattern, PatternId, ScanStats, StateId, Step,
};
pub use bench::{run_benchmark, throughput, BenchConfig, BenchParams, BenchRow, Preset};
pub use corpus::{generate_corpus, Corpus, CorpusSpec};
pub use dictionary::Dictionary;
pub use error::{Error, Result};
pub use partition::{
    merge_matches, run_partitioned, split_patterns, PartitionPlan, PartitionedRun,
};
