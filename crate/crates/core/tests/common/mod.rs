#![allow(dead_code)]

use std::collections::BTreeSet;

use ac_partition::{Dictionary, MatchRecord, Pattern};
use rand::Rng;

pub const DNA: &[u8] = b"ACGT";

/// Tests every (pattern, offset) pair directly.
pub fn naive_matches(patterns: &[Pattern], input: &[u8]) -> Vec<MatchRecord> {
    let mut out = Vec::new();
    for p in patterns {
        if p.bytes.len() > input.len() {
            continue;
        }
        for start in 0..=input.len() - p.bytes.len() {
            if input[start..start + p.bytes.len()] == p.bytes[..] {
                out.push(MatchRecord::new(p.id, start + p.bytes.len() - 1));
            }
        }
    }
    out.sort();
    out
}

pub fn random_word<R: Rng>(
    rng: &mut R,
    alphabet: &[u8],
    min_len: usize,
    max_len: usize,
) -> Vec<u8> {
    let len = rng.gen_range(min_len..=max_len);
    (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect()
}

/// Up to `max_patterns` duplicate-free DNA keywords of length 1..=8.
pub fn random_dictionary<R: Rng>(rng: &mut R, max_patterns: usize) -> Dictionary {
    let count = rng.gen_range(1..=max_patterns);
    let words: Vec<Vec<u8>> = (0..count).map(|_| random_word(rng, DNA, 1, 8)).collect();
    Dictionary::from_keywords(words)
}

pub fn random_input<R: Rng>(rng: &mut R, max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| DNA[rng.gen_range(0..DNA.len())]).collect()
}

pub fn as_set(records: &[MatchRecord]) -> BTreeSet<MatchRecord> {
    records.iter().copied().collect()
}
