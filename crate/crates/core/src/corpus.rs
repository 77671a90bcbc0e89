//! Synthetic corpora with planted keywords.

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::PatternId;
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    pub alphabet: Vec<u8>,
    pub input_bytes: usize,
    pub pattern_count: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Fraction of patterns written into the input at least once.
    pub plant_fraction: f64,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            alphabet: b"ACGT".to_vec(),
            input_bytes: 1 << 20,
            pattern_count: 1000,
            min_len: 8,
            max_len: 16,
            plant_fraction: 0.5,
            seed: 0,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidCorpus(msg.to_string()));
        if self.alphabet.is_empty() {
            return bad("alphabet is empty");
        }
        if self.alphabet.iter().any(|&b| b == b'\n' || b == b'\r') {
            return bad("alphabet may not contain line terminators");
        }
        if self.pattern_count == 0 {
            return bad("pattern count must be at least 1");
        }
        if self.min_len == 0 || self.min_len > self.max_len {
            return bad("pattern lengths must satisfy 1 <= min_len <= max_len");
        }
        if self.input_bytes < self.max_len {
            return bad("input must be at least max_len bytes");
        }
        if !(0.0..=1.0).contains(&self.plant_fraction) {
            return bad("plant fraction must lie in [0, 1]");
        }
        Ok(())
    }

    /// Number of patterns guaranteed to occur.
    pub fn planted_count(&self) -> usize {
        ((self.plant_fraction * self.pattern_count as f64).ceil() as usize).min(self.pattern_count)
    }

    /// Distinct strings available for the alphabet and length range.
    fn distinct_words(&self, alphabet: usize) -> usize {
        (self.min_len..=self.max_len).fold(0usize, |acc, len| {
            let count = u32::try_from(len)
                .ok()
                .and_then(|len| alphabet.checked_pow(len))
                .unwrap_or(usize::MAX);
            acc.saturating_add(count)
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub input: Vec<u8>,
    pub dictionary: Dictionary,
    /// Planted patterns and the offset each was written at.
    pub planted: Vec<(PatternId, usize)>,
}

/// Generates a uniform random input and dictionary over the spec's alphabet.
/// Output is a pure function of the spec.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus> {
    spec.validate()?;
    let mut alphabet = Vec::with_capacity(spec.alphabet.len());
    for &b in &spec.alphabet {
        if !alphabet.contains(&b) {
            alphabet.push(b);
        }
    }
    let possible = spec.distinct_words(alphabet.len());
    if possible < spec.pattern_count {
        return Err(Error::InfeasibleDictionary {
            requested: spec.pattern_count,
            possible,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = HashSet::with_capacity(spec.pattern_count);
    let mut words = Vec::with_capacity(spec.pattern_count);
    while words.len() < spec.pattern_count {
        let len = rng.gen_range(spec.min_len..=spec.max_len);
        let word: Vec<u8> = (0..len)
            .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
            .collect();
        if seen.insert(word.clone()) {
            words.push(word);
        }
    }
    let dictionary = Dictionary::from_keywords(&words);

    let mut input: Vec<u8> = (0..spec.input_bytes)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect();

    let mut chosen: Vec<usize> =
        index::sample(&mut rng, words.len(), spec.planted_count()).into_vec();
    chosen.shuffle(&mut rng);
    let needed: usize = chosen.iter().map(|&i| words[i].len()).sum();
    if needed > spec.input_bytes {
        return Err(Error::InfeasiblePlant {
            needed,
            available: spec.input_bytes,
        });
    }

    // Uniform non-overlapping placement: scatter the free space as gaps
    // between the planted words.
    let slack = spec.input_bytes - needed;
    let mut gaps: Vec<usize> = (0..chosen.len())
        .map(|_| rng.gen_range(0..=slack))
        .collect();
    gaps.sort_unstable();
    let mut planted = Vec::with_capacity(chosen.len());
    let mut used = 0;
    for (&i, &gap) in chosen.iter().zip(&gaps) {
        let at = gap + used;
        input[at..at + words[i].len()].copy_from_slice(&words[i]);
        used += words[i].len();
        planted.push((PatternId(i as u32), at));
    }

    Ok(Corpus {
        input,
        dictionary,
        planted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Automaton;

    fn small() -> CorpusSpec {
        CorpusSpec {
            input_bytes: 1024,
            pattern_count: 10,
            seed: 11,
            ..CorpusSpec::default()
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let spec = small();
        assert_eq!(
            generate_corpus(&spec).unwrap(),
            generate_corpus(&spec).unwrap()
        );
        let other = CorpusSpec { seed: 12, ..spec };
        assert_ne!(
            generate_corpus(&small()).unwrap().input,
            generate_corpus(&other).unwrap().input
        );
    }

    #[test]
    fn alphabet_closure() {
        let c = generate_corpus(&small()).unwrap();
        assert_eq!(c.input.len(), 1024);
        assert!(c.input.iter().all(|b| b"ACGT".contains(b)));
        assert!(c
            .dictionary
            .patterns()
            .iter()
            .all(|p| p.bytes.iter().all(|b| b"ACGT".contains(b))));
    }

    #[test]
    fn full_plant_covers_every_pattern() {
        let spec = CorpusSpec {
            input_bytes: 4096,
            pattern_count: 200,
            min_len: 4,
            max_len: 12,
            plant_fraction: 1.0,
            seed: 3,
            ..CorpusSpec::default()
        };
        let c = generate_corpus(&spec).unwrap();
        assert_eq!(c.dictionary.len(), 200);
        assert_eq!(c.dictionary.duplicates(), 0);
        assert_eq!(c.planted.len(), 200);
        let matches = Automaton::build(c.dictionary.patterns())
            .unwrap()
            .scan(&c.input);
        let mut hit = [false; 200];
        for m in matches {
            hit[m.pattern_id.index()] = true;
        }
        assert!(hit.iter().all(|&h| h));
        for &(id, at) in &c.planted {
            let p = c.dictionary.get(id).unwrap();
            assert_eq!(&c.input[at..at + p.len()], &p.bytes[..]);
        }
    }

    #[test]
    fn planted_count_rounds_up() {
        let spec = CorpusSpec {
            pattern_count: 7,
            plant_fraction: 0.5,
            ..small()
        };
        assert_eq!(spec.planted_count(), 4);
        assert_eq!(generate_corpus(&spec).unwrap().planted.len(), 4);
        assert_eq!(
            CorpusSpec {
                plant_fraction: 0.0,
                ..spec
            }
            .planted_count(),
            0
        );
    }

    #[test]
    fn infeasible_plant() {
        let spec = CorpusSpec {
            input_bytes: 20,
            pattern_count: 10,
            min_len: 4,
            max_len: 4,
            plant_fraction: 1.0,
            ..small()
        };
        assert!(matches!(
            generate_corpus(&spec),
            Err(Error::InfeasiblePlant {
                needed: 40,
                available: 20
            })
        ));
    }

    #[test]
    fn infeasible_dictionary() {
        let spec = CorpusSpec {
            pattern_count: 30,
            min_len: 1,
            max_len: 2,
            ..small()
        };
        assert!(matches!(
            generate_corpus(&spec),
            Err(Error::InfeasibleDictionary {
                requested: 30,
                possible: 20
            })
        ));
        // Exactly exhausting the space still terminates.
        let spec = CorpusSpec {
            pattern_count: 20,
            plant_fraction: 0.0,
            ..spec
        };
        assert_eq!(generate_corpus(&spec).unwrap().dictionary.len(), 20);
    }

    #[test]
    fn invalid_specs() {
        let cases = [
            CorpusSpec {
                alphabet: vec![],
                ..small()
            },
            CorpusSpec {
                alphabet: b"AC\n".to_vec(),
                ..small()
            },
            CorpusSpec {
                pattern_count: 0,
                ..small()
            },
            CorpusSpec {
                min_len: 0,
                ..small()
            },
            CorpusSpec {
                min_len: 9,
                max_len: 8,
                ..small()
            },
            CorpusSpec {
                input_bytes: 4,
                ..small()
            },
            CorpusSpec {
                plant_fraction: 1.5,
                ..small()
            },
            CorpusSpec {
                plant_fraction: f64::NAN,
                ..small()
            },
        ];
        for spec in cases {
            assert!(
                matches!(generate_corpus(&spec), Err(Error::InvalidCorpus(_))),
                "{spec:?}"
            );
        }
    }
}
