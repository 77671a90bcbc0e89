//! Keyword dictionaries and the one-keyword-per-line file format.

use std::collections::HashSet;

use crate::automaton::{Pattern, PatternId};
use crate::error::{Error, Result};

/// An ordered, duplicate-free keyword list with dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dictionary {
    patterns: Vec<Pattern>,
    duplicates: usize,
    skipped_empty: usize,
}

impl Dictionary {
    /// Collects keywords in order. Empty keywords are skipped and repeated
    /// keywords keep the id of their first occurrence; both are counted.
    pub fn from_keywords<I, K>(keywords: I) -> Dictionary
    where
        I: IntoIterator<Item = K>,
        K: AsRef<[u8]>,
    {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut dict = Dictionary::default();
        for keyword in keywords {
            let bytes = keyword.as_ref();
            if bytes.is_empty() {
                dict.skipped_empty += 1;
            } else if seen.contains(bytes) {
                dict.duplicates += 1;
            } else {
                seen.insert(bytes.to_vec());
                let id = PatternId(dict.patterns.len() as u32);
                dict.patterns.push(Pattern {
                    id,
                    bytes: bytes.to_vec(),
                });
            }
        }
        dict
    }

    /// Parses a pattern file: keywords separated by `\n`, one trailing `\r`
    /// stripped per line, blank lines ignored.
    pub fn parse_lines(data: &[u8]) -> Result<Dictionary> {
        let lines = data
            .split(|&b| b == b'\n')
            .map(|line| line.strip_suffix(b"\r").unwrap_or(line));
        let mut dict = Dictionary::from_keywords(lines);
        // A terminating newline leaves one empty trailing piece; that is not a
        // blank line.
        if data.last() == Some(&b'\n') || data.is_empty() {
            dict.skipped_empty -= 1;
        }
        if dict.patterns.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        Ok(dict)
    }

    /// Serializes as one keyword per line with a final newline. Keywords
    /// containing `\n` cannot be represented.
    pub fn to_lines(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.patterns.iter().map(|p| p.len() + 1).sum());
        for p in &self.patterns {
            out.extend_from_slice(&p.bytes);
            out.push(b'\n');
        }
        out
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn get(&self, id: PatternId) -> Option<&Pattern> {
        self.patterns.get(id.index())
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Number of keywords dropped because they repeated an earlier one.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    /// Number of blank lines or empty keywords skipped.
    pub fn skipped_empty(&self) -> usize {
        self.skipped_empty
    }

    pub fn total_bytes(&self) -> usize {
        self.patterns.iter().map(Pattern::len).sum()
    }
}
