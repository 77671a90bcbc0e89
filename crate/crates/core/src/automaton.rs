//! The Aho-Corasick pattern-matching machine.
//!
//! Construction happens in two phases. Every keyword is first inserted into a
//! trie (the goto function), then failure links are computed breadth-first and
//! each state's output set absorbs the output set of its failure target.
//!
//! States are numbered in depth-first preorder of the trie, visiting children
//! in the order they were first created. For the keywords `HIS`, `SHE`, `HERS`
//! this yields the familiar layout `1=H 2=HI 3=HIS 4=HE 5=HER 6=HERS 7=S 8=SH
//! 9=SHE`.
//!
//! The machine keeps its failure links at runtime instead of compiling a full
//! DFA, so memory stays proportional to the trie.

use std::fmt;

use crate::error::{Error, Result};

/// Identifier of a dictionary keyword.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternId(pub u32);

impl PatternId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Index of a state in an [`Automaton`]. State 0 is the root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub const ROOT: StateId = StateId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A keyword together with its dictionary id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub id: PatternId,
    pub bytes: Vec<u8>,
}

impl Pattern {
    pub fn new(id: u32, bytes: impl Into<Vec<u8>>) -> Pattern {
        Pattern {
            id: PatternId(id),
            bytes: bytes.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }
}

/// One occurrence of one pattern.
///
/// `end` is the 0-based offset of the occurrence's last byte. Records order by
/// `(end, pattern_id)`, which is the order [`Automaton::scan`] emits them in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchRecord {
    pub end: usize,
    pub pattern_id: PatternId,
}

impl MatchRecord {
    pub fn new(pattern_id: PatternId, end: usize) -> MatchRecord {
        MatchRecord { end, pattern_id }
    }

    /// Offset of the first byte, given the matched pattern's length.
    pub fn start(&self, pattern_len: usize) -> usize {
        self.end + 1 - pattern_len
    }
}

/// Number of occurrences in a match list.
pub fn match_count(records: &[MatchRecord]) -> usize {
    records.len()
}

/// Counters gathered during an instrumented scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanStats {
    pub bytes: usize,
    pub failure_follows: usize,
}

/// How a state was entered while walking the machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// A valid (goto) transition on the current byte.
    Goto(StateId),
    /// A failure transition; the same byte is tried again afterwards.
    Failure(StateId),
    /// No transition out of the root, so the machine stays there.
    Restart,
}

impl Step {
    pub fn state(self) -> StateId {
        match self {
            Step::Goto(s) | Step::Failure(s) => s,
            Step::Restart => StateId::ROOT,
        }
    }
}

/// Storage index of a state. States are stored breadth-first so the shallow,
/// frequently visited part of the trie is contiguous in memory; public
/// [`StateId`]s use the depth-first numbering and are translated at the API
/// boundary.
type Node = u32;

const ROOT_NODE: Node = 0;

/// Per-state metadata. `edges` and `outputs` are offsets into the shared
/// arrays; a state's range ends where the next record's begins.
#[derive(Clone, Copy, Debug, Default)]
struct StateRecord {
    edges: u32,
    outputs: u32,
    failure: Node,
    depth: u32,
}

#[derive(Clone)]
pub struct Automaton {
    /// Dense goto row for the root. Missing transitions map back to the root.
    root: Box<[Node; 256]>,
    /// One record per state plus a trailing sentinel.
    states: Vec<StateRecord>,
    /// Goto edges for every state, grouped by state and sorted by byte.
    trans: Vec<(u8, Node)>,
    /// Output sets grouped by state, each sorted by pattern id.
    outputs: Vec<PatternId>,
    node_of: Vec<Node>,
    id_of: Vec<StateId>,
    patterns: Vec<Pattern>,
}

fn offset(n: usize) -> u32 {
    u32::try_from(n).expect("automaton exceeds u32 offsets")
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Automaton")
            .field("states", &self.state_count())
            .field("patterns", &self.patterns.len())
            .finish()
    }
}

impl Automaton {
    /// Builds the machine for `patterns`.
    ///
    /// Pattern ids are carried through to match records unchanged, so a
    /// machine built from a slice of a larger dictionary reports ids in the
    /// dictionary's numbering.
    pub fn build(patterns: &[Pattern]) -> Result<Automaton> {
        if patterns.is_empty() {
            return Err(Error::EmptyDictionary);
        }

        // Keyword trie, states in creation order.
        let mut children: Vec<Vec<(u8, u32)>> = vec![Vec::new()];
        let mut own: Vec<Vec<PatternId>> = vec![Vec::new()];
        let mut root_child = [0u32; 256];
        for pattern in patterns {
            if pattern.bytes.is_empty() {
                return Err(Error::EmptyPattern(pattern.id));
            }
            let mut s = 0usize;
            for &b in &pattern.bytes {
                let existing = if s == 0 {
                    Some(root_child[b as usize]).filter(|&t| t != 0)
                } else {
                    children[s].iter().find(|&&(c, _)| c == b).map(|&(_, t)| t)
                };
                s = match existing {
                    Some(t) => t as usize,
                    None => {
                        let t = children.len();
                        let t32 = offset(t);
                        children.push(Vec::new());
                        own.push(Vec::new());
                        children[s].push((b, t32));
                        if s == 0 {
                            root_child[b as usize] = t32;
                        }
                        t
                    }
                };
            }
            own[s].push(pattern.id);
        }
        let n = children.len();

        // Public ids: depth-first preorder, children in creation order.
        let mut public = vec![StateId::ROOT; n];
        let mut next_id = 0;
        let mut stack = vec![0usize];
        while let Some(old) = stack.pop() {
            public[old] = StateId(next_id);
            next_id += 1;
            stack.extend(children[old].iter().rev().map(|&(_, c)| c as usize));
        }

        // Storage: breadth-first, children by byte.
        for edges in &mut children {
            edges.sort_unstable_by_key(|&(b, _)| b);
        }
        let mut bfs = Vec::with_capacity(n);
        let mut node_of_old = vec![ROOT_NODE; n];
        bfs.push(0usize);
        let mut i = 0;
        while i < bfs.len() {
            for &(_, c) in &children[bfs[i]] {
                node_of_old[c as usize] = offset(bfs.len());
                bfs.push(c as usize);
            }
            i += 1;
        }

        let mut states: Vec<StateRecord> = Vec::with_capacity(n + 1);
        let mut trans = Vec::with_capacity(n - 1);
        let mut outputs_by_state = Vec::with_capacity(n);
        for &old in &bfs {
            states.push(StateRecord {
                edges: offset(trans.len()),
                ..StateRecord::default()
            });
            trans.extend(
                children[old]
                    .iter()
                    .map(|&(b, c)| (b, node_of_old[c as usize])),
            );
            let mut out = std::mem::take(&mut own[old]);
            out.sort_unstable();
            outputs_by_state.push(out);
        }
        states.push(StateRecord {
            edges: offset(trans.len()),
            ..StateRecord::default()
        });

        let mut node_of = vec![ROOT_NODE; n];
        let mut id_of = vec![StateId::ROOT; n];
        for old in 0..n {
            node_of[public[old].index()] = node_of_old[old];
            id_of[node_of_old[old] as usize] = public[old];
        }
        drop(children);

        let mut root = Box::new([ROOT_NODE; 256]);
        for &(b, t) in &trans[states[0].edges as usize..states[1].edges as usize] {
            root[b as usize] = t;
        }

        let mut automaton = Automaton {
            root,
            states,
            trans,
            outputs: Vec::new(),
            node_of,
            id_of,
            patterns: patterns.to_vec(),
        };

        // Failure links. Storage order is breadth-first, so every state's
        // failure target and its output set are final before its children
        // are visited.
        for u in 0..n as Node {
            let (lo, hi) = automaton.edge_range(u);
            let parent = automaton.states[u as usize];
            for i in lo..hi {
                let (b, s) = automaton.trans[i];
                let f = if u == ROOT_NODE {
                    ROOT_NODE
                } else {
                    automaton.step(parent.failure, b, &mut 0)
                };
                automaton.states[s as usize].failure = f;
                automaton.states[s as usize].depth = parent.depth + 1;
                if !outputs_by_state[f as usize].is_empty() {
                    let merged =
                        merge_sorted(&outputs_by_state[s as usize], &outputs_by_state[f as usize]);
                    outputs_by_state[s as usize] = merged;
                }
            }
        }

        let total: usize = outputs_by_state.iter().map(Vec::len).sum();
        let mut outputs = Vec::with_capacity(total);
        for (record, out) in automaton.states.iter_mut().zip(outputs_by_state) {
            record.outputs = offset(outputs.len());
            outputs.extend(out);
        }
        automaton.states[n].outputs = offset(outputs.len());
        automaton.outputs = outputs;
        Ok(automaton)
    }

    pub fn state_count(&self) -> usize {
        self.states.len() - 1
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    fn node(&self, s: StateId) -> Node {
        self.node_of[s.index()]
    }

    fn id(&self, node: Node) -> StateId {
        self.id_of[node as usize]
    }

    pub fn failure(&self, s: StateId) -> StateId {
        self.id(self.states[self.node(s) as usize].failure)
    }

    pub fn depth(&self, s: StateId) -> usize {
        self.states[self.node(s) as usize].depth as usize
    }

    /// Pattern ids recognized on entering `s`, ascending.
    pub fn outputs(&self, s: StateId) -> &[PatternId] {
        self.node_outputs(self.node(s))
    }

    #[inline]
    fn node_outputs(&self, node: Node) -> &[PatternId] {
        let i = node as usize;
        &self.outputs[self.states[i].outputs as usize..self.states[i + 1].outputs as usize]
    }

    /// The valid transition from `s` on `b`, if there is one.
    pub fn goto(&self, s: StateId, b: u8) -> Option<StateId> {
        self.goto_node(self.node(s), b).map(|t| self.id(t))
    }

    #[inline]
    fn goto_node(&self, node: Node, b: u8) -> Option<Node> {
        if node == ROOT_NODE {
            return Some(self.root[b as usize]).filter(|&t| t != ROOT_NODE);
        }
        let (lo, hi) = self.edge_range(node);
        let edges = &self.trans[lo..hi];
        edges
            .binary_search_by_key(&b, |&(c, _)| c)
            .ok()
            .map(|i| edges[i].1)
    }

    /// Goto edges out of `s`, ordered by byte.
    pub fn transitions(&self, s: StateId) -> impl Iterator<Item = (u8, StateId)> + '_ {
        let (lo, hi) = self.edge_range(self.node(s));
        self.trans[lo..hi]
            .iter()
            .map(move |&(b, t)| (b, self.id(t)))
    }

    #[inline]
    fn edge_range(&self, node: Node) -> (usize, usize) {
        let i = node as usize;
        (
            self.states[i].edges as usize,
            self.states[i + 1].edges as usize,
        )
    }

    /// Follows failure links from `s` until a valid transition on `b` exists,
    /// then takes it. A missing transition at the root stays at the root.
    pub fn next_state(&self, s: StateId, b: u8) -> StateId {
        self.id(self.step(self.node(s), b, &mut 0))
    }

    #[inline]
    fn step(&self, mut node: Node, b: u8, follows: &mut usize) -> Node {
        loop {
            if node == ROOT_NODE {
                return self.root[b as usize];
            }
            if let Some(t) = self.goto_node(node, b) {
                return t;
            }
            node = self.states[node as usize].failure;
            *follows += 1;
        }
    }

    /// Reports every occurrence of every pattern in `input`, ordered by
    /// `(end, pattern_id)`.
    pub fn scan(&self, input: &[u8]) -> Vec<MatchRecord> {
        self.scan_with_stats(input).0
    }

    pub fn scan_with_stats(&self, input: &[u8]) -> (Vec<MatchRecord>, ScanStats) {
        let mut matches = Vec::new();
        let mut follows = 0;
        let mut node = ROOT_NODE;
        for (end, &b) in input.iter().enumerate() {
            node = self.step(node, b, &mut follows);
            matches.extend(
                self.node_outputs(node)
                    .iter()
                    .map(|&pattern_id| MatchRecord { end, pattern_id }),
            );
        }
        let stats = ScanStats {
            bytes: input.len(),
            failure_follows: follows,
        };
        (matches, stats)
    }

    /// Every state entered while consuming `input`, including the
    /// intermediate states reached through failure transitions.
    pub fn trace(&self, input: &[u8]) -> Vec<Step> {
        let mut steps = Vec::with_capacity(input.len());
        let mut node = ROOT_NODE;
        for &b in input {
            loop {
                if let Some(t) = self.goto_node(node, b) {
                    steps.push(Step::Goto(self.id(t)));
                    node = t;
                    break;
                }
                if node == ROOT_NODE {
                    steps.push(Step::Restart);
                    break;
                }
                node = self.states[node as usize].failure;
                steps.push(Step::Failure(self.id(node)));
            }
        }
        steps
    }
}

fn merge_sorted(a: &[PatternId], b: &[PatternId]) -> Vec<PatternId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
