//! Aho–Corasick automaton over whole tokens.
//!
//! Symbols are interned token ids, so a pattern only ever matches complete
//! tokens. Tokens outside the pattern vocabulary reset the automaton to the
//! root. All overlapping matches are reported.

use std::collections::{HashMap, VecDeque};

use super::{Lexicon, TermClass};

/// What a pattern occurrence stands for. Entry and phrase are indices into the lexicon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Term {
        entry: usize,
        class: TermClass,
        phrase: usize,
    },
    HighwayTerm,
}

/// One tagged occurrence covering tokens `start..end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Match {
    pub start: usize,
    pub end: usize,
    pub tag: Tag,
}

const ROOT: u32 = 0;
const NONE: u32 = u32::MAX;

#[derive(Debug, Default)]
struct Node {
    next: HashMap<u32, u32>,
    fail: u32,
    /// Nearest node on the failure chain that ends a pattern.
    dict: u32,
    /// Patterns ending exactly here.
    out: Vec<u32>,
}

#[derive(Debug)]
struct Pattern {
    len: usize,
    tags: Vec<Tag>,
}

/// Immutable multi-phrase matcher built from a lexicon.
#[derive(Debug)]
pub struct CompiledMatcher {
    vocab: HashMap<String, u32>,
    nodes: Vec<Node>,
    patterns: Vec<Pattern>,
}

/// Builds the matcher for every phrase and highway term of `lexicon`.
pub fn compile_matcher(lexicon: &Lexicon) -> CompiledMatcher {
    let mut phrases: Vec<(Vec<&str>, Tag)> = Vec::new();
    for (ei, entry) in lexicon.entries().iter().enumerate() {
        for class in [TermClass::Direct, TermClass::Indirect] {
            for (pi, phrase) in entry.terms(class).iter().enumerate() {
                let toks = phrase.tokens().iter().map(String::as_str).collect();
                phrases.push((
                    toks,
                    Tag::Term {
                        entry: ei,
                        class,
                        phrase: pi,
                    },
                ));
            }
        }
    }
    for t in lexicon.highway_terms() {
        phrases.push((vec![t.as_str()], Tag::HighwayTerm));
    }
    CompiledMatcher::build(phrases)
}

impl CompiledMatcher {
    fn build(phrases: Vec<(Vec<&str>, Tag)>) -> Self {
        let mut vocab: HashMap<String, u32> = HashMap::new();
        let mut nodes = vec![Node::default()];
        let mut patterns: Vec<Pattern> = Vec::new();

        for (tokens, tag) in phrases {
            let mut state = ROOT;
            for tok in &tokens {
                let next_id = vocab.len() as u32;
                let sym = *vocab.entry((*tok).to_string()).or_insert(next_id);
                state = match nodes[state as usize].next.get(&sym) {
                    Some(&s) => s,
                    None => {
                        let s = nodes.len() as u32;
                        nodes.push(Node::default());
                        nodes[state as usize].next.insert(sym, s);
                        s
                    }
                };
            }
            // Identical token sequences share one pattern carrying several tags.
            let node = &mut nodes[state as usize];
            match node.out.first() {
                Some(&p) => patterns[p as usize].tags.push(tag),
                None => {
                    node.out.push(patterns.len() as u32);
                    patterns.push(Pattern {
                        len: tokens.len(),
                        tags: vec![tag],
                    });
                }
            }
        }

        // Breadth-first failure and dictionary links.
        let mut queue = VecDeque::new();
        let root_children: Vec<u32> = nodes[ROOT as usize].next.values().copied().collect();
        for c in root_children {
            nodes[c as usize].fail = ROOT;
            nodes[c as usize].dict = NONE;
            queue.push_back(c);
        }
        nodes[ROOT as usize].dict = NONE;
        while let Some(u) = queue.pop_front() {
            let children: Vec<(u32, u32)> =
                nodes[u as usize].next.iter().map(|(&k, &v)| (k, v)).collect();
            for (sym, v) in children {
                let mut f = nodes[u as usize].fail;
                let fail = loop {
                    if let Some(&t) = nodes[f as usize].next.get(&sym) {
                        break t;
                    }
                    if f == ROOT {
                        break ROOT;
                    }
                    f = nodes[f as usize].fail;
                };
                nodes[v as usize].fail = fail;
                nodes[v as usize].dict = if !nodes[fail as usize].out.is_empty() {
                    fail
                } else {
                    nodes[fail as usize].dict
                };
                queue.push_back(v);
            }
        }

        CompiledMatcher {
            vocab,
            nodes,
            patterns,
        }
    }

    /// Every tagged occurrence in `tokens`, ordered by end position.
    pub fn find_all<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<Match> {
        let mut found = Vec::new();
        self.for_each_match(tokens, |m| found.push(m));
        found
    }

    pub fn for_each_match<S: AsRef<str>>(&self, tokens: &[S], mut f: impl FnMut(Match)) {
        let mut state = ROOT;
        for (i, tok) in tokens.iter().enumerate() {
            let Some(&sym) = self.vocab.get(tok.as_ref()) else {
                state = ROOT;
                continue;
            };
            loop {
                if let Some(&s) = self.nodes[state as usize].next.get(&sym) {
                    state = s;
                    break;
                }
                if state == ROOT {
                    break;
                }
                state = self.nodes[state as usize].fail;
            }
            let mut n = state;
            if self.nodes[n as usize].out.is_empty() {
                n = self.nodes[n as usize].dict;
            }
            while n != NONE {
                for &p in &self.nodes[n as usize].out {
                    let pat = &self.patterns[p as usize];
                    for &tag in &pat.tags {
                        f(Match {
                            start: i + 1 - pat.len,
                            end: i + 1,
                            tag,
                        });
                    }
                }
                n = self.nodes[n as usize].dict;
            }
        }
    }

    pub fn state_count(&self) -> usize {
        self.nodes.len()
    }
}
