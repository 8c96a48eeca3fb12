//! Highway-specific mapping of cleaned tweets.
//!
//! For each highway of the lexicon a tweet is related when
//!
//! 1. one of the highway's direct phrases occurs in the token sequence, or
//! 2. one of its indirect phrases occurs and at least one token within
//!    `adjacency_window` positions before the phrase start or after the
//!    phrase end is a highway term. Tokens inside the phrase do not count.
//!
//! A tweet may relate to any number of highways. Evidence for a highway is a
//! single occurrence: the first direct occurrence by `(start, end, phrase)`,
//! or failing that the first indirect occurrence in the same order that has a
//! qualifying neighbour, together with the leftmost such neighbour.

use std::io::Write;

use crate::clean::CleanedTweet;
use crate::error::Error;
use crate::lexicon::{compile_matcher, CompiledMatcher, Lexicon, Tag, TermClass};

/// Parameters of the indirect-term neighbour check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MappingConfig {
    adjacency_window: usize,
}

impl MappingConfig {
    pub fn new(adjacency_window: usize) -> Result<Self, Error> {
        if adjacency_window == 0 {
            return Err(Error::Config("adjacency window must be at least 1".into()));
        }
        Ok(MappingConfig { adjacency_window })
    }

    pub fn adjacency_window(&self) -> usize {
        self.adjacency_window
    }
}

impl Default for MappingConfig {
    fn default() -> Self {
        MappingConfig {
            adjacency_window: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub position: usize,
    pub token: String,
}

/// Why a tweet was related to one highway.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub class: TermClass,
    pub phrase: String,
    /// Token span `start..end` of the phrase occurrence.
    pub start: usize,
    pub end: usize,
    /// The highway term that validated an indirect occurrence.
    pub neighbor: Option<Neighbor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighwayMatch {
    pub highway: String,
    pub evidence: Evidence,
}

/// Highways related to one tweet, in lexicon order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingResult {
    pub record_id: String,
    pub matches: Vec<HighwayMatch>,
}

impl MappingResult {
    pub fn highways(&self) -> impl Iterator<Item = &str> {
        self.matches.iter().map(|m| m.highway.as_str())
    }

    pub fn contains(&self, highway: &str) -> bool {
        self.matches.iter().any(|m| m.highway == highway)
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }
}

/// Candidate occurrence ordering key: (start, end, phrase index).
type Occurrence = (usize, usize, usize);

/// Leftmost highway term in the windows around `start..end`.
fn find_neighbor(
    start: usize,
    end: usize,
    len: usize,
    window: usize,
    is_highway_term: impl Fn(usize) -> bool,
) -> Option<usize> {
    let before = start.saturating_sub(window)..start;
    let after = end..(end + window).min(len);
    before.chain(after).find(|&p| is_highway_term(p))
}

fn evidence_for(
    lexicon: &Lexicon,
    entry: usize,
    tokens: &[String],
    direct: Option<Occurrence>,
    indirect: &mut [Occurrence],
    window: usize,
    is_highway_term: impl Fn(usize) -> bool,
) -> Option<Evidence> {
    let e = &lexicon.entries()[entry];
    if let Some((start, end, phrase)) = direct {
        return Some(Evidence {
            class: TermClass::Direct,
            phrase: e.direct_terms[phrase].to_string(),
            start,
            end,
            neighbor: None,
        });
    }
    indirect.sort_unstable();
    indirect.iter().find_map(|&(start, end, phrase)| {
        find_neighbor(start, end, tokens.len(), window, &is_highway_term).map(|p| Evidence {
            class: TermClass::Indirect,
            phrase: e.indirect_terms[phrase].to_string(),
            start,
            end,
            neighbor: Some(Neighbor {
                position: p,
                token: tokens[p].clone(),
            }),
        })
    })
}

/// Lexicon plus its compiled matcher; immutable and shareable across threads.
#[derive(Debug)]
pub struct Mapper {
    lexicon: Lexicon,
    matcher: CompiledMatcher,
    config: MappingConfig,
}

impl Mapper {
    pub fn new(lexicon: Lexicon, config: MappingConfig) -> Self {
        let matcher = compile_matcher(&lexicon);
        Mapper {
            lexicon,
            matcher,
            config,
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn config(&self) -> MappingConfig {
        self.config
    }

    pub fn map_tweet(&self, cleaned: &CleanedTweet) -> MappingResult {
        let tokens = &cleaned.tokens;
        let n_entries = self.lexicon.entries().len();
        let mut direct: Vec<Option<Occurrence>> = vec![None; n_entries];
        let mut indirect: Vec<Vec<Occurrence>> = vec![Vec::new(); n_entries];
        let mut highway_term = vec![false; tokens.len()];

        self.matcher.for_each_match(tokens, |m| match m.tag {
            Tag::HighwayTerm => highway_term[m.start] = true,
            Tag::Term {
                entry,
                class: TermClass::Direct,
                phrase,
            } => {
                let occ = (m.start, m.end, phrase);
                let best = &mut direct[entry];
                if best.is_none_or(|b| occ < b) {
                    *best = Some(occ);
                }
            }
            Tag::Term {
                entry,
                class: TermClass::Indirect,
                phrase,
            } => indirect[entry].push((m.start, m.end, phrase)),
        });

        let window = self.config.adjacency_window;
        let matches = (0..n_entries)
            .filter_map(|ei| {
                evidence_for(
                    &self.lexicon,
                    ei,
                    tokens,
                    direct[ei],
                    &mut indirect[ei],
                    window,
                    |p| highway_term[p],
                )
                .map(|evidence| HighwayMatch {
                    highway: self.lexicon.entries()[ei].id.clone(),
                    evidence,
                })
            })
            .collect();
        MappingResult {
            record_id: cleaned.record_id.clone(),
            matches,
        }
    }

    /// Record ids per highway in lexicon order. Ids keep corpus order and may
    /// appear under several highways.
    pub fn map_corpus<'a, I>(&self, cleaned: I) -> Vec<(String, Vec<String>)>
    where
        I: IntoIterator<Item = &'a CleanedTweet>,
    {
        let mut per: Vec<(String, Vec<String>)> =
            self.lexicon.ids().map(|id| (id.to_string(), Vec::new())).collect();
        for c in cleaned {
            for m in self.map_tweet(c).matches {
                if let Some((_, ids)) = per.iter_mut().find(|(h, _)| *h == m.highway) {
                    ids.push(c.record_id.clone());
                }
            }
        }
        per
    }
}

/// One-shot mapping; compiles a matcher per call. Prefer [`Mapper`] for corpora.
pub fn map_tweet(cleaned: &CleanedTweet, lexicon: &Lexicon, config: MappingConfig) -> MappingResult {
    Mapper::new(lexicon.clone(), config).map_tweet(cleaned)
}

pub fn map_corpus(
    cleaned: &[CleanedTweet],
    lexicon: &Lexicon,
    config: MappingConfig,
) -> Vec<(String, Vec<String>)> {
    Mapper::new(lexicon.clone(), config).map_corpus(cleaned)
}

/// Reference implementation: scans every phrase at every position.
pub fn oracle_map(cleaned: &CleanedTweet, lexicon: &Lexicon, config: MappingConfig) -> MappingResult {
    let tokens = &cleaned.tokens;
    let is_highway_term = |p: usize| lexicon.is_highway_term(&tokens[p]);
    let scan = |phrases: &[crate::lexicon::TermPhrase]| -> Vec<Occurrence> {
        let mut occ = Vec::new();
        for (pi, phrase) in phrases.iter().enumerate() {
            for s in 0..tokens.len() {
                if phrase.occurs_at(tokens, s) {
                    occ.push((s, s + phrase.len(), pi));
                }
            }
        }
        occ
    };
    let matches = lexicon
        .entries()
        .iter()
        .enumerate()
        .filter_map(|(ei, e)| {
            let direct = scan(&e.direct_terms).into_iter().min();
            let mut indirect = scan(&e.indirect_terms);
            evidence_for(
                lexicon,
                ei,
                tokens,
                direct,
                &mut indirect,
                config.adjacency_window,
                is_highway_term,
            )
            .map(|evidence| HighwayMatch {
                highway: e.id.clone(),
                evidence,
            })
        })
        .collect();
    MappingResult {
        record_id: cleaned.record_id.clone(),
        matches,
    }
}

pub const EVIDENCE_HEADER: [&str; 7] = [
    "record_id",
    "highway",
    "term_class",
    "phrase",
    "span_start",
    "span_end",
    "neighbor",
];

/// Writes one CSV row per (record, highway) relation.
pub fn write_evidence_csv<'a, W, I>(out: W, results: I) -> csv::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a MappingResult>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EVIDENCE_HEADER)?;
    for r in results {
        for m in &r.matches {
            let ev = &m.evidence;
            w.write_record([
                r.record_id.as_str(),
                m.highway.as_str(),
                ev.class.as_str(),
                ev.phrase.as_str(),
                &ev.start.to_string(),
                &ev.end.to_string(),
                ev.neighbor.as_ref().map_or("", |n| n.token.as_str()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
