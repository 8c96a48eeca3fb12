//! Highway lexicon: per-highway direct and indirect search phrases plus the
//! shared set of generic highway-type tokens.

mod matcher;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, LexiconError};

pub use matcher::{compile_matcher, CompiledMatcher, Match, Tag};

const HARVEY_LEXICON_JSON: &str = include_str!("../../data/harvey_lexicon.json");

/// Non-empty sequence of lowercase, whitespace-free tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermPhrase(Vec<String>);

impl TermPhrase {
    /// Splits `text` on whitespace and lowercases each token.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let tokens: Vec<String> = text.split_whitespace().map(str::to_lowercase).collect();
        if tokens.is_empty() {
            return Err(LexiconError::InvalidTerm(text.to_string(), "empty phrase"));
        }
        Ok(TermPhrase(tokens))
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether the phrase occurs as a whole-token contiguous run at `start`.
    pub fn occurs_at<S: AsRef<str>>(&self, tokens: &[S], start: usize) -> bool {
        start + self.0.len() <= tokens.len()
            && self
                .0
                .iter()
                .zip(&tokens[start..])
                .all(|(p, t)| p == t.as_ref())
    }
}

impl fmt::Display for TermPhrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

/// Whether a phrase establishes relatedness alone or needs a neighbouring highway term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermClass {
    Direct,
    Indirect,
}

impl TermClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TermClass::Direct => "direct",
            TermClass::Indirect => "indirect",
        }
    }
}

impl fmt::Display for TermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One highway corridor and its search phrases.
#[derive(Clone, Debug, PartialEq)]
pub struct HighwayEntry {
    pub id: String,
    pub display_name: String,
    pub direct_terms: Vec<TermPhrase>,
    pub indirect_terms: Vec<TermPhrase>,
    /// Corridor vertices as (lat, lon).
    pub polyline: Option<Vec<(f64, f64)>>,
}

impl HighwayEntry {
    pub fn terms(&self, class: TermClass) -> &[TermPhrase] {
        match class {
            TermClass::Direct => &self.direct_terms,
            TermClass::Indirect => &self.indirect_terms,
        }
    }

    /// Every individual token of the entry's direct and indirect phrases.
    pub fn search_tokens(&self) -> HashSet<String> {
        self.direct_terms
            .iter()
            .chain(&self.indirect_terms)
            .flat_map(|p| p.tokens().iter().cloned())
            .collect()
    }
}

/// Validated collection of highway entries and the highway-terms set.
#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon {
    entries: Vec<HighwayEntry>,
    highway_terms: Vec<String>,
}

impl Lexicon {
    /// Validates and normalizes. Duplicate phrases within a set are collapsed, first wins.
    pub fn new(
        mut entries: Vec<HighwayEntry>,
        highway_terms: Vec<String>,
    ) -> Result<Self, LexiconError> {
        let mut terms: Vec<String> = Vec::with_capacity(highway_terms.len());
        for raw in highway_terms {
            let t = raw.trim().to_lowercase();
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(LexiconError::InvalidTerm(raw, "highway term must be one token"));
            }
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
        if terms.is_empty() {
            return Err(LexiconError::EmptyTermSet("highway_terms".into()));
        }

        let mut seen_ids = HashSet::new();
        let mut direct_owner: HashMap<TermPhrase, String> = HashMap::new();
        for entry in &mut entries {
            if entry.id.trim().is_empty() {
                return Err(LexiconError::Parse("highway id must be non-empty".into()));
            }
            if !seen_ids.insert(entry.id.clone()) {
                return Err(LexiconError::DuplicateHighwayId(entry.id.clone()));
            }
            dedup(&mut entry.direct_terms);
            dedup(&mut entry.indirect_terms);
            if entry.direct_terms.is_empty() {
                return Err(LexiconError::EmptyTermSet(format!("{}: direct", entry.id)));
            }
            if entry.indirect_terms.is_empty() {
                return Err(LexiconError::EmptyTermSet(format!("{}: indirect", entry.id)));
            }
            for phrase in &entry.direct_terms {
                if let Some(first) = direct_owner.insert(phrase.clone(), entry.id.clone()) {
                    return Err(LexiconError::CrossHighwayDirectTermCollision {
                        term: phrase.to_string(),
                        first,
                        second: entry.id.clone(),
                    });
                }
            }
            if let Some(line) = &entry.polyline {
                if line.len() < 2 {
                    return Err(LexiconError::InvalidPolyline(
                        entry.id.clone(),
                        "need at least 2 vertices",
                    ));
                }
                let plausible = |&(lat, lon): &(f64, f64)| {
                    (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon)
                };
                if !line.iter().all(plausible) {
                    return Err(LexiconError::InvalidPolyline(
                        entry.id.clone(),
                        "vertex outside legal coordinate range",
                    ));
                }
            }
        }
        Ok(Lexicon {
            entries,
            highway_terms: terms,
        })
    }

    pub fn entries(&self) -> &[HighwayEntry] {
        &self.entries
    }

    pub fn entry(&self, id: &str) -> Option<&HighwayEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn highway_terms(&self) -> &[String] {
        &self.highway_terms
    }

    pub fn is_highway_term(&self, token: &str) -> bool {
        self.highway_terms.iter().any(|t| t == token)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.id.as_str())
    }

    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        let file: LexiconFile =
            serde_json::from_str(text).map_err(|e| LexiconError::Parse(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&LexiconFile::from(self))
            .expect("lexicon serialization is infallible");
        s.push('\n');
        s
    }
}

fn dedup(phrases: &mut Vec<TermPhrase>) {
    let mut seen = HashSet::new();
    phrases.retain(|p| seen.insert(p.clone()));
}

/// Reads and validates a lexicon file.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, Error> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Lexicon::from_json(&text).map_err(|e| Error::in_file(path, e))
}

/// The five Houston corridors and the ten highway-type tokens.
pub fn builtin_harvey_lexicon() -> Lexicon {
    Lexicon::from_json(HARVEY_LEXICON_JSON).expect("bundled lexicon is valid")
}

/// Source text of the bundled lexicon.
pub fn builtin_harvey_lexicon_json() -> &'static str {
    HARVEY_LEXICON_JSON
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    highway_terms: Vec<String>,
    highways: Vec<HighwayFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HighwayFile {
    id: String,
    name: String,
    direct: Vec<String>,
    indirect: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polyline: Option<Vec<[f64; 2]>>,
}

impl TryFrom<LexiconFile> for Lexicon {
    type Error = LexiconError;

    fn try_from(file: LexiconFile) -> Result<Self, LexiconError> {
        let parse_all = |v: &[String]| v.iter().map(|s| TermPhrase::parse(s)).collect::<Result<Vec<_>, _>>();
        let entries = file
            .highways
            .into_iter()
            .map(|h| {
                Ok(HighwayEntry {
                    direct_terms: parse_all(&h.direct)?,
                    indirect_terms: parse_all(&h.indirect)?,
                    polyline: h
                        .polyline
                        .map(|pts| pts.into_iter().map(|[lat, lon]| (lat, lon)).collect()),
                    id: h.id,
                    display_name: h.name,
                })
            })
            .collect::<Result<Vec<_>, LexiconError>>()?;
        Lexicon::new(entries, file.highway_terms)
    }
}

impl From<&Lexicon> for LexiconFile {
    fn from(lex: &Lexicon) -> Self {
        let render = |v: &[TermPhrase]| v.iter().map(ToString::to_string).collect();
        LexiconFile {
            highway_terms: lex.highway_terms.clone(),
            highways: lex
                .entries
                .iter()
                .map(|e| HighwayFile {
                    id: e.id.clone(),
                    name: e.display_name.clone(),
                    direct: render(&e.direct_terms),
                    indirect: render(&e.indirect_terms),
                    polyline: e
                        .polyline
                        .as_ref()
                        .map(|pts| pts.iter().map(|&(lat, lon)| [lat, lon]).collect()),
                })
                .collect(),
        }
    }
}
