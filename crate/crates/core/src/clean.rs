//! Text cleaning: URL removal, whitespace tokenization, case and symbol
//! normalization, rule-based lemmatization and stopword removal.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;

use crate::error::{Error, StopwordError};
use crate::ingest::TweetRecord;

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

static URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)(?:https?://|www\.)\S*").expect("valid URL pattern"));

/// Ordered, normalized tokens of one record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanedTweet {
    pub record_id: String,
    pub tokens: Vec<String>,
}

/// Set of tokens removed by the last cleaning step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    /// Parses one token per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self, StopwordError> {
        let mut words = HashSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.chars().any(char::is_whitespace) {
                return Err(StopwordError::InvalidToken(i + 1, line.to_string()));
            }
            words.insert(line.to_lowercase());
        }
        if words.is_empty() {
            return Err(StopwordError::Empty);
        }
        Ok(StopwordList { words })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, Error> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        StopwordList::from_text(&text).map_err(|e| Error::in_file(path, e))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in sorted order.
    pub fn sorted(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.words.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

impl Default for StopwordList {
    fn default() -> Self {
        StopwordList::from_text(DEFAULT_STOPWORDS).expect("bundled stopword list is valid")
    }
}

/// Removes `http(s)://…` and `www.…` runs up to the next whitespace.
pub fn strip_urls(text: &str) -> String {
    URL.replace_all(text, "").into_owned()
}

pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Characters that survive symbol stripping inside a token.
fn is_kept(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '\''
}

/// Whether `c` belongs to the class removed by symbol stripping.
pub fn is_stripped_symbol(c: char) -> bool {
    !is_kept(c)
}

/// Lowercases, drops symbol characters, and trims non-alphanumerics from both
/// ends. Internal hyphens and apostrophes survive. `None` when nothing is left.
pub fn normalize_token(token: &str) -> Option<String> {
    let kept: String = token
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if matches!(c, '\u{2018}' | '\u{2019}') { '\'' } else { c })
        .filter(|&c| is_kept(c))
        .collect();
    let trimmed = kept.trim_matches(|c: char| !c.is_alphanumeric());
    (!trimmed.is_empty()).then(|| trimmed.to_string())
}

/// Irregular forms and words the suffix rules would damage. Every value is a
/// fixed point of [`lemmatize`].
static EXCEPTIONS: LazyLock<HashMap<&'static str, &'static str>> = LazyLock::new(|| {
    const MAPPED: &[(&str, &str)] = &[
        ("does", "do"),
        ("doing", "do"),
        ("did", "do"),
        ("done", "do"),
        ("goes", "go"),
        ("going", "go"),
        ("went", "go"),
        ("gone", "go"),
        ("has", "have"),
        ("having", "have"),
        ("had", "have"),
        ("being", "be"),
        ("used", "use"),
        ("using", "use"),
        ("caused", "cause"),
        ("causing", "cause"),
        ("causes", "cause"),
        ("leaving", "leave"),
        ("damaged", "damage"),
        ("damaging", "damage"),
        ("damages", "damage"),
        ("changed", "change"),
        ("changing", "change"),
        ("changes", "change"),
        ("charged", "charge"),
        ("charging", "charge"),
        ("merged", "merge"),
        ("merging", "merge"),
        ("surged", "surge"),
        ("surging", "surge"),
        ("emerged", "emerge"),
        ("managed", "manage"),
        ("managing", "manage"),
        ("died", "die"),
        ("dying", "die"),
        ("lying", "lie"),
        ("buses", "bus"),
        ("gases", "gas"),
        ("drove", "drive"),
        ("driven", "drive"),
        ("took", "take"),
        ("taken", "take"),
        ("came", "come"),
        ("coming", "come"),
        ("got", "get"),
        ("getting", "get"),
        ("made", "make"),
        ("seen", "see"),
        ("ran", "run"),
        ("running", "run"),
        ("risen", "rise"),
        ("rising", "rise"),
        ("children", "child"),
        ("people", "people"),
        ("men", "man"),
        ("women", "woman"),
        ("feet", "foot"),
    ];
    const KEPT: &[&str] = &[
        "always", "analysis", "anything", "arkansas", "bring", "building", "ceiling", "christmas",
        "dallas", "during", "evening", "everything", "gas", "hundred", "indeed", "its", "kansas",
        "morning", "news", "nothing", "ourselves", "perhaps", "series", "something", "species",
        "texas", "themselves", "thing", "this", "thus", "yourselves", "yes", "bus", "plus",
    ];
    MAPPED
        .iter()
        .copied()
        .chain(KEPT.iter().map(|w| (*w, *w)))
        .collect()
});

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u')
}

/// Consonant test with `y` counted as a vowel after a consonant.
fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

/// Number of vowel-consonant sequences, as in the Porter measure.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let v = !is_consonant(w, i);
        if prev_vowel && !v {
            m += 1;
        }
        prev_vowel = v;
    }
    m
}

fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn has_vowel(w: &str) -> bool {
    w.bytes().any(|b| is_vowel(b) || b == b'y')
}

/// Repairs a stem left by removing `-ed` or `-ing`.
fn finish_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 2 && b[n - 1] == b[n - 2] && is_consonant(b, n - 1) && !matches!(b[n - 1], b'l' | b's' | b'z') {
        return stem[..n - 1].to_string();
    }
    let silent_e = stem.ends_with("at")
        || stem.ends_with("bl")
        || stem.ends_with("iz")
        || matches!(b[n - 1], b'v' | b'c')
        || (b[n - 1] == b'u' && n >= 2 && is_consonant(b, n - 2))
        || (measure(b) == 1 && ends_cvc(b));
    if silent_e {
        format!("{stem}e")
    } else {
        stem.to_string()
    }
}

/// One suffix rule, or `None` if no rule applies. Every rewrite shortens the token.
fn reduce_once(w: &str) -> Option<String> {
    let n = w.len();
    if let Some(stem) = w.strip_suffix("ies") {
        if stem.len() + 1 >= 3 {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = w.strip_suffix("ied") {
        if stem.len() + 1 >= 3 {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = w.strip_suffix("ing") {
        if stem.len() >= 3 && has_vowel(stem) {
            return Some(finish_stem(stem));
        }
    }
    if let Some(stem) = w.strip_suffix("ed") {
        if !w.ends_with("eed") && stem.len() >= 3 && has_vowel(stem) {
            return Some(finish_stem(stem));
        }
    }
    if let Some(stem) = w.strip_suffix("es") {
        if stem.len() >= 3 && ["ss", "x", "z", "ch", "sh"].iter().any(|s| stem.ends_with(s)) {
            return Some(stem.to_string());
        }
    }
    if w.ends_with('s') && !["ss", "us", "is"].iter().any(|s| w.ends_with(s)) && n > 3 {
        return Some(w[..n - 1].to_string());
    }
    None
}

/// Rule-based inflection stripping. Tokens with anything other than ASCII
/// letters (digits, hyphens, apostrophes, other scripts) pass through unchanged.
/// Rules are applied until none fires, so the result is a fixed point.
pub fn lemmatize(token: &str) -> String {
    if let Some(mapped) = EXCEPTIONS.get(token) {
        return (*mapped).to_string();
    }
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut current = token.to_string();
    while let Some(next) = reduce_once(&current) {
        if let Some(mapped) = EXCEPTIONS.get(next.as_str()) {
            return (*mapped).to_string();
        }
        current = next;
    }
    current
}

pub fn remove_stopwords<S: AsRef<str>>(tokens: &[S], stoplist: &StopwordList) -> Vec<String> {
    tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| !stoplist.contains(t))
        .map(str::to_string)
        .collect()
}

/// The whole pipeline over raw text.
pub fn clean_str(text: &str, stoplist: &StopwordList) -> Vec<String> {
    let without_urls = strip_urls(text);
    tokenize(&without_urls)
        .into_iter()
        .filter_map(normalize_token)
        .map(|t| lemmatize(&t))
        .filter(|t| !stoplist.contains(t))
        .collect()
}

pub fn clean_text(record: &TweetRecord, stoplist: &StopwordList) -> CleanedTweet {
    CleanedTweet {
        record_id: record.id.clone(),
        tokens: clean_str(&record.text, stoplist),
    }
}
