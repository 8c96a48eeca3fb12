use std::collections::{HashMap, HashSet};
use std::io::Write;

/// A term with its document frequency and 1-based rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedTerm {
    pub rank: usize,
    pub term: String,
    pub doc_freq: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopicRow {
    pub highway_id: String,
    pub phase_name: String,
    pub rank: usize,
    pub term: String,
    pub doc_freq: u64,
}

/// Top `k` terms by number of documents containing them, ties broken by term.
/// Terms in `excluded` are never counted.
pub fn top_terms<'a, I>(docs: I, k: usize, excluded: &HashSet<String>) -> Vec<RankedTerm>
where
    I: IntoIterator<Item = &'a [String]>,
{
    let mut df: HashMap<&str, u64> = HashMap::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for doc in docs {
        seen.clear();
        for t in doc {
            if !excluded.contains(t) && seen.insert(t) {
                *df.entry(t).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, u64)> = df.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (term, doc_freq))| RankedTerm {
            rank: i + 1,
            term: term.to_string(),
            doc_freq,
        })
        .collect()
}

pub fn write_topics_csv<W: Write>(out: W, rows: &[TopicRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["highway", "phase", "rank", "term", "doc_freq"])?;
    for r in rows {
        w.write_record([
            r.highway_id.as_str(),
            r.phase_name.as_str(),
            &r.rank.to_string(),
            r.term.as_str(),
            &r.doc_freq.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
