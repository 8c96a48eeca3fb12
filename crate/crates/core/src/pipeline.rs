//! In-memory assessment over parsed records: filter, clean, map, analyse.

use std::collections::HashSet;

use crate::assess::{
    geo_features, intensity_table, overlay_series, top_terms, GeoFeatureSet, IntensityRow,
    OverlayRow, PhaseConfig, TopicRow,
};
use crate::clean::{clean_text, CleanedTweet, StopwordList};
use crate::ingest::{daily_counts, retained, BoundingBox, DailySeries, TimeWindow, TweetRecord};
use crate::mapper::{Mapper, MappingResult};

/// Immutable analysis settings plus the compiled mapper.
#[derive(Debug)]
pub struct Pipeline {
    pub mapper: Mapper,
    pub stopwords: StopwordList,
    pub bbox: BoundingBox,
    pub window: TimeWindow,
    pub phases: PhaseConfig,
    pub top_k: usize,
}

/// Record accounting for one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub input: u64,
    pub outside_bbox: u64,
    pub outside_window: u64,
    pub retained: u64,
    pub mapped: u64,
    pub outside_phases: u64,
}

#[derive(Clone, Debug)]
pub struct AssessmentReport {
    pub counts: Counts,
    /// Retained records per day.
    pub daily: DailySeries,
    /// Mapped records per day, per highway in lexicon order.
    pub highway_daily: Vec<(String, DailySeries)>,
    pub intensity: Vec<IntensityRow>,
    pub topics: Vec<TopicRow>,
    pub geo: Vec<GeoFeatureSet>,
    /// Mapping results of records related to at least one highway, in corpus order.
    pub mappings: Vec<MappingResult>,
}

impl AssessmentReport {
    pub fn highway_total(&self, highway: &str) -> u64 {
        self.highway_daily
            .iter()
            .find(|(h, _)| h == highway)
            .map_or(0, |(_, s)| s.total())
    }

    pub fn overlay(&self, rainfall: &std::collections::BTreeMap<chrono::NaiveDate, f64>) -> (Vec<OverlayRow>, Vec<String>) {
        overlay_series(&self.daily, rainfall)
    }
}

impl Pipeline {
    /// Records must already be parsed; filtering happens here.
    pub fn run(&self, records: &[TweetRecord]) -> AssessmentReport {
        let mut counts = Counts {
            input: records.len() as u64,
            ..Counts::default()
        };
        let retained_records: Vec<&TweetRecord> = records
            .iter()
            .filter(|r| {
                let keep = retained(r, &self.bbox, &self.window);
                if !keep {
                    if !self.bbox.contains(r.lat, r.lon) {
                        counts.outside_bbox += 1;
                    } else {
                        counts.outside_window += 1;
                    }
                }
                keep
            })
            .collect();
        counts.retained = retained_records.len() as u64;
        let daily = daily_counts(retained_records.iter().copied(), &self.window);

        let lexicon = self.mapper.lexicon();
        let n_highways = lexicon.entries().len();
        let mut per_highway: Vec<Vec<usize>> = vec![Vec::new(); n_highways];
        let mut cleaned: Vec<CleanedTweet> = Vec::with_capacity(retained_records.len());
        let mut mappings = Vec::new();
        for (i, r) in retained_records.iter().enumerate() {
            let c = clean_text(r, &self.stopwords);
            let m = self.mapper.map_tweet(&c);
            cleaned.push(c);
            if m.is_empty() {
                continue;
            }
            counts.mapped += 1;
            if self.phases.phase_of(r.local_date(self.window.offset)).is_none() {
                counts.outside_phases += 1;
            }
            for hm in &m.matches {
                let ei = lexicon
                    .entries()
                    .iter()
                    .position(|e| e.id == hm.highway)
                    .expect("mapper only reports lexicon ids");
                per_highway[ei].push(i);
            }
            mappings.push(m);
        }

        let highway_records: Vec<(String, Vec<&TweetRecord>)> = lexicon
            .entries()
            .iter()
            .zip(&per_highway)
            .map(|(e, idx)| (e.id.clone(), idx.iter().map(|&i| retained_records[i]).collect()))
            .collect();

        let highway_daily: Vec<(String, DailySeries)> = highway_records
            .iter()
            .map(|(h, recs)| (h.clone(), daily_counts(recs.iter().copied(), &self.window)))
            .collect();

        let intensity = intensity_table(&highway_daily, &self.phases);
        let geo = geo_features(&highway_records, &self.phases, self.window.offset);

        let mut topics = Vec::new();
        for (entry, idx) in lexicon.entries().iter().zip(&per_highway) {
            let excluded: HashSet<String> = entry.search_tokens();
            for phase in self.phases.phases() {
                let docs = idx
                    .iter()
                    .filter(|&&i| phase.contains(retained_records[i].local_date(self.window.offset)))
                    .map(|&i| cleaned[i].tokens.as_slice());
                for t in top_terms(docs, self.top_k, &excluded) {
                    topics.push(TopicRow {
                        highway_id: entry.id.clone(),
                        phase_name: phase.name.clone(),
                        rank: t.rank,
                        term: t.term,
                        doc_freq: t.doc_freq,
                    });
                }
            }
        }

        AssessmentReport {
            counts,
            daily,
            highway_daily,
            intensity,
            topics,
            geo,
            mappings,
        }
    }
}
