use std::fmt;

use chrono::{FixedOffset, NaiveDate};

use crate::error::PhaseError;
use crate::ingest::{TimeWindow, TweetRecord};

/// Named inclusive date range of the event timeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase {
    pub name: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Phase {
    pub fn new(name: impl Into<String>, start: NaiveDate, end: NaiveDate) -> Self {
        Phase {
            name: name.into(),
            start,
            end,
        }
    }

    pub fn days(&self) -> u64 {
        (self.end - self.start).num_days() as u64 + 1
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}:{}", self.name, self.start, self.end)
    }
}

/// Ordered, non-overlapping phases. The first phase is the normalization baseline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseConfig {
    phases: Vec<Phase>,
}

impl PhaseConfig {
    /// Validates ordering and names; `baseline` must name the first phase.
    pub fn new(phases: Vec<Phase>, baseline: &str) -> Result<Self, PhaseError> {
        let first = phases.first().ok_or(PhaseError::Empty)?;
        if first.name != baseline {
            return Err(PhaseError::Baseline(baseline.to_string()));
        }
        for (i, p) in phases.iter().enumerate() {
            if p.name.is_empty() {
                return Err(PhaseError::Syntax(p.to_string()));
            }
            if p.start > p.end {
                return Err(PhaseError::Inverted(p.name.clone()));
            }
            if phases[..i].iter().any(|q| q.name == p.name) {
                return Err(PhaseError::DuplicateName(p.name.clone()));
            }
            if i > 0 && phases[i - 1].end >= p.start {
                return Err(PhaseError::Overlap(phases[i - 1].name.clone(), p.name.clone()));
            }
        }
        Ok(PhaseConfig { phases })
    }

    /// Pre-peak Aug 23–25, peak Aug 26–30, post-peak Aug 31–Sep 5, 2017.
    pub fn harvey() -> Self {
        let d = |m, d| NaiveDate::from_ymd_opt(2017, m, d).unwrap();
        PhaseConfig::new(
            vec![
                Phase::new("pre-peak", d(8, 23), d(8, 25)),
                Phase::new("peak", d(8, 26), d(8, 30)),
                Phase::new("post-peak", d(8, 31), d(9, 5)),
            ],
            "pre-peak",
        )
        .expect("default phases are valid")
    }

    /// Parses `name=YYYY-MM-DD:YYYY-MM-DD,...`; the first phase is the baseline.
    pub fn parse(spec: &str) -> Result<Self, PhaseError> {
        let phases = spec
            .split(',')
            .map(|item| {
                let item = item.trim();
                let bad = || PhaseError::Syntax(item.to_string());
                let (name, range) = item.split_once('=').ok_or_else(bad)?;
                let (start, end) = range.split_once(':').ok_or_else(bad)?;
                let start = start.trim().parse().map_err(|_| bad())?;
                let end = end.trim().parse().map_err(|_| bad())?;
                Ok(Phase::new(name.trim(), start, end))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let baseline = phases.first().map(|p| p.name.clone()).unwrap_or_default();
        PhaseConfig::new(phases, &baseline)
    }

    pub fn ensure_within(&self, window: &TimeWindow) -> Result<(), PhaseError> {
        match self
            .phases
            .iter()
            .find(|p| !window.contains(p.start) || !window.contains(p.end))
        {
            Some(p) => Err(PhaseError::OutsideWindow(p.name.clone())),
            None => Ok(()),
        }
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn baseline(&self) -> &Phase {
        &self.phases[0]
    }

    pub fn phase_of(&self, date: NaiveDate) -> Option<&Phase> {
        self.phases.iter().find(|p| p.contains(date))
    }

    /// `name=start:end,...` form accepted by [`PhaseConfig::parse`].
    pub fn to_spec(&self) -> String {
        self.phases
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Phase containing the record's local date in the study timezone.
pub fn assign_phase<'a>(
    record: &TweetRecord,
    phases: &'a PhaseConfig,
    offset: FixedOffset,
) -> Option<&'a str> {
    phases
        .phase_of(record.local_date(offset))
        .map(|p| p.name.as_str())
}
