//! Run configuration: defaults, JSON config file, and command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use chrono::{FixedOffset, NaiveDate};
use serde::Deserialize;

use crate::assess::PhaseConfig;
use crate::error::{Error, Result};
use crate::ingest::{default_offset, BoundingBox, ParseMode, TimeWindow};
use crate::mapper::MappingConfig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexiconSource {
    BuiltinHarvey,
    File(PathBuf),
}

impl fmt::Display for LexiconSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconSource::BuiltinHarvey => f.write_str("builtin-harvey"),
            LexiconSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Fully resolved parameters of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub lexicon: LexiconSource,
    pub bbox: BoundingBox,
    pub window: TimeWindow,
    pub phases: PhaseConfig,
    pub mapping: MappingConfig,
    pub top_k: usize,
    pub stopwords: Option<PathBuf>,
    pub rainfall: Option<PathBuf>,
    pub out: PathBuf,
    pub mode: ParseMode,
}

impl RunConfig {
    /// Harvey defaults for everything but the paths.
    pub fn new(input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            lexicon: LexiconSource::BuiltinHarvey,
            bbox: BoundingBox::HOUSTON,
            window: TimeWindow::harvey(),
            phases: PhaseConfig::harvey(),
            mapping: MappingConfig::default(),
            top_k: 5,
            stopwords: None,
            rainfall: None,
            out: out.into(),
            mode: ParseMode::Lenient,
        }
    }

    /// Checks cross-parameter invariants and that referenced inputs exist.
    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        self.bbox.validate()?;
        self.phases.ensure_within(&self.window)?;
        let mut inputs = vec![&self.input];
        if let LexiconSource::File(p) = &self.lexicon {
            inputs.push(p);
        }
        inputs.extend(self.stopwords.iter());
        inputs.extend(self.rainfall.iter());
        for p in inputs {
            if !p.is_file() {
                return Err(Error::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                ));
            }
        }
        Ok(())
    }
}

/// Optional settings shared by the config file and the command line.
/// String-valued fields use the command-line syntax.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub builtin_harvey: Option<bool>,
    pub bbox: Option<String>,
    pub window: Option<String>,
    pub utc_offset: Option<String>,
    pub phases: Option<String>,
    pub adjacency: Option<usize>,
    pub top_k: Option<usize>,
    pub stopwords: Option<PathBuf>,
    pub rainfall: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub strict: Option<bool>,
}

impl Overrides {
    /// Reads a JSON config file. Relative paths inside it resolve against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut o: Overrides = serde_json::from_str(&text)
            .map_err(|e| Error::in_file(path, Error::Config(e.to_string())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut o.input,
            &mut o.lexicon,
            &mut o.stopwords,
            &mut o.rainfall,
            &mut o.out,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(o)
    }

    /// Fields set in `other` win.
    pub fn merge(self, other: Overrides) -> Overrides {
        Overrides {
            input: other.input.or(self.input),
            lexicon: other.lexicon.or(self.lexicon),
            builtin_harvey: other.builtin_harvey.or(self.builtin_harvey),
            bbox: other.bbox.or(self.bbox),
            window: other.window.or(self.window),
            utc_offset: other.utc_offset.or(self.utc_offset),
            phases: other.phases.or(self.phases),
            adjacency: other.adjacency.or(self.adjacency),
            top_k: other.top_k.or(self.top_k),
            stopwords: other.stopwords.or(self.stopwords),
            rainfall: other.rainfall.or(self.rainfall),
            out: other.out.or(self.out),
            strict: other.strict.or(self.strict),
        }
    }

    /// Applies defaults. `input` and `out` are required.
    pub fn resolve(self) -> Result<RunConfig> {
        let input = self
            .input
            .ok_or_else(|| Error::Config("missing --input".into()))?;
        let out = self.out.ok_or_else(|| Error::Config("missing --out".into()))?;
        let mut cfg = RunConfig::new(input, out);

        cfg.lexicon = match (self.lexicon, self.builtin_harvey.unwrap_or(false)) {
            (Some(_), true) => {
                return Err(Error::Config(
                    "--lexicon and --builtin-harvey are mutually exclusive".into(),
                ))
            }
            (Some(p), false) => LexiconSource::File(p),
            (None, _) => LexiconSource::BuiltinHarvey,
        };
        if let Some(b) = self.bbox {
            cfg.bbox = parse_bbox(&b)?;
        }
        let offset = match self.utc_offset {
            Some(o) => parse_utc_offset(&o)?,
            None => default_offset(),
        };
        cfg.window = match self.window {
            Some(w) => parse_window(&w, offset)?,
            None => TimeWindow {
                offset,
                ..TimeWindow::harvey()
            },
        };
        if let Some(p) = self.phases {
            cfg.phases = PhaseConfig::parse(&p)?;
        }
        if let Some(a) = self.adjacency {
            cfg.mapping = MappingConfig::new(a)?;
        }
        if let Some(k) = self.top_k {
            cfg.top_k = k;
        }
        cfg.stopwords = self.stopwords;
        cfg.rainfall = self.rainfall;
        if self.strict.unwrap_or(false) {
            cfg.mode = ParseMode::Strict;
        }
        Ok(cfg)
    }
}

/// `lat_min,lat_max,lon_min,lon_max`
pub fn parse_bbox(s: &str) -> Result<BoundingBox> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("bad --bbox `{s}`")))?;
    match parts[..] {
        [a, b, c, d] => Ok(BoundingBox::new(a, b, c, d)?),
        _ => Err(Error::Config(format!(
            "bad --bbox `{s}`: expected lat_min,lat_max,lon_min,lon_max"
        ))),
    }
}

/// `YYYY-MM-DD:YYYY-MM-DD`, both ends inclusive.
pub fn parse_window(s: &str, offset: FixedOffset) -> Result<TimeWindow> {
    let bad = || Error::Config(format!("bad --window `{s}`: expected YYYY-MM-DD:YYYY-MM-DD"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let start: NaiveDate = a.trim().parse().map_err(|_| bad())?;
    let end: NaiveDate = b.trim().parse().map_err(|_| bad())?;
    Ok(TimeWindow::new(start, end, offset)?)
}

/// `±HH:MM`, `±HHMM` or `±HH`; a bare `Z` or `UTC` means zero.
pub fn parse_utc_offset(s: &str) -> Result<FixedOffset> {
    let bad = || Error::Config(format!("bad --utc-offset `{s}`: expected e.g. -05:00"));
    let t = s.trim();
    if t.eq_ignore_ascii_case("z") || t.eq_ignore_ascii_case("utc") {
        return Ok(FixedOffset::east_opt(0).unwrap());
    }
    let (sign, rest) = match t.as_bytes().first() {
        Some(b'+') => (1, &t[1..]),
        Some(b'-') => (-1, &t[1..]),
        _ => return Err(bad()),
    };
    let digits: String = rest.chars().filter(|c| *c != ':').collect();
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let (h, m) = match digits.len() {
        1 | 2 => (digits.parse::<i32>().map_err(|_| bad())?, 0),
        4 => (
            digits[..2].parse::<i32>().map_err(|_| bad())?,
            digits[2..].parse::<i32>().map_err(|_| bad())?,
        ),
        _ => return Err(bad()),
    };
    if m >= 60 {
        return Err(bad());
    }
    FixedOffset::east_opt(sign * (h * 3600 + m * 60)).ok_or_else(bad)
}
