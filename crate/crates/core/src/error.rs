use chrono::NaiveDate;
use thiserror::Error;

use crate::ingest::{BoundingBox, Field};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed line: {0}")]
    MalformedLine(String),
    #[error("missing or empty field `{0}`")]
    MissingField(Field),
    #[error("coordinate `{0}` out of range: {1}")]
    OutOfRangeCoordinate(Field, f64),
    #[error("unparseable timestamp `{0}` in field `created_at`")]
    BadTimestamp(String),
    #[error("invalid bounding box {0}: need lat_min < lat_max and lon_min < lon_max within legal ranges")]
    InvalidBoundingBox(BoundingBox),
    #[error("invalid time window: start {start} is after end {end}")]
    InvalidWindow { start: NaiveDate, end: NaiveDate },
    #[error("line {line}: {source}")]
    AtLine {
        line: u64,
        #[source]
        source: Box<IngestError>,
    },
    #[error("read error: {0}")]
    Io(String),
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon parse error: {0}")]
    Parse(String),
    #[error("duplicate highway id `{0}`")]
    DuplicateHighwayId(String),
    #[error("direct term `{term}` is shared by highways `{first}` and `{second}`")]
    CrossHighwayDirectTermCollision {
        term: String,
        first: String,
        second: String,
    },
    #[error("empty term set: {0}")]
    EmptyTermSet(String),
    #[error("invalid term `{0}`: {1}")]
    InvalidTerm(String, &'static str),
    #[error("invalid polyline for `{0}`: {1}")]
    InvalidPolyline(String, &'static str),
}

#[derive(Debug, Error)]
pub enum StopwordError {
    #[error("stopword list is empty")]
    Empty,
    #[error("line {0}: stopword `{1}` must be a single lowercase token")]
    InvalidToken(usize, String),
}

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("degenerate polyline: need at least 2 vertices, got {0}")]
    DegeneratePolyline(usize),
}

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("phase list is empty")]
    Empty,
    #[error("phase `{0}` has start after end")]
    Inverted(String),
    #[error("duplicate phase name `{0}`")]
    DuplicateName(String),
    #[error("phases `{0}` and `{1}` overlap or are out of order")]
    Overlap(String, String),
    #[error("phase `{0}` extends outside the study window")]
    OutsideWindow(String),
    #[error("baseline phase `{0}` must exist and be first")]
    Baseline(String),
    #[error("cannot parse phase spec `{0}`: expected name=YYYY-MM-DD:YYYY-MM-DD")]
    Syntax(String),
}

#[derive(Debug, Error)]
pub enum RainfallParseError {
    #[error("rainfall CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("rainfall CSV line {line}: bad date `{value}`")]
    BadDate { line: u64, value: String },
    #[error("rainfall CSV line {line}: bad amount `{value}`")]
    BadAmount { line: u64, value: String },
}

/// Crate-wide error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Stopwords(#[from] StopwordError),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Rainfall(#[from] RainfallParseError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn in_file(path: impl AsRef<std::path::Path>, source: impl Into<Error>) -> Self {
        Error::InFile {
            path: path.as_ref().display().to_string(),
            source: Box::new(source.into()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
