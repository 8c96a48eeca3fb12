//! Corpus ingestion: JSON Lines parsing, spatiotemporal filtering and daily bucketing.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use chrono::{DateTime, Days, FixedOffset, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::IngestError;

/// One geotagged post.
#[derive(Clone, Debug, PartialEq)]
pub struct TweetRecord {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub lat: f64,
    pub lon: f64,
    pub text: String,
}

impl TweetRecord {
    /// Calendar date of the record in the study timezone.
    pub fn local_date(&self, offset: FixedOffset) -> NaiveDate {
        self.timestamp.with_timezone(&offset).date_naive()
    }

    /// Serializes the record as one JSON Lines row (no trailing newline).
    pub fn to_json_line(&self) -> String {
        let wire = WireRecord {
            id: &self.id,
            created_at: self
                .timestamp
                .to_rfc3339_opts(chrono::SecondsFormat::AutoSi, true),
            lat: self.lat,
            lon: self.lon,
            text: &self.text,
        };
        serde_json::to_string(&wire).expect("record serialization is infallible")
    }
}

#[derive(Serialize)]
struct WireRecord<'a> {
    id: &'a str,
    created_at: String,
    lat: f64,
    lon: f64,
    text: &'a str,
}

/// The record field an ingest error refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Id,
    CreatedAt,
    Lat,
    Lon,
    Text,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Id => "id",
            Field::CreatedAt => "created_at",
            Field::Lat => "lat",
            Field::Lon => "lon",
            Field::Text => "text",
        })
    }
}

/// Parses and validates one JSON Lines row.
pub fn parse_record(line: &str) -> Result<TweetRecord, IngestError> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| IngestError::MalformedLine(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| IngestError::MalformedLine("expected a JSON object".into()))?;

    let field = |f: Field| -> Result<&Value, IngestError> {
        match obj.get(&f.to_string()) {
            None | Some(Value::Null) => Err(IngestError::MissingField(f)),
            Some(v) => Ok(v),
        }
    };
    let string = |f: Field| -> Result<&str, IngestError> {
        field(f)?
            .as_str()
            .ok_or_else(|| IngestError::MalformedLine(format!("field `{f}` must be a string")))
    };
    let number = |f: Field| -> Result<f64, IngestError> {
        field(f)?
            .as_f64()
            .ok_or_else(|| IngestError::MalformedLine(format!("field `{f}` must be a number")))
    };

    let id = string(Field::Id)?;
    if id.is_empty() {
        return Err(IngestError::MissingField(Field::Id));
    }
    let created_at = string(Field::CreatedAt)?;
    let timestamp = DateTime::parse_from_rfc3339(created_at)
        .map_err(|_| IngestError::BadTimestamp(created_at.to_string()))?
        .with_timezone(&Utc);
    let lat = number(Field::Lat)?;
    if !(-90.0..=90.0).contains(&lat) {
        return Err(IngestError::OutOfRangeCoordinate(Field::Lat, lat));
    }
    let lon = number(Field::Lon)?;
    if !(-180.0..=180.0).contains(&lon) {
        return Err(IngestError::OutOfRangeCoordinate(Field::Lon, lon));
    }
    let text = string(Field::Text)?;

    Ok(TweetRecord {
        id: id.to_string(),
        timestamp,
        lat,
        lon,
        text: text.to_string(),
    })
}

/// Latitude/longitude rectangle, inclusive on all sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BoundingBox {
    /// The Houston study area.
    pub const HOUSTON: BoundingBox = BoundingBox {
        lat_min: 29.427926,
        lat_max: 30.157266,
        lon_min: -95.902705,
        lon_max: -94.997805,
    };

    pub fn new(lat_min: f64, lat_max: f64, lon_min: f64, lon_max: f64) -> Result<Self, IngestError> {
        let bbox = BoundingBox {
            lat_min,
            lat_max,
            lon_min,
            lon_max,
        };
        bbox.validate()?;
        Ok(bbox)
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        let legal_lat = |v: f64| (-90.0..=90.0).contains(&v);
        let legal_lon = |v: f64| (-180.0..=180.0).contains(&v);
        if !(legal_lat(self.lat_min) && legal_lat(self.lat_max))
            || !(legal_lon(self.lon_min) && legal_lon(self.lon_max))
            || self.lat_min >= self.lat_max
            || self.lon_min >= self.lon_max
        {
            return Err(IngestError::InvalidBoundingBox(*self));
        }
        Ok(())
    }

    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        (self.lat_min..=self.lat_max).contains(&lat) && (self.lon_min..=self.lon_max).contains(&lon)
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.lat_min, self.lat_max, self.lon_min, self.lon_max
        )
    }
}

/// Inclusive range of calendar dates in a fixed-offset study timezone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub offset: FixedOffset,
}

impl TimeWindow {
    pub fn new(start: NaiveDate, end: NaiveDate, offset: FixedOffset) -> Result<Self, IngestError> {
        if start > end {
            return Err(IngestError::InvalidWindow { start, end });
        }
        Ok(TimeWindow { start, end, offset })
    }

    /// Aug 23 – Sep 5 2017 at UTC−05:00.
    pub fn harvey() -> Self {
        TimeWindow {
            start: NaiveDate::from_ymd_opt(2017, 8, 23).unwrap(),
            end: NaiveDate::from_ymd_opt(2017, 9, 5).unwrap(),
            offset: default_offset(),
        }
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    pub fn len_days(&self) -> u64 {
        (self.end - self.start).num_days() as u64 + 1
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> {
        let start = self.start;
        (0..self.len_days()).map(move |i| start + Days::new(i))
    }
}

/// Houston summer time, UTC−05:00.
pub fn default_offset() -> FixedOffset {
    FixedOffset::west_opt(5 * 3600).unwrap()
}

/// Records whose coordinates fall in `bbox` and whose local date falls in `window`, in input order.
pub fn filter_records(
    records: &[TweetRecord],
    bbox: &BoundingBox,
    window: &TimeWindow,
) -> Vec<TweetRecord> {
    records
        .iter()
        .filter(|r| retained(r, bbox, window))
        .cloned()
        .collect()
}

pub(crate) fn retained(record: &TweetRecord, bbox: &BoundingBox, window: &TimeWindow) -> bool {
    bbox.contains(record.lat, record.lon) && window.contains(record.local_date(window.offset))
}

/// Zero-filled per-day counts over a window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DailySeries {
    counts: BTreeMap<NaiveDate, u64>,
}

impl DailySeries {
    /// All dates of `window` with zero counts.
    pub fn zeroed(window: &TimeWindow) -> Self {
        DailySeries {
            counts: window.dates().map(|d| (d, 0)).collect(),
        }
    }

    /// Builds a series from explicit (date, count) pairs.
    pub fn from_counts(counts: impl IntoIterator<Item = (NaiveDate, u64)>) -> Self {
        DailySeries {
            counts: counts.into_iter().collect(),
        }
    }

    /// Increments `date` if it belongs to the series. Returns whether it did.
    pub fn add(&mut self, date: NaiveDate, n: u64) -> bool {
        match self.counts.get_mut(&date) {
            Some(c) => {
                *c += n;
                true
            }
            None => false,
        }
    }

    /// Adds another series' counts date by date; dates absent from `self` are inserted.
    pub fn merge(&mut self, other: &DailySeries) {
        for (d, n) in &other.counts {
            *self.counts.entry(*d).or_insert(0) += n;
        }
    }

    pub fn get(&self, date: NaiveDate) -> Option<u64> {
        self.counts.get(&date).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, u64)> + '_ {
        self.counts.iter().map(|(d, c)| (*d, *c))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Sum of counts over the inclusive date range.
    pub fn sum_range(&self, start: NaiveDate, end: NaiveDate) -> u64 {
        self.counts.range(start..=end).map(|(_, c)| c).sum()
    }

    /// Writes `date,count` CSV with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["date", "count"])?;
        for (d, c) in self.iter() {
            w.write_record([d.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-day record counts over the window, zero-filled. Records outside the window are ignored.
pub fn daily_counts<'a, I>(records: I, window: &TimeWindow) -> DailySeries
where
    I: IntoIterator<Item = &'a TweetRecord>,
{
    let mut series = DailySeries::zeroed(window);
    for r in records {
        series.add(r.local_date(window.offset), 1);
    }
    series
}

/// How `read_records` treats unparseable lines.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Skip bad lines and count them.
    #[default]
    Lenient,
    /// Abort at the first bad line.
    Strict,
}

/// Line accounting from a JSON Lines read.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReadStats {
    pub lines: u64,
    pub blank: u64,
    pub parsed: u64,
    pub skipped: u64,
    /// First few skip diagnostics as (1-based line number, message).
    pub skip_samples: Vec<(u64, String)>,
}

const SKIP_SAMPLE_LIMIT: usize = 10;

/// Reads every record of a JSON Lines stream. Blank lines are ignored.
pub fn read_records<R: BufRead>(
    reader: R,
    mode: ParseMode,
) -> Result<(Vec<TweetRecord>, ReadStats), IngestError> {
    let mut stats = ReadStats::default();
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line.map_err(|e| IngestError::Io(e.to_string()))?;
        stats.lines += 1;
        if line.trim().is_empty() {
            stats.blank += 1;
            continue;
        }
        match parse_record(&line) {
            Ok(r) => {
                stats.parsed += 1;
                records.push(r);
            }
            Err(e) if mode == ParseMode::Lenient => {
                stats.skipped += 1;
                if stats.skip_samples.len() < SKIP_SAMPLE_LIMIT {
                    stats.skip_samples.push((line_no, e.to_string()));
                }
            }
            Err(e) => {
                return Err(IngestError::AtLine {
                    line: line_no,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok((records, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn date(m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2017, m, d).unwrap()
    }

    fn rec(id: &str, ts: &str, lat: f64, lon: f64) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            timestamp: DateTime::parse_from_rfc3339(ts).unwrap().with_timezone(&Utc),
            lat,
            lon,
            text: String::new(),
        }
    }

    #[test]
    fn parses_valid_line() {
        let r = parse_record(
            r#"{"id":"1","created_at":"2017-08-27T12:00:00Z","lat":29.76,"lon":-95.37,"text":"flooding on I-45"}"#,
        )
        .unwrap();
        assert_eq!(r.id, "1");
        assert_eq!(r.timestamp, Utc.with_ymd_and_hms(2017, 8, 27, 12, 0, 0).unwrap());
        assert_eq!((r.lat, r.lon), (29.76, -95.37));
        assert_eq!(r.text, "flooding on I-45");
    }

    #[test]
    fn rejects_bad_lines() {
        let bad_lat = r#"{"id":"2","created_at":"2017-08-27T12:00:00Z","lat":99.0,"lon":-95.37,"text":"x"}"#;
        assert!(matches!(
            parse_record(bad_lat),
            Err(IngestError::OutOfRangeCoordinate(Field::Lat, _))
        ));
        assert!(matches!(parse_record("not json"), Err(IngestError::MalformedLine(_))));
        assert!(matches!(
            parse_record(r#"{"id":"2","lat":1,"lon":1,"text":"x"}"#),
            Err(IngestError::MissingField(Field::CreatedAt))
        ));
        assert!(matches!(
            parse_record(r#"{"id":"","created_at":"2017-08-27T12:00:00Z","lat":1,"lon":1,"text":"x"}"#),
            Err(IngestError::MissingField(Field::Id))
        ));
        assert!(matches!(
            parse_record(r#"{"id":"2","created_at":"yesterday","lat":1,"lon":1,"text":"x"}"#),
            Err(IngestError::BadTimestamp(_))
        ));
        assert!(matches!(
            parse_record(r#"{"id":"2","created_at":"2017-08-27T12:00:00Z","lat":1,"lon":-181,"text":"x"}"#),
            Err(IngestError::OutOfRangeCoordinate(Field::Lon, _))
        ));
        assert!(matches!(parse_record("[1,2]"), Err(IngestError::MalformedLine(_))));
    }

    #[test]
    fn filters_by_box_and_window() {
        let window = TimeWindow::harvey();
        let bbox = BoundingBox::HOUSTON;
        let kept = rec("a", "2017-08-27T12:00:00Z", 29.76, -95.37);
        let east = rec("b", "2017-08-27T12:00:00Z", 29.76, -94.50);
        let late = rec("c", "2017-09-06T12:00:00Z", 29.76, -95.37);
        let out = filter_records(&[kept.clone(), east, late], &bbox, &window);
        assert_eq!(out, vec![kept]);
    }

    #[test]
    fn window_endpoints_are_inclusive() {
        let window = TimeWindow::harvey();
        assert_eq!(window.len_days(), 14);
        let first = rec("a", "2017-08-23T05:00:00Z", 29.76, -95.37);
        let last = rec("b", "2017-09-06T04:59:59Z", 29.76, -95.37);
        let before = rec("c", "2017-08-23T04:59:59Z", 29.76, -95.37);
        let out = filter_records(&[first, last, before], &BoundingBox::HOUSTON, &window);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn daily_counts_zero_fill() {
        let window = TimeWindow::new(date(8, 23), date(8, 25), default_offset()).unwrap();
        let empty = daily_counts(&[], &window);
        assert_eq!(
            empty.iter().collect::<Vec<_>>(),
            vec![(date(8, 23), 0), (date(8, 24), 0), (date(8, 25), 0)]
        );

        let recs = [
            rec("1", "2017-08-24T12:00:00Z", 29.7, -95.3),
            rec("2", "2017-08-24T13:00:00Z", 29.7, -95.3),
            rec("3", "2017-08-24T14:00:00Z", 29.7, -95.3),
            rec("4", "2017-08-25T14:00:00Z", 29.7, -95.3),
        ];
        let s = daily_counts(&recs, &window);
        assert_eq!(
            s.iter().collect::<Vec<_>>(),
            vec![(date(8, 23), 0), (date(8, 24), 3), (date(8, 25), 1)]
        );
        assert_eq!(s.total(), 4);
    }

    #[test]
    fn bucketing_uses_study_offset() {
        // 02:00Z on Aug 24 is 21:00 on Aug 23 at UTC-5.
        let r = rec("1", "2017-08-24T02:00:00Z", 29.7, -95.3);
        let window = TimeWindow::new(date(8, 23), date(8, 25), default_offset()).unwrap();
        let s = daily_counts(std::slice::from_ref(&r), &window);
        assert_eq!(s.get(date(8, 23)), Some(1));
        assert_eq!(s.get(date(8, 24)), Some(0));
    }

    #[test]
    fn window_and_bbox_validation() {
        assert!(TimeWindow::new(date(8, 25), date(8, 23), default_offset()).is_err());
        assert!(BoundingBox::new(30.0, 29.0, -96.0, -95.0).is_err());
        assert!(BoundingBox::new(29.0, 30.0, -95.0, -95.0).is_err());
        assert!(BoundingBox::new(29.0, 30.0, -96.0, -95.0).is_ok());
    }

    #[test]
    fn lenient_and_strict_reads() {
        let input = "\
{\"id\":\"1\",\"created_at\":\"2017-08-27T12:00:00Z\",\"lat\":29.76,\"lon\":-95.37,\"text\":\"a\"}

not json
{\"id\":\"2\",\"created_at\":\"2017-08-27T12:00:00Z\",\"lat\":29.76,\"lon\":-95.37,\"text\":\"b\"}
";
        let (recs, stats) = read_records(input.as_bytes(), ParseMode::Lenient).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(stats.lines, 4);
        assert_eq!(stats.blank, 1);
        assert_eq!(stats.skipped, 1);
        assert_eq!(stats.skip_samples[0].0, 3);

        let err = read_records(input.as_bytes(), ParseMode::Strict).unwrap_err();
        assert!(matches!(err, IngestError::AtLine { line: 3, .. }));
    }

    #[test]
    fn daily_csv_format() {
        let window = TimeWindow::new(date(8, 23), date(8, 24), default_offset()).unwrap();
        let mut s = DailySeries::zeroed(&window);
        s.add(date(8, 24), 7);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "date,count\n2017-08-23,0\n2017-08-24,7\n"
        );
    }
}
