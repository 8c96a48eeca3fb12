use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::NaiveDate;

use crate::error::RainfallParseError;
use crate::ingest::DailySeries;

#[derive(Clone, Debug, PartialEq)]
pub struct OverlayRow {
    pub date: NaiveDate,
    pub tweets: u64,
    pub rainfall_in: f64,
}

/// Reads `date,inches` rows after a header line.
pub fn parse_rainfall_csv<R: Read>(input: R) -> Result<BTreeMap<NaiveDate, f64>, RainfallParseError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let date_field = rec.get(0).unwrap_or("");
        let date = date_field
            .parse::<NaiveDate>()
            .map_err(|_| RainfallParseError::BadDate {
                line,
                value: date_field.to_string(),
            })?;
        let amount_field = rec.get(1).unwrap_or("");
        let inches = amount_field
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| RainfallParseError::BadAmount {
                line,
                value: amount_field.to_string(),
            })?;
        out.insert(date, inches);
    }
    Ok(out)
}

/// Pairs each series date with its rainfall; missing dates get 0.0 and a warning.
pub fn overlay_series(
    daily: &DailySeries,
    rainfall: &BTreeMap<NaiveDate, f64>,
) -> (Vec<OverlayRow>, Vec<String>) {
    let mut warnings = Vec::new();
    let rows = daily
        .iter()
        .map(|(date, tweets)| {
            let rainfall_in = rainfall.get(&date).copied().unwrap_or_else(|| {
                warnings.push(format!("no rainfall value for {date}; using 0"));
                0.0
            });
            OverlayRow {
                date,
                tweets,
                rainfall_in,
            }
        })
        .collect();
    (rows, warnings)
}

pub fn write_overlay_csv<W: Write>(out: W, rows: &[OverlayRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "tweets", "rainfall_in"])?;
    for r in rows {
        w.write_record([r.date.to_string(), r.tweets.to_string(), r.rainfall_in.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::TimeWindow;

    fn d(m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2017, m, day).unwrap()
    }

    #[test]
    fn pairs_counts_with_rainfall() {
        let daily = DailySeries::from_counts([(d(8, 23), 5)]);
        let rain = BTreeMap::from([(d(8, 23), 0.0)]);
        let (rows, warn) = overlay_series(&daily, &rain);
        assert_eq!(rows, vec![OverlayRow { date: d(8, 23), tweets: 5, rainfall_in: 0.0 }]);
        assert!(warn.is_empty());
    }

    #[test]
    fn missing_rainfall_fills_zero() {
        let daily = DailySeries::from_counts([(d(8, 23), 5), (d(8, 24), 2)]);
        let rain = BTreeMap::from([(d(8, 23), 1.5)]);
        let (rows, warn) = overlay_series(&daily, &rain);
        assert_eq!(rows[1], OverlayRow { date: d(8, 24), tweets: 2, rainfall_in: 0.0 });
        assert_eq!(warn.len(), 1);
    }

    #[test]
    fn one_row_per_window_day() {
        let daily = DailySeries::zeroed(&TimeWindow::harvey());
        let (rows, warn) = overlay_series(&daily, &BTreeMap::new());
        assert_eq!(rows.len(), 14);
        assert_eq!(warn.len(), 14);
    }

    #[test]
    fn rainfall_csv() {
        let m = parse_rainfall_csv("date,inches\n2017-08-26, 9.92\n2017-08-27,16.07\n".as_bytes()).unwrap();
        assert_eq!(m.get(&d(8, 27)), Some(&16.07));
        assert!(matches!(
            parse_rainfall_csv("date,inches\nAug 26,1\n".as_bytes()),
            Err(RainfallParseError::BadDate { line: 2, .. })
        ));
        assert!(matches!(
            parse_rainfall_csv("date,inches\n2017-08-26,lots\n".as_bytes()),
            Err(RainfallParseError::BadAmount { .. })
        ));
        assert!(matches!(
            parse_rainfall_csv("date,inches\n2017-08-26,-1\n".as_bytes()),
            Err(RainfallParseError::BadAmount { .. })
        ));
    }
}
