use std::fmt;
use std::io::Write;

use super::phase::PhaseConfig;
use crate::ingest::DailySeries;

/// Non-negative fraction kept in lowest terms.
///
/// Intensities are computed as one exact fraction and rounded once, so equal
/// fractions always produce the same `f64` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `None` when `other` is zero.
    pub fn checked_div(&self, other: &Rational) -> Option<Rational> {
        (!other.is_zero()).then(|| Rational::new(self.num * other.den, self.den * other.num))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntensityRow {
    pub highway_id: String,
    pub phase_name: String,
    pub tweet_count: u64,
    pub days: u64,
    /// tweet_count / days.
    pub avg_daily: Rational,
    /// avg_daily over the baseline phase's avg_daily; `None` when that is zero.
    pub intensity: Option<Rational>,
}

/// One row per (highway, phase), highways in input order and phases in config order.
pub fn intensity_table(per_highway: &[(String, DailySeries)], phases: &PhaseConfig) -> Vec<IntensityRow> {
    let mut rows = Vec::with_capacity(per_highway.len() * phases.phases().len());
    for (highway, series) in per_highway {
        let avg = |start, end, days: u64| {
            let count = series.sum_range(start, end);
            (count, Rational::new(count as u128, days as u128))
        };
        let b = phases.baseline();
        let (_, baseline_avg) = avg(b.start, b.end, b.days());
        for p in phases.phases() {
            let (tweet_count, avg_daily) = avg(p.start, p.end, p.days());
            rows.push(IntensityRow {
                highway_id: highway.clone(),
                phase_name: p.name.clone(),
                tweet_count,
                days: p.days(),
                avg_daily,
                intensity: avg_daily.checked_div(&baseline_avg),
            });
        }
    }
    rows
}

pub fn write_intensity_csv<W: Write>(out: W, rows: &[IntensityRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["highway", "phase", "tweet_count", "avg_daily", "intensity"])?;
    for r in rows {
        w.write_record([
            r.highway_id.clone(),
            r.phase_name.clone(),
            r.tweet_count.to_string(),
            r.avg_daily.to_string(),
            r.intensity.map_or_else(|| "NA".to_string(), |i| i.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
