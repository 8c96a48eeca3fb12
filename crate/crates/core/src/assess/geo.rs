//! Point sets per highway and phase, GeoJSON export, and point-to-corridor distance.

use chrono::FixedOffset;
use serde::Serialize;

use super::phase::PhaseConfig;
use crate::error::GeoError;
use crate::ingest::TweetRecord;

/// Mean Earth radius in meters (IUGG).
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

#[derive(Clone, Debug, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
    pub record_id: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeoFeatureSet {
    pub highway_id: String,
    pub phase_name: String,
    pub points: Vec<GeoPoint>,
}

impl GeoFeatureSet {
    /// File name used for the set inside a `geo/` output directory.
    pub fn file_name(&self) -> String {
        let safe = |s: &str| -> String {
            s.chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
                .collect()
        };
        format!("{}_{}.geojson", safe(&self.highway_id), safe(&self.phase_name))
    }

    /// FeatureCollection of Point features, coordinates as `[lon, lat]`.
    pub fn to_geojson(&self) -> String {
        let fc = FeatureCollection {
            kind: "FeatureCollection",
            features: self
                .points
                .iter()
                .map(|p| Feature {
                    kind: "Feature",
                    geometry: Point {
                        kind: "Point",
                        coordinates: [p.lon, p.lat],
                    },
                    properties: Properties {
                        record_id: &p.record_id,
                    },
                })
                .collect(),
        };
        let mut s = serde_json::to_string(&fc).expect("GeoJSON serialization is infallible");
        s.push('\n');
        s
    }
}

/// One set per (highway, phase), empty sets included, points in record order.
/// Records outside every phase are left out.
pub fn geo_features(
    per_highway: &[(String, Vec<&TweetRecord>)],
    phases: &PhaseConfig,
    offset: FixedOffset,
) -> Vec<GeoFeatureSet> {
    let mut sets = Vec::with_capacity(per_highway.len() * phases.phases().len());
    for (highway, records) in per_highway {
        for phase in phases.phases() {
            let points = records
                .iter()
                .filter(|r| phase.contains(r.local_date(offset)))
                .map(|r| GeoPoint {
                    lat: r.lat,
                    lon: r.lon,
                    record_id: r.id.clone(),
                })
                .collect();
            sets.push(GeoFeatureSet {
                highway_id: highway.clone(),
                phase_name: phase.name.clone(),
                points,
            });
        }
    }
    sets
}

#[derive(Serialize)]
struct FeatureCollection<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    features: Vec<Feature<'a>>,
}

#[derive(Serialize)]
struct Feature<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    geometry: Point,
    properties: Properties<'a>,
}

#[derive(Serialize)]
struct Point {
    #[serde(rename = "type")]
    kind: &'static str,
    coordinates: [f64; 2],
}

#[derive(Serialize)]
struct Properties<'a> {
    record_id: &'a str,
}

/// Great-circle distance in meters between two (lat, lon) points.
pub fn haversine_m(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lat1, lon1) = (a.0.to_radians(), a.1.to_radians());
    let (lat2, lon2) = (b.0.to_radians(), b.1.to_radians());
    let h = ((lat2 - lat1) / 2.0).sin().powi(2)
        + lat1.cos() * lat2.cos() * ((lon2 - lon1) / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Closest point of segment `a..b` to `p`, found in an equirectangular
/// projection centered on the segment.
fn closest_on_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let k = ((a.0 + b.0) / 2.0).to_radians().cos();
    let (ax, ay) = (a.1 * k, a.0);
    let (dx, dy) = ((b.1 - a.1) * k, b.0 - a.0);
    let (px, py) = (p.1 * k - ax, p.0 - ay);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((px * dx + py * dy) / len2).clamp(0.0, 1.0)
    };
    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
}

/// Minimum distance in meters from `point` to any segment of `polyline`.
pub fn point_to_polyline_distance(point: (f64, f64), polyline: &[(f64, f64)]) -> Result<f64, GeoError> {
    if polyline.len() < 2 {
        return Err(GeoError::DegeneratePolyline(polyline.len()));
    }
    Ok(polyline
        .windows(2)
        .map(|seg| haversine_m(point, closest_on_segment(point, seg[0], seg[1])))
        .fold(f64::INFINITY, f64::min))
}
