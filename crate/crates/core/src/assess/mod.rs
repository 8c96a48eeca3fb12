//! Impact analyses over mapped records: phase-normalized intensity, per-phase
//! point distributions, top terms, and the daily tweet/rainfall overlay.

pub mod geo;
pub mod intensity;
pub mod overlay;
pub mod phase;
pub mod topics;

pub use geo::{
    geo_features, haversine_m, point_to_polyline_distance, GeoFeatureSet, GeoPoint, EARTH_RADIUS_M,
};
pub use intensity::{intensity_table, write_intensity_csv, IntensityRow, Rational};
pub use overlay::{overlay_series, parse_rainfall_csv, write_overlay_csv, OverlayRow};
pub use phase::{assign_phase, Phase, PhaseConfig};
pub use topics::{top_terms, write_topics_csv, RankedTerm, TopicRow};
