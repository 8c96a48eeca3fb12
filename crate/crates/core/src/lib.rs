//! Disaster-impact assessment for named highway corridors from geotagged
//! microblog posts.
//!
//! The pipeline reads JSON Lines records ([`ingest`]), keeps those inside a
//! study bounding box and date window, cleans their text into ordered tokens
//! ([`clean`]), relates each post to highways through a lexicon of direct and
//! indirect search phrases ([`lexicon`], [`mapper`]) and reports per-phase
//! intensity, point distributions and top terms ([`assess`]).

pub mod assess;
pub mod clean;
pub mod cli;
pub mod error;
pub mod ingest;
pub mod lexicon;
pub mod mapper;
pub mod pipeline;

pub use error::{Error, Result};
