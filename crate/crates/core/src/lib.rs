//! Multibeam GEO satellite traffic simulator.
//!
//! The crate turns three demand sources (population rasters for fixed
//! satellite service, flight tracks, vessel tracks) and a sampled multibeam
//! antenna pattern into
//!
//! * a per-terminal traffic matrix: user, serving beam, location, traffic
//!   type and demand ([`traffic::TrafficMatrix`]), and
//! * a per-terminal complex channel matrix with one coefficient per beam
//!   ([`linkbudget::ChannelMatrix`]),
//!
//! plus the analyses built on top of them: hourly demand profiles,
//! hot/warm/cold beam classification and inter-beam interference sweeps.
//!
//! The pipeline stages map onto modules:
//!
//! | stage | module |
//! |-------|--------|
//! | geodesy, slant range, free-space path loss | [`geo`] |
//! | Delaunay (paraboloid lifting), hulls, point-in-polygon | [`geometry`] |
//! | beam pattern file, -3 dB footprints | [`pattern`] |
//! | dataset loaders and preprocessing | [`ingest`] |
//! | synthetic dataset generators | [`synth`] |
//! | terminal-to-beam association | [`traffic`] |
//! | channel coefficients, interference | [`linkbudget`] |
//! | profiles, classification, sweeps | [`analysis`] |
//! | file-level commands behind the `beamsim` binary | [`commands`] |
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod analysis;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod geo;
pub mod geometry;
pub mod ingest;
pub mod linkbudget;
pub mod pattern;
pub mod synth;
pub mod traffic;

pub use error::{Error, Result};
pub use geo::{GeoPoint, ScenarioConfig};
