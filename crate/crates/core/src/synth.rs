//! Seeded synthetic inputs standing in for measured beam patterns,
//! population rasters and flight / vessel position feeds.
//!
//! Every generator is a pure function of its parameters and seed and
//! returns file contents in the formats read by [`crate::pattern`] and
//! [`crate::ingest`]. Floats are pre-rounded to the canonical 9-digit form
//! so a generated pattern survives a write/parse round trip unchanged.

use chrono::{Duration, TimeZone, Utc};
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{canonical, round_canonical};
use crate::geo::GeoPoint;
use crate::ingest::BoundingBox;
use crate::pattern::{pattern_to_string, BeamPattern, SamplePoint};

/// Region generated coordinates must stay within.
pub const COVERAGE: BoundingBox = BoundingBox {
    lat_min: 25.0,
    lat_max: 80.0,
    lon_min: -40.0,
    lon_max: 50.0,
};

fn check_bbox(bbox: &BoundingBox) -> Result<()> {
    let inside = bbox.lat_min >= COVERAGE.lat_min
        && bbox.lat_max <= COVERAGE.lat_max
        && bbox.lon_min >= COVERAGE.lon_min
        && bbox.lon_max <= COVERAGE.lon_max
        && bbox.lat_min < bbox.lat_max
        && bbox.lon_min < bbox.lon_max;
    if inside {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "bounding box {bbox:?} must be non-empty and within lat [25, 80] x lon [-40, 50]"
        )))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")))
    }
}

/// Circularly symmetric beam whose gain falls off quadratically in dB
/// (Gaussian in linear power) with planar degree distance from its centre,
/// down to a sidelobe floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBeam {
    pub center: GeoPoint,
    pub peak_gain_db: f64,
    pub radius_3db_deg: f64,
    /// Gain floor, dB below the peak.
    pub floor_drop_db: f64,
}

impl GaussianBeam {
    pub fn gain_db(&self, p: GeoPoint) -> f64 {
        let d2 = (p.lat() - self.center.lat()).powi(2) + (p.lon() - self.center.lon()).powi(2);
        let drop = 3.0 * d2 / (self.radius_3db_deg * self.radius_3db_deg);
        self.peak_gain_db - drop.min(self.floor_drop_db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternParams {
    pub beams: usize,
    pub center_lat: f64,
    pub center_lon: f64,
    /// Distance between neighbouring beam centres on the hexagonal layout.
    pub spacing_deg: f64,
    pub radius_3db_deg: f64,
    pub peak_gain_db: f64,
    /// Peak gains vary uniformly by up to this much per beam.
    pub peak_jitter_db: f64,
    pub floor_drop_db: f64,
    pub grid_step_deg: f64,
    /// Grid extent beyond the outermost beam centre.
    pub margin_deg: f64,
}

impl Default for PatternParams {
    fn default() -> Self {
        PatternParams {
            beams: 7,
            center_lat: 50.0,
            center_lon: 10.0,
            spacing_deg: 2.0,
            radius_3db_deg: 1.2,
            peak_gain_db: 50.0,
            peak_jitter_db: 0.5,
            floor_drop_db: 30.0,
            grid_step_deg: 0.1,
            margin_deg: 2.0,
        }
    }
}

impl PatternParams {
    fn validate(&self) -> Result<()> {
        if self.beams == 0 {
            return Err(Error::InvalidParams("beams must be >= 1".into()));
        }
        positive("spacing_deg", self.spacing_deg)?;
        positive("radius_3db_deg", self.radius_3db_deg)?;
        positive("grid_step_deg", self.grid_step_deg)?;
        positive("floor_drop_db", self.floor_drop_db)?;
        if !(self.margin_deg >= 0.0 && self.peak_jitter_db >= 0.0 && self.peak_gain_db.is_finite()) {
            return Err(Error::InvalidParams("margin, jitter and peak gain must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// First `n` cells of a hexagonal spiral, as (east, north) multiples of
/// the spacing.
pub fn hex_layout(n: usize) -> Vec<(f64, f64)> {
    const DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let mut axial = vec![(0i64, 0i64)];
    let mut ring = 1;
    while axial.len() < n {
        // start at the ring's south-east corner and walk its six sides
        let (mut q, mut r) = (ring * DIRS[4].0, ring * DIRS[4].1);
        for dir in DIRS {
            for _ in 0..ring {
                axial.push((q, r));
                q += dir.0;
                r += dir.1;
            }
        }
        ring += 1;
    }
    axial.truncate(n);
    axial
        .into_iter()
        .map(|(q, r)| (q as f64 + r as f64 / 2.0, r as f64 * 3f64.sqrt() / 2.0))
        .collect()
}

/// Hexagonal multibeam pattern on a regular lat/lon grid, with the beam
/// definitions used to build it.
pub fn gaussian_pattern(params: &PatternParams, seed: u64) -> Result<(BeamPattern, Vec<GaussianBeam>)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beams: Vec<GaussianBeam> = hex_layout(params.beams)
        .into_iter()
        .map(|(east, north)| {
            let jitter = if params.peak_jitter_db > 0.0 {
                rng.gen_range(-params.peak_jitter_db..=params.peak_jitter_db)
            } else {
                0.0
            };
            Ok(GaussianBeam {
                center: GeoPoint::new(
                    params.center_lat + north * params.spacing_deg,
                    params.center_lon + east * params.spacing_deg,
                )?,
                peak_gain_db: round_canonical(params.peak_gain_db + jitter),
                radius_3db_deg: params.radius_3db_deg,
                floor_drop_db: params.floor_drop_db,
            })
        })
        .collect::<Result<_>>()?;

    let lat_lo = beams.iter().map(|b| b.center.lat()).fold(f64::INFINITY, f64::min) - params.margin_deg;
    let lat_hi = beams.iter().map(|b| b.center.lat()).fold(f64::NEG_INFINITY, f64::max) + params.margin_deg;
    let lon_lo = beams.iter().map(|b| b.center.lon()).fold(f64::INFINITY, f64::min) - params.margin_deg;
    let lon_hi = beams.iter().map(|b| b.center.lon()).fold(f64::NEG_INFINITY, f64::max) + params.margin_deg;
    check_bbox(&BoundingBox {
        lat_min: lat_lo,
        lat_max: lat_hi,
        lon_min: lon_lo,
        lon_max: lon_hi,
    })?;

    // grid anchored on the layout centre so that beam 1's boresight is a sample
    let step = params.grid_step_deg;
    let axis = |lo: f64, hi: f64, anchor: f64| -> Vec<f64> {
        let first = ((lo - anchor) / step).ceil() as i64;
        let last = ((hi - anchor) / step).floor() as i64;
        (first..=last).map(|k| round_canonical(anchor + k as f64 * step)).collect()
    };
    let lats = axis(lat_lo, lat_hi, params.center_lat);
    let lons = axis(lon_lo, lon_hi, params.center_lon);
    let mut grid = Vec::with_capacity(lats.len() * lons.len());
    for &lat in &lats {
        for &lon in &lons {
            grid.push(GeoPoint::new(lat, lon)?);
        }
    }

    let tau = std::f64::consts::TAU;
    let mut samples = Vec::with_capacity(beams.len());
    for beam in &beams {
        let row = grid
            .iter()
            .map(|&p| {
                let mut phase = round_canonical(rng.gen_range(0.0..tau));
                if phase >= tau {
                    phase = 0.0;
                }
                SamplePoint::new(p, round_canonical(beam.gain_db(p)), phase)
            })
            .collect::<Result<Vec<_>>>()?;
        samples.push(row);
    }
    Ok((BeamPattern::new(samples)?, beams))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationParams {
    pub bbox: BoundingBox,
    pub cell_deg: f64,
    pub cities: usize,
    /// Mean rural population per cell.
    pub rural_per_cell: f64,
    pub city_peak: f64,
    pub city_sigma_deg: f64,
}

impl Default for PopulationParams {
    fn default() -> Self {
        PopulationParams {
            bbox: BoundingBox {
                lat_min: 46.0,
                lat_max: 54.0,
                lon_min: 6.0,
                lon_max: 14.0,
            },
            cell_deg: 0.25,
            cities: 6,
            rural_per_cell: 1500.0,
            city_peak: 250_000.0,
            city_sigma_deg: 0.3,
        }
    }
}

pub fn population(params: &PopulationParams, seed: u64) -> Result<String> {
    check_bbox(&params.bbox)?;
    positive("cell_deg", params.cell_deg)?;
    positive("city_sigma_deg", params.city_sigma_deg)?;
    if !(params.rural_per_cell >= 0.0 && params.city_peak >= 0.0) {
        return Err(Error::InvalidParams("populations must be >= 0".into()));
    }
    let b = params.bbox;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cities: Vec<(f64, f64, f64)> = (0..params.cities)
        .map(|_| {
            (
                rng.gen_range(b.lat_min..b.lat_max),
                rng.gen_range(b.lon_min..b.lon_max),
                params.city_peak * rng.gen_range(0.3..1.0),
            )
        })
        .collect();
    let rows = ((b.lat_max - b.lat_min) / params.cell_deg).floor() as usize;
    let cols = ((b.lon_max - b.lon_min) / params.cell_deg).floor() as usize;
    let mut out = String::from("lat_deg,lon_deg,population\n");
    for i in 0..rows {
        for j in 0..cols {
            let lat = round_canonical(b.lat_min + (i as f64 + 0.5) * params.cell_deg);
            let lon = round_canonical(b.lon_min + (j as f64 + 0.5) * params.cell_deg);
            let mut pop = params.rural_per_cell * rng.gen_range(0.0..2.0);
            for &(clat, clon, peak) in &cities {
                let d2 = (lat - clat).powi(2) + (lon - clon).powi(2);
                pop += peak * (-d2 / (2.0 * params.city_sigma_deg.powi(2))).exp();
            }
            out.push_str(&format!("{},{},{}\n", canonical(lat), canonical(lon), canonical(pop.round())));
        }
    }
    Ok(out)
}

/// Relative number of airborne flights by hour of day: a morning and an
/// evening bank over a night-time floor.
pub fn aero_intensity(hour: f64) -> f64 {
    let bump = |center: f64, width: f64| (-(hour - center).powi(2) / (2.0 * width * width)).exp();
    0.15 + bump(8.0, 1.5) + 0.9 * bump(18.0, 1.5)
}

/// Relative number of reporting vessels by hour of day: rising to a
/// morning peak, then decaying slowly towards midnight.
pub fn maritime_intensity(hour: f64) -> f64 {
    const PEAK: f64 = 8.5;
    let shape = if hour <= PEAK {
        (-(hour - PEAK).powi(2) / (2.0 * 2.5 * 2.5)).exp()
    } else {
        (-(hour - PEAK) / 7.0).exp()
    };
    0.2 + 0.8 * shape
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackParams {
    pub count: usize,
    pub bbox: BoundingBox,
    /// UTC day the tracks fall on, as `(year, month, day)`.
    pub day: (i32, u32, u32),
}

impl TrackParams {
    pub fn new(count: usize, bbox: BoundingBox) -> Self {
        TrackParams {
            count,
            bbox,
            day: (2020, 6, 1),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParams("count must be >= 1".into()));
        }
        check_bbox(&self.bbox)
    }

    fn midnight(&self) -> Result<chrono::DateTime<Utc>> {
        let (y, m, d) = self.day;
        Utc.with_ymd_and_hms(y, m, d, 0, 0, 0)
            .single()
            .ok_or_else(|| Error::InvalidParams(format!("bad day {:?}", self.day)))
    }
}

struct TrackRecord {
    seconds: i64,
    id: String,
    lat: f64,
    lon: f64,
}

fn render_tracks(header: &str, params: &TrackParams, mut recs: Vec<TrackRecord>) -> Result<String> {
    let midnight = params.midnight()?;
    recs.sort_by(|a, b| a.seconds.cmp(&b.seconds).then_with(|| a.id.cmp(&b.id)));
    let mut out = String::from(header);
    for r in recs {
        let ts = midnight + Duration::seconds(r.seconds);
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.id,
            ts.format("%Y-%m-%dT%H:%M:%SZ"),
            canonical(r.lat),
            canonical(r.lon)
        ));
    }
    Ok(out)
}

fn clamp_to(b: &BoundingBox, lat: f64, lon: f64) -> (f64, f64) {
    (lat.clamp(b.lat_min, b.lat_max), lon.clamp(b.lon_min, b.lon_max))
}

/// Flight position reports: each flight departs in an hour drawn from
/// [`aero_intensity`], flies a straight track for 20 to 90 minutes and
/// reports 3 to 8 positions.
pub fn aero_tracks(params: &TrackParams, seed: u64) -> Result<String> {
    params.validate()?;
    let b = params.bbox;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..24).map(|h| aero_intensity(h as f64 + 0.5)).collect();
    let hours = WeightedIndex::new(&weights).expect("positive weights");
    let mut recs = Vec::new();
    for f in 0..params.count {
        let id = format!("FL{f:05}");
        let start = hours.sample(&mut rng) as i64 * 3600 + rng.gen_range(0..3600);
        let duration = rng.gen_range(20 * 60..=90 * 60);
        let (lat0, lon0) = (rng.gen_range(b.lat_min..b.lat_max), rng.gen_range(b.lon_min..b.lon_max));
        let heading: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let speed_deg_per_s = 0.12 / 60.0;
        let n = rng.gen_range(3..=8);
        for _ in 0..n {
            let dt = rng.gen_range(0..=duration);
            let seconds = (start + dt).min(24 * 3600 - 1);
            let dist = speed_deg_per_s * dt as f64;
            let (lat, lon) = clamp_to(&b, lat0 + dist * heading.sin(), lon0 + dist * heading.cos());
            recs.push(TrackRecord {
                seconds,
                id: id.clone(),
                lat: round_canonical(lat),
                lon: round_canonical(lon),
            });
        }
    }
    render_tracks("flight_id,timestamp_iso8601_utc,lat_deg,lon_deg\n", params, recs)
}

/// Vessel position reports: each ship reports during hour `h` with
/// probability proportional to [`maritime_intensity`], 1 to 4 times,
/// drifting slowly from a fixed base position.
pub fn maritime_tracks(params: &TrackParams, seed: u64) -> Result<String> {
    params.validate()?;
    let b = params.bbox;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let peak = (0..24)
        .map(|h| maritime_intensity(h as f64 + 0.5))
        .fold(0.0, f64::max);
    let mut recs = Vec::new();
    for s in 0..params.count {
        let id = format!("SH{s:05}");
        let (base_lat, base_lon) = (rng.gen_range(b.lat_min..b.lat_max), rng.gen_range(b.lon_min..b.lon_max));
        for h in 0..24i64 {
            if rng.gen::<f64>() >= maritime_intensity(h as f64 + 0.5) / peak {
                continue;
            }
            let n = rng.gen_range(1..=4);
            let mut minutes: Vec<i64> = (0..60).collect();
            minutes.shuffle(&mut rng);
            for &m in minutes.iter().take(n) {
                let drift = 0.01 * (h * 60 + m) as f64 / 60.0;
                let (lat, lon) = clamp_to(&b, base_lat + drift * 0.3, base_lon + drift);
                recs.push(TrackRecord {
                    seconds: h * 3600 + m * 60 + rng.gen_range(0..60),
                    id: id.clone(),
                    lat: round_canonical(lat),
                    lon: round_canonical(lon),
                });
            }
        }
    }
    render_tracks("ship_id,timestamp_iso8601_utc,lat_deg,lon_deg\n", params, recs)
}

/// What to generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SynthSpec {
    Pattern(PatternParams),
    Population(PopulationParams),
    Aero(TrackParams),
    Maritime(TrackParams),
}

/// File contents for `spec`; identical for identical `(spec, seed)`.
pub fn generate(spec: &SynthSpec, seed: u64) -> Result<String> {
    match spec {
        SynthSpec::Pattern(p) => gaussian_pattern(p, seed).map(|(pattern, _)| pattern_to_string(&pattern)),
        SynthSpec::Population(p) => population(p, seed),
        SynthSpec::Aero(p) => aero_tracks(p, seed),
        SynthSpec::Maritime(p) => maritime_tracks(p, seed),
    }
}
