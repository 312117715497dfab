//! Dataset loaders and the preprocessing rules applied on the way in.
//!
//! * Population rasters become FSS terminals: `floor(p / downscale)` per
//!   cell, suppressed in dense urban cells.
//! * Flight and vessel tracks are reduced to one terminal per id per hour,
//!   at the id's first position in that hour.
//! * Records outside the coverage box or without usable coordinates are
//!   dropped and counted.

use std::collections::BTreeMap;
use std::io::Read;

use chrono::{DateTime, Timelike, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::GeoPoint;

pub const POPULATION_HEADER: [&str; 3] = ["lat_deg", "lon_deg", "population"];
pub const AERO_HEADER: [&str; 4] = ["flight_id", "timestamp_iso8601_utc", "lat_deg", "lon_deg"];
pub const MARITIME_HEADER: [&str; 4] = ["ship_id", "timestamp_iso8601_utc", "lat_deg", "lon_deg"];

/// Traffic type, with the numeric code used in the traffic matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TerminalType {
    Fss = 1,
    Aero = 2,
    Maritime = 3,
}

impl TerminalType {
    pub const ALL: [TerminalType; 3] = [TerminalType::Fss, TerminalType::Aero, TerminalType::Maritime];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(TerminalType::Fss),
            2 => Some(TerminalType::Aero),
            3 => Some(TerminalType::Maritime),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TerminalType::Fss => "fss",
            TerminalType::Aero => "aero",
            TerminalType::Maritime => "maritime",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Terminal {
    pub id: String,
    pub location: GeoPoint,
    pub kind: TerminalType,
    pub demand_mbps: f64,
}

/// Demand present during one hour of the day.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DemandSnapshot {
    pub hour: u8,
    pub fss: Vec<Terminal>,
    pub aero: Vec<Terminal>,
    pub maritime: Vec<Terminal>,
}

impl DemandSnapshot {
    pub fn terminal_count(&self) -> usize {
        self.fss.len() + self.aero.len() + self.maritime.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl Default for BoundingBox {
    /// Europe-wide coverage: latitude 25..80, longitude -40..50.
    fn default() -> Self {
        BoundingBox {
            lat_min: 25.0,
            lat_max: 80.0,
            lon_min: -40.0,
            lon_max: 50.0,
        }
    }
}

impl BoundingBox {
    pub fn contains(&self, p: GeoPoint) -> bool {
        (self.lat_min..=self.lat_max).contains(&p.lat()) && (self.lon_min..=self.lon_max).contains(&p.lon())
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.lat_min < self.lat_max
            && self.lon_min < self.lon_max
            && self.lat_min >= -90.0
            && self.lat_max <= 90.0
            && self.lon_min >= -180.0
            && self.lon_max <= 180.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("bad bounding box {self:?}")))
        }
    }
}

/// Reduced FSS take-up in dense cells, where terrestrial broadband is an
/// alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UrbanPolicy {
    /// Cells with population above this count as urban.
    pub density_threshold: f64,
    /// Multiplier in `[0, 1]` applied to an urban cell's terminal count.
    pub suppression_factor: f64,
}

impl Default for UrbanPolicy {
    fn default() -> Self {
        UrbanPolicy {
            density_threshold: 100_000.0,
            suppression_factor: 0.5,
        }
    }
}

/// Per-terminal demand by type, Mbps. The defaults are placeholders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandRates {
    pub fss_mbps: f64,
    pub aero_mbps: f64,
    pub maritime_mbps: f64,
}

impl Default for DemandRates {
    fn default() -> Self {
        DemandRates {
            fss_mbps: 2.0,
            aero_mbps: 10.0,
            maritime_mbps: 8.0,
        }
    }
}

impl DemandRates {
    pub fn for_type(&self, kind: TerminalType) -> f64 {
        match kind {
            TerminalType::Fss => self.fss_mbps,
            TerminalType::Aero => self.aero_mbps,
            TerminalType::Maritime => self.maritime_mbps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub downscale: u32,
    pub urban: UrbanPolicy,
    pub rates: DemandRates,
    pub bbox: BoundingBox,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            downscale: 1000,
            urban: UrbanPolicy::default(),
            rates: DemandRates::default(),
            bbox: BoundingBox::default(),
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.downscale == 0 {
            return Err(Error::Config("downscale must be >= 1".into()));
        }
        let f = self.urban.suppression_factor;
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Config(format!("urban suppression factor {f} outside [0, 1]")));
        }
        if self.urban.density_threshold.is_nan() || self.urban.density_threshold < 0.0 {
            return Err(Error::Config("urban density threshold must be >= 0".into()));
        }
        for kind in TerminalType::ALL {
            let r = self.rates.for_type(kind);
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::Config(format!("{} demand must be >= 0", kind.name())));
            }
        }
        self.bbox.validate()
    }
}

/// Records removed during preprocessing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropCounts {
    pub out_of_box: usize,
    pub invalid: usize,
}

impl std::ops::AddAssign for DropCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.out_of_box += rhs.out_of_box;
        self.invalid += rhs.invalid;
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Loaded {
    pub terminals: Vec<Terminal>,
    pub dropped: DropCounts,
}

/// FSS terminals in a cell with population `population`.
pub fn fss_terminal_count(population: f64, downscale: u32, urban: &UrbanPolicy) -> u64 {
    let base = (population / f64::from(downscale)).floor();
    let count = if population > urban.density_threshold {
        (base * urban.suppression_factor).floor()
    } else {
        base
    };
    count.max(0.0) as u64
}

fn reader<R: Read>(source: R, header: &[&str]) -> Result<csv::Reader<R>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);
    let found: Vec<String> = rdr
        .headers()
        .map_err(Error::from_csv)?
        .iter()
        .map(str::to_string)
        .collect();
    if found != header {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {header:?}, found {found:?}"),
        });
    }
    Ok(rdr)
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

/// `None` for an empty or NaN field, an error for anything unparseable.
fn optional_f64(rec: &csv::StringRecord, idx: usize, name: &str) -> Result<Option<f64>> {
    let raw = rec.get(idx).unwrap_or("");
    if raw.is_empty() {
        return Ok(None);
    }
    let v: f64 = raw.parse().map_err(|_| Error::Parse {
        line: line_of(rec),
        message: format!("bad {name} value {raw:?}"),
    })?;
    Ok(if v.is_nan() { None } else { Some(v) })
}

/// Classifies a raw coordinate pair: `Ok(Some)` for a usable point inside
/// the box, `Ok(None)` after counting a drop.
fn admit(lat: Option<f64>, lon: Option<f64>, bbox: &BoundingBox, dropped: &mut DropCounts) -> Option<GeoPoint> {
    let point = match (lat, lon) {
        (Some(lat), Some(lon)) => GeoPoint::new(lat, lon).ok(),
        _ => None,
    };
    match point {
        None => {
            dropped.invalid += 1;
            None
        }
        Some(p) if !bbox.contains(p) => {
            dropped.out_of_box += 1;
            None
        }
        Some(p) => Some(p),
    }
}

/// Reads `lat_deg, lon_deg, population` cell centres and places the FSS
/// terminals. The result does not depend on row order.
pub fn load_population<R: Read>(source: R, cfg: &IngestConfig) -> Result<Loaded> {
    cfg.validate()?;
    let mut rdr = reader(source, &POPULATION_HEADER)?;
    let mut dropped = DropCounts::default();
    let mut cells: Vec<(GeoPoint, u64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(Error::from_csv)?;
        let lat = optional_f64(&rec, 0, "lat_deg")?;
        let lon = optional_f64(&rec, 1, "lon_deg")?;
        let population = optional_f64(&rec, 2, "population")?;
        if let Some(p) = population {
            if p < 0.0 {
                return Err(Error::NegativePopulation {
                    line: line_of(&rec),
                    value: p,
                });
            }
        }
        let Some(location) = admit(lat, lon, &cfg.bbox, &mut dropped) else {
            continue;
        };
        let Some(population) = population.filter(|p| p.is_finite()) else {
            dropped.invalid += 1;
            continue;
        };
        let count = fss_terminal_count(population, cfg.downscale, &cfg.urban);
        if count > 0 {
            cells.push((location, count));
        }
    }
    cells.sort_by(|a, b| {
        a.0.lat()
            .total_cmp(&b.0.lat())
            .then(a.0.lon().total_cmp(&b.0.lon()))
            .then(a.1.cmp(&b.1))
    });
    let mut terminals = Vec::new();
    for (cell, (location, count)) in cells.into_iter().enumerate() {
        for k in 0..count {
            terminals.push(Terminal {
                id: format!("fss-{cell}-{k}"),
                location,
                kind: TerminalType::Fss,
                demand_mbps: cfg.rates.fss_mbps,
            });
        }
    }
    Ok(Loaded { terminals, dropped })
}

pub fn parse_timestamp(raw: &str, line: u64) -> Result<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(raw)
        .map(|t| t.with_timezone(&Utc))
        .map_err(|_| Error::Timestamp {
            line,
            value: raw.to_string(),
        })
}

fn load_tracks<R: Read>(
    source: R,
    hour: u8,
    cfg: &IngestConfig,
    header: &[&str],
    kind: TerminalType,
) -> Result<Loaded> {
    if hour > 23 {
        return Err(Error::InvalidArgument(format!("hour {hour} outside 0..=23")));
    }
    cfg.validate()?;
    let mut rdr = reader(source, header)?;
    let mut dropped = DropCounts::default();
    // id -> (timestamp, line, location); smallest (timestamp, line) wins
    let mut first: BTreeMap<String, (DateTime<Utc>, u64, GeoPoint)> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(Error::from_csv)?;
        let line = line_of(&rec);
        let id = rec.get(0).unwrap_or("").to_string();
        if id.is_empty() {
            return Err(Error::Parse {
                line,
                message: format!("empty {}", header[0]),
            });
        }
        let ts = parse_timestamp(rec.get(1).unwrap_or(""), line)?;
        if ts.hour() != u32::from(hour) {
            continue;
        }
        let lat = optional_f64(&rec, 2, "lat_deg")?;
        let lon = optional_f64(&rec, 3, "lon_deg")?;
        let Some(location) = admit(lat, lon, &cfg.bbox, &mut dropped) else {
            continue;
        };
        first
            .entry(id)
            .and_modify(|cur| {
                if (ts, line) < (cur.0, cur.1) {
                    *cur = (ts, line, location);
                }
            })
            .or_insert((ts, line, location));
    }
    let demand = cfg.rates.for_type(kind);
    let terminals = first
        .into_iter()
        .map(|(id, (_, _, location))| Terminal {
            id,
            location,
            kind,
            demand_mbps: demand,
        })
        .collect();
    Ok(Loaded { terminals, dropped })
}

/// One aeronautical terminal per flight seen during `hour` (UTC hour of
/// day), at the flight's earliest position in that hour. Sorted by id.
pub fn load_aero<R: Read>(source: R, hour: u8, cfg: &IngestConfig) -> Result<Loaded> {
    load_tracks(source, hour, cfg, &AERO_HEADER, TerminalType::Aero)
}

/// One maritime terminal per ship seen during `hour`, at its first
/// position in that hour. Sorted by id.
pub fn load_maritime<R: Read>(source: R, hour: u8, cfg: &IngestConfig) -> Result<Loaded> {
    load_tracks(source, hour, cfg, &MARITIME_HEADER, TerminalType::Maritime)
}
