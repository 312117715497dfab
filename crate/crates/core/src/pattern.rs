//! Sampled multibeam antenna patterns and their -3 dB footprints.
//!
//! A pattern holds, for each of `η` beams, the gain and phase measured at
//! the same `μ` ground locations. The file form is a CSV with header
//! `beam_id,lat_deg,lon_deg,gain_db,phase_rad`, rows grouped by beam
//! (ids `1..=η` in ascending order), samples listed in the same order for
//! every beam and floats written in the canonical 9-digit form of
//! [`crate::format`].

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::canonical;
use crate::geo::GeoPoint;
use crate::geometry::{delaunay, Point2, Polygon};

pub const PATTERN_HEADER: [&str; 5] = ["beam_id", "lat_deg", "lon_deg", "gain_db", "phase_rad"];
pub const BORDERS_HEADER: [&str; 4] = ["beam_id", "vertex_idx", "lat_deg", "lon_deg"];

/// Footprint threshold below the beam peak, dB.
pub const FOOTPRINT_DROP_DB: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub location: GeoPoint,
    pub gain_db: f64,
    /// Always in `[0, 2π)`.
    pub phase_rad: f64,
}

impl SamplePoint {
    pub fn new(location: GeoPoint, gain_db: f64, phase_rad: f64) -> Result<Self> {
        if !gain_db.is_finite() || !phase_rad.is_finite() {
            return Err(Error::Schema(format!(
                "sample at ({}, {}) has non-finite gain or phase",
                location.lat(),
                location.lon()
            )));
        }
        Ok(SamplePoint {
            location,
            gain_db,
            phase_rad: normalize_phase(phase_rad),
        })
    }

    /// Complex amplitude `10^(γ/20) e^{iθ}`.
    pub fn coefficient(&self) -> Complex64 {
        Complex64::from_polar(10f64.powf(self.gain_db / 20.0), self.phase_rad)
    }
}

pub(crate) fn normalize_phase(phase: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let p = phase.rem_euclid(tau);
    if p >= tau {
        0.0
    } else {
        p
    }
}

/// The pattern tensor: `η` beams by `μ` samples on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamPattern {
    beams: Vec<Vec<SamplePoint>>,
}

impl BeamPattern {
    /// Validates that every beam has the same sample locations in the same
    /// order.
    pub fn new(beams: Vec<Vec<SamplePoint>>) -> Result<Self> {
        let Some(first) = beams.first() else {
            return Err(Error::EmptyPattern);
        };
        if first.is_empty() {
            return Err(Error::EmptyPattern);
        }
        for (b, beam) in beams.iter().enumerate().skip(1) {
            if beam.len() != first.len() {
                return Err(Error::Schema(format!(
                    "beam {} has {} samples, beam 1 has {}",
                    b + 1,
                    beam.len(),
                    first.len()
                )));
            }
            if let Some(k) = beam.iter().zip(first).position(|(s, f)| s.location != f.location) {
                return Err(Error::Schema(format!(
                    "beam {} sample {} is not on the shared grid",
                    b + 1,
                    k + 1
                )));
            }
        }
        Ok(BeamPattern { beams })
    }

    /// `η`
    pub fn beam_count(&self) -> usize {
        self.beams.len()
    }

    /// `μ`
    pub fn samples_per_beam(&self) -> usize {
        self.beams[0].len()
    }

    /// Samples of beam `beam` (1-based).
    pub fn beam(&self, beam: usize) -> Option<&[SamplePoint]> {
        beam.checked_sub(1)
            .and_then(|i| self.beams.get(i))
            .map(Vec::as_slice)
    }

    pub fn beams(&self) -> impl Iterator<Item = &[SamplePoint]> {
        self.beams.iter().map(Vec::as_slice)
    }

    /// Shared sample grid.
    pub fn locations(&self) -> impl Iterator<Item = GeoPoint> + '_ {
        self.beams[0].iter().map(|s| s.location)
    }

    /// Coefficient matrix entry `B(sample, beam)`, both 0-based.
    pub fn coefficient(&self, sample: usize, beam: usize) -> Complex64 {
        self.beams[beam][sample].coefficient()
    }
}

fn check_header(headers: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {expected:?}, found {found:?}"),
        });
    }
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize, name: &str) -> Result<T> {
    let line = rec.position().map(|p| p.line()).unwrap_or(0);
    let raw = rec.get(idx).ok_or_else(|| Error::Parse {
        line,
        message: format!("missing column {name}"),
    })?;
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad {name} value {raw:?}"),
    })
}

pub fn parse_pattern<R: Read>(reader: R) -> Result<BeamPattern> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    check_header(rdr.headers().map_err(Error::from_csv)?, &PATTERN_HEADER)?;

    let mut beams: Vec<Vec<SamplePoint>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(Error::from_csv)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let beam_id: usize = field(&rec, 0, "beam_id")?;
        let lat: f64 = field(&rec, 1, "lat_deg")?;
        let lon: f64 = field(&rec, 2, "lon_deg")?;
        let gain: f64 = field(&rec, 3, "gain_db")?;
        let phase: f64 = field(&rec, 4, "phase_rad")?;
        let location = GeoPoint::new(lat, lon).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let sample = SamplePoint::new(location, gain, phase).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if beam_id == beams.len() + 1 {
            beams.push(Vec::new());
        } else if beam_id != beams.len() || beam_id == 0 {
            return Err(Error::Schema(format!(
                "line {line}: beam_id {beam_id} out of sequence (rows must be grouped by beam, ids ascending from 1)"
            )));
        }
        beams[beam_id - 1].push(sample);
    }
    BeamPattern::new(beams)
}

pub fn read_pattern(path: &Path) -> Result<BeamPattern> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_pattern(std::io::BufReader::new(file))
}

pub fn write_pattern<W: Write>(pattern: &BeamPattern, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(PATTERN_HEADER).map_err(Error::from_csv)?;
    for (b, beam) in pattern.beams().enumerate() {
        for s in beam {
            wtr.write_record([
                (b + 1).to_string(),
                canonical(s.location.lat()),
                canonical(s.location.lon()),
                canonical(s.gain_db),
                canonical(s.phase_rad),
            ])
            .map_err(Error::from_csv)?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<pattern>", e))?;
    Ok(())
}

pub fn pattern_to_string(pattern: &BeamPattern) -> String {
    let mut buf = Vec::new();
    write_pattern(pattern, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Region where a beam is within 3 dB of its peak gain.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamFootprint {
    pub beam_id: usize,
    pub border: Polygon,
    pub peak_gain_db: f64,
    /// Number of samples that passed the -3 dB test.
    pub qualifying_samples: usize,
}

impl BeamFootprint {
    pub fn contains(&self, p: GeoPoint) -> bool {
        self.border.contains(Point2::from(p))
    }
}

/// Border of beam `beam` (1-based): the convex hull of the Delaunay
/// triangulation of all samples with gain at least `peak - 3 dB`.
pub fn beam_footprint(pattern: &BeamPattern, beam: usize) -> Result<BeamFootprint> {
    let samples = pattern.beam(beam).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "beam {beam} out of range 1..={}",
            pattern.beam_count()
        ))
    })?;
    let peak = samples
        .iter()
        .map(|s| s.gain_db)
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold = peak - FOOTPRINT_DROP_DB;
    let qualifying: Vec<Point2> = samples
        .iter()
        .filter(|s| s.gain_db >= threshold)
        .map(|s| Point2::from(s.location))
        .collect();

    let degenerate = |e: Error| match e {
        Error::CollinearInput => Error::DegenerateFootprint { beam },
        other => other,
    };
    let tri = delaunay(&qualifying).map_err(degenerate)?;
    let border = tri.convex_hull().map_err(degenerate)?;
    Ok(BeamFootprint {
        beam_id: beam,
        border,
        peak_gain_db: peak,
        qualifying_samples: qualifying.len(),
    })
}

/// Footprints of every beam, ordered by beam id.
pub fn all_footprints(pattern: &BeamPattern) -> Result<Vec<BeamFootprint>> {
    (1..=pattern.beam_count())
        .into_par_iter()
        .map(|b| beam_footprint(pattern, b))
        .collect()
}

pub fn write_borders<W: Write>(footprints: &[BeamFootprint], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(BORDERS_HEADER).map_err(Error::from_csv)?;
    for fp in footprints {
        for (k, v) in fp.border.vertices().iter().enumerate() {
            wtr.write_record([
                fp.beam_id.to_string(),
                (k + 1).to_string(),
                canonical(v.y),
                canonical(v.x),
            ])
            .map_err(Error::from_csv)?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<borders>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    const TWO_BEAMS: &str = "beam_id,lat_deg,lon_deg,gain_db,phase_rad
1,50,10,45,0
1,50,11,44,0.5
1,51,10,43,1
1,51,11,40,1.5
2,50,10,30,0
2,50,11,31,0
2,51,10,32,0
2,51,11,33,0
";

    #[test]
    fn parses_two_beams() {
        let p = parse_pattern(TWO_BEAMS.as_bytes()).unwrap();
        assert_eq!(p.beam_count(), 2);
        assert_eq!(p.samples_per_beam(), 4);
        assert_eq!(p.beam(2).unwrap()[3].gain_db, 33.0);
        assert!(p.beam(0).is_none());
        assert!(p.beam(3).is_none());
    }

    #[test]
    fn writes_canonical_form_back() {
        let p = parse_pattern(TWO_BEAMS.as_bytes()).unwrap();
        assert_eq!(pattern_to_string(&p), TWO_BEAMS);
    }

    #[test]
    fn ragged_beam_is_schema_error() {
        let text: String = TWO_BEAMS.lines().take(8).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_pattern(text.as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn mismatched_grid_is_schema_error() {
        let text = TWO_BEAMS.replace("2,51,11,33,0", "2,51,12,33,0");
        assert!(matches!(parse_pattern(text.as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = TWO_BEAMS.replace("1,51,10,43,1", "1,51,ten,43,1");
        match parse_pattern(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let text = TWO_BEAMS.replace("beam_id,", "beam,");
        assert!(matches!(parse_pattern(text.as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_pattern("beam_id,lat_deg,lon_deg,gain_db,phase_rad\n".as_bytes()),
            Err(Error::EmptyPattern)
        ));
    }

    #[test]
    fn out_of_order_beam_ids_rejected() {
        let text = TWO_BEAMS.replacen("1,50,11,44,0.5", "2,50,11,44,0.5", 1);
        assert!(matches!(parse_pattern(text.as_bytes()), Err(Error::Schema(_))));
    }

    #[test]
    fn phase_is_normalized() {
        let s = SamplePoint::new(pt(0.0, 0.0), 1.0, -std::f64::consts::FRAC_PI_2).unwrap();
        assert!((s.phase_rad - 1.5 * std::f64::consts::PI).abs() < 1e-12);
        let s = SamplePoint::new(pt(0.0, 0.0), 1.0, std::f64::consts::TAU).unwrap();
        assert_eq!(s.phase_rad, 0.0);
    }

    fn grid_beam(gain: impl Fn(f64, f64) -> f64) -> Vec<SamplePoint> {
        let mut out = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                let (lat, lon) = (50.0 + i as f64, 10.0 + j as f64);
                out.push(SamplePoint::new(pt(lat, lon), gain(lat, lon), 0.0).unwrap());
            }
        }
        out
    }

    #[test]
    fn square_footprint_from_four_corners() {
        let beam = grid_beam(|lat, lon| {
            if (51.0..=52.0).contains(&lat) && (11.0..=12.0).contains(&lon) {
                40.0
            } else {
                20.0
            }
        });
        let p = BeamPattern::new(vec![beam]).unwrap();
        let fp = beam_footprint(&p, 1).unwrap();
        assert_eq!(fp.qualifying_samples, 4);
        assert_eq!(fp.peak_gain_db, 40.0);
        let expected = vec![
            Point2::new(11.0, 51.0),
            Point2::new(12.0, 51.0),
            Point2::new(12.0, 52.0),
            Point2::new(11.0, 52.0),
        ];
        assert_eq!(fp.border.vertices(), expected.as_slice());
    }

    #[test]
    fn uniform_beam_covers_whole_grid() {
        let p = BeamPattern::new(vec![grid_beam(|_, _| 37.5)]).unwrap();
        let fp = beam_footprint(&p, 1).unwrap();
        assert_eq!(fp.qualifying_samples, 25);
        assert_eq!(fp.border.len(), 4);
        assert!((fp.border.area() - 16.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_qualifying_set_is_degenerate() {
        let beam = grid_beam(|lat, _| if lat == 52.0 { 40.0 } else { 0.0 });
        let p = BeamPattern::new(vec![beam.clone(), beam]).unwrap();
        assert!(matches!(
            beam_footprint(&p, 2),
            Err(Error::DegenerateFootprint { beam: 2 })
        ));
        assert!(matches!(
            all_footprints(&p),
            Err(Error::DegenerateFootprint { beam: 1 })
        ));
    }

    #[test]
    fn borders_csv_layout() {
        let p = BeamPattern::new(vec![grid_beam(|_, _| 1.0)]).unwrap();
        let fps = all_footprints(&p).unwrap();
        let mut buf = Vec::new();
        write_borders(&fps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "beam_id,vertex_idx,lat_deg,lon_deg\n1,1,50,10\n1,2,50,14\n1,3,54,14\n1,4,54,10\n"
        );
    }
}
