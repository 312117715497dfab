//! Terminal-to-beam association and the traffic matrix.
//!
//! Terminals are visited in FSS, aeronautical, maritime order and numbered
//! densely from 1 as they are accepted. A terminal covered by several
//! footprints goes to the covering beam with the highest interpolated gain
//! at its location, lowest beam id on ties. Uncovered terminals are counted
//! and left out.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::canonical;
use crate::geo::GeoPoint;
use crate::ingest::{Terminal, TerminalType};
use crate::linkbudget::interpolate_for_beams;
use crate::pattern::{BeamFootprint, BeamPattern};

pub const TRAFFIC_HEADER: [&str; 6] = ["user", "beam", "lat_deg", "lon_deg", "type", "demand_mbps"];

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficRecord {
    /// 1-based, dense.
    pub user: usize,
    /// 1-based beam id.
    pub beam: usize,
    pub location: GeoPoint,
    pub kind: TerminalType,
    pub demand_mbps: f64,
    pub terminal_id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficMatrix {
    rows: Vec<TrafficRecord>,
    beams: usize,
    excluded: usize,
}

impl TrafficMatrix {
    /// Wraps rows that are already numbered `1..=N`.
    pub fn from_rows(rows: Vec<TrafficRecord>, beams: usize) -> Self {
        Self { rows, beams, excluded: 0 }
    }

    pub fn rows(&self) -> &[TrafficRecord] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn beams(&self) -> usize {
        self.beams
    }

    /// Terminals that fell inside no footprint.
    pub fn excluded(&self) -> usize {
        self.excluded
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(TRAFFIC_HEADER).map_err(Error::from_csv)?;
        for r in &self.rows {
            wtr.write_record([
                r.user.to_string(),
                r.beam.to_string(),
                canonical(r.location.lat()),
                canonical(r.location.lon()),
                r.kind.code().to_string(),
                canonical(r.demand_mbps),
            ])
            .map_err(Error::from_csv)?;
        }
        wtr.flush().map_err(|e| Error::io("<traffic>", e))?;
        Ok(())
    }
}

/// Serving beam for a single location, `None` when uncovered.
pub fn serving_beam(footprints: &[BeamFootprint], pattern: &BeamPattern, at: GeoPoint) -> Option<usize> {
    let covering: Vec<usize> = footprints
        .iter()
        .filter(|f| f.contains(at))
        .map(|f| f.beam_id)
        .collect();
    match covering.len() {
        0 => None,
        1 => Some(covering[0]),
        _ => {
            let gains = interpolate_for_beams(pattern, at, &covering);
            let mut best = 0;
            for i in 1..covering.len() {
                let better = gains[i] > gains[best] || (gains[i] == gains[best] && covering[i] < covering[best]);
                if better {
                    best = i;
                }
            }
            Some(covering[best])
        }
    }
}

pub fn build_traffic_matrix(
    footprints: &[BeamFootprint],
    pattern: &BeamPattern,
    fss: &[Terminal],
    aero: &[Terminal],
    maritime: &[Terminal],
) -> Result<TrafficMatrix> {
    if footprints.is_empty() {
        return Err(Error::InvalidArgument("no beam footprints".into()));
    }
    if let Some(f) = footprints.iter().find(|f| pattern.beam(f.beam_id).is_none()) {
        return Err(Error::MismatchedBeams {
            traffic: f.beam_id,
            pattern: pattern.beam_count(),
        });
    }
    let terminals: Vec<&Terminal> = fss.iter().chain(aero).chain(maritime).collect();
    let assigned: Vec<Option<usize>> = terminals
        .par_iter()
        .map(|t| serving_beam(footprints, pattern, t.location))
        .collect();

    let mut rows = Vec::with_capacity(terminals.len());
    let mut excluded = 0;
    for (t, beam) in terminals.into_iter().zip(assigned) {
        match beam {
            Some(beam) => rows.push(TrafficRecord {
                user: rows.len() + 1,
                beam,
                location: t.location,
                kind: t.kind,
                demand_mbps: t.demand_mbps,
                terminal_id: t.id.clone(),
            }),
            None => excluded += 1,
        }
    }
    Ok(TrafficMatrix {
        rows,
        beams: pattern.beam_count(),
        excluded,
    })
}

/// Demand carried by one beam, split by traffic type.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BeamDemand {
    pub beam: usize,
    pub fss_mbps: f64,
    pub aero_mbps: f64,
    pub maritime_mbps: f64,
}

impl BeamDemand {
    pub fn total(&self) -> f64 {
        self.fss_mbps + self.aero_mbps + self.maritime_mbps
    }

    pub fn by_type(&self, kind: TerminalType) -> f64 {
        match kind {
            TerminalType::Fss => self.fss_mbps,
            TerminalType::Aero => self.aero_mbps,
            TerminalType::Maritime => self.maritime_mbps,
        }
    }

    fn add(&mut self, kind: TerminalType, mbps: f64) {
        match kind {
            TerminalType::Fss => self.fss_mbps += mbps,
            TerminalType::Aero => self.aero_mbps += mbps,
            TerminalType::Maritime => self.maritime_mbps += mbps,
        }
    }
}

/// One entry per beam id `1..=η`.
pub fn per_beam_demand(traffic: &TrafficMatrix) -> Vec<BeamDemand> {
    let mut out: Vec<BeamDemand> = (1..=traffic.beams)
        .map(|beam| BeamDemand { beam, ..Default::default() })
        .collect();
    for r in &traffic.rows {
        out[r.beam - 1].add(r.kind, r.demand_mbps);
    }
    out
}
