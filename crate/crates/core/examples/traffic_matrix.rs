//! Terminal-to-beam association: the traffic matrix of one hour and the
//! per-beam demand split by traffic type.

use beamsim::ingest::{load_aero, load_maritime, load_population, IngestConfig};
use beamsim::pattern::all_footprints;
use beamsim::synth::{aero_tracks, gaussian_pattern, maritime_tracks, population, PatternParams, PopulationParams, TrackParams};
use beamsim::traffic::{build_traffic_matrix, per_beam_demand};

fn main() -> beamsim::Result<()> {
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 1)?;
    let footprints = all_footprints(&pattern)?;
    let cfg = IngestConfig::default();
    let params = PopulationParams::default();
    let tracks = TrackParams::new(800, params.bbox);

    let fss = load_population(population(&params, 2)?.as_bytes(), &cfg)?.terminals;
    let aero = load_aero(aero_tracks(&tracks, 3)?.as_bytes(), 8, &cfg)?.terminals;
    let sea = load_maritime(maritime_tracks(&tracks, 4)?.as_bytes(), 8, &cfg)?.terminals;
    let t = build_traffic_matrix(&footprints, &pattern, &fss, &aero, &sea)?;
    println!("{} users served, {} terminals outside every footprint", t.len(), t.excluded());

    println!("beam      fss     aero  maritime    total  (Mbps)");
    for b in per_beam_demand(&t) {
        println!(
            "{:>4} {:>8} {:>8} {:>9} {:>8}",
            b.beam, b.fss_mbps, b.aero_mbps, b.maritime_mbps, b.total()
        );
    }
    let mut head = Vec::new();
    t.write_csv(&mut head)?;
    for line in String::from_utf8_lossy(&head).lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
