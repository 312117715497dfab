//! Hourly demand profiles over a synthetic day and hot/warm/cold beam
//! classification.

use beamsim::analysis::{classify_beams_default, hourly_profiles};
use beamsim::ingest::{load_aero, load_maritime, load_population, DemandSnapshot, IngestConfig, TerminalType};
use beamsim::pattern::all_footprints;
use beamsim::synth::{aero_tracks, gaussian_pattern, maritime_tracks, population, PatternParams, PopulationParams, TrackParams};

fn main() -> beamsim::Result<()> {
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 1)?;
    let footprints = all_footprints(&pattern)?;
    let cfg = IngestConfig::default();
    let params = PopulationParams::default();
    let tracks = TrackParams::new(2000, params.bbox);
    let fss = load_population(population(&params, 2)?.as_bytes(), &cfg)?.terminals;
    let flights = aero_tracks(&tracks, 3)?;
    let ships = maritime_tracks(&tracks, 4)?;

    let snapshots = (0..24)
        .map(|hour| {
            Ok(DemandSnapshot {
                hour,
                fss: fss.clone(),
                aero: load_aero(flights.as_bytes(), hour, &cfg)?.terminals,
                maritime: load_maritime(ships.as_bytes(), hour, &cfg)?.terminals,
            })
        })
        .collect::<beamsim::Result<Vec<_>>>()?;
    let profile = hourly_profiles(&snapshots, &footprints, &pattern)?;

    println!("normalized demand over all beams");
    println!("hour   aero  maritime");
    let aero = profile.type_total(TerminalType::Aero);
    let sea = profile.type_total(TerminalType::Maritime);
    let (amax, smax) = (aero.iter().copied().fold(0.0, f64::max), sea.iter().copied().fold(0.0, f64::max));
    for h in 0..24 {
        println!("{h:>4} {:>6.2} {:>9.2}", aero[h] / amax, sea[h] / smax);
    }
    for c in classify_beams_default(&profile) {
        println!("beam {}: {} ({:.1} Mbps mean)", c.beam_id, c.class.name(), c.mean_demand_mbps);
    }
    Ok(())
}
