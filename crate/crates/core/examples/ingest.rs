//! Loading population, flight and vessel files into per-hour terminals.

use beamsim::ingest::{load_aero, load_maritime, load_population, IngestConfig};
use beamsim::synth::{aero_tracks, maritime_tracks, population, PopulationParams, TrackParams};

fn main() -> beamsim::Result<()> {
    let cfg = IngestConfig::default();
    let params = PopulationParams::default();
    let pop = population(&params, 7)?;
    let fss = load_population(pop.as_bytes(), &cfg)?;
    println!("population: {} FSS terminals, dropped {:?}", fss.terminals.len(), fss.dropped);

    let tracks = TrackParams::new(1500, params.bbox);
    let flights = aero_tracks(&tracks, 8)?;
    let ships = maritime_tracks(&tracks, 9)?;
    println!("hour  flights  ships");
    for hour in 0..24 {
        let a = load_aero(flights.as_bytes(), hour, &cfg)?;
        let m = load_maritime(ships.as_bytes(), hour, &cfg)?;
        println!("{hour:>4} {:>8} {:>6}", a.terminals.len(), m.terminals.len());
    }

    // the earliest fix of a flight within the hour is kept
    let raw = "flight_id,timestamp_iso8601_utc,lat_deg,lon_deg\n\
               F1,2020-06-01T08:40:00Z,50.4,10.4\n\
               F1,2020-06-01T08:05:00Z,50.0,10.0\n\
               F1,2020-06-01T09:10:00Z,51.0,11.0\n";
    let one = load_aero(raw.as_bytes(), 8, &cfg)?;
    let t = &one.terminals[0];
    println!("F1 at hour 8: ({}, {})", t.location.lat(), t.location.lon());
    Ok(())
}
