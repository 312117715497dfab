//! Slant range and free-space loss from a handful of European sites to the
//! default satellite at 13° E.

use beamsim::geo::{path_loss_db, slant_range};
use beamsim::{GeoPoint, ScenarioConfig};

fn main() -> beamsim::Result<()> {
    let cfg = ScenarioConfig::default();
    let lambda = cfg.wavelength();
    println!("carrier {:.2} GHz, wavelength {:.4} mm", cfg.carrier_freq_hz / 1e9, lambda * 1e3);
    println!("{:<12} {:>8} {:>8} {:>12} {:>10}", "site", "lat", "lon", "range km", "loss dB");
    for (name, lat, lon) in [
        ("sub-sat", 0.0, 13.0),
        ("Rome", 41.9, 12.5),
        ("Paris", 48.86, 2.35),
        ("Oslo", 59.91, 10.75),
        ("Reykjavik", 64.15, -21.94),
    ] {
        let p = GeoPoint::new(lat, lon)?;
        let d = slant_range(p, &cfg);
        println!("{name:<12} {lat:>8.2} {lon:>8.2} {:>12.1} {:>10.3}", d / 1e3, path_loss_db(d, lambda)?);
    }
    Ok(())
}
