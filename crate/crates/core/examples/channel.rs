//! Complex channel coefficients for a few users and the interference they
//! see as more beams switch on.

use beamsim::ingest::{Terminal, TerminalType};
use beamsim::linkbudget::{build_channel_matrix, BeamPower};
use beamsim::pattern::all_footprints;
use beamsim::synth::{gaussian_pattern, PatternParams};
use beamsim::traffic::build_traffic_matrix;
use beamsim::{GeoPoint, ScenarioConfig};

fn main() -> beamsim::Result<()> {
    let (pattern, beams) = gaussian_pattern(&PatternParams::default(), 1)?;
    let footprints = all_footprints(&pattern)?;
    let cfg = ScenarioConfig::default();

    // one user slightly off each of the first three boresights
    let users: Vec<Terminal> = beams
        .iter()
        .take(3)
        .enumerate()
        .map(|(i, b)| {
            Ok(Terminal {
                id: format!("user{i}"),
                location: GeoPoint::new(b.center.lat() + 0.3, b.center.lon() - 0.2)?,
                kind: TerminalType::Fss,
                demand_mbps: 2.0,
            })
        })
        .collect::<beamsim::Result<_>>()?;
    let t = build_traffic_matrix(&footprints, &pattern, &users, &[], &[])?;
    let h = build_channel_matrix(&t, &pattern, &cfg)?;

    for link in h.links() {
        println!(
            "user {} (beam {}): d = {:.1} km, PL = {:.3} dB, interpolated gain {:.2} dB",
            link.user,
            link.serving_beam,
            link.slant_range_m / 1e3,
            link.path_loss_db,
            link.interpolated_gain_db
        );
        let row = h.row(link.user).unwrap();
        let mags: Vec<String> = row.iter().map(|a| format!("{:.2}", 20.0 * a.norm().log10())).collect();
        println!("  |a| per beam (dB): {}", mags.join(" "));
        println!("  common phase {:.6} rad", row[0].arg().rem_euclid(std::f64::consts::TAU));
    }

    let power = BeamPower::EqualSplit { total_w: cfg.total_power_w };
    let user = 1;
    let serving = h.link(user).unwrap().serving_beam;
    let mut active = vec![serving];
    for b in (1..=h.beams()).filter(|&b| b != serving) {
        active.push(b);
        println!("{} active beams: interference {:.3e} W", active.len(), h.interference(user, &active, &power)?);
    }
    Ok(())
}
