//! Mean inter-beam interference against the number of active beams, by
//! random sampling and by exhaustive enumeration.

use beamsim::analysis::{interference_sweep, SetSelection, SweepParams, UserSelection};
use beamsim::linkbudget::{build_channel_matrix, BeamPower};
use beamsim::pattern::all_footprints;
use beamsim::synth::{gaussian_pattern, PatternParams};
use beamsim::traffic::build_traffic_matrix;
use beamsim::ingest::{Terminal, TerminalType};
use beamsim::{GeoPoint, ScenarioConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> beamsim::Result<()> {
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 1)?;
    let footprints = all_footprints(&pattern)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fss: Vec<Terminal> = (0..300)
        .map(|i| {
            Ok(Terminal {
                id: i.to_string(),
                location: GeoPoint::new(rng.gen_range(46.0..54.0), rng.gen_range(6.0..14.0))?,
                kind: TerminalType::Fss,
                demand_mbps: 2.0,
            })
        })
        .collect::<beamsim::Result<_>>()?;
    let t = build_traffic_matrix(&footprints, &pattern, &fss, &[], &[])?;
    let cfg = ScenarioConfig::default();
    let h = build_channel_matrix(&t, &pattern, &cfg)?;

    let mut params = SweepParams {
        users: UserSelection::Random(3),
        sizes: (1..=7).collect(),
        selection: SetSelection::Random { trials: 100 },
        power: BeamPower::EqualSplit { total_w: cfg.total_power_w },
        seed: 7,
    };
    let sampled = interference_sweep(&h, &params)?;
    params.selection = SetSelection::Exhaustive;
    let exact = interference_sweep(&h, &params)?;
    println!("user  beams   sampled mean (± s.e.)      exhaustive");
    for (s, e) in sampled.iter().zip(&exact) {
        println!(
            "{:>4} {:>6}   {:.3e} (± {:.1e})   {:.3e}",
            s.user, s.active_beams, s.mean_w, s.std_err_w, e.mean_w
        );
    }
    Ok(())
}
