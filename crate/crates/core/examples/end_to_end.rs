//! The whole pipeline through the file-level commands: synthesize inputs,
//! compute footprints, simulate one hour, profile the day and sweep
//! interference. Outputs go to a directory given as the first argument
//! (default `target/beamsim-demo`).

use std::path::PathBuf;

use beamsim::analysis::{SetSelection, UserSelection};
use beamsim::commands::{cmd_footprints, cmd_interference, cmd_profile, cmd_simulate, cmd_synth, InterferenceArgs, Inputs, PowerModel};
use beamsim::synth::{PatternParams, PopulationParams, SynthSpec, TrackParams};

fn main() -> beamsim::Result<()> {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "target/beamsim-demo".into());
    let bbox = PopulationParams::default().bbox;
    let inputs = Inputs {
        pattern: root.join("pattern.csv"),
        population: Some(root.join("population.csv")),
        aero: Some(root.join("aero.csv")),
        maritime: Some(root.join("maritime.csv")),
        config: None,
    };
    cmd_synth(&SynthSpec::Pattern(PatternParams::default()), 1, &inputs.pattern)?;
    cmd_synth(&SynthSpec::Population(PopulationParams::default()), 2, inputs.population.as_ref().unwrap())?;
    cmd_synth(&SynthSpec::Aero(TrackParams::new(1000, bbox)), 3, inputs.aero.as_ref().unwrap())?;
    cmd_synth(&SynthSpec::Maritime(TrackParams::new(1000, bbox)), 4, inputs.maritime.as_ref().unwrap())?;

    let m = cmd_footprints(&inputs.pattern, &root.join("footprints"))?;
    println!("footprints: {} beams", m.counts["beams"]);
    let m = cmd_simulate(&inputs, 9, &root.join("simulate"))?;
    println!("simulate: {} users, {} excluded", m.counts["users"], m.counts["excluded"]);
    let hours: Vec<u8> = (0..24).collect();
    cmd_profile(&inputs, &hours, None, &root.join("profile"))?;
    let args = InterferenceArgs {
        hour: 9,
        users: UserSelection::Random(5),
        sizes: (1..=7).collect(),
        selection: SetSelection::Random { trials: 100 },
        power: PowerModel::EqualSplit,
        seed: 7,
    };
    cmd_interference(&inputs, &args, &root.join("interference"))?;
    println!("outputs under {}", root.display());
    Ok(())
}
