use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use beamsim::analysis::{SetSelection, Thresholds, UserSelection};
use beamsim::commands::{self, InterferenceArgs, Inputs, PowerModel};
use beamsim::synth::{PatternParams, PopulationParams, SynthSpec, TrackParams};
use beamsim::Error;

#[derive(Parser)]
#[command(name = "beamsim", version, about = "Multibeam GEO satellite traffic and channel simulator")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
    /// Compute -3 dB beam borders (borders.csv).
    Footprints {
        #[arg(long)]
        pattern: PathBuf,
        #[command(flatten)]
        out: OutDir,
    },
    /// Build the traffic and channel matrices for one hour.
    Simulate {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long)]
        hour: u8,
        #[command(flatten)]
        out: OutDir,
    },
    /// Hourly demand profiles and hot/warm/cold beam classes.
    Profile {
        #[command(flatten)]
        inputs: InputArgs,
        /// Hours as `a..b` (inclusive) or a comma list.
        #[arg(long, default_value = "0..23")]
        hours: String,
        #[arg(long, requires = "upper")]
        lower: Option<f64>,
        #[arg(long, requires = "lower")]
        upper: Option<f64>,
        #[command(flatten)]
        out: OutDir,
    },
    /// Interference versus number of active beams.
    Interference {
        #[command(flatten)]
        inputs: InputArgs,
        #[arg(long)]
        hour: u8,
        /// Number of randomly chosen users.
        #[arg(long, default_value_t = 5, conflicts_with = "all_users")]
        users: usize,
        #[arg(long)]
        all_users: bool,
        /// Active-set sizes as `a..b` (inclusive) or a comma list.
        #[arg(long, default_value = "1..7")]
        sizes: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Average over every active set instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Fixed watts per active beam instead of splitting the total.
        #[arg(long)]
        fixed_power: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutDir,
    },
}

#[derive(Args)]
struct OutDir {
    #[arg(long = "out-dir", env = "BEAMSIM_OUT_DIR", default_value = "out")]
    dir: PathBuf,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    population: Option<PathBuf>,
    #[arg(long)]
    aero: Option<PathBuf>,
    #[arg(long)]
    maritime: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

impl From<InputArgs> for Inputs {
    fn from(a: InputArgs) -> Self {
        Inputs {
            pattern: a.pattern,
            population: a.population,
            aero: a.aero,
            maritime: a.maritime,
            config: a.config,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pattern,
    Population,
    Aero,
    Maritime,
}

#[derive(Args)]
struct SynthArgs {
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Pattern: number of beams.
    #[arg(long)]
    beams: Option<usize>,
    /// Pattern: sample grid pitch in degrees.
    #[arg(long)]
    grid_step: Option<f64>,
    /// Pattern: boresight spacing in degrees.
    #[arg(long)]
    spacing: Option<f64>,
    /// Population: cell size in degrees.
    #[arg(long)]
    cell: Option<f64>,
    /// Aero / maritime: number of flights or vessels.
    #[arg(long, default_value_t = 1000)]
    count: usize,
}

fn parse_range(raw: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::InvalidArgument(format!("bad range {raw:?}"));
    if let Some((a, b)) = raw.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    raw.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn synth_spec(a: &SynthArgs) -> SynthSpec {
    match a.kind {
        Kind::Pattern => {
            let d = PatternParams::default();
            SynthSpec::Pattern(PatternParams {
                beams: a.beams.unwrap_or(d.beams),
                grid_step_deg: a.grid_step.unwrap_or(d.grid_step_deg),
                spacing_deg: a.spacing.unwrap_or(d.spacing_deg),
                ..d
            })
        }
        Kind::Population => {
            let d = PopulationParams::default();
            SynthSpec::Population(PopulationParams {
                cell_deg: a.cell.unwrap_or(d.cell_deg),
                ..d
            })
        }
        Kind::Aero => SynthSpec::Aero(TrackParams::new(a.count, PopulationParams::default().bbox)),
        Kind::Maritime => SynthSpec::Maritime(TrackParams::new(a.count, PopulationParams::default().bbox)),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    match cli.command {
        Command::Synth(a) => commands::cmd_synth(&synth_spec(&a), a.seed, &a.out),
        Command::Footprints { pattern, out } => commands::cmd_footprints(&pattern, &out.dir).map(drop),
        Command::Simulate { inputs, hour, out } => commands::cmd_simulate(&inputs.into(), hour, &out.dir).map(drop),
        Command::Profile {
            inputs,
            hours,
            lower,
            upper,
            out,
        } => {
            let hours = parse_range(&hours)?
                .into_iter()
                .map(|h| u8::try_from(h).map_err(|_| Error::InvalidArgument(format!("hour {h}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let thresholds = match (lower, upper) {
                (Some(l), Some(u)) => Some(Thresholds::new(l, u)?),
                _ => None,
            };
            commands::cmd_profile(&inputs.into(), &hours, thresholds, &out.dir).map(drop)
        }
        Command::Interference {
            inputs,
            hour,
            users,
            all_users,
            sizes,
            trials,
            exhaustive,
            fixed_power,
            seed,
            out,
        } => {
            let args = InterferenceArgs {
                hour,
                users: if all_users { UserSelection::All } else { UserSelection::Random(users) },
                sizes: parse_range(&sizes)?,
                selection: if exhaustive { SetSelection::Exhaustive } else { SetSelection::Random { trials } },
                power: fixed_power.map_or(PowerModel::EqualSplit, PowerModel::FixedWatts),
                seed,
            };
            commands::cmd_interference(&inputs.into(), &args, &out.dir).map(drop)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
