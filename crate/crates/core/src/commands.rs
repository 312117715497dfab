//! File-level commands: read inputs, run a pipeline stage, write outputs and
//! a `manifest.json` describing the run.
//!
//! Outputs of a failed command are removed. Manifests name inputs by file
//! name and digest, so two runs on the same inputs produce identical
//! manifests regardless of where the files live.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{
    classify_beams, classify_beams_default, hourly_profiles, interference_sweep, write_classes, write_sweep,
    SetSelection, SweepParams, Thresholds, UserSelection,
};
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::ingest::{load_aero, load_maritime, load_population, DemandSnapshot, DropCounts, Terminal};
use crate::linkbudget::{build_channel_matrix_with, BeamPower};
use crate::pattern::{all_footprints, parse_pattern, write_borders, BeamFootprint, BeamPattern};
use crate::synth::{generate, SynthSpec};
use crate::traffic::build_traffic_matrix;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub config: Option<SimConfig>,
    pub parameters: BTreeMap<String, String>,
    pub inputs: BTreeMap<String, FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub counts: BTreeMap<String, u64>,
}

impl RunManifest {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: None,
            config: None,
            parameters: BTreeMap::new(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            counts: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Reads an input and records its digest under `role`.
fn read_input(manifest: &mut RunManifest, role: &str, path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    manifest.inputs.insert(
        role.into(),
        FileDigest {
            file: file_name(path),
            sha256: sha256_hex(&bytes),
        },
    );
    Ok(bytes)
}

/// Files written so far; removed on drop unless committed.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
    digests: Vec<FileDigest>,
    committed: bool,
}

impl Outputs {
    fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
            digests: Vec::new(),
            committed: false,
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        self.written.push(path.clone());
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.digests.push(FileDigest {
            file: name.into(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    fn finish(mut self, mut manifest: RunManifest) -> Result<RunManifest> {
        manifest.outputs = std::mem::take(&mut self.digests);
        self.write(MANIFEST, manifest.to_json().as_bytes())?;
        self.committed = true;
        Ok(manifest)
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = fs::remove_file(p);
            }
        }
    }
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

/// Writes one synthetic dataset to `out`.
pub fn cmd_synth(spec: &SynthSpec, seed: u64, out: &Path) -> Result<()> {
    let text = generate(spec, seed)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(out, text).map_err(|e| Error::io(out, e))
}

fn load_pattern(manifest: &mut RunManifest, path: &Path) -> Result<(BeamPattern, Vec<BeamFootprint>)> {
    let bytes = read_input(manifest, "pattern", path)?;
    let pattern = parse_pattern(bytes.as_slice())?;
    let footprints = all_footprints(&pattern)?;
    Ok((pattern, footprints))
}

/// `borders.csv`: one row per hull vertex of every beam footprint.
pub fn cmd_footprints(pattern: &Path, out_dir: &Path) -> Result<RunManifest> {
    let mut manifest = RunManifest::new("footprints");
    let (_, footprints) = load_pattern(&mut manifest, pattern)?;
    manifest.counts.insert("beams".into(), footprints.len() as u64);
    let mut out = Outputs::create(out_dir)?;
    out.write("borders.csv", &render(|b| write_borders(&footprints, b))?)?;
    out.finish(manifest)
}

/// Demand inputs of the simulate, profile and interference commands. Any
/// dataset may be omitted and then contributes no terminals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Inputs {
    pub pattern: PathBuf,
    pub population: Option<PathBuf>,
    pub aero: Option<PathBuf>,
    pub maritime: Option<PathBuf>,
    pub config: Option<PathBuf>,
}

struct Loaded {
    pattern: BeamPattern,
    footprints: Vec<BeamFootprint>,
    config: SimConfig,
    fss: Vec<Terminal>,
    aero: Option<Vec<u8>>,
    maritime: Option<Vec<u8>>,
    dropped: DropCounts,
}

impl Loaded {
    fn snapshot(&mut self, hour: u8) -> Result<DemandSnapshot> {
        let cfg = self.config.ingest();
        let mut snap = DemandSnapshot {
            hour,
            fss: self.fss.clone(),
            aero: Vec::new(),
            maritime: Vec::new(),
        };
        if let Some(bytes) = &self.aero {
            let l = load_aero(bytes.as_slice(), hour, &cfg)?;
            self.dropped += l.dropped;
            snap.aero = l.terminals;
        }
        if let Some(bytes) = &self.maritime {
            let l = load_maritime(bytes.as_slice(), hour, &cfg)?;
            self.dropped += l.dropped;
            snap.maritime = l.terminals;
        }
        Ok(snap)
    }
}

fn check_hour(hour: u8) -> Result<()> {
    if hour > 23 {
        return Err(Error::InvalidArgument(format!("hour {hour} out of range 0..=23")));
    }
    Ok(())
}

fn load_inputs(manifest: &mut RunManifest, inputs: &Inputs) -> Result<Loaded> {
    let config = match &inputs.config {
        Some(p) => {
            let bytes = read_input(manifest, "config", p)?;
            let text = String::from_utf8(bytes).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            SimConfig::parse(&text)?
        }
        None => SimConfig::default(),
    };
    manifest.config = Some(config.clone());
    let (pattern, footprints) = load_pattern(manifest, &inputs.pattern)?;
    let mut dropped = DropCounts::default();
    let fss = match &inputs.population {
        Some(p) => {
            let bytes = read_input(manifest, "population", p)?;
            let l = load_population(bytes.as_slice(), &config.ingest())?;
            dropped += l.dropped;
            l.terminals
        }
        None => Vec::new(),
    };
    let aero = inputs.aero.as_ref().map(|p| read_input(manifest, "aero", p)).transpose()?;
    let maritime = inputs.maritime.as_ref().map(|p| read_input(manifest, "maritime", p)).transpose()?;
    Ok(Loaded {
        pattern,
        footprints,
        config,
        fss,
        aero,
        maritime,
        dropped,
    })
}

fn record_drops(manifest: &mut RunManifest, d: DropCounts) {
    manifest.counts.insert("dropped_out_of_box".into(), d.out_of_box as u64);
    manifest.counts.insert("dropped_invalid".into(), d.invalid as u64);
}

/// Traffic matrix and channel matrix of one hour: `traffic.csv`,
/// `channel.csv` and `channel_summary.json`.
pub fn cmd_simulate(inputs: &Inputs, hour: u8, out_dir: &Path) -> Result<RunManifest> {
    check_hour(hour)?;
    let mut manifest = RunManifest::new("simulate");
    manifest.param("hour", hour);
    let mut loaded = load_inputs(&mut manifest, inputs)?;
    let snap = loaded.snapshot(hour)?;
    let traffic = build_traffic_matrix(&loaded.footprints, &loaded.pattern, &snap.fss, &snap.aero, &snap.maritime)?;
    let scenario = loaded.config.scenario();
    let channel = build_channel_matrix_with(&traffic, &loaded.pattern, &scenario, &loaded.config.channel())?;

    manifest.counts.insert("users".into(), traffic.len() as u64);
    manifest.counts.insert("excluded".into(), traffic.excluded() as u64);
    manifest.counts.insert("terminals".into(), snap.terminal_count() as u64);
    record_drops(&mut manifest, loaded.dropped);

    let mut out = Outputs::create(out_dir)?;
    out.write("traffic.csv", &render(|b| traffic.write_csv(b))?)?;
    out.write("channel.csv", &render(|b| channel.write_csv(b))?)?;
    let mut summary = serde_json::to_string_pretty(&channel.summary(&scenario)).expect("summary serializes");
    summary.push('\n');
    out.write("channel_summary.json", summary.as_bytes())?;
    out.finish(manifest)
}

/// `profile.csv` over `hours` and `beam_class.csv`. Thresholds default to
/// the quartiles of per-beam mean demand.
pub fn cmd_profile(inputs: &Inputs, hours: &[u8], thresholds: Option<Thresholds>, out_dir: &Path) -> Result<RunManifest> {
    if hours.is_empty() {
        return Err(Error::InvalidArgument("no hours selected".into()));
    }
    for &h in hours {
        check_hour(h)?;
    }
    if let Some(t) = thresholds {
        Thresholds::new(t.lower, t.upper)?;
    }
    let mut manifest = RunManifest::new("profile");
    manifest.param("hours", hours.iter().map(u8::to_string).collect::<Vec<_>>().join(","));
    let mut loaded = load_inputs(&mut manifest, inputs)?;
    let snaps = hours.iter().map(|&h| loaded.snapshot(h)).collect::<Result<Vec<_>>>()?;
    let profile = hourly_profiles(&snaps, &loaded.footprints, &loaded.pattern)?;
    let classes = match thresholds {
        Some(t) => {
            manifest.param("threshold_lower", t.lower);
            manifest.param("threshold_upper", t.upper);
            classify_beams(&profile, &t)?
        }
        None => {
            manifest.param("thresholds", "quartiles");
            classify_beams_default(&profile)
        }
    };
    record_drops(&mut manifest, loaded.dropped);

    let mut out = Outputs::create(out_dir)?;
    out.write("profile.csv", &render(|b| profile.write_csv(b))?)?;
    out.write("beam_class.csv", &render(|b| write_classes(&classes, b))?)?;
    out.finish(manifest)
}

/// Per-beam power of an interference sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerModel {
    /// Configured total power split over the active beams.
    EqualSplit,
    FixedWatts(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceArgs {
    pub hour: u8,
    pub users: UserSelection,
    pub sizes: Vec<usize>,
    pub selection: SetSelection,
    pub power: PowerModel,
    pub seed: u64,
}

/// `interference.csv`: mean interference per sampled user and active-set
/// size for the traffic of one hour.
pub fn cmd_interference(inputs: &Inputs, args: &InterferenceArgs, out_dir: &Path) -> Result<RunManifest> {
    check_hour(args.hour)?;
    if args.sizes.is_empty() {
        return Err(Error::InvalidArgument("no active-set sizes".into()));
    }
    if let PowerModel::FixedWatts(w) = args.power {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidArgument(format!("per-beam power {w} W")));
        }
    }
    let mut manifest = RunManifest::new("interference");
    manifest.seed = Some(args.seed);
    manifest.param("hour", args.hour);
    manifest.param("users", format!("{:?}", args.users));
    manifest.param("sizes", args.sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    manifest.param("selection", format!("{:?}", args.selection));
    manifest.param("power", format!("{:?}", args.power));

    let mut loaded = load_inputs(&mut manifest, inputs)?;
    let snap = loaded.snapshot(args.hour)?;
    let traffic = build_traffic_matrix(&loaded.footprints, &loaded.pattern, &snap.fss, &snap.aero, &snap.maritime)?;
    let scenario = loaded.config.scenario();
    let channel = build_channel_matrix_with(&traffic, &loaded.pattern, &scenario, &loaded.config.channel())?;
    let power = match args.power {
        PowerModel::EqualSplit => BeamPower::EqualSplit {
            total_w: scenario.total_power_w,
        },
        PowerModel::FixedWatts(w) => BeamPower::Fixed { per_beam_w: w },
    };
    let points = interference_sweep(
        &channel,
        &SweepParams {
            users: args.users.clone(),
            sizes: args.sizes.clone(),
            selection: args.selection,
            power,
            seed: args.seed,
        },
    )?;
    manifest.counts.insert("users".into(), traffic.len() as u64);
    record_drops(&mut manifest, loaded.dropped);

    let mut out = Outputs::create(out_dir)?;
    out.write("interference.csv", &render(|b| write_sweep(&points, b))?)?;
    out.finish(manifest)
}
