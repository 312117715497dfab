//! Hourly demand profiles, beam classification and interference sweeps.

use std::io::Write;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::canonical;
use crate::ingest::{DemandSnapshot, TerminalType};
use crate::linkbudget::{BeamPower, ChannelMatrix};
use crate::pattern::{BeamFootprint, BeamPattern};
use crate::traffic::{build_traffic_matrix, per_beam_demand};

pub const HOURS: usize = 24;
pub const PROFILE_HEADER: [&str; 6] = ["beam_id", "hour", "type", "demand_mbps", "normalized", "all_zero"];
pub const CLASS_HEADER: [&str; 3] = ["beam_id", "class", "mean_demand_mbps"];
pub const INTERFERENCE_HEADER: [&str; 5] = ["user", "active_beams", "mean_w", "std_err_w", "samples"];

pub type Series = [f64; HOURS];

/// Divides by the series maximum. `None` for an all-zero series.
pub fn normalize(series: &Series) -> Option<Series> {
    let max = series.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return None;
    }
    let mut out = *series;
    for v in &mut out {
        *v /= max;
    }
    Some(out)
}

/// Demand per beam, hour and traffic type.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyProfile {
    // [beam - 1][type code - 1][hour]
    totals: Vec<[Series; 3]>,
}

impl HourlyProfile {
    pub fn zeros(beams: usize) -> Self {
        Self {
            totals: vec![[[0.0; HOURS]; 3]; beams],
        }
    }

    pub fn beams(&self) -> usize {
        self.totals.len()
    }

    fn slot(kind: TerminalType) -> usize {
        kind.code() as usize - 1
    }

    /// Demand of one beam and type per hour (Mbps). Panics on a bad beam id.
    pub fn series(&self, beam: usize, kind: TerminalType) -> &Series {
        &self.totals[beam - 1][Self::slot(kind)]
    }

    pub fn normalized(&self, beam: usize, kind: TerminalType) -> Option<Series> {
        normalize(self.series(beam, kind))
    }

    /// All beams summed, for one type.
    pub fn type_total(&self, kind: TerminalType) -> Series {
        let mut out = [0.0; HOURS];
        for b in &self.totals {
            for (o, v) in out.iter_mut().zip(&b[Self::slot(kind)]) {
                *o += v;
            }
        }
        out
    }

    /// All types summed, for one beam.
    pub fn beam_total(&self, beam: usize) -> Series {
        let mut out = [0.0; HOURS];
        for s in &self.totals[beam - 1] {
            for (o, v) in out.iter_mut().zip(s) {
                *o += v;
            }
        }
        out
    }

    /// Mean over the 24 hours of the beam's total demand.
    pub fn mean_demand(&self, beam: usize) -> f64 {
        self.beam_total(beam).iter().fold(0.0, |a, v| a + v) / HOURS as f64
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(PROFILE_HEADER).map_err(Error::from_csv)?;
        for beam in 1..=self.beams() {
            for kind in TerminalType::ALL {
                let series = self.series(beam, kind);
                let norm = normalize(series);
                for hour in 0..HOURS {
                    let n = norm.map_or(0.0, |s| s[hour]);
                    wtr.write_record([
                        beam.to_string(),
                        hour.to_string(),
                        kind.code().to_string(),
                        canonical(series[hour]),
                        canonical(n),
                        u8::from(norm.is_none()).to_string(),
                    ])
                    .map_err(Error::from_csv)?;
                }
            }
        }
        wtr.flush().map_err(|e| Error::io("<profile>", e))?;
        Ok(())
    }
}

/// Builds the traffic matrix of every snapshot and sums demand per beam,
/// type and hour. Hours without a snapshot stay zero.
pub fn hourly_profiles(
    snapshots: &[DemandSnapshot],
    footprints: &[BeamFootprint],
    pattern: &BeamPattern,
) -> Result<HourlyProfile> {
    if snapshots.is_empty() {
        return Err(Error::InvalidArgument("no hourly snapshots".into()));
    }
    let mut seen = [false; HOURS];
    for s in snapshots {
        let h = s.hour as usize;
        if h >= HOURS {
            return Err(Error::InvalidArgument(format!("hour {h} out of range 0..=23")));
        }
        if std::mem::replace(&mut seen[h], true) {
            return Err(Error::InvalidArgument(format!("duplicate snapshot for hour {h}")));
        }
    }
    let per_hour = snapshots
        .par_iter()
        .map(|s| {
            let t = build_traffic_matrix(footprints, pattern, &s.fss, &s.aero, &s.maritime)?;
            Ok((s.hour as usize, per_beam_demand(&t)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut profile = HourlyProfile::zeros(pattern.beam_count());
    for (hour, demand) in per_hour {
        for d in demand {
            for kind in TerminalType::ALL {
                profile.totals[d.beam - 1][HourlyProfile::slot(kind)][hour] = d.by_type(kind);
            }
        }
    }
    Ok(profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamClass {
    Hot,
    Warm,
    Cold,
}

impl BeamClass {
    pub fn name(self) -> &'static str {
        match self {
            BeamClass::Hot => "hot",
            BeamClass::Warm => "warm",
            BeamClass::Cold => "cold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub lower: f64,
    pub upper: f64,
}

impl Thresholds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower >= 0.0 && upper > lower && upper.is_finite()) {
            return Err(Error::BadThresholds { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// 25th and 75th percentiles (linear interpolation) of per-beam mean
    /// demand. `None` when they coincide.
    pub fn from_quartiles(profile: &HourlyProfile) -> Option<Self> {
        let mut means: Vec<f64> = (1..=profile.beams()).map(|b| profile.mean_demand(b)).collect();
        means.sort_by(f64::total_cmp);
        let (lower, upper) = (percentile(&means, 25.0), percentile(&means, 75.0));
        Self::new(lower, upper).ok()
    }
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let (lo, hi) = (rank.floor() as usize, rank.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamClassification {
    pub beam_id: usize,
    pub class: BeamClass,
    pub mean_demand_mbps: f64,
}

pub fn classify(mean: f64, t: &Thresholds) -> BeamClass {
    if mean > t.upper {
        BeamClass::Hot
    } else if mean < t.lower {
        BeamClass::Cold
    } else {
        BeamClass::Warm
    }
}

pub fn classify_beams(profile: &HourlyProfile, thresholds: &Thresholds) -> Result<Vec<BeamClassification>> {
    let t = Thresholds::new(thresholds.lower, thresholds.upper)?;
    Ok((1..=profile.beams())
        .map(|beam_id| {
            let mean = profile.mean_demand(beam_id);
            BeamClassification {
                beam_id,
                class: classify(mean, &t),
                mean_demand_mbps: mean,
            }
        })
        .collect())
}

/// Quartile thresholds; every beam is warm when the quartiles coincide.
pub fn classify_beams_default(profile: &HourlyProfile) -> Vec<BeamClassification> {
    match Thresholds::from_quartiles(profile) {
        Some(t) => classify_beams(profile, &t).expect("quartile thresholds are valid"),
        None => (1..=profile.beams())
            .map(|beam_id| BeamClassification {
                beam_id,
                class: BeamClass::Warm,
                mean_demand_mbps: profile.mean_demand(beam_id),
            })
            .collect(),
    }
}

pub fn write_classes<W: Write>(classes: &[BeamClassification], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(CLASS_HEADER).map_err(Error::from_csv)?;
    for c in classes {
        wtr.write_record([c.beam_id.to_string(), c.class.name().to_string(), canonical(c.mean_demand_mbps)])
            .map_err(Error::from_csv)?;
    }
    wtr.flush().map_err(|e| Error::io("<beam_class>", e))?;
    Ok(())
}

/// How active sets are drawn for a given size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetSelection {
    /// `trials` uniform draws of the other `s - 1` beams.
    Random { trials: usize },
    /// Every set of size `s` containing the serving beam.
    Exhaustive,
}

impl Default for SetSelection {
    fn default() -> Self {
        SetSelection::Random { trials: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UserSelection {
    /// `k` distinct users drawn with the sweep seed, reported ascending.
    Random(usize),
    Explicit(Vec<usize>),
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub users: UserSelection,
    pub sizes: Vec<usize>,
    pub selection: SetSelection,
    pub power: BeamPower,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub user: usize,
    pub active_beams: usize,
    pub mean_w: f64,
    pub std_err_w: f64,
    pub samples: usize,
}

const USER_STREAM: u64 = u64::MAX;

fn pick_users(h: &ChannelMatrix, sel: &UserSelection, seed: u64) -> Result<Vec<usize>> {
    let n = h.users();
    let users = match sel {
        UserSelection::All => (1..=n).collect(),
        UserSelection::Explicit(u) => {
            if let Some(&bad) = u.iter().find(|&&u| u == 0 || u > n) {
                return Err(Error::UnknownUser(bad));
            }
            u.clone()
        }
        UserSelection::Random(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(USER_STREAM);
            let mut u: Vec<usize> = index::sample(&mut rng, n, (*k).min(n)).into_iter().map(|i| i + 1).collect();
            u.sort_unstable();
            u
        }
    };
    Ok(users)
}

/// Calls `f` with every `k`-subset of `items` in lexicographic order.
fn for_each_subset(items: &[usize], k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=items.len() - (k - cur.len()) {
            cur.push(items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    if k <= items.len() {
        go(items, k, 0, &mut Vec::with_capacity(k), f);
    }
}

fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().fold(0.0, |a, v| a + v) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn sweep_point(h: &ChannelMatrix, user: usize, size: usize, params: &SweepParams) -> Result<SweepPoint> {
    let serving = h.link(user).ok_or(Error::UnknownUser(user))?.serving_beam;
    let others: Vec<usize> = (1..=h.beams()).filter(|&b| b != serving).collect();
    let mut values = Vec::new();
    match params.selection {
        SetSelection::Exhaustive => {
            let mut err = None;
            for_each_subset(&others, size - 1, &mut |rest| {
                let mut set = rest.to_vec();
                set.push(serving);
                match h.interference(user, &set, &params.power) {
                    Ok(v) => values.push(v),
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            let mean = values.iter().fold(0.0, |a, v| a + v) / values.len() as f64;
            return Ok(SweepPoint {
                user,
                active_beams: size,
                mean_w: mean,
                std_err_w: 0.0,
                samples: values.len(),
            });
        }
        SetSelection::Random { trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(((user as u64) << 32) | size as u64);
            for _ in 0..trials {
                let mut set: Vec<usize> = index::sample(&mut rng, others.len(), size - 1)
                    .into_iter()
                    .map(|i| others[i])
                    .collect();
                set.push(serving);
                values.push(h.interference(user, &set, &params.power)?);
            }
        }
    }
    let (mean_w, std_err_w) = mean_and_std_err(&values);
    Ok(SweepPoint {
        user,
        active_beams: size,
        mean_w,
        std_err_w,
        samples: values.len(),
    })
}

/// Mean interference per (user, active-set size). Rows are ordered by user
/// then by size as given. Each (user, size) cell draws from its own stream
/// of the seeded generator, so results do not depend on scheduling.
pub fn interference_sweep(h: &ChannelMatrix, params: &SweepParams) -> Result<Vec<SweepPoint>> {
    let beams = h.beams();
    if let Some(&bad) = params.sizes.iter().find(|&&s| s == 0 || s > beams) {
        return Err(Error::InvalidArgument(format!("active-set size {bad} outside 1..={beams}")));
    }
    if params.selection == (SetSelection::Random { trials: 0 }) {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let users = pick_users(h, &params.users, params.seed)?;
    let cells: Vec<(usize, usize)> = users
        .iter()
        .flat_map(|&u| params.sizes.iter().map(move |&s| (u, s)))
        .collect();
    cells
        .par_iter()
        .map(|&(u, s)| sweep_point(h, u, s, params))
        .collect()
}

pub fn write_sweep<W: Write>(points: &[SweepPoint], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(INTERFERENCE_HEADER).map_err(Error::from_csv)?;
    for p in points {
        wtr.write_record([
            p.user.to_string(),
            p.active_beams.to_string(),
            canonical(p.mean_w),
            canonical(p.std_err_w),
            p.samples.to_string(),
        ])
        .map_err(Error::from_csv)?;
    }
    wtr.flush().map_err(|e| Error::io("<interference>", e))?;
    Ok(())
}
