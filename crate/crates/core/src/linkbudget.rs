//! Per-terminal channel coefficients and inter-beam interference.
//!
//! For user `n` at slant range `d_n` and every beam `j`:
//!
//! ```text
//! G[n,j] = 10 log10 |B(δ, j)|^2          δ = sample nearest to the user
//! h[n,j] = G[n,j] - PL_n + G_rx          PL_n = 20 log10(4π d_n / λ)
//! a[n,j] = 10^(h[n,j] / 20) · exp(2πi · (d_n mod λ) / λ)
//! ```
//!
//! Nearest samples are found by spherical-law-of-cosines distance with ties
//! going to the lowest sample index. Because every beam shares one sample
//! grid, the nearest sample is the same for all beams of a user and is
//! computed once per user.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{canonical, round_canonical};
use crate::geo::{great_circle_distance, path_loss_db, slant_range, GeoPoint, ScenarioConfig, EARTH_RADIUS_M};
use crate::pattern::{normalize_phase, BeamPattern, SamplePoint};
use crate::traffic::TrafficMatrix;

pub const CHANNEL_HEADER: [&str; 4] = ["user", "beam", "magnitude", "phase_rad"];

/// Samples used by [`interpolate_gain`].
pub const INTERPOLATION_NEIGHBOURS: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelOptions {
    /// Multiply each coefficient by the measured pattern phase
    /// `e^{iθ(δ, j)}` on top of the propagation phase. Off by default.
    pub apply_pattern_phase: bool,
}

/// Indices of the `k` smallest distances, ties to the lower index.
fn k_nearest(distances: &[f64], k: usize) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::with_capacity(k + 1);
    for (i, &d) in distances.iter().enumerate() {
        if best.len() == k && d >= distances[best[k - 1]] {
            continue;
        }
        let pos = best.partition_point(|&j| distances[j] <= d);
        best.insert(pos, i);
        best.truncate(k);
    }
    best
}

fn idw(samples: &[SamplePoint], distances: &[f64], user: GeoPoint) -> f64 {
    if let Some(hit) = samples.iter().find(|s| s.location == user) {
        return hit.gain_db;
    }
    let nearest = k_nearest(distances, INTERPOLATION_NEIGHBOURS);
    if let Some(&zero) = nearest.iter().find(|&&i| distances[i] == 0.0) {
        return samples[zero].gain_db;
    }
    let (mut num, mut den) = (0.0, 0.0);
    for &i in &nearest {
        let w = 1.0 / (distances[i] * distances[i]);
        num += w * samples[i].gain_db;
        den += w;
    }
    num / den
}

fn distances_to(user: GeoPoint, locations: impl Iterator<Item = GeoPoint>) -> Vec<f64> {
    locations
        .map(|p| great_circle_distance(user, p, EARTH_RADIUS_M))
        .collect()
}

/// Gain at `user` by inverse-distance-squared weighting of the three
/// nearest samples (great-circle distance). A sample at exactly the user's
/// location returns its own gain.
pub fn interpolate_gain(user: GeoPoint, samples: &[SamplePoint]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let d = distances_to(user, samples.iter().map(|s| s.location));
    Ok(idw(samples, &d, user))
}

/// Index of the sample nearest to `user`, lowest index on ties.
pub fn nearest_sample(user: GeoPoint, locations: impl Iterator<Item = GeoPoint>) -> Option<usize> {
    let d = distances_to(user, locations);
    k_nearest(&d, 1).first().copied()
}

/// Interpolated gains of `user` for each beam in `beams` (1-based ids),
/// sharing one distance computation over the common grid.
pub(crate) fn interpolate_for_beams(pattern: &BeamPattern, user: GeoPoint, beams: &[usize]) -> Vec<f64> {
    let d = distances_to(user, pattern.locations());
    beams
        .iter()
        .map(|&b| idw(pattern.beam(b).expect("beam id checked by caller"), &d, user))
        .collect()
}

/// Per-user quantities computed on the way to the channel row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserLink {
    pub user: usize,
    pub serving_beam: usize,
    pub slant_range_m: f64,
    pub path_loss_db: f64,
    /// Interpolated gain within the serving beam. Diagnostic only; it does
    /// not enter the coefficients.
    pub interpolated_gain_db: f64,
    /// 0-based index of the nearest pattern sample.
    pub nearest_sample: usize,
}

/// `N x η` complex channel matrix, rows in traffic-matrix user order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    beams: usize,
    entries: Vec<Complex64>,
    links: Vec<UserLink>,
    wavelength_m: f64,
}

/// Per-beam transmit power used for interference.
#[derive(Debug, Clone, PartialEq)]
pub enum BeamPower {
    /// `total_w / |active|` on every active beam.
    EqualSplit { total_w: f64 },
    /// The same wattage on every active beam.
    Fixed { per_beam_w: f64 },
    /// Wattage by beam id (index 0 is beam 1).
    PerBeam(Vec<f64>),
}

impl BeamPower {
    fn watts(&self, beam: usize, active: usize) -> f64 {
        match self {
            BeamPower::EqualSplit { total_w } => total_w / active as f64,
            BeamPower::Fixed { per_beam_w } => *per_beam_w,
            BeamPower::PerBeam(w) => w[beam - 1],
        }
    }
}

impl ChannelMatrix {
    pub fn users(&self) -> usize {
        self.links.len()
    }

    pub fn beams(&self) -> usize {
        self.beams
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }

    /// Coefficient `a[user, beam]`, both 1-based.
    pub fn get(&self, user: usize, beam: usize) -> Option<Complex64> {
        if user == 0 || beam == 0 || user > self.users() || beam > self.beams {
            return None;
        }
        Some(self.entries[(user - 1) * self.beams + beam - 1])
    }

    /// Row of user `user` (1-based), indexed by beam - 1.
    pub fn row(&self, user: usize) -> Option<&[Complex64]> {
        if user == 0 || user > self.users() {
            return None;
        }
        let start = (user - 1) * self.beams;
        Some(&self.entries[start..start + self.beams])
    }

    pub fn links(&self) -> &[UserLink] {
        &self.links
    }

    pub fn link(&self, user: usize) -> Option<&UserLink> {
        user.checked_sub(1).and_then(|i| self.links.get(i))
    }

    /// Interference power at `user` from the `active` beams other than its
    /// serving beam: `Σ P_j |a[user, j]|^2`, watts.
    pub fn interference(&self, user: usize, active: &[usize], power: &BeamPower) -> Result<f64> {
        let link = self.link(user).ok_or(Error::UnknownUser(user))?;
        let mut set: Vec<usize> = active.to_vec();
        set.sort_unstable();
        set.dedup();
        if let Some(&bad) = set.iter().find(|&&b| b == 0 || b > self.beams) {
            return Err(Error::InvalidArgument(format!("beam {bad} out of range 1..={}", self.beams)));
        }
        if let BeamPower::PerBeam(w) = power {
            if w.len() != self.beams {
                return Err(Error::InvalidArgument(format!(
                    "per-beam power has {} entries for {} beams",
                    w.len(),
                    self.beams
                )));
            }
        }
        let row = self.row(user).expect("user checked");
        Ok(set
            .iter()
            .filter(|&&b| b != link.serving_beam)
            .map(|&b| power.watts(b, set.len()) * row[b - 1].norm_sqr())
            .fold(0.0, |acc, w| acc + w))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(CHANNEL_HEADER).map_err(Error::from_csv)?;
        for (n, row) in self.entries.chunks(self.beams.max(1)).enumerate().take(self.users()) {
            for (j, a) in row.iter().enumerate() {
                wtr.write_record([
                    (n + 1).to_string(),
                    (j + 1).to_string(),
                    canonical(a.norm()),
                    canonical(normalize_phase(a.arg())),
                ])
                .map_err(Error::from_csv)?;
            }
        }
        wtr.flush().map_err(|e| Error::io("<channel>", e))?;
        Ok(())
    }

    pub fn summary(&self, cfg: &ScenarioConfig) -> ChannelSummary {
        ChannelSummary {
            users: self.users(),
            beams: self.beams,
            carrier_freq_hz: cfg.carrier_freq_hz,
            wavelength_m: round_canonical(self.wavelength_m),
            rx_gain_db: cfg.rx_gain_db,
            per_user: self
                .links
                .iter()
                .map(|l| UserLink {
                    slant_range_m: round_canonical(l.slant_range_m),
                    path_loss_db: round_canonical(l.path_loss_db),
                    interpolated_gain_db: round_canonical(l.interpolated_gain_db),
                    ..*l
                })
                .collect(),
        }
    }
}

/// JSON sidecar of the channel matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSummary {
    pub users: usize,
    pub beams: usize,
    pub carrier_freq_hz: f64,
    pub wavelength_m: f64,
    pub rx_gain_db: f64,
    pub per_user: Vec<UserLink>,
}

pub fn build_channel_matrix(traffic: &TrafficMatrix, pattern: &BeamPattern, cfg: &ScenarioConfig) -> Result<ChannelMatrix> {
    build_channel_matrix_with(traffic, pattern, cfg, &ChannelOptions::default())
}

pub fn build_channel_matrix_with(
    traffic: &TrafficMatrix,
    pattern: &BeamPattern,
    cfg: &ScenarioConfig,
    options: &ChannelOptions,
) -> Result<ChannelMatrix> {
    cfg.validate()?;
    let beams = pattern.beam_count();
    if beams == 0 || pattern.samples_per_beam() == 0 {
        return Err(Error::EmptyPattern);
    }
    if traffic.beams() != beams {
        return Err(Error::MismatchedBeams {
            traffic: traffic.beams(),
            pattern: beams,
        });
    }
    let lambda = cfg.wavelength();
    let rows: Vec<(UserLink, Vec<Complex64>)> = traffic
        .rows()
        .par_iter()
        .map(|rec| {
            let distances = distances_to(rec.location, pattern.locations());
            let nearest = k_nearest(&distances, 1)[0];
            let serving = pattern.beam(rec.beam).ok_or_else(|| {
                Error::Invariant(format!("user {} assigned to missing beam {}", rec.user, rec.beam))
            })?;
            let d = slant_range(rec.location, cfg);
            let pl = path_loss_db(d, lambda)?;
            let phase = std::f64::consts::TAU * d.rem_euclid(lambda) / lambda;
            let row = (0..beams)
                .map(|j| {
                    let b = pattern.coefficient(nearest, j);
                    let gain_db = 10.0 * b.norm_sqr().log10();
                    let h = gain_db - pl + cfg.rx_gain_db;
                    let amplitude = 10f64.powf(h / 20.0);
                    let theta = if options.apply_pattern_phase {
                        phase + b.arg()
                    } else {
                        phase
                    };
                    Complex64::from_polar(amplitude, theta)
                })
                .collect();
            let link = UserLink {
                user: rec.user,
                serving_beam: rec.beam,
                slant_range_m: d,
                path_loss_db: pl,
                interpolated_gain_db: idw(serving, &distances, rec.location),
                nearest_sample: nearest,
            };
            Ok((link, row))
        })
        .collect::<Result<_>>()?;

    let mut links = Vec::with_capacity(rows.len());
    let mut entries = Vec::with_capacity(rows.len() * beams);
    for (link, row) in rows {
        links.push(link);
        entries.extend(row);
    }
    Ok(ChannelMatrix {
        beams,
        entries,
        links,
        wavelength_m: lambda,
    })
}
