//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p beamsim --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use beamsim::commands::{cmd_simulate, Inputs};
use beamsim::geo::{path_loss_db, slant_range, EARTH_RADIUS_M};
use beamsim::geometry::{delaunay, Point2};
use beamsim::ingest::{fss_terminal_count, load_aero, load_maritime, load_population, IngestConfig, UrbanPolicy};
use beamsim::linkbudget::{build_channel_matrix, BeamPower};
use beamsim::pattern::{all_footprints, pattern_to_string, FOOTPRINT_DROP_DB};
use beamsim::synth::{aero_tracks, gaussian_pattern, maritime_tracks, population, PatternParams, PopulationParams, TrackParams};
use beamsim::traffic::build_traffic_matrix;
use beamsim::ScenarioConfig;
use chrono::{TimeZone, Timelike, Utc};
use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("{what} took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn slant_range_check() -> Outcome {
    let cfg = ScenarioConfig::default();
    let start = Instant::now();
    let nadir = slant_range(pt(0.0, 13.0), &cfg);
    let nadir_err = rel(nadir, 35_786_000.0);
    ensure(nadir_err <= 1e-9, || format!("nadir {nadir} m, rel err {nadir_err:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let u = pt(rng.gen_range(25.0..=80.0), rng.gen_range(-40.0..=50.0));
        worst = worst.max(rel(slant_range(u, &cfg), ecef_slant(u, &cfg)));
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-9, || format!("max rel err vs ECEF {worst:e}"))?;
    within(elapsed, 1.0, "10 000 users")?;
    Ok(format!(
        "nadir rel err {nadir_err:.1e}, 10k users max rel err {worst:.1e}, {:.3} s",
        elapsed.as_secs_f64()
    ))
}

fn path_loss_check() -> Outcome {
    let cfg = ScenarioConfig::default();
    let lambda = cfg.wavelength();
    let zero = path_loss_db(lambda / (4.0 * std::f64::consts::PI), lambda).map_err(|e| e.to_string())?;
    ensure(zero.abs() <= 1e-12, || format!("d = λ/4π gives {zero} dB"))?;
    let step = 20.0 * 2f64.log10();
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let d = rng.gen_range(1.0..1e8);
        let a = path_loss_db(d, lambda).unwrap();
        let b = path_loss_db(2.0 * d, lambda).unwrap();
        worst = worst.max((b - a - step).abs());
    }
    ensure(worst <= 1e-12, || format!("doubling step error {worst:e} dB"))?;
    let direct = 20.0 * (4.0 * std::f64::consts::PI * 35_786_000.0 * 19.5e9 / 299_792_458.0).log10();
    let nadir = path_loss_db(slant_range(pt(0.0, 13.0), &cfg), lambda).unwrap();
    let err = (nadir - direct).abs();
    // 40-digit evaluation of the same expression
    let err_hp = (nadir - 209.322_738_601_057_3).abs();
    ensure(err <= 1e-9 && err_hp <= 1e-9, || format!("nadir {nadir} dB vs {direct} dB"))?;
    Ok(format!("nadir {nadir:.9} dB (err {err:.1e}), doubling err {worst:.1e} dB"))
}

fn geometry_check() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut points_total = 0;
    for set in 0..100 {
        let n = rng.gen_range(10..=500);
        points_total += n;
        let pts: Vec<Point2> = (0..n).map(|_| Point2::new(rng.gen(), rng.gen())).collect();
        let tri = delaunay(&pts).map_err(|e| format!("set {set}: {e}"))?;
        let p = tri.points();
        for t in tri.triangles() {
            let (a, b, c) = (p[t[0]], p[t[1]], p[t[2]]);
            for (k, &d) in p.iter().enumerate() {
                if t.contains(&k) {
                    continue;
                }
                let v = incircle_oracle(a, b, c, d);
                ensure(v <= 1e-12, || format!("set {set}: point {k} inside circumcircle of {t:?} ({v:e})"))?;
            }
        }
        let mut got: Vec<(u64, u64)> = tri
            .convex_hull()
            .map_err(|e| e.to_string())?
            .vertices()
            .iter()
            .map(|v| (v.x.to_bits(), v.y.to_bits()))
            .collect();
        got.sort_unstable();
        let want = hull_vertices_oracle(&pts);
        ensure(got == want, || format!("set {set}: hull has {} vertices, oracle {}", got.len(), want.len()))?;
    }
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 4).map_err(|e| e.to_string())?;
    let fps = all_footprints(&pattern).map_err(|e| e.to_string())?;
    let mut qualifying = 0;
    for (beam, fp) in pattern.beams().zip(&fps) {
        let peak = beam.iter().map(|s| s.gain_db).fold(f64::NEG_INFINITY, f64::max);
        for s in beam.iter().filter(|s| s.gain_db >= peak - FOOTPRINT_DROP_DB) {
            qualifying += 1;
            ensure(pip_oracle(Point2::from(s.location), fp.border.vertices()), || {
                format!("beam {}: qualifying sample {:?} outside border", fp.beam_id, s.location)
            })?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 30.0, "geometry checks")?;
    Ok(format!(
        "100 sets / {points_total} points empty-circle + hull oracle, {qualifying} qualifying samples inside, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn association_check() -> Outcome {
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 5).map_err(|e| e.to_string())?;
    let fps = all_footprints(&pattern).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let terminals = random_terminals(&mut rng, 1000, (46.0, 54.0), (6.0, 14.0));
    let [fss, aero, sea] = split_by_type(&terminals);
    let t = build_traffic_matrix(&fps, &pattern, &fss, &aero, &sea).map_err(|e| e.to_string())?;
    for r in t.rows() {
        ensure(pip_oracle(Point2::from(r.location), fps[r.beam - 1].border.vertices()), || {
            format!("user {} outside its beam {}", r.user, r.beam)
        })?;
    }
    ensure(t.len() + t.excluded() == 1000, || format!("N {} + excluded {} != 1000", t.len(), t.excluded()))?;
    let covered = terminals
        .iter()
        .filter(|x| fps.iter().any(|f| pip_oracle(Point2::from(x.location), f.border.vertices())))
        .count();
    ensure(covered == t.len(), || format!("oracle coverage {covered}, N {}", t.len()))?;
    let dense = t.rows().iter().enumerate().all(|(i, r)| r.user == i + 1);
    ensure(dense, || "user indices not 1..N".into())?;

    let mapping = |t: &beamsim::traffic::TrafficMatrix| -> BTreeMap<String, usize> {
        t.rows().iter().map(|r| (r.terminal_id.clone(), r.beam)).collect()
    };
    let base = mapping(&t);
    for round in 0..3 {
        let (mut f, mut a, mut s) = (fss.clone(), aero.clone(), sea.clone());
        f.shuffle(&mut rng);
        a.shuffle(&mut rng);
        s.shuffle(&mut rng);
        let shuffled = build_traffic_matrix(&fps, &pattern, &f, &a, &s).map_err(|e| e.to_string())?;
        ensure(mapping(&shuffled) == base, || format!("shuffle {round} changed the assignment"))?;
    }
    Ok(format!("N = {}, excluded = {}, all rows inside, shuffle-invariant", t.len(), t.excluded()))
}

/// 7 beams and 20 covered users.
fn twenty_users() -> Result<(beamsim::pattern::BeamPattern, beamsim::traffic::TrafficMatrix), String> {
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 7).map_err(|e| e.to_string())?;
    let fps = all_footprints(&pattern).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut fss = Vec::new();
    while fss.len() < 20 {
        let cand = random_terminals(&mut rng, 1, (46.0, 54.0), (6.0, 14.0)).remove(0);
        if fps.iter().any(|f| f.contains(cand.location)) {
            fss.push(beamsim::ingest::Terminal {
                id: format!("u{}", fss.len()),
                ..cand
            });
        }
    }
    let t = build_traffic_matrix(&fps, &pattern, &fss, &[], &[]).map_err(|e| e.to_string())?;
    Ok((pattern, t))
}

fn channel_check() -> Outcome {
    let (pattern, t) = twenty_users()?;
    let cfg = ScenarioConfig::default();
    let h = build_channel_matrix(&t, &pattern, &cfg).map_err(|e| e.to_string())?;
    ensure(h.users() == 20 && h.beams() == 7, || format!("shape {}x{}", h.users(), h.beams()))?;
    let lambda = 299_792_458.0 / cfg.carrier_freq_hz;
    let (mut worst_mag, mut worst_phase): (f64, f64) = (0.0, 0.0);
    for r in t.rows() {
        // slant range as written: (R+h) sqrt(1 + q^2 - 2q cos(central angle))
        let (phi_l, psi_l) = (cfg.sat_lat_deg.to_radians(), cfg.sat_lon_deg.to_radians());
        let (phi_n, psi_n) = (r.location.lat().to_radians(), r.location.lon().to_radians());
        let rr = cfg.earth_radius_m;
        let q = rr / (rr + cfg.altitude_m);
        let cos_c = (psi_l - psi_n).cos() * phi_l.cos() * phi_n.cos() + phi_l.sin() * phi_n.sin();
        let d = (rr + cfg.altitude_m) * (1.0 + q * q - 2.0 * q * cos_c).sqrt();
        let pl = 20.0 * (4.0 * std::f64::consts::PI * d / lambda).log10();
        let phase = 2.0 * std::f64::consts::PI * (d % lambda) / lambda;
        for j in 1..=7 {
            let samples = pattern.beam(j).unwrap();
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (i, s) in samples.iter().enumerate() {
                let dist = slc_distance(r.location, s.location, EARTH_RADIUS_M);
                if dist < best_d {
                    best = i;
                    best_d = dist;
                }
            }
            let link = h.link(r.user).unwrap();
            ensure(link.nearest_sample == best, || {
                format!("user {} beam {j}: nearest {} vs brute force {best}", r.user, link.nearest_sample)
            })?;
            let b_abs = 10f64.powf(samples[best].gain_db / 20.0);
            let g = 10.0 * (b_abs * b_abs).log10();
            let amp = 10f64.powf((g - pl + cfg.rx_gain_db) / 20.0);
            let a = h.get(r.user, j).unwrap();
            worst_mag = worst_mag.max(rel(a.norm(), amp));
            let got = a.arg().rem_euclid(2.0 * std::f64::consts::PI);
            let mut dp = (got - phase).abs();
            dp = dp.min(2.0 * std::f64::consts::PI - dp);
            worst_phase = worst_phase.max(dp / phase.max(1.0));
        }
    }
    ensure(worst_mag <= 1e-9, || format!("max magnitude rel err {worst_mag:e}"))?;
    ensure(worst_phase <= 1e-9, || format!("max phase rel err {worst_phase:e}"))?;
    Ok(format!("140 entries, magnitude rel err {worst_mag:.1e}, phase rel err {worst_phase:.1e}, nearest samples exact"))
}

fn monotonicity_check() -> Outcome {
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 9).map_err(|e| e.to_string())?;
    let fps = all_footprints(&pattern).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let terminals = random_terminals(&mut rng, 400, (46.0, 54.0), (6.0, 14.0));
    let [fss, aero, sea] = split_by_type(&terminals);
    let t = build_traffic_matrix(&fps, &pattern, &fss, &aero, &sea).map_err(|e| e.to_string())?;
    let h = build_channel_matrix(&t, &pattern, &ScenarioConfig::default()).map_err(|e| e.to_string())?;
    let power = BeamPower::Fixed { per_beam_w: 60.0 };
    let (mut checked, mut violations) = (0u64, 0u64);
    for user in 1..=h.users() {
        let serving = h.link(user).unwrap().serving_beam;
        let zero = h.interference(user, &[serving], &power).unwrap();
        ensure(zero == 0.0 && zero.is_sign_positive(), || format!("user {user}: serving-only interference {zero}"))?;
        for mask in 0u32..128 {
            if mask & (1 << (serving - 1)) == 0 {
                continue;
            }
            let set: Vec<usize> = (1..=7).filter(|b| mask & (1 << (b - 1)) != 0).collect();
            let base = h.interference(user, &set, &power).unwrap();
            for j in (1..=7).filter(|b| mask & (1 << (b - 1)) == 0) {
                let mut bigger = set.clone();
                bigger.push(j);
                checked += 1;
                if h.interference(user, &bigger, &power).unwrap() < base {
                    violations += 1;
                }
            }
        }
    }
    ensure(h.users() > 0, || "no covered users".into())?;
    ensure(violations == 0, || format!("{violations} violations of {checked}"))?;
    Ok(format!("{} users, {checked} (S, S+j) pairs, 0 violations, serving-only = 0 W", h.users()))
}

struct Rec {
    id: String,
    secs: i64,
    lat: f64,
    lon: f64,
}

fn render(header: &str, recs: &[Rec]) -> String {
    let day = Utc.with_ymd_and_hms(2021, 3, 14, 0, 0, 0).unwrap();
    let mut s = format!("{header}\n");
    for r in recs {
        let ts = day + chrono::Duration::seconds(r.secs);
        s.push_str(&format!("{},{},{},{}\n", r.id, ts.format("%Y-%m-%dT%H:%M:%SZ"), r.lat, r.lon));
    }
    s
}

fn planted_records(rng: &mut ChaCha8Rng, prefix: &str, ids: usize) -> Vec<Rec> {
    let mut recs = Vec::new();
    for i in 0..ids {
        let id = format!("{prefix}{i}");
        for _ in 0..rng.gen_range(1..=12) {
            let secs = rng.gen_range(0..86_400);
            let rec = Rec {
                id: id.clone(),
                secs,
                lat: rng.gen_range(20.0..85.0f64).round_ties_even_to(1e-4),
                lon: rng.gen_range(-45.0..55.0f64).round_ties_even_to(1e-4),
            };
            // planted duplicates: same timestamp, and same fix repeated
            if rng.gen_bool(0.2) {
                recs.push(Rec {
                    id: id.clone(),
                    secs,
                    lat: rng.gen_range(30.0..70.0f64).round_ties_even_to(1e-4),
                    lon: rng.gen_range(-30.0..40.0f64).round_ties_even_to(1e-4),
                });
            }
            if rng.gen_bool(0.2) {
                recs.push(Rec { id: id.clone(), ..rec });
            }
            recs.push(rec);
        }
    }
    recs.shuffle(rng);
    recs
}

trait Round {
    fn round_ties_even_to(self, step: f64) -> f64;
}

impl Round for f64 {
    fn round_ties_even_to(self, step: f64) -> f64 {
        (self / step).round() * step
    }
}

/// Group by id over in-hour, in-box records, earliest timestamp, file order
/// on ties.
fn dedup_oracle(recs: &[Rec], hour: u32, cfg: &IngestConfig) -> BTreeMap<String, (f64, f64)> {
    let day = Utc.with_ymd_and_hms(2021, 3, 14, 0, 0, 0).unwrap();
    let mut best: BTreeMap<String, (i64, usize, f64, f64)> = BTreeMap::new();
    for (line, r) in recs.iter().enumerate() {
        let ts = day + chrono::Duration::seconds(r.secs);
        let b = cfg.bbox;
        let inside = r.lat >= b.lat_min && r.lat <= b.lat_max && r.lon >= b.lon_min && r.lon <= b.lon_max;
        if ts.hour() != hour || !inside {
            continue;
        }
        let cand = (r.secs, line, r.lat, r.lon);
        best.entry(r.id.clone())
            .and_modify(|e| {
                if (cand.0, cand.1) < (e.0, e.1) {
                    *e = cand;
                }
            })
            .or_insert(cand);
    }
    best.into_iter().map(|(k, v)| (k, (v.2, v.3))).collect()
}

fn preprocessing_check() -> Outcome {
    let cfg = IngestConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let flights = planted_records(&mut rng, "F", 300);
    let ships = planted_records(&mut rng, "S", 300);
    let aero_text = render("flight_id,timestamp_iso8601_utc,lat_deg,lon_deg", &flights);
    let sea_text = render("ship_id,timestamp_iso8601_utc,lat_deg,lon_deg", &ships);
    let mut kept = 0;
    for hour in 0..24u8 {
        for (text, recs, maritime) in [(&aero_text, &flights, false), (&sea_text, &ships, true)] {
            let loaded = if maritime {
                load_maritime(text.as_bytes(), hour, &cfg)
            } else {
                load_aero(text.as_bytes(), hour, &cfg)
            }
            .map_err(|e| e.to_string())?;
            let got: BTreeMap<String, (f64, f64)> = loaded
                .terminals
                .iter()
                .map(|t| (t.id.clone(), (t.location.lat(), t.location.lon())))
                .collect();
            ensure(got.len() == loaded.terminals.len(), || format!("hour {hour}: duplicate ids"))?;
            let want = dedup_oracle(recs, hour as u32, &cfg);
            ensure(got == want, || {
                format!("hour {hour} ({}): {} terminals, oracle {}", if maritime { "ships" } else { "flights" }, got.len(), want.len())
            })?;
            kept += got.len();
        }
    }
    Ok(format!(
        "{} flight + {} ship records, 48 (file, hour) pairs, {kept} terminals match the group-by oracle",
        flights.len(),
        ships.len()
    ))
}

fn downscaling_check() -> Outcome {
    let urban = UrbanPolicy::default();
    let two = fss_terminal_count(2500.0, 1000, &urban);
    ensure(two == 2, || format!("2500 / 1000 gave {two}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut csv = String::from("lat_deg,lon_deg,population\n");
    let mut expected_total = 0u64;
    for i in 0..1000 {
        let p = rng.gen_range(0..400_000u64) as f64;
        let ds = rng.gen_range(1..=5000u32);
        let oracle = |p: f64, ds: u32| {
            let n = (p / ds as f64).floor();
            let n = if p > urban.density_threshold { (n * urban.suppression_factor).floor() } else { n };
            n as u64
        };
        let got = fss_terminal_count(p, ds, &urban);
        ensure(got == oracle(p, ds), || format!("cell {i}: p {p}, ds {ds}: {got} vs {}", oracle(p, ds)))?;
        csv.push_str(&format!("{},{},{p}\n", 30.0 + (i / 40) as f64 * 0.25, (i % 40) as f64 * 0.25));
        expected_total += oracle(p, 1000);
    }
    let loaded = load_population(csv.as_bytes(), &IngestConfig::default()).map_err(|e| e.to_string())?;
    ensure(loaded.terminals.len() as u64 == expected_total, || {
        format!("file: {} terminals, oracle {expected_total}", loaded.terminals.len())
    })?;
    Ok(format!("2500/1000 -> 2, 1000 random cells exact, file total {expected_total}"))
}

fn end_to_end_check() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |n: &str| dir.path().join(n);
    let (pattern, _) = gaussian_pattern(&PatternParams::default(), 13).map_err(|e| e.to_string())?;
    fs::write(path("pattern.csv"), pattern_to_string(&pattern)).unwrap();
    let pop = PopulationParams {
        cell_deg: 0.2,
        ..PopulationParams::default()
    };
    fs::write(path("population.csv"), population(&pop, 14).map_err(|e| e.to_string())?).unwrap();
    let tracks = TrackParams::new(2500, pop.bbox);
    fs::write(path("aero.csv"), aero_tracks(&tracks, 15).map_err(|e| e.to_string())?).unwrap();
    fs::write(path("maritime.csv"), maritime_tracks(&tracks, 16).map_err(|e| e.to_string())?).unwrap();
    let inputs = Inputs {
        pattern: path("pattern.csv"),
        population: Some(path("population.csv")),
        aero: Some(path("aero.csv")),
        maritime: Some(path("maritime.csv")),
        config: None,
    };
    let mut timings = Vec::new();
    let mut manifests = Vec::new();
    for run in ["run1", "run2"] {
        let start = Instant::now();
        let m = cmd_simulate(&inputs, 9, &path(run)).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        within(elapsed, 60.0, run)?;
        timings.push(elapsed.as_secs_f64());
        manifests.push(m);
    }
    let terminals = manifests[0].counts["terminals"];
    ensure(terminals >= 10_000, || format!("only {terminals} terminals"))?;
    for f in ["traffic.csv", "channel.csv", "channel_summary.json", "manifest.json"] {
        let a = fs::read(path("run1").join(f)).map_err(|e| e.to_string())?;
        let b = fs::read(path("run2").join(f)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{f} differs between runs"))?;
    }
    Ok(format!(
        "{terminals} terminals, {} users, byte-identical outputs, runs {:.2} s / {:.2} s",
        manifests[0].counts["users"], timings[0], timings[1]
    ))
}

fn hourly_counts(text: &str, maritime: bool, cfg: &IngestConfig) -> Result<Vec<usize>, String> {
    (0..24u8)
        .map(|h| {
            let l = if maritime {
                load_maritime(text.as_bytes(), h, cfg)
            } else {
                load_aero(text.as_bytes(), h, cfg)
            };
            l.map(|l| l.terminals.len()).map_err(|e| e.to_string())
        })
        .collect()
}

fn generator_shape_check() -> Outcome {
    let cfg = IngestConfig::default();
    let bbox = PopulationParams::default().bbox;
    let sea = maritime_tracks(&TrackParams::new(3000, bbox), 17).map_err(|e| e.to_string())?;
    let sea_counts = hourly_counts(&sea, true, &cfg)?;
    let peak = (0..24).max_by_key(|&h| (sea_counts[h], std::cmp::Reverse(h))).unwrap();
    ensure((6..=11).contains(&peak), || format!("maritime peak at hour {peak}: {sea_counts:?}"))?;

    let air = aero_tracks(&TrackParams::new(3000, bbox), 18).map_err(|e| e.to_string())?;
    let air_counts = hourly_counts(&air, false, &cfg)?;
    let maxima: Vec<usize> = (1..23)
        .filter(|&h| air_counts[h] > air_counts[h - 1] && air_counts[h] >= air_counts[h + 1])
        .collect();
    ensure(maxima.len() >= 2, || format!("aero local maxima {maxima:?}: {air_counts:?}"))?;
    Ok(format!("maritime peak hour {peak}, aero local maxima at {maxima:?}"))
}

fn main() {
    let criteria: [Check; 10] = [
        ("1 slant range", slant_range_check),
        ("2 free-space path loss", path_loss_check),
        ("3 triangulation, hull and footprints", geometry_check),
        ("4 terminal-to-beam association", association_check),
        ("5 channel coefficients vs reimplementation", channel_check),
        ("6 interference monotone in active set", monotonicity_check),
        ("7 per-hour track deduplication", preprocessing_check),
        ("8 population down-scaling", downscaling_check),
        ("9 end-to-end determinism and runtime", end_to_end_check),
        ("10 synthetic diurnal shapes", generator_shape_check),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
