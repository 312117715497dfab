//! Brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use beamsim::geometry::Point2;
use beamsim::ingest::{Terminal, TerminalType};
use beamsim::{GeoPoint, ScenarioConfig};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn pt(lat: f64, lon: f64) -> GeoPoint {
    GeoPoint::new(lat, lon).unwrap()
}

/// Straight-line distance between ECEF position vectors.
pub fn ecef_slant(user: GeoPoint, cfg: &ScenarioConfig) -> f64 {
    let ecef = |lat: f64, lon: f64, r: f64| {
        let (lat, lon) = (lat.to_radians(), lon.to_radians());
        [r * lat.cos() * lon.cos(), r * lat.cos() * lon.sin(), r * lat.sin()]
    };
    let s = ecef(cfg.sat_lat_deg, cfg.sat_lon_deg, cfg.earth_radius_m + cfg.altitude_m);
    let u = ecef(user.lat(), user.lon(), cfg.earth_radius_m);
    ((s[0] - u[0]).powi(2) + (s[1] - u[1]).powi(2) + (s[2] - u[2]).powi(2)).sqrt()
}

/// Spherical law of cosines, metres.
pub fn slc_distance(a: GeoPoint, b: GeoPoint, radius: f64) -> f64 {
    let (p1, p2) = (a.lat().to_radians(), b.lat().to_radians());
    let dl = (a.lon() - b.lon()).to_radians();
    let c = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
    radius * c.clamp(-1.0, 1.0).acos()
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Closed point-in-polygon: on-edge counts as inside, otherwise winding
/// number.
pub fn pip_oracle(p: Point2, poly: &[Point2]) -> bool {
    let n = poly.len();
    let mut winding = 0i32;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let c = cross(a, b, p);
        let scale = 1.0 + a.x.abs().max(a.y.abs()).max(b.x.abs()).max(b.y.abs());
        let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
        let within = p.x >= a.x.min(b.x) - 1e-9 * scale
            && p.x <= a.x.max(b.x) + 1e-9 * scale
            && p.y >= a.y.min(b.y) - 1e-9 * scale
            && p.y <= a.y.max(b.y) + 1e-9 * scale;
        if within && c.abs() <= 1e-9 * scale * len.max(1e-300) {
            return true;
        }
        if a.y <= p.y {
            if b.y > p.y && c > 0.0 {
                winding += 1;
            }
        } else if b.y <= p.y && c < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// Hull vertices by the O(N^3) edge test: `i -> j` is a hull edge when every
/// other point is strictly left of it or strictly between its endpoints.
pub fn hull_vertices_oracle(points: &[Point2]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in 0..points.len() {
            if i == j || points[i] == points[j] {
                continue;
            }
            let (a, b) = (points[i], points[j]);
            let ok = points.iter().all(|&k| {
                if k == a || k == b {
                    return true;
                }
                let c = cross(a, b, k);
                if c > 0.0 {
                    return true;
                }
                c == 0.0 && (k.x - a.x) * (k.x - b.x) + (k.y - a.y) * (k.y - b.y) < 0.0
            });
            if ok {
                out.push((a.x.to_bits(), a.y.to_bits()));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Positive when `d` is strictly inside the circumcircle of CCW `abc`.
pub fn incircle_oracle(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    let row = |p: Point2| {
        let (x, y) = (p.x - d.x, p.y - d.y);
        [x, y, x * x + y * y]
    };
    let (m0, m1, m2) = (row(a), row(b), row(c));
    m0[0] * (m1[1] * m2[2] - m1[2] * m2[1]) - m0[1] * (m1[0] * m2[2] - m1[2] * m2[0])
        + m0[2] * (m1[0] * m2[1] - m1[1] * m2[0])
}

/// Uniform terminals in a lat/lon box, type drawn 60/25/15.
pub fn random_terminals(rng: &mut ChaCha8Rng, n: usize, lat: (f64, f64), lon: (f64, f64)) -> Vec<Terminal> {
    (0..n)
        .map(|i| {
            let r: f64 = rng.gen();
            let (kind, demand) = if r < 0.6 {
                (TerminalType::Fss, 2.0)
            } else if r < 0.85 {
                (TerminalType::Aero, 10.0)
            } else {
                (TerminalType::Maritime, 8.0)
            };
            Terminal {
                id: format!("t{i}"),
                location: pt(rng.gen_range(lat.0..lat.1), rng.gen_range(lon.0..lon.1)),
                kind,
                demand_mbps: demand,
            }
        })
        .collect()
}

pub fn split_by_type(ts: &[Terminal]) -> [Vec<Terminal>; 3] {
    let pick = |k| ts.iter().filter(|t| t.kind == k).cloned().collect::<Vec<_>>();
    [pick(TerminalType::Fss), pick(TerminalType::Aero), pick(TerminalType::Maritime)]
}
