//! Geodesy and propagation primitives on a spherical Earth.
//!
//! Angles are degrees at every public boundary and radians internally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Mean Earth radius, m.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// GEO altitude above the equator, m.
pub const GEO_ALTITUDE_M: f64 = 35_786_000.0;

/// A location on the sphere. Latitude in `[-90, 90]`, longitude normalized
/// to `[-180, 180)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(Error::InvalidCoordinate(format!(
                "non-finite coordinate ({lat}, {lon})"
            )));
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(Error::InvalidCoordinate(format!(
                "latitude {lat} outside [-90, 90]"
            )));
        }
        Ok(GeoPoint {
            lat,
            lon: normalize_lon(lon),
        })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

fn normalize_lon(lon: f64) -> f64 {
    if (-180.0..180.0).contains(&lon) {
        return lon;
    }
    let wrapped = (lon + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can land on exactly 360 for tiny negative inputs
    if wrapped >= 180.0 {
        wrapped - 360.0
    } else {
        wrapped
    }
}

/// Satellite orbit and RF parameters.
///
/// Defaults are a GEO satellite at 13°E: 35 786 km altitude, 19.5 GHz
/// downlink, 40.7 dB receive antenna gain, 6000 W total radiated power and
/// 50 MHz user bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub sat_lat_deg: f64,
    pub sat_lon_deg: f64,
    pub altitude_m: f64,
    pub earth_radius_m: f64,
    pub carrier_freq_hz: f64,
    pub rx_gain_db: f64,
    pub total_power_w: f64,
    pub bandwidth_hz: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            sat_lat_deg: 0.0,
            sat_lon_deg: 13.0,
            altitude_m: GEO_ALTITUDE_M,
            earth_radius_m: EARTH_RADIUS_M,
            carrier_freq_hz: 19.5e9,
            rx_gain_db: 40.7,
            total_power_w: 6000.0,
            bandwidth_hz: 50e6,
        }
    }
}

impl ScenarioConfig {
    /// Carrier wavelength `c / f`, m.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq_hz
    }

    pub fn satellite(&self) -> Result<GeoPoint> {
        GeoPoint::new(self.sat_lat_deg, self.sat_lon_deg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("altitude_m", self.altitude_m),
            ("earth_radius_m", self.earth_radius_m),
            ("carrier_freq_hz", self.carrier_freq_hz),
            ("bandwidth_hz", self.bandwidth_hz),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.total_power_w.is_finite() && self.total_power_w >= 0.0) {
            return Err(Error::Config(format!(
                "total_power_w must be >= 0, got {}",
                self.total_power_w
            )));
        }
        if !self.rx_gain_db.is_finite() {
            return Err(Error::Config("rx_gain_db must be finite".into()));
        }
        self.satellite().map(|_| ())
    }
}

fn central_angle_cos(a: GeoPoint, b: GeoPoint) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlon = (b.lon - a.lon).to_radians();
    (lat1.sin() * lat2.sin() + lat1.cos() * lat2.cos() * dlon.cos()).clamp(-1.0, 1.0)
}

/// Great-circle distance by the spherical law of cosines, in the unit of
/// `radius`.
pub fn great_circle_distance(a: GeoPoint, b: GeoPoint, radius: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    radius * central_angle_cos(a, b).acos()
}

/// Straight-line distance from a ground user to the satellite, m.
///
/// `d = (R+h) * sqrt(1 + q^2 - 2q (cos(lon_s - lon_u) cos(lat_s) cos(lat_u) + sin(lat_s) sin(lat_u)))`
/// with `q = R / (R+h)`.
pub fn slant_range(user: GeoPoint, cfg: &ScenarioConfig) -> f64 {
    let r = cfg.earth_radius_m;
    let orbit = r + cfg.altitude_m;
    let q = r / orbit;
    let (lat_s, lon_s) = (cfg.sat_lat_deg.to_radians(), cfg.sat_lon_deg.to_radians());
    let (lat_u, lon_u) = (user.lat.to_radians(), user.lon.to_radians());
    let cos_angle = (lon_s - lon_u).cos() * lat_s.cos() * lat_u.cos() + lat_s.sin() * lat_u.sin();
    let radicand = 1.0 + q * q - 2.0 * q * cos_angle;
    orbit * radicand.max(0.0).sqrt()
}

/// Free-space path loss `20 log10(4 pi d / lambda)`, dB.
pub fn path_loss_db(distance_m: f64, wavelength_m: f64) -> Result<f64> {
    if !(distance_m > 0.0 && wavelength_m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "path loss needs positive distance and wavelength, got d = {distance_m}, lambda = {wavelength_m}"
        )));
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * distance_m / wavelength_m).log10())
}
