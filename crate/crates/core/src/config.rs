//! `key = value` configuration file shared by the commands.
//!
//! ```text
//! # demand preprocessing
//! downscale = 1000
//! urban_density_threshold = 100000
//! urban_suppression_factor = 0.5
//! demand_fss_mbps = 2
//! demand_aero_mbps = 10
//! demand_maritime_mbps = 8
//! bbox_lat_min = 25
//! bbox_lat_max = 80
//! bbox_lon_min = -40
//! bbox_lon_max = 50
//!
//! # satellite
//! sat_lon_deg = 13
//! carrier_freq_hz = 19.5e9
//! apply_pattern_phase = false
//! ```
//!
//! Every key is optional; missing keys take the defaults of
//! [`IngestConfig`] and [`ScenarioConfig`]. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::ScenarioConfig;
use crate::ingest::{BoundingBox, DemandRates, IngestConfig, UrbanPolicy};
use crate::linkbudget::ChannelOptions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub downscale: u32,
    pub urban_density_threshold: f64,
    pub urban_suppression_factor: f64,
    pub demand_fss_mbps: f64,
    pub demand_aero_mbps: f64,
    pub demand_maritime_mbps: f64,
    pub bbox_lat_min: f64,
    pub bbox_lat_max: f64,
    pub bbox_lon_min: f64,
    pub bbox_lon_max: f64,
    pub sat_lat_deg: f64,
    pub sat_lon_deg: f64,
    pub altitude_m: f64,
    pub earth_radius_m: f64,
    pub carrier_freq_hz: f64,
    pub rx_gain_db: f64,
    pub total_power_w: f64,
    pub bandwidth_hz: f64,
    pub apply_pattern_phase: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig::from_parts(&IngestConfig::default(), &ScenarioConfig::default(), &ChannelOptions::default())
    }
}

impl SimConfig {
    pub fn from_parts(ingest: &IngestConfig, scenario: &ScenarioConfig, channel: &ChannelOptions) -> Self {
        SimConfig {
            downscale: ingest.downscale,
            urban_density_threshold: ingest.urban.density_threshold,
            urban_suppression_factor: ingest.urban.suppression_factor,
            demand_fss_mbps: ingest.rates.fss_mbps,
            demand_aero_mbps: ingest.rates.aero_mbps,
            demand_maritime_mbps: ingest.rates.maritime_mbps,
            bbox_lat_min: ingest.bbox.lat_min,
            bbox_lat_max: ingest.bbox.lat_max,
            bbox_lon_min: ingest.bbox.lon_min,
            bbox_lon_max: ingest.bbox.lon_max,
            sat_lat_deg: scenario.sat_lat_deg,
            sat_lon_deg: scenario.sat_lon_deg,
            altitude_m: scenario.altitude_m,
            earth_radius_m: scenario.earth_radius_m,
            carrier_freq_hz: scenario.carrier_freq_hz,
            rx_gain_db: scenario.rx_gain_db,
            total_power_w: scenario.total_power_w,
            bandwidth_hz: scenario.bandwidth_hz,
            apply_pattern_phase: channel.apply_pattern_phase,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.ingest().validate()?;
        cfg.scenario().validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn ingest(&self) -> IngestConfig {
        IngestConfig {
            downscale: self.downscale,
            urban: UrbanPolicy {
                density_threshold: self.urban_density_threshold,
                suppression_factor: self.urban_suppression_factor,
            },
            rates: DemandRates {
                fss_mbps: self.demand_fss_mbps,
                aero_mbps: self.demand_aero_mbps,
                maritime_mbps: self.demand_maritime_mbps,
            },
            bbox: BoundingBox {
                lat_min: self.bbox_lat_min,
                lat_max: self.bbox_lat_max,
                lon_min: self.bbox_lon_min,
                lon_max: self.bbox_lon_max,
            },
        }
    }

    pub fn scenario(&self) -> ScenarioConfig {
        ScenarioConfig {
            sat_lat_deg: self.sat_lat_deg,
            sat_lon_deg: self.sat_lon_deg,
            altitude_m: self.altitude_m,
            earth_radius_m: self.earth_radius_m,
            carrier_freq_hz: self.carrier_freq_hz,
            rx_gain_db: self.rx_gain_db,
            total_power_w: self.total_power_w,
            bandwidth_hz: self.bandwidth_hz,
        }
    }

    pub fn channel(&self) -> ChannelOptions {
        ChannelOptions {
            apply_pattern_phase: self.apply_pattern_phase,
        }
    }

    /// Canonical text form: every key, one per line, in declaration order.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("flat config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = SimConfig::parse("").unwrap();
        assert_eq!(cfg, SimConfig::default());
        assert_eq!(cfg.scenario(), ScenarioConfig::default());
        assert_eq!(cfg.ingest(), IngestConfig::default());
    }

    #[test]
    fn overrides_and_comments() {
        let cfg = SimConfig::parse("# test\ndownscale = 500\nurban_suppression_factor = 0.25\nsat_lon_deg = 9.0\n").unwrap();
        assert_eq!(cfg.ingest().downscale, 500);
        assert_eq!(cfg.ingest().urban.suppression_factor, 0.25);
        assert_eq!(cfg.scenario().sat_lon_deg, 9.0);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(SimConfig::parse("downscal = 3\n").is_err());
        assert!(SimConfig::parse("downscale = 0\n").is_err());
        assert!(SimConfig::parse("urban_suppression_factor = 1.5\n").is_err());
        assert!(SimConfig::parse("carrier_freq_hz = -1.0\n").is_err());
        assert!(SimConfig::parse("bbox_lat_min = 81.0\n").is_err());
    }

    #[test]
    fn text_form_round_trips() {
        let cfg = SimConfig::parse("downscale = 250\napply_pattern_phase = true\n").unwrap();
        assert_eq!(SimConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}
