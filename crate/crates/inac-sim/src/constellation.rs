//! Synthetic Walker-delta constellation catalogs.
//!
//! Desk-scale stand-in for downloaded mega-constellation catalogs: generates
//! well-formed TLE records (valid checksums, realistic mean motions) for a
//! Walker i:t/p/f shell so visibility and positioning sweeps can run without
//! network access.

use chrono::{DateTime, Utc};

use crate::constants::{MU_EARTH, WGS84_A};
use crate::tle::TwoLineElements;

/// Walker-delta shell parameters.
#[derive(Debug, Clone)]
pub struct WalkerShell {
    pub name_prefix: String,
    pub total_satellites: u32,
    pub planes: u32,
    /// Walker phasing parameter F in [0, planes).
    pub phasing: u32,
    pub inclination_deg: f64,
    pub altitude_km: f64,
    pub epoch_utc: DateTime<Utc>,
    /// Catalog number of the first satellite.
    pub first_catalog_number: u32,
}

impl WalkerShell {
    /// A Starlink-like 53 deg shell: 1584 satellites in 72 planes at 550 km.
    pub fn starlink_like(epoch_utc: DateTime<Utc>) -> Self {
        Self {
            name_prefix: "WALKER-550".into(),
            total_satellites: 1584,
            planes: 72,
            phasing: 1,
            inclination_deg: 53.0,
            altitude_km: 550.0,
            epoch_utc,
            first_catalog_number: 70000,
        }
    }

    /// A OneWeb-like polar shell: 648 satellites in 18 planes at 1200 km.
    pub fn oneweb_like(epoch_utc: DateTime<Utc>) -> Self {
        Self {
            name_prefix: "WALKER-1200".into(),
            total_satellites: 648,
            planes: 18,
            phasing: 1,
            inclination_deg: 87.9,
            altitude_km: 1200.0,
            epoch_utc,
            first_catalog_number: 80000,
        }
    }

    /// Mean motion in revolutions per day for the shell altitude.
    pub fn mean_motion_rev_day(&self) -> f64 {
        let a = WGS84_A + self.altitude_km * 1e3;
        let n = (MU_EARTH / (a * a * a)).sqrt();
        n * 86_400.0 / (2.0 * std::f64::consts::PI)
    }

    /// Generate the element set, plane-major order.
    pub fn generate(&self) -> Vec<TwoLineElements> {
        let per_plane = self.total_satellites / self.planes;
        assert!(
            per_plane * self.planes == self.total_satellites,
            "total satellites must divide evenly into planes"
        );
        let mean_motion = self.mean_motion_rev_day();
        let mut out = Vec::with_capacity(self.total_satellites as usize);
        for plane in 0..self.planes {
            let raan = 360.0 * plane as f64 / self.planes as f64;
            for slot in 0..per_plane {
                let idx = plane * per_plane + slot;
                let mean_anomaly = (360.0 * slot as f64 / per_plane as f64
                    + 360.0 * self.phasing as f64 * plane as f64 / self.total_satellites as f64)
                    .rem_euclid(360.0);
                out.push(TwoLineElements {
                    name: format!("{}-{}", self.name_prefix, idx + 1),
                    catalog_number: self.first_catalog_number + idx,
                    epoch_utc: self.epoch_utc,
                    inclination_deg: self.inclination_deg,
                    raan_deg: raan,
                    eccentricity: 0.0001,
                    arg_perigee_deg: 0.0,
                    mean_anomaly_deg: mean_anomaly,
                    mean_motion_rev_day: mean_motion,
                    bstar: 0.0,
                });
            }
        }
        out
    }

    /// Render the shell as 3-line catalog text.
    pub fn to_catalog_text(&self) -> String {
        let mut text = String::new();
        for rec in self.generate() {
            let (l1, l2) = rec.to_lines();
            text.push_str(&rec.name);
            text.push('\n');
            text.push_str(&l1);
            text.push('\n');
            text.push_str(&l2);
            text.push('\n');
        }
        text
    }
}
