//! Generate a Walker-delta TLE catalog plus a matching elevation-sweep
//! config, ready for the `inac-sim` CLI:
//!
//! ```bash
//! cargo run --example make_walker_catalog -- /tmp/inac
//! cargo run -- run --config /tmp/inac/elevation_sweep.json --reproducible --emit-plot
//! ```

use chrono::{TimeZone, Utc};
use inac_sim::constellation::WalkerShell;

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("inac-sim"));
    std::fs::create_dir_all(&dir).expect("create output directory");

    let epoch = Utc.with_ymd_and_hms(2025, 3, 26, 8, 0, 0).unwrap();
    let shell = WalkerShell::starlink_like(epoch);
    let tle_path = dir.join("walker550.tle");
    std::fs::write(&tle_path, shell.to_catalog_text()).expect("write catalog");
    println!("wrote {} ({} satellites)", tle_path.display(), shell.total_satellites);

    let config = serde_json::json!({
        "scenario_kind": "elevation_mask_sweep",
        "tle_path": tle_path,
        "epoch_utc": "2025-03-26T08:00:00Z",
        "user_geodetic": { "latitude_deg": 39.95, "longitude_deg": 116.34, "height_m": 50.0 },
        "noise": { "pseudorange_sigma_m": 2.0 },
        "trials": 100,
        "rng_seed": 1,
        "output_path": dir.join("elevation_sweep.csv")
    });
    let config_path = dir.join("elevation_sweep.json");
    std::fs::write(&config_path, serde_json::to_string_pretty(&config).unwrap())
        .expect("write config");
    println!("wrote {}", config_path.display());
    println!("\nrun it with:\n  inac-sim run --config {} --reproducible --emit-plot", config_path.display());
}
