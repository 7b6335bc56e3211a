//! End-to-end elevation-mask sweep over a synthetic mega-constellation:
//! visibility, PDoP, Monte Carlo positioning error, and FSPL-only SNR per
//! mask, written to CSV with a companion gnuplot script.
//!
//! ```bash
//! cargo run --release --example elevation_mask_sweep
//! ```

use chrono::{TimeZone, Utc};
use inac_sim::constellation::WalkerShell;
use inac_sim::scenario::{self, RawScenarioConfig};

fn main() {
    let dir = std::env::temp_dir().join("inac-sim-elevation-sweep");
    std::fs::create_dir_all(&dir).expect("temp dir");

    let epoch = Utc.with_ymd_and_hms(2025, 3, 26, 8, 0, 0).unwrap();
    let tle_path = dir.join("walker550.tle");
    std::fs::write(&tle_path, WalkerShell::starlink_like(epoch).to_catalog_text()).unwrap();

    let raw: RawScenarioConfig = serde_json::from_str(&format!(
        r#"{{
            "scenario_kind": "elevation_mask_sweep",
            "tle_path": {:?},
            "epoch_utc": "2025-03-26T08:00:00Z",
            "trials": 100,
            "rng_seed": 1
        }}"#,
        tle_path
    ))
    .unwrap();
    let config = scenario::validate_config(raw).expect("valid config");
    let report = scenario::run_scenario(&config).expect("sweep runs");

    println!("{:>6} {:>9} {:>8} {:>12} {:>10} {:>9}", "mask", "visible", "pdop", "rms err (m)", "SNR (dB)", "failures");
    for row in &report.rows {
        println!(
            "{:>6.0} {:>9.0} {:>8.2} {:>12.3} {:>10.2} {:>9.0}",
            row.sweep_value, row.metrics[0], row.metrics[1], row.metrics[2], row.metrics[3], row.metrics[4]
        );
    }

    let csv = dir.join("elevation_sweep.csv");
    scenario::emit_csv(&report, &csv, true).unwrap();
    let script = scenario::emit_plot_script(&csv, report.kind).unwrap();
    println!("\nwrote {}", csv.display());
    println!("wrote {} (render with: gnuplot {})", script.display(), script.display());
}
