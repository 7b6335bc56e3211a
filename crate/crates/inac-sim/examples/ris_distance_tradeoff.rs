//! The navigation/communication trade-off versus satellite-RIS distance:
//! a receding INAC satellite accumulates ranging geometry (PDoP falls,
//! positioning error flattens onto its noise floor) while free-space loss
//! erodes the achievable rate.
//!
//! ```bash
//! cargo run --release --example ris_distance_tradeoff
//! ```

use inac_sim::elos::{run_sat_ris_distance_sweep, RisDistanceTemplate};

fn main() {
    let template = RisDistanceTemplate::default();
    let distances: Vec<f64> = (0..21).map(|k| 450e3 + 22.5e3 * k as f64).collect();
    let trials = 500;

    let points = run_sat_ris_distance_sweep(&template, &distances, trials, 1).expect("sweep runs");

    println!(
        "{:>12} {:>8} {:>12} {:>16} {:>9}",
        "sat-RIS (km)", "pdop", "rms err (m)", "rate (Mbit/s)", "failures"
    );
    for p in &points {
        println!(
            "{:>12.1} {:>8.3} {:>12.3} {:>16.3} {:>9}",
            p.distance_m / 1e3,
            p.pdop,
            p.rms_error_m,
            p.mean_rate_bps / 1e6,
            p.failures
        );
    }

    let first = &points[0];
    let last = points.last().unwrap();
    println!(
        "\nacross the sweep: pdop {:.2} -> {:.2}, rms {:.1} -> {:.1} m, rate {:.2} -> {:.2} Mbit/s",
        first.pdop,
        last.pdop,
        first.rms_error_m,
        last.rms_error_m,
        first.mean_rate_bps / 1e6,
        last.mean_rate_bps / 1e6
    );
}
