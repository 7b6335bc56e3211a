//! Constant-velocity EKF over a stream of pseudorange epochs, compared
//! against independent epoch-wise least squares, plus innovation gating
//! against an injected outlier.
//!
//! ```bash
//! cargo run --example ekf_tracking
//! ```

use chrono::{Duration, TimeZone, Utc};
use inac_sim::geometry::enu_basis;
use inac_sim::observation::synth_pseudorange;
use inac_sim::orbit::{geodetic_to_ecef, GeodeticPosition};
use inac_sim::solver::{solve_ls, EkfConfig, PvtEkf};
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let t0 = Utc.with_ymd_and_hms(2025, 3, 26, 8, 0, 0).unwrap();
    let user = geodetic_to_ecef(&GeodeticPosition::new(39.95, 116.34, 50.0).unwrap());
    let [east, north, up] = enu_basis(&user).unwrap();
    let sats: Vec<Vector3<f64>> = [
        (0.0, 80.0, 800e3),
        (60.0, 40.0, 1_200e3),
        (140.0, 25.0, 1_600e3),
        (200.0, 55.0, 1_000e3),
        (270.0, 35.0, 1_400e3),
        (330.0, 15.0, 1_900e3),
    ]
    .iter()
    .map(|&(az, el, r): &(f64, f64, f64)| {
        let (az, el) = (az.to_radians(), el.to_radians());
        user + (east * (el.cos() * az.sin()) + north * (el.cos() * az.cos()) + up * el.sin()) * r
    })
    .collect();

    let sigma = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ekf = PvtEkf::new(
        t0,
        user + Vector3::new(50.0, -30.0, 20.0),
        0.0,
        100.0,
        1.0,
        100.0,
        0.1,
        EkfConfig::default(),
    );

    println!("{:>5} {:>12} {:>12} {:>9}", "epoch", "LS err (m)", "EKF err (m)", "rejected");
    let mut ls_sum_sq = 0.0;
    let mut ekf_sum_sq = 0.0;
    let epochs = 60;
    for k in 1..=epochs {
        let t = t0 + Duration::seconds(k);
        let mut obs: Vec<_> = sats
            .iter()
            .enumerate()
            .map(|(i, s)| synth_pseudorange(i as u32, s, &user, 42.0, sigma, t, &mut rng))
            .collect();
        // A 1 km fault on one satellite halfway through the run.
        if k == 30 {
            obs[2].pseudorange_m += 1_000.0;
        }

        let ls = solve_ls(&obs, &sats, (Vector3::zeros(), 0.0)).unwrap();
        let step = ekf.step(t, &obs, &sats).unwrap();
        let ls_err = (ls.position_ecef - user).norm();
        let ekf_err = (step.solution.position_ecef - user).norm();
        if k > epochs / 2 {
            ls_sum_sq += ls_err * ls_err;
            ekf_sum_sq += ekf_err * ekf_err;
        }
        if k % 6 == 0 || !step.rejected_sat_ids.is_empty() {
            println!(
                "{k:>5} {ls_err:>12.3} {ekf_err:>12.3} {:>9}",
                format!("{:?}", step.rejected_sat_ids)
            );
        }
    }
    let n = (epochs / 2) as f64;
    println!("\nsteady-state RMS: LS {:.3} m, EKF {:.3} m", (ls_sum_sq / n).sqrt(), (ekf_sum_sq / n).sqrt());
}
