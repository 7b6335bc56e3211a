//! Single-epoch pseudorange least squares: synthesize noisy observations
//! for a fixed geometry and recover position and receiver clock bias.
//!
//! ```bash
//! cargo run --example pseudorange_positioning
//! ```

use chrono::{TimeZone, Utc};
use inac_sim::geometry::enu_basis;
use inac_sim::observation::synth_pseudorange;
use inac_sim::orbit::{geodetic_to_ecef, GeodeticPosition};
use inac_sim::solver::solve_ls;
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let epoch = Utc.with_ymd_and_hms(2025, 3, 26, 8, 0, 0).unwrap();
    let user = geodetic_to_ecef(&GeodeticPosition::new(39.95, 116.34, 50.0).unwrap());
    let [east, north, up] = enu_basis(&user).unwrap();

    // Eight LEO satellites spread over the sky (azimuth, elevation, range).
    let geometry: [(f64, f64, f64); 8] = [
        (0.0, 75.0, 800e3),
        (45.0, 30.0, 1_400e3),
        (95.0, 50.0, 1_100e3),
        (150.0, 20.0, 1_800e3),
        (210.0, 60.0, 900e3),
        (260.0, 28.0, 1_500e3),
        (305.0, 42.0, 1_200e3),
        (355.0, 18.0, 1_900e3),
    ];
    let sats: Vec<Vector3<f64>> = geometry
        .iter()
        .map(|&(az, el, r)| {
            let (az, el) = (az.to_radians(), el.to_radians());
            user + (east * (el.cos() * az.sin()) + north * (el.cos() * az.cos()) + up * el.sin()) * r
        })
        .collect();

    let true_bias_m = 150.0;
    let sigma_m = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let obs: Vec<_> = sats
        .iter()
        .enumerate()
        .map(|(i, s)| synth_pseudorange(i as u32, s, &user, true_bias_m, sigma_m, epoch, &mut rng))
        .collect();

    // Earth-center initial: the default cold start.
    let sol = solve_ls(&obs, &sats, (Vector3::zeros(), 0.0)).expect("solvable geometry");
    println!("converged in {} iterations", sol.iterations);
    println!("3D position error : {:.3} m", (sol.position_ecef - user).norm());
    println!("clock bias        : {:.3} m (truth {true_bias_m})", sol.clock_bias_m);
    println!("residual RMS      : {:.3} m (noise sigma {sigma_m})", sol.residual_rms);
    println!(
        "DOP               : gdop {:.2}, pdop {:.2}, hdop {:.2}, vdop {:.2}, tdop {:.2}",
        sol.dops.gdop, sol.dops.pdop, sol.dops.hdop, sol.dops.vdop, sol.dops.tdop
    );
    println!(
        "predicted 1-sigma : {:.3} m (pdop * sigma)",
        sol.dops.pdop * sigma_m
    );
}
