//! Doppler-only positioning from LEO signals of opportunity: frequency
//! shifts from eight passing satellites pin down a static receiver to
//! tens of meters.
//!
//! ```bash
//! cargo run --example doppler_positioning
//! ```

use chrono::{TimeZone, Utc};
use inac_sim::constants::NAV_CARRIER_HZ;
use inac_sim::geometry::enu_basis;
use inac_sim::observation::synth_doppler;
use inac_sim::orbit::{geodetic_to_ecef, Frame, GeodeticPosition, StateVector};
use inac_sim::solver::solve_doppler_ls;
use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let epoch = Utc.with_ymd_and_hms(2025, 3, 26, 8, 0, 0).unwrap();
    let user = geodetic_to_ecef(&GeodeticPosition::new(39.95, 116.34, 50.0).unwrap());
    let [east, north, up] = enu_basis(&user).unwrap();

    // (azimuth, elevation, range, velocity heading, radial rate): LEO
    // speeds with a mix of rising and setting passes.
    let passes: [(f64, f64, f64, f64, f64); 8] = [
        (10.0, 65.0, 900e3, 20.0, -2_500.0),
        (55.0, 35.0, 1_400e3, 130.0, 1_800.0),
        (110.0, 50.0, 1_100e3, 250.0, -900.0),
        (160.0, 22.0, 1_900e3, 75.0, 3_000.0),
        (205.0, 70.0, 850e3, 310.0, 400.0),
        (250.0, 30.0, 1_500e3, 170.0, -3_200.0),
        (300.0, 45.0, 1_200e3, 40.0, 1_500.0),
        (345.0, 18.0, 2_000e3, 220.0, -600.0),
    ];
    let states: Vec<StateVector> = passes
        .iter()
        .map(|&(az, el, range, heading, radial)| {
            let (azr, elr) = (az.to_radians(), el.to_radians());
            let dir = east * (elr.cos() * azr.sin()) + north * (elr.cos() * azr.cos()) + up * elr.sin();
            let h = heading.to_radians();
            let horizontal = east * h.sin() + north * h.cos();
            let transverse = (7_500.0f64.powi(2) - radial * radial).sqrt();
            let velocity =
                (horizontal - dir * horizontal.dot(&dir)).normalize() * transverse + dir * radial;
            StateVector { epoch_utc: epoch, frame: Frame::Ecef, position: user + dir * range, velocity }
        })
        .collect();

    let sigma_hz = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let obs: Vec<_> = states
        .iter()
        .enumerate()
        .map(|(i, s)| synth_doppler(i as u32, s, &user, NAV_CARRIER_HZ, sigma_hz, &mut rng))
        .collect();
    for o in &obs {
        println!("sat {}: doppler {:+9.1} Hz", o.sat_id, o.doppler_hz);
    }

    // Coarse prior a few hundred kilometers off.
    let initial = user + Vector3::new(200e3, -150e3, 100e3);
    let sol = solve_doppler_ls(&obs, &states, initial).expect("solvable");
    println!("\nconverged in {} iterations", sol.iterations);
    println!("3D position error    : {:.1} m", (sol.position_ecef - user).norm());
    println!("receiver freq bias   : {:+.3} Hz", sol.freq_bias_hz.unwrap());
    println!("residual RMS         : {:.3} Hz (noise sigma {sigma_hz})", sol.residual_rms);
}
