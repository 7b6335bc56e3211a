//! Propagate a real element set around one orbit and check the two-body
//! conservation laws, then drop the track to ground coordinates.
//!
//! ```bash
//! cargo run --example propagate_orbit
//! ```

use chrono::Duration;
use inac_sim::constants::MU_EARTH;
use inac_sim::orbit::{ecef_to_geodetic, eci_to_ecef, propagate};
use inac_sim::tle::parse_tle_file;

const ISS: &str = "\
ISS (ZARYA)
1 25544U 98067A   21316.58314353 -.00007551  00000-0 -13101-3 0  9994
2 25544  51.6461 221.2784 0001413  89.1723 280.4612 15.49507896236008
";

fn main() {
    let rec = parse_tle_file(ISS).expect("parses")[0].clone();
    let period_s = 86_400.0 / rec.mean_motion_rev_day;
    let a = rec.semi_major_axis_m();
    println!(
        "{}: a = {:.1} km, period = {:.1} min\n",
        rec.name,
        a / 1e3,
        period_s / 60.0
    );

    println!("{:>6} {:>12} {:>12} {:>10} {:>9} {:>9}", "t (s)", "|r| (km)", "|v| (m/s)", "energy", "lat", "lon");
    let expected_energy = -MU_EARTH / (2.0 * a);
    for k in 0..=8 {
        let dt = period_s * k as f64 / 8.0;
        let t = rec.epoch_utc + Duration::milliseconds((dt * 1e3) as i64);
        let eci = propagate(&rec, t).expect("within epoch guard");
        let energy = eci.velocity.norm_squared() / 2.0 - MU_EARTH / eci.position.norm();
        assert!((energy / expected_energy - 1.0).abs() < 1e-9, "energy conserved");

        let ecef = eci_to_ecef(&eci, t).unwrap();
        let ground = ecef_to_geodetic(&ecef.position).unwrap();
        println!(
            "{:>6.0} {:>12.2} {:>12.2} {:>10.3e} {:>8.2}N {:>8.2}E",
            dt,
            eci.position.norm() / 1e3,
            eci.velocity.norm(),
            energy,
            ground.latitude_deg,
            ground.longitude_deg
        );
    }
    println!("\nspecific orbital energy matched -mu/2a at every sample");
}
