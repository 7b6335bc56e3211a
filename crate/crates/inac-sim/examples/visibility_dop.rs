//! Visibility counts and DOP versus elevation mask for a synthetic
//! Walker mega-constellation.
//!
//! ```bash
//! cargo run --release --example visibility_dop
//! ```

use chrono::{TimeZone, Utc};
use inac_sim::constellation::WalkerShell;
use inac_sim::geometry::{dop, topocentric, visible_sats};
use inac_sim::orbit::{eci_to_ecef, geodetic_to_ecef, propagate, GeodeticPosition};

fn main() {
    let epoch = Utc.with_ymd_and_hms(2025, 3, 26, 8, 0, 0).unwrap();
    let shell = WalkerShell::starlink_like(epoch);
    let records = shell.generate();
    println!("{} satellites in {} planes at {} km", records.len(), shell.planes, shell.altitude_km);

    let user = geodetic_to_ecef(&GeodeticPosition::new(39.95, 116.34, 50.0).unwrap());
    let views: Vec<_> = records
        .iter()
        .filter_map(|rec| {
            let sv = eci_to_ecef(&propagate(rec, epoch).ok()?, epoch).ok()?;
            topocentric(rec.catalog_number, &user, &sv.position, &sv.velocity).ok()
        })
        .collect();

    println!("\n{:>10} {:>9} {:>8} {:>8} {:>8} {:>8}", "mask (deg)", "visible", "gdop", "pdop", "hdop", "vdop");
    for mask in (0..=80).step_by(10) {
        let visible = visible_sats(&views, mask as f64);
        match dop(&visible) {
            Ok(d) => println!(
                "{:>10} {:>9} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
                mask,
                visible.len(),
                d.gdop,
                d.pdop,
                d.hdop,
                d.vdop
            ),
            Err(e) => println!("{:>10} {:>9}  unusable: {e}", mask, visible.len()),
        }
    }
}
