//! Free-space link budgets across orbit regimes: the LEO/MEO path-loss
//! gap and kHz-scale LEO Doppler.
//!
//! ```bash
//! cargo run --example link_budget
//! ```

use inac_sim::constants::{NAV_CARRIER_HZ, SPEED_OF_LIGHT};
use inac_sim::observation::{fspl_db, link_budget};

fn main() {
    let f = NAV_CARRIER_HZ;
    let eirp_dbw = 27.0;
    let noise_dbw = -141.0; // ~kTB for 2 MHz at 290 K

    println!("carrier {:.5} GHz, EIRP {eirp_dbw} dBW, noise {noise_dbw} dBW\n", f / 1e9);
    println!("{:>10} {:>12} {:>12} {:>12}", "orbit", "range (km)", "FSPL (dB)", "SNR (dB)");
    for (name, d) in [("LEO", 550e3), ("LEO high", 1_200e3), ("MEO", 20_200e3), ("GEO", 35_786e3)] {
        let b = link_budget(eirp_dbw, 0.0, d, f, noise_dbw).unwrap();
        println!("{:>10} {:>12.0} {:>12.2} {:>12.2}", name, d / 1e3, b.fspl_db, b.received_snr_db);
    }

    let gap = fspl_db(20_200e3, f).unwrap() - fspl_db(550e3, f).unwrap();
    println!("\nLEO (550 km) signals arrive {gap:.1} dB stronger than MEO (20200 km)");

    let radial = 7_500.0;
    let doppler_khz = radial / SPEED_OF_LIGHT * f / 1e3;
    println!("a LEO pass at {radial} m/s radial velocity shifts the carrier by {doppler_khz:.1} kHz");
}
