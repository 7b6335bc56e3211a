//! Parse a small catalog of real two-line element records and show the
//! decoded fields, checksum handling, and the format round trip.
//!
//! ```bash
//! cargo run --example parse_catalog
//! ```

use inac_sim::tle::{parse_tle_file, tle_checksum};

const CATALOG: &str = "\
ISS (ZARYA)
1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927
2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537
MOLNIYA 3-5
1 08195U 75081A   06176.33215444  .00000099  00000-0  11873-3 0   813
2 08195  64.1586 279.0717 6877146 264.7651  20.2257  2.00491383225656
1 40056U 14034D   25209.55901054  .00000935  00000+0  13011-3 0  9999
2 40056  98.3577  67.3174 0012454 336.2296  23.8338 14.80323878587440
";

fn main() {
    let records = parse_tle_file(CATALOG).expect("catalog parses");
    println!("parsed {} records\n", records.len());
    for rec in &records {
        println!("{:<12} #{:<6} epoch {}", rec.name, rec.catalog_number, rec.epoch_utc);
        println!(
            "  i={:.4} deg  raan={:.4} deg  e={:.7}  argp={:.4} deg  M={:.4} deg",
            rec.inclination_deg,
            rec.raan_deg,
            rec.eccentricity,
            rec.arg_perigee_deg,
            rec.mean_anomaly_deg
        );
        println!(
            "  n={:.8} rev/day  a={:.1} km  bstar={:.3e}",
            rec.mean_motion_rev_day,
            rec.semi_major_axis_m() / 1e3,
            rec.bstar
        );

        let (l1, l2) = rec.to_lines();
        let reparsed = parse_tle_file(&format!("{}\n{}\n{}\n", rec.name, l1, l2)).unwrap();
        assert_eq!(&reparsed[0], rec, "format -> parse round trip");
        println!("  round trip ok; line-2 checksum digit: {}\n", tle_checksum(&l2[..68]));
    }

    // Corrupting any character makes the located checksum error fire.
    let broken = CATALOG.replacen("51.6416", "51.6417", 1);
    match parse_tle_file(&broken) {
        Err(e) => println!("corrupted catalog rejected: {e}"),
        Ok(_) => unreachable!("corruption must be caught"),
    }
}
