//! Observable synthesis: pseudoranges, Doppler shifts, and free-space link
//! budgets, all driven by explicit seeded RNG streams.

use chrono::{DateTime, Utc};
use nalgebra::Vector3;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT;
use crate::orbit::{Frame, StateVector};

/// Pseudorange observation, meters. The receiver clock bias is carried in
/// meters (c * dt) so the solver state stays in uniform units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudorangeObs {
    pub sat_id: u32,
    pub pseudorange_m: f64,
    pub sigma_m: f64,
    pub epoch_utc: DateTime<Utc>,
}

/// Doppler-shift observation, hertz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerObs {
    pub sat_id: u32,
    pub doppler_hz: f64,
    pub carrier_hz: f64,
    pub sigma_hz: f64,
}

/// Free-space link budget summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub fspl_db: f64,
    pub received_snr_db: f64,
    pub distance_m: f64,
    pub frequency_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ObservationError {
    #[error("`{name}` must be positive, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },
}

fn gaussian<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    assert!(sigma >= 0.0, "noise sigma must be non-negative");
    Normal::new(0.0, sigma).expect("valid sigma").sample(rng)
}

/// Pseudorange = geometric range + clock bias + N(0, sigma^2).
/// Deterministic for a given RNG stream state.
pub fn synth_pseudorange<R: Rng + ?Sized>(
    sat_id: u32,
    sat_pos_ecef: &Vector3<f64>,
    user_truth_ecef: &Vector3<f64>,
    clock_bias_m: f64,
    sigma_m: f64,
    epoch_utc: DateTime<Utc>,
    rng: &mut R,
) -> PseudorangeObs {
    let range = (sat_pos_ecef - user_truth_ecef).norm();
    PseudorangeObs {
        sat_id,
        pseudorange_m: range + clock_bias_m + gaussian(sigma_m, rng),
        sigma_m,
        epoch_utc,
    }
}

/// Doppler shift for a static user: -(v_sat . u_los)/c * f_carrier + noise,
/// with the line of sight pointing user -> satellite (approaching satellites
/// give positive shift).
pub fn synth_doppler<R: Rng + ?Sized>(
    sat_id: u32,
    sat_state: &StateVector,
    user_pos_ecef: &Vector3<f64>,
    carrier_hz: f64,
    sigma_hz: f64,
    rng: &mut R,
) -> DopplerObs {
    assert_eq!(sat_state.frame, Frame::Ecef, "Doppler synthesis expects an ECEF state");
    assert!(carrier_hz > 0.0, "carrier frequency must be positive");
    let u_los = (sat_state.position - user_pos_ecef).normalize();
    let radial = sat_state.velocity.dot(&u_los);
    DopplerObs {
        sat_id,
        doppler_hz: -radial / SPEED_OF_LIGHT * carrier_hz + gaussian(sigma_hz, rng),
        carrier_hz,
        sigma_hz,
    }
}

/// Free-space path loss, dB: 20 log10(4 pi d f / c).
pub fn fspl_db(distance_m: f64, frequency_hz: f64) -> Result<f64, ObservationError> {
    if distance_m <= 0.0 {
        return Err(ObservationError::NonPositiveInput { name: "distance_m", value: distance_m });
    }
    if frequency_hz <= 0.0 {
        return Err(ObservationError::NonPositiveInput { name: "frequency_hz", value: frequency_hz });
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * distance_m * frequency_hz / SPEED_OF_LIGHT).log10())
}

/// Received SNR, dB: EIRP + receive gain - FSPL - noise power.
pub fn received_snr_db(
    eirp_dbw: f64,
    rx_gain_db: f64,
    distance_m: f64,
    frequency_hz: f64,
    noise_power_dbw: f64,
) -> Result<f64, ObservationError> {
    Ok(eirp_dbw + rx_gain_db - fspl_db(distance_m, frequency_hz)? - noise_power_dbw)
}

/// Full link-budget record for one path.
pub fn link_budget(
    eirp_dbw: f64,
    rx_gain_db: f64,
    distance_m: f64,
    frequency_hz: f64,
    noise_power_dbw: f64,
) -> Result<LinkBudget, ObservationError> {
    let fspl = fspl_db(distance_m, frequency_hz)?;
    Ok(LinkBudget {
        fspl_db: fspl,
        received_snr_db: eirp_dbw + rx_gain_db - fspl - noise_power_dbw,
        distance_m,
        frequency_hz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{NAV_CARRIER_HZ, WGS84_A};
    use approx::assert_relative_eq;
    use chrono::TimeZone;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn epoch() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2025, 3, 26, 8, 0, 0).unwrap()
    }

    #[test]
    fn noiseless_pseudorange_is_geometric_range_plus_bias() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sat = Vector3::new(WGS84_A + 550e3, 0.0, 0.0);
        let user = Vector3::new(WGS84_A, 0.0, 0.0);
        let obs = synth_pseudorange(1, &sat, &user, 0.0, 0.0, epoch(), &mut rng);
        assert_eq!(obs.pseudorange_m, 550e3);
        let obs = synth_pseudorange(1, &sat, &user, 300.0, 0.0, epoch(), &mut rng);
        assert_eq!(obs.pseudorange_m, 550e3 + 300.0);
    }

    #[test]
    fn pseudorange_noise_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let sat = Vector3::new(WGS84_A + 1_000e3, 200e3, -100e3);
        let user = Vector3::new(WGS84_A, 0.0, 0.0);
        let truth = (sat - user).norm() + 150.0;
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| synth_pseudorange(1, &sat, &user, 150.0, 2.0, epoch(), &mut rng).pseudorange_m)
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - truth).abs() < 0.02, "mean offset {}", mean - truth);
        assert!((var.sqrt() - 2.0).abs() < 0.04, "std {}", var.sqrt());
    }

    #[test]
    fn pseudorange_noise_is_normal_shaped() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let x = gaussian(2.0, &mut rng);
            sum += x;
            samples.push(x);
        }
        let mean = sum / n as f64;
        let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let m3 = samples.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n as f64;
        let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
        let skew = m3 / m2.powf(1.5);
        let excess_kurtosis = m4 / (m2 * m2) - 3.0;
        assert!(skew.abs() < 0.05, "skew {skew}");
        assert!(excess_kurtosis.abs() < 0.1, "kurtosis {excess_kurtosis}");
    }

    #[test]
    fn seed_determinism_is_bit_exact() {
        let sat = Vector3::new(WGS84_A + 550e3, 123.0, 456.0);
        let user = Vector3::new(WGS84_A, 0.0, 0.0);
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let oa = synth_pseudorange(1, &sat, &user, 10.0, 2.0, epoch(), &mut a);
            let ob = synth_pseudorange(1, &sat, &user, 10.0, 2.0, epoch(), &mut b);
            assert_eq!(oa.pseudorange_m.to_bits(), ob.pseudorange_m.to_bits());
        }
    }

    fn ecef_state(pos: Vector3<f64>, vel: Vector3<f64>) -> StateVector {
        StateVector { epoch_utc: epoch(), frame: Frame::Ecef, position: pos, velocity: vel }
    }

    #[test]
    fn doppler_sign_and_magnitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let user = Vector3::new(WGS84_A, 0.0, 0.0);
        let sat_pos = Vector3::new(WGS84_A + 1_000e3, 0.0, 0.0);

        let stationary = ecef_state(sat_pos, Vector3::zeros());
        let obs = synth_doppler(1, &stationary, &user, NAV_CARRIER_HZ, 0.0, &mut rng);
        assert_eq!(obs.doppler_hz, 0.0);

        // Radially approaching at 7.5 km/s: frozen value 39412.766 Hz.
        let approaching = ecef_state(sat_pos, Vector3::new(-7_500.0, 0.0, 0.0));
        let obs = synth_doppler(1, &approaching, &user, NAV_CARRIER_HZ, 0.0, &mut rng);
        assert_relative_eq!(obs.doppler_hz, 39_412.766_014_280_45, max_relative = 1e-12);
        assert!((obs.doppler_hz - 39_400.0).abs() < 100.0);

        let tangential = ecef_state(sat_pos, Vector3::new(0.0, 7_500.0, 0.0));
        let obs = synth_doppler(1, &tangential, &user, NAV_CARRIER_HZ, 0.0, &mut rng);
        assert!(obs.doppler_hz.abs() < 1e-9);
    }

    #[test]
    fn fspl_reference_values() {
        // Decade in distance = +20 dB exactly.
        let f = NAV_CARRIER_HZ;
        let a = fspl_db(10e3, f).unwrap();
        let b = fspl_db(100e3, f).unwrap();
        assert_relative_eq!(b - a, 20.0, max_relative = 1e-12);

        // Frozen: LEO (550 km) vs MEO (20200 km) gap.
        let leo = fspl_db(550e3, f).unwrap();
        let meo = fspl_db(20_200e3, f).unwrap();
        assert_relative_eq!(leo, 151.202_964_102_740_74, max_relative = 1e-12);
        assert_relative_eq!(meo - leo, 31.299_773_599_047_597, max_relative = 1e-9);

        // Unit-gain distance.
        let d0 = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * f);
        assert!(fspl_db(d0, f).unwrap().abs() < 1e-9);

        assert!(fspl_db(0.0, f).is_err());
        assert!(fspl_db(1.0, -5.0).is_err());
    }

    #[test]
    fn snr_linearity_and_leo_meo_sign_flip() {
        let f = NAV_CARRIER_HZ;
        let base = received_snr_db(0.0, 0.0, 550e3, f, 0.0).unwrap();
        assert_relative_eq!(base, -fspl_db(550e3, f).unwrap(), max_relative = 1e-12);
        let plus3 = received_snr_db(3.0, 0.0, 550e3, f, 0.0).unwrap();
        assert_relative_eq!(plus3 - base, 3.0, max_relative = 1e-12);

        // EIRP chosen between the LEO and MEO path losses flips the SNR sign.
        let eirp = 170.0;
        let leo_snr = received_snr_db(eirp, 0.0, 550e3, f, 0.0).unwrap();
        let meo_snr = received_snr_db(eirp, 0.0, 20_200e3, f, 0.0).unwrap();
        assert!(leo_snr > 0.0 && meo_snr < 0.0, "leo {leo_snr} meo {meo_snr}");
    }

    proptest! {
        #[test]
        fn fspl_monotone_in_both_arguments(
            d in 1.0f64..1e8, f in 1e6f64..1e11, factor in 1.001f64..100.0,
        ) {
            let base = fspl_db(d, f).unwrap();
            prop_assert!(fspl_db(d * factor, f).unwrap() > base);
            prop_assert!(fspl_db(d, f * factor).unwrap() > base);
        }

        #[test]
        fn doppler_antisymmetric_under_velocity_negation(
            vx in -8e3f64..8e3, vy in -8e3f64..8e3, vz in -8e3f64..8e3,
            px in 5e5f64..3e6,
        ) {
            let user = Vector3::new(WGS84_A, 0.0, 0.0);
            let pos = Vector3::new(WGS84_A + px, 2e5, -1e5);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let fwd = synth_doppler(
                1, &ecef_state(pos, Vector3::new(vx, vy, vz)), &user, NAV_CARRIER_HZ, 0.0, &mut rng);
            let rev = synth_doppler(
                1, &ecef_state(pos, Vector3::new(-vx, -vy, -vz)), &user, NAV_CARRIER_HZ, 0.0, &mut rng);
            prop_assert!((fwd.doppler_hz + rev.doppler_hz).abs() < 1e-9 * fwd.doppler_hz.abs().max(1.0));
        }
    }
}
