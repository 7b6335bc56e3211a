//! Superposition-coded INAC downlink modeling: amplitude power splits,
//! RIS cascaded channels with phase alignment, SIC-ordered rate pairs, and
//! Monte Carlo ergodic rates over fading draws.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

/// Amplitude allocation between the navigation and communication signals,
/// normalized so omega_n^2 + omega_c^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    omega_n: f64,
    omega_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LinkError {
    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("noise power must be positive, got {0}")]
    NonPositiveNoise(f64),
    #[error("allocation factors must be non-negative and not both zero")]
    InvalidSplit,
    #[error("RIS element amplitude must be non-negative and finite")]
    InvalidAmplitude,
}

impl PowerSplit {
    /// Build from (possibly unnormalized) non-negative amplitude factors.
    pub fn new(omega_n: f64, omega_c: f64) -> Result<Self, LinkError> {
        if omega_n.is_nan() || omega_c.is_nan() || omega_n < 0.0 || omega_c < 0.0 {
            return Err(LinkError::InvalidSplit);
        }
        let norm = omega_n.hypot(omega_c);
        if norm == 0.0 || !norm.is_finite() {
            return Err(LinkError::InvalidSplit);
        }
        Ok(Self { omega_n: omega_n / norm, omega_c: omega_c / norm })
    }

    /// Build from the communication power share omega_c^2 in [0, 1].
    pub fn from_comm_power(omega_c_sq: f64) -> Result<Self, LinkError> {
        if !(0.0..=1.0).contains(&omega_c_sq) {
            return Err(LinkError::InvalidSplit);
        }
        Ok(Self { omega_n: (1.0 - omega_c_sq).sqrt(), omega_c: omega_c_sq.sqrt() })
    }

    pub fn omega_n(&self) -> f64 {
        self.omega_n
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Navigation power share omega_n^2.
    pub fn nav_power(&self) -> f64 {
        self.omega_n * self.omega_n
    }

    /// Communication power share omega_c^2.
    pub fn comm_power(&self) -> f64 {
        self.omega_c * self.omega_c
    }
}

/// Which signal the receiver decodes interference-free after SIC.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServiceMode {
    /// Navigation-oriented: navigation decoded clean, communication sees
    /// the navigation signal as interference.
    NavigationOriented,
    /// Communication-oriented: the mirror assignment.
    CommunicationOriented,
}

/// Reflect configuration of one RIS: per-element phase and amplitude
/// (amplitude 1 = passive, > 1 = active amplification).
#[derive(Debug, Clone, PartialEq)]
pub struct RisPanel {
    phases_rad: Vec<f64>,
    amplitudes: Vec<f64>,
    /// Panel location for geometry modules, when placed in a scene.
    pub position: Option<nalgebra::Vector3<f64>>,
}

impl RisPanel {
    /// Passive panel: every element reflects with unit amplitude, zero phase.
    pub fn passive(n_elements: usize) -> Self {
        assert!(n_elements >= 1, "a RIS needs at least one element");
        Self { phases_rad: vec![0.0; n_elements], amplitudes: vec![1.0; n_elements], position: None }
    }

    /// Active panel with per-element amplitudes (>= 0).
    pub fn active(amplitudes: Vec<f64>) -> Result<Self, LinkError> {
        if amplitudes.is_empty() || amplitudes.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(LinkError::InvalidAmplitude);
        }
        let n = amplitudes.len();
        Ok(Self { phases_rad: vec![0.0; n], amplitudes, position: None })
    }

    pub fn n_elements(&self) -> usize {
        self.phases_rad.len()
    }

    pub fn phases_rad(&self) -> &[f64] {
        &self.phases_rad
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn set_phases(&mut self, phases_rad: Vec<f64>) -> Result<(), LinkError> {
        if phases_rad.len() != self.n_elements() {
            return Err(LinkError::LengthMismatch {
                left: phases_rad.len(),
                right: self.n_elements(),
            });
        }
        self.phases_rad = phases_rad;
        Ok(())
    }
}

/// Satellite -> RIS -> user cascaded channel with its composite gain
/// |sum_n a_n e^{j theta_n} h_u,n h_s,n|^2.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadedChannel {
    /// RIS -> user leg, one coefficient per element.
    pub ris_to_user: Vec<Complex64>,
    /// Satellite -> RIS leg, one coefficient per element.
    pub sat_to_ris: Vec<Complex64>,
    pub composite_gain: f64,
}

impl CascadedChannel {
    pub fn new(
        ris_to_user: Vec<Complex64>,
        sat_to_ris: Vec<Complex64>,
        panel: &RisPanel,
    ) -> Result<Self, LinkError> {
        let composite_gain = cascaded_gain(&ris_to_user, panel, &sat_to_ris)?;
        Ok(Self { ris_to_user, sat_to_ris, composite_gain })
    }
}

/// Superpose unit-power navigation and communication sample streams:
/// omega_n * s_n + omega_c * s_c, elementwise.
pub fn compose_inac_samples(
    split: PowerSplit,
    s_nav: &[Complex64],
    s_com: &[Complex64],
) -> Result<Vec<Complex64>, LinkError> {
    if s_nav.len() != s_com.len() {
        return Err(LinkError::LengthMismatch { left: s_nav.len(), right: s_com.len() });
    }
    Ok(s_nav
        .iter()
        .zip(s_com)
        .map(|(n, c)| n * split.omega_n + c * split.omega_c)
        .collect())
}

/// Composite cascaded gain through the panel.
pub fn cascaded_gain(
    ris_to_user: &[Complex64],
    panel: &RisPanel,
    sat_to_ris: &[Complex64],
) -> Result<f64, LinkError> {
    if ris_to_user.len() != sat_to_ris.len() {
        return Err(LinkError::LengthMismatch { left: ris_to_user.len(), right: sat_to_ris.len() });
    }
    if ris_to_user.len() != panel.n_elements() {
        return Err(LinkError::LengthMismatch {
            left: ris_to_user.len(),
            right: panel.n_elements(),
        });
    }
    let sum: Complex64 = ris_to_user
        .iter()
        .zip(sat_to_ris)
        .zip(panel.phases_rad.iter().zip(&panel.amplitudes))
        .map(|((hu, hs), (theta, a))| a * Complex64::from_polar(1.0, *theta) * hu * hs)
        .sum();
    Ok(sum.norm_sqr())
}

/// Phases that co-phase every element: theta_n = -arg(h_u,n * h_s,n).
/// Zero-magnitude element products get phase 0.
pub fn align_phases(
    ris_to_user: &[Complex64],
    sat_to_ris: &[Complex64],
) -> Result<Vec<f64>, LinkError> {
    if ris_to_user.len() != sat_to_ris.len() {
        return Err(LinkError::LengthMismatch { left: ris_to_user.len(), right: sat_to_ris.len() });
    }
    Ok(ris_to_user
        .iter()
        .zip(sat_to_ris)
        .map(|(hu, hs)| {
            let p = hu * hs;
            if p.norm_sqr() == 0.0 {
                0.0
            } else {
                -p.arg()
            }
        })
        .collect())
}

fn shannon_rate(bandwidth_hz: f64, signal: f64, interference: f64, noise: f64) -> f64 {
    bandwidth_hz * (1.0 + signal / (interference + noise)).log2()
}

/// SIC rate pair (navigation, communication) in bits/s.
///
/// The mode picks which signal is decoded interference-free: the other one
/// sees the full allocated power of its partner as interference.
pub fn capacity_pair(
    gain: f64,
    split: PowerSplit,
    mode: ServiceMode,
    bandwidth_hz: f64,
    noise_power_w: f64,
) -> Result<(f64, f64), LinkError> {
    if noise_power_w.is_nan() || noise_power_w <= 0.0 {
        return Err(LinkError::NonPositiveNoise(noise_power_w));
    }
    assert!(gain >= 0.0, "composite gain cannot be negative");
    let nav = gain * split.nav_power();
    let com = gain * split.comm_power();
    let (c_nav, c_com) = match mode {
        ServiceMode::NavigationOriented => (
            shannon_rate(bandwidth_hz, nav, 0.0, noise_power_w),
            shannon_rate(bandwidth_hz, com, nav, noise_power_w),
        ),
        ServiceMode::CommunicationOriented => (
            shannon_rate(bandwidth_hz, nav, com, noise_power_w),
            shannon_rate(bandwidth_hz, com, 0.0, noise_power_w),
        ),
    };
    Ok((c_nav, c_com))
}

/// Channel model for ergodic-rate evaluation: a deterministic satellite-side
/// leg (line-of-sight amplitude per element) and a Rician RIS -> user leg.
/// `rician_k = f64::INFINITY` collapses the user leg to a deterministic
/// unit coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingConfig {
    pub n_elements: usize,
    /// Rician K-factor of the RIS -> user leg (unit mean power).
    pub rician_k: f64,
    /// Deterministic per-element satellite-leg amplitude.
    pub sat_leg_amplitude: f64,
    pub bandwidth_hz: f64,
    pub noise_power_w: f64,
}

impl Default for FadingConfig {
    fn default() -> Self {
        Self {
            n_elements: 64,
            rician_k: 10.0,
            sat_leg_amplitude: 1.0,
            bandwidth_hz: 1.0,
            noise_power_w: 0.1,
        }
    }
}

/// Monte Carlo ergodic rates with 95% confidence half-widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicRates {
    pub c_nav_mean: f64,
    pub c_com_mean: f64,
    pub c_nav_half_width: f64,
    pub c_com_half_width: f64,
    pub trials: usize,
}

fn draw_rician<R: Rng + ?Sized>(k: f64, rng: &mut R) -> Complex64 {
    if k.is_infinite() {
        return Complex64::new(1.0, 0.0);
    }
    assert!(k >= 0.0, "Rician K must be non-negative");
    let los = (k / (k + 1.0)).sqrt();
    let sigma = (1.0 / (2.0 * (k + 1.0))).sqrt();
    let normal = Normal::new(0.0, sigma).expect("valid sigma");
    Complex64::new(los + normal.sample(rng), normal.sample(rng))
}

/// Average `capacity_pair` over channel draws with per-draw RIS phase
/// alignment (the perfect-CSI reflect configuration). Deterministic for a
/// given RNG stream state.
pub fn ergodic_rates<R: Rng + ?Sized>(
    channel: &FadingConfig,
    split: PowerSplit,
    mode: ServiceMode,
    trials: usize,
    rng: &mut R,
) -> Result<ErgodicRates, LinkError> {
    assert!(trials >= 1, "need at least one trial");
    let h_s = vec![Complex64::new(channel.sat_leg_amplitude, 0.0); channel.n_elements];
    let mut panel = RisPanel::passive(channel.n_elements);
    let mut nav = Vec::with_capacity(trials);
    let mut com = Vec::with_capacity(trials);
    for _ in 0..trials {
        let h_u: Vec<Complex64> =
            (0..channel.n_elements).map(|_| draw_rician(channel.rician_k, rng)).collect();
        panel.set_phases(align_phases(&h_u, &h_s)?)?;
        let gain = cascaded_gain(&h_u, &panel, &h_s)?;
        let (c_nav, c_com) =
            capacity_pair(gain, split, mode, channel.bandwidth_hz, channel.noise_power_w)?;
        nav.push(c_nav);
        com.push(c_com);
    }
    let stats = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        if xs.len() < 2 {
            return (mean, 0.0);
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        (mean, 1.96 * (var / xs.len() as f64).sqrt())
    };
    let (c_nav_mean, c_nav_half_width) = stats(&nav);
    let (c_com_mean, c_com_half_width) = stats(&com);
    Ok(ErgodicRates { c_nav_mean, c_com_mean, c_nav_half_width, c_com_half_width, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_normalizes_at_construction() {
        let s = PowerSplit::new(3.0, 4.0).unwrap();
        assert_relative_eq!(s.omega_n(), 0.6, max_relative = 1e-15);
        assert_relative_eq!(s.omega_c(), 0.8, max_relative = 1e-15);
        assert!((s.nav_power() + s.comm_power() - 1.0).abs() < 1e-12);

        let s = PowerSplit::from_comm_power(0.5).unwrap();
        assert!((s.nav_power() + s.comm_power() - 1.0).abs() < 1e-12);

        assert!(PowerSplit::new(-0.1, 0.5).is_err());
        assert!(PowerSplit::new(0.0, 0.0).is_err());
        assert!(PowerSplit::from_comm_power(1.2).is_err());
    }

    #[test]
    fn compose_degenerate_and_coherent_cases() {
        let s_n: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let s_c: Vec<Complex64> = (0..8).map(|i| Complex64::new(1.0, i as f64)).collect();

        let nav_only = PowerSplit::new(1.0, 0.0).unwrap();
        assert_eq!(compose_inac_samples(nav_only, &s_n, &s_c).unwrap(), s_n);

        let even = PowerSplit::new(1.0, 1.0).unwrap();
        let out = compose_inac_samples(even, &s_n, &s_n).unwrap();
        for (o, n) in out.iter().zip(&s_n) {
            assert_relative_eq!(o.re, (n * 2.0f64.sqrt()).re, max_relative = 1e-12);
            assert_relative_eq!(o.im, (n * 2.0f64.sqrt()).im, max_relative = 1e-12);
        }

        assert!(matches!(
            compose_inac_samples(even, &s_n, &s_c[..4]),
            Err(LinkError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn composed_power_stays_unit_for_uncorrelated_streams() {
        // QPSK-like unit-power symbols.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 1_000_000;
        let draw = |rng: &mut ChaCha8Rng| -> Complex64 {
            let quadrant = rng.random_range(0..4) as f64;
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * (2.0 * quadrant + 1.0))
        };
        let s_n: Vec<Complex64> = (0..n).map(|_| draw(&mut rng)).collect();
        let s_c: Vec<Complex64> = (0..n).map(|_| draw(&mut rng)).collect();
        for split in [
            PowerSplit::from_comm_power(0.2).unwrap(),
            PowerSplit::from_comm_power(0.5).unwrap(),
            PowerSplit::from_comm_power(0.9).unwrap(),
        ] {
            let out = compose_inac_samples(split, &s_n, &s_c).unwrap();
            let power = out.iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64;
            assert!((power - 1.0).abs() < 0.005, "power {power}");
        }
    }

    #[test]
    fn cascaded_gain_identity_and_worked_example() {
        let panel = RisPanel::passive(1);
        let one = vec![Complex64::new(1.0, 0.0)];
        assert_relative_eq!(cascaded_gain(&one, &panel, &one).unwrap(), 1.0, max_relative = 1e-15);

        // h_u = [1, i], h_s = [1, 1]; conjugate alignment gives (1+1)^2 = 4.
        let h_u = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let h_s = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let mut panel = RisPanel::passive(2);
        panel.set_phases(align_phases(&h_u, &h_s).unwrap()).unwrap();
        assert_relative_eq!(cascaded_gain(&h_u, &panel, &h_s).unwrap(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn n1_identity_reduces_to_product_magnitude() {
        let h_u = vec![Complex64::new(0.3, -0.7)];
        let h_s = vec![Complex64::new(-1.2, 0.4)];
        let panel = RisPanel::passive(1);
        let expect = (h_u[0] * h_s[0]).norm_sqr();
        assert_relative_eq!(
            cascaded_gain(&h_u, &panel, &h_s).unwrap(),
            expect,
            max_relative = 1e-12
        );
    }

    fn random_channel(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| {
                let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
                Complex64::new(normal.sample(rng), normal.sample(rng))
            })
            .collect()
    }

    #[test]
    fn aligned_gain_matches_magnitude_sum_oracle_and_dominates_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let n = 64;
        let h_u = random_channel(&mut rng, n);
        let h_s = random_channel(&mut rng, n);

        let mut panel = RisPanel::passive(n);
        panel.set_phases(align_phases(&h_u, &h_s).unwrap()).unwrap();
        let aligned = cascaded_gain(&h_u, &panel, &h_s).unwrap();

        // Independent oracle: (sum |h_u||h_s|)^2 with plain magnitudes.
        let oracle: f64 = h_u
            .iter()
            .zip(&h_s)
            .map(|(u, s)| u.norm() * s.norm())
            .sum::<f64>()
            .powi(2);
        assert_relative_eq!(aligned, oracle, max_relative = 1e-9);

        for _ in 0..1000 {
            let phases: Vec<f64> =
                (0..n).map(|_| rng.random_range(0.0..2.0 * std::f64::consts::PI)).collect();
            panel.set_phases(phases).unwrap();
            let g = cascaded_gain(&h_u, &panel, &h_s).unwrap();
            assert!(g <= aligned * (1.0 + 1e-12), "random beat aligned: {g} > {aligned}");
        }
    }

    #[test]
    fn all_real_channels_align_to_zero_phase() {
        let h: Vec<Complex64> = (1..5).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let phases = align_phases(&h, &h).unwrap();
        assert!(phases.iter().all(|p| *p == 0.0));

        // Uniform product phase: gain after alignment is N^2 for unit amps.
        let n = 16;
        let rot: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(1.0, 0.83)).collect();
        let unit: Vec<Complex64> = (0..n).map(|_| Complex64::new(1.0, 0.0)).collect();
        let mut panel = RisPanel::passive(n);
        panel.set_phases(align_phases(&rot, &unit).unwrap()).unwrap();
        let gain = cascaded_gain(&rot, &panel, &unit).unwrap();
        assert_relative_eq!(gain, (n * n) as f64, max_relative = 1e-12);
    }

    #[test]
    fn capacity_pair_worked_example() {
        // Frozen by direct arithmetic: gain 1, sigma^2 = 0.1, omega_c^2 = 0.5.
        let split = PowerSplit::from_comm_power(0.5).unwrap();
        let (c_nav, c_com) =
            capacity_pair(1.0, split, ServiceMode::NavigationOriented, 1.0, 0.1).unwrap();
        assert_relative_eq!(c_nav, 2.584_962_500_721_156, max_relative = 1e-9);
        assert_relative_eq!(c_com, 0.874_469_117_916_141_2, max_relative = 1e-9);
    }

    #[test]
    fn zero_allocated_power_means_zero_rate() {
        let split = PowerSplit::from_comm_power(1.0).unwrap();
        for mode in [ServiceMode::NavigationOriented, ServiceMode::CommunicationOriented] {
            let (c_nav, _) = capacity_pair(3.7, split, mode, 1e6, 1e-3).unwrap();
            assert_eq!(c_nav, 0.0);
        }
    }

    #[test]
    fn interference_limited_ceiling_at_large_gain() {
        let split = PowerSplit::from_comm_power(0.5).unwrap();
        let (_, c_com) =
            capacity_pair(1e18, split, ServiceMode::NavigationOriented, 1.0, 0.1).unwrap();
        let ceiling = (1.0 + split.comm_power() / split.nav_power()).log2();
        assert_relative_eq!(c_com, ceiling, max_relative = 1e-9);
    }

    #[test]
    fn rates_are_monotone_in_comm_share() {
        for mode in [ServiceMode::NavigationOriented, ServiceMode::CommunicationOriented] {
            let mut prev = capacity_pair(
                2.0,
                PowerSplit::from_comm_power(0.0).unwrap(),
                mode,
                1.0,
                0.05,
            )
            .unwrap();
            for k in 1..=100 {
                let split = PowerSplit::from_comm_power(k as f64 / 100.0).unwrap();
                let cur = capacity_pair(2.0, split, mode, 1.0, 0.05).unwrap();
                assert!(cur.0 <= prev.0 + 1e-12, "c_nav must not increase");
                assert!(cur.1 >= prev.1 - 1e-12, "c_com must not decrease");
                prev = cur;
            }
        }
    }

    #[test]
    fn sic_loser_rate_never_exceeds_clean_rate() {
        // delta = 1 (interference present) vs delta = 0 at equal allocated
        // power; clean decoding is the upper bound.
        for share in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let split = PowerSplit::from_comm_power(share).unwrap();
            let (_, c_com_with_interference) =
                capacity_pair(4.0, split, ServiceMode::NavigationOriented, 1.0, 0.2).unwrap();
            let (_, c_com_clean) =
                capacity_pair(4.0, split, ServiceMode::CommunicationOriented, 1.0, 0.2).unwrap();
            assert!(c_com_with_interference <= c_com_clean + 1e-12);
            // Zero interference gain recovers the Shannon rate.
            let direct = shannon_rate(1.0, 4.0 * split.comm_power(), 0.0, 0.2);
            assert_relative_eq!(c_com_clean, direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn deterministic_channel_matches_capacity_pair_exactly() {
        let split = PowerSplit::from_comm_power(0.4).unwrap();
        let channel = FadingConfig {
            n_elements: 8,
            rician_k: f64::INFINITY,
            sat_leg_amplitude: 0.5,
            bandwidth_hz: 2.0,
            noise_power_w: 0.3,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rates =
            ergodic_rates(&channel, split, ServiceMode::NavigationOriented, 10, &mut rng).unwrap();
        // All-ones user leg, aligned: gain = (8 * 0.5)^2 = 16. The mean of
        // identical draws only differs from the single value by summation
        // rounding.
        let (c_nav, c_com) =
            capacity_pair(16.0, split, ServiceMode::NavigationOriented, 2.0, 0.3).unwrap();
        assert_relative_eq!(rates.c_nav_mean, c_nav, max_relative = 1e-14);
        assert_relative_eq!(rates.c_com_mean, c_com, max_relative = 1e-14);
        assert!(rates.c_nav_half_width < 1e-12);
    }

    #[test]
    fn ergodic_sweep_reproduces_rate_trade_off() {
        let channel = FadingConfig {
            n_elements: 16,
            rician_k: 10.0,
            sat_leg_amplitude: 0.1,
            bandwidth_hz: 1.0,
            noise_power_w: 0.5,
        };
        let mut prev_nav = f64::INFINITY;
        let mut prev_com = -1.0;
        for k in 0..=20 {
            // Common random numbers across sweep points: re-seed per point.
            let mut rng = ChaCha8Rng::seed_from_u64(333);
            let split = PowerSplit::from_comm_power(k as f64 / 20.0).unwrap();
            let r = ergodic_rates(&channel, split, ServiceMode::NavigationOriented, 400, &mut rng)
                .unwrap();
            assert!(r.c_nav_mean <= prev_nav + 1e-12);
            assert!(r.c_com_mean >= prev_com - 1e-12);
            prev_nav = r.c_nav_mean;
            prev_com = r.c_com_mean;
        }
    }

    #[test]
    fn ergodic_estimate_stable_across_seeds() {
        let channel = FadingConfig {
            n_elements: 32,
            rician_k: 10.0,
            sat_leg_amplitude: 0.05,
            bandwidth_hz: 1.0,
            noise_power_w: 0.2,
        };
        let split = PowerSplit::from_comm_power(0.5).unwrap();
        let run = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            ergodic_rates(&channel, split, ServiceMode::NavigationOriented, 100_000, &mut rng)
                .unwrap()
        };
        let a = run(1);
        let b = run(2);
        assert!((a.c_nav_mean - b.c_nav_mean).abs() / a.c_nav_mean < 0.01);
        assert!((a.c_com_mean - b.c_com_mean).abs() / a.c_com_mean < 0.01);
    }

    #[test]
    fn triangle_inequality_bounds_composite_gain() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let n = rng.random_range(1..32);
            let h_u = random_channel(&mut rng, n);
            let h_s = random_channel(&mut rng, n);
            let mut panel = RisPanel::passive(n);
            let phases: Vec<f64> =
                (0..n).map(|_| rng.random_range(0.0..2.0 * std::f64::consts::PI)).collect();
            panel.set_phases(phases).unwrap();
            let gain = cascaded_gain(&h_u, &panel, &h_s).unwrap();
            let bound: f64 = h_u
                .iter()
                .zip(&h_s)
                .map(|(u, s)| u.norm() * s.norm())
                .sum::<f64>()
                .powi(2);
            assert!(gain <= bound * (1.0 + 1e-12));
        }
    }
}
