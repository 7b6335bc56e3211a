//! Keplerian propagation and reference-frame conversions.
//!
//! Drag-free two-body propagation from TLE mean elements (optionally with
//! secular J2 drift of RAAN and argument of perigee), ECI<->ECEF rotation by
//! GMST, and WGS-84 geodetic conversions. UT1 is approximated by UTC
//! throughout; sub-arcsecond Earth-orientation effects are far below the
//! meter-level observation noise this simulator targets.

use chrono::{DateTime, TimeZone, Utc};
use nalgebra::{Rotation3, Vector3};
use thiserror::Error;

use crate::constants::{MU_EARTH, OMEGA_EARTH, WGS84_A, WGS84_B, WGS84_E2};
use crate::tle::TwoLineElements;

/// Coordinate frame tag for state vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Eci,
    Ecef,
}

/// Epoch-tagged position/velocity in a tagged frame.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub epoch_utc: DateTime<Utc>,
    pub frame: Frame,
    /// Position, meters.
    pub position: Vector3<f64>,
    /// Velocity, meters/second.
    pub velocity: Vector3<f64>,
}

/// WGS-84 geodetic coordinates.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeodeticPosition {
    /// Latitude, degrees in [-90, 90].
    pub latitude_deg: f64,
    /// Longitude, degrees in [-180, 180).
    pub longitude_deg: f64,
    /// Height above the WGS-84 ellipsoid, meters.
    pub height_m: f64,
}

impl GeodeticPosition {
    pub fn new(latitude_deg: f64, longitude_deg: f64, height_m: f64) -> Result<Self, OrbitError> {
        if !(-90.0..=90.0).contains(&latitude_deg) || !latitude_deg.is_finite() {
            return Err(OrbitError::InvalidGeodetic { value: latitude_deg });
        }
        if !longitude_deg.is_finite() {
            return Err(OrbitError::InvalidGeodetic { value: longitude_deg });
        }
        let mut lon = longitude_deg.rem_euclid(360.0);
        if lon >= 180.0 {
            lon -= 360.0;
        }
        Ok(Self { latitude_deg, longitude_deg: lon, height_m })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("Kepler solver did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("propagation epoch is {days:.2} days from the element epoch (guard is ±{guard} days)")]
    EpochTooFar { days: f64, guard: f64 },
    #[error("state vector is in frame {found:?}, expected {expected:?}")]
    FrameMismatch { expected: Frame, found: Frame },
    #[error("ECEF vector within 1 m of the Earth center")]
    DegenerateInput,
    #[error("geodetic coordinate out of range: {value}")]
    InvalidGeodetic { value: f64 },
}

/// Propagation fidelity switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropagationModel {
    /// Pure two-body motion from the mean elements.
    #[default]
    TwoBody,
    /// Two-body plus secular J2 drift of RAAN and argument of perigee.
    TwoBodyJ2,
}

const KEPLER_TOL: f64 = 1e-13;
const KEPLER_MAX_ITER: usize = 50;
const EPOCH_GUARD_DAYS: f64 = 7.0;

/// Solve Kepler's equation M = E - e*sin(E) for the eccentric anomaly.
///
/// Newton iteration to |E - e sin E - M| < 1e-12 rad; the result lies within
/// [M - pi, M + pi].
pub fn solve_kepler(mean_anomaly_rad: f64, eccentricity: f64) -> Result<f64, OrbitError> {
    assert!(
        (0.0..1.0).contains(&eccentricity),
        "eccentricity must be in [0, 1), got {eccentricity}"
    );
    let two_pi = 2.0 * std::f64::consts::PI;
    // Reduce to (-pi, pi]; the offset is restored at the end.
    let m = mean_anomaly_rad - (mean_anomaly_rad / two_pi).round() * two_pi;
    let mut e_anom = if eccentricity > 0.8 {
        std::f64::consts::PI.copysign(if m == 0.0 { 1.0 } else { m })
    } else {
        m + eccentricity * m.sin()
    };
    for _ in 0..KEPLER_MAX_ITER {
        let resid = e_anom - eccentricity * e_anom.sin() - m;
        if resid.abs() < KEPLER_TOL {
            return Ok(e_anom + (mean_anomaly_rad - m));
        }
        e_anom -= resid / (1.0 - eccentricity * e_anom.cos());
    }
    let resid = e_anom - eccentricity * e_anom.sin() - m;
    if resid.abs() < 1e-12 {
        return Ok(e_anom + (mean_anomaly_rad - m));
    }
    Err(OrbitError::NonConvergence(KEPLER_MAX_ITER))
}

fn seconds_between(later: DateTime<Utc>, earlier: DateTime<Utc>) -> f64 {
    (later - earlier).num_nanoseconds().map_or_else(
        || (later - earlier).num_milliseconds() as f64 / 1e3,
        |ns| ns as f64 / 1e9,
    )
}

/// Two-body propagation of TLE mean elements to an ECI state vector.
pub fn propagate(elements: &TwoLineElements, t: DateTime<Utc>) -> Result<StateVector, OrbitError> {
    propagate_with(elements, t, PropagationModel::TwoBody)
}

/// Propagation with an explicit fidelity model.
pub fn propagate_with(
    elements: &TwoLineElements,
    t: DateTime<Utc>,
    model: PropagationModel,
) -> Result<StateVector, OrbitError> {
    let dt = seconds_between(t, elements.epoch_utc);
    if dt.abs() > EPOCH_GUARD_DAYS * 86_400.0 {
        return Err(OrbitError::EpochTooFar { days: dt / 86_400.0, guard: EPOCH_GUARD_DAYS });
    }

    let n = elements.mean_motion_rad_s();
    let a = elements.semi_major_axis_m();
    let e = elements.eccentricity;
    let inc = elements.inclination_deg.to_radians();

    let mut raan = elements.raan_deg.to_radians();
    let mut argp = elements.arg_perigee_deg.to_radians();
    if model == PropagationModel::TwoBodyJ2 {
        let p = a * (1.0 - e * e);
        let factor = 1.5 * n * crate::constants::J2_EARTH * (WGS84_A / p).powi(2);
        raan += -factor * inc.cos() * dt;
        argp += factor * (2.0 - 2.5 * inc.sin().powi(2)) * dt;
    }

    let m = elements.mean_anomaly_deg.to_radians() + n * dt;
    let e_anom = solve_kepler(m, e)?;

    let (sin_e, cos_e) = e_anom.sin_cos();
    let r = a * (1.0 - e * cos_e);
    let pos_pf = Vector3::new(a * (cos_e - e), a * (1.0 - e * e).sqrt() * sin_e, 0.0);
    let vel_scale = (MU_EARTH * a).sqrt() / r;
    let vel_pf = Vector3::new(-vel_scale * sin_e, vel_scale * (1.0 - e * e).sqrt() * cos_e, 0.0);

    let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), raan)
        * Rotation3::from_axis_angle(&Vector3::x_axis(), inc)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), argp);

    Ok(StateVector {
        epoch_utc: t,
        frame: Frame::Eci,
        position: rot * pos_pf,
        velocity: rot * vel_pf,
    })
}

/// Greenwich mean sidereal time, radians in [0, 2*pi).
pub fn gmst_rad(t: DateTime<Utc>) -> f64 {
    let j2000 = Utc.with_ymd_and_hms(2000, 1, 1, 12, 0, 0).unwrap();
    let d = seconds_between(t, j2000) / 86_400.0;
    let t_c = d / 36_525.0;
    let gmst_deg = 280.460_618_37
        + 360.985_647_366_29 * d
        + 0.000_387_933 * t_c * t_c
        - t_c * t_c * t_c / 38_710_000.0;
    gmst_deg.rem_euclid(360.0).to_radians()
}

/// Rotate an ECI state into ECEF at time `t` (z-axis rotation by GMST; the
/// velocity picks up the -omega x r transport term).
pub fn eci_to_ecef(state: &StateVector, t: DateTime<Utc>) -> Result<StateVector, OrbitError> {
    if state.frame != Frame::Eci {
        return Err(OrbitError::FrameMismatch { expected: Frame::Eci, found: state.frame });
    }
    let theta = gmst_rad(t);
    // Frame rotation: ECEF axes lead ECI by GMST about z.
    let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), -theta);
    let position = rot * state.position;
    let omega = Vector3::new(0.0, 0.0, OMEGA_EARTH);
    let velocity = rot * state.velocity - omega.cross(&position);
    Ok(StateVector { epoch_utc: t, frame: Frame::Ecef, position, velocity })
}

/// WGS-84 geodetic to ECEF, meters.
pub fn geodetic_to_ecef(g: &GeodeticPosition) -> Vector3<f64> {
    let lat = g.latitude_deg.to_radians();
    let lon = g.longitude_deg.to_radians();
    let (sin_lat, cos_lat) = lat.sin_cos();
    let (sin_lon, cos_lon) = lon.sin_cos();
    let n = WGS84_A / (1.0 - WGS84_E2 * sin_lat * sin_lat).sqrt();
    Vector3::new(
        (n + g.height_m) * cos_lat * cos_lon,
        (n + g.height_m) * cos_lat * sin_lon,
        (n * (1.0 - WGS84_E2) + g.height_m) * sin_lat,
    )
}

/// ECEF to WGS-84 geodetic by Bowring's iteration (parametric latitude
/// fixed point, iterated to < 1e-12 rad).
pub fn ecef_to_geodetic(position: &Vector3<f64>) -> Result<GeodeticPosition, OrbitError> {
    if position.norm() < 1.0 {
        return Err(OrbitError::DegenerateInput);
    }
    let (x, y, z) = (position.x, position.y, position.z);
    let p = x.hypot(y);
    let lon = if p == 0.0 { 0.0 } else { y.atan2(x) };

    let ep2 = (WGS84_A * WGS84_A - WGS84_B * WGS84_B) / (WGS84_B * WGS84_B);
    let mut beta = (z * WGS84_A).atan2(p * WGS84_B);
    let mut lat = 0.0;
    for _ in 0..20 {
        let (sin_b, cos_b) = beta.sin_cos();
        lat = (z + ep2 * WGS84_B * sin_b.powi(3)).atan2(p - WGS84_E2 * WGS84_A * cos_b.powi(3));
        let beta_next = ((1.0 - crate::constants::WGS84_F) * lat.tan()).atan();
        let converged = (beta_next - beta).abs() < 1e-12;
        beta = beta_next;
        if converged {
            break;
        }
    }
    let (sin_lat, cos_lat) = lat.sin_cos();
    // Pole-safe height: exact for exact latitude.
    let height = p * cos_lat + z * sin_lat - WGS84_A * (1.0 - WGS84_E2 * sin_lat * sin_lat).sqrt();
    let mut lon_deg = lon.to_degrees();
    if lon_deg >= 180.0 {
        lon_deg -= 360.0;
    }
    Ok(GeodeticPosition {
        latitude_deg: lat.to_degrees(),
        longitude_deg: lon_deg,
        height_m: height,
    })
}
