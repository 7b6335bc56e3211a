//! Physical and geodetic constants shared across the simulator.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Earth gravitational parameter (EGM-96), m^3/s^2.
pub const MU_EARTH: f64 = 3.986_004_418e14;

/// WGS-84 semi-major axis, m.
pub const WGS84_A: f64 = 6_378_137.0;

/// WGS-84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;

/// WGS-84 semi-minor axis, m.
pub const WGS84_B: f64 = WGS84_A * (1.0 - WGS84_F);

/// WGS-84 first eccentricity squared.
pub const WGS84_E2: f64 = WGS84_F * (2.0 - WGS84_F);

/// Earth rotation rate, rad/s.
pub const OMEGA_EARTH: f64 = 7.2921151467e-5;

/// Mean sidereal day, s.
pub const SIDEREAL_DAY_S: f64 = 86_164.090_5;

/// Earth second zonal harmonic (J2).
pub const J2_EARTH: f64 = 1.082_626_68e-3;

/// GPS L1 carrier, Hz. Default for navigation-band link budgets.
pub const NAV_CARRIER_HZ: f64 = 1.575_42e9;

/// Ku-band downlink carrier, Hz. Default for LEO communication budgets.
pub const KU_CARRIER_HZ: f64 = 12.0e9;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
