//! Deterministic, seedable simulator for integrated navigation and
//! communication (INAC) satellite networks.
//!
//! The crate covers the full chain from orbital-element catalogs to
//! communication/navigation trade-off curves:
//!
//! - [`tle`]: two-line element catalog parsing and formatting
//! - [`constellation`]: synthetic Walker constellation catalogs
//! - [`orbit`]: two-body propagation and ECI/ECEF/geodetic conversions
//! - [`geometry`]: look angles, elevation masks, dilution of precision
//! - [`observation`]: pseudorange/Doppler synthesis and link budgets
//! - [`solver`]: least-squares and Kalman position/velocity/time estimation
//! - [`link`]: superposition-coded downlink rates and RIS cascaded channels
//! - [`elos`]: RIS extended-line-of-sight ranging and indoor positioning
//! - [`scenario`]: config-driven experiment sweeps with CSV/plot output
//!
//! Every random quantity is drawn from explicit seeded streams, so any
//! experiment re-run with the same configuration and seed reproduces its
//! output byte for byte. The `examples/` directory contains one runnable
//! example per capability; the `inac-sim` binary drives whole scenarios
//! from JSON configs.

pub mod constants;
pub mod constellation;
pub mod elos;
pub mod geometry;
pub mod link;
pub mod observation;
pub mod orbit;
pub mod scenario;
pub mod solver;
pub mod tle;

pub use geometry::{DopFamily, TopocentricView};
pub use link::{PowerSplit, RisPanel, ServiceMode};
pub use orbit::{Frame, GeodeticPosition, StateVector};
pub use solver::PvtSolution;
pub use tle::TwoLineElements;
