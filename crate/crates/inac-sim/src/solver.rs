//! Position/velocity/time estimation from synthesized observables:
//! weighted Gauss-Newton least squares on pseudoranges, Doppler least
//! squares for a static receiver, and a constant-velocity EKF baseline.

use chrono::{DateTime, Utc};
use nalgebra::{Matrix4, SMatrix, SVector, Vector3, Vector4};
use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT;
use crate::geometry::{self, DopFamily, GeometryError};
use crate::observation::{DopplerObs, PseudorangeObs};
use crate::orbit::StateVector;

/// Iteration stop: state-update norm below this, meters (well under the
/// meter-level observation noise this simulator models).
pub const CONVERGENCE_TOL_M: f64 = 1e-4;
/// Iteration ceiling before reporting non-convergence.
pub const MAX_ITERATIONS: usize = 20;
/// Step-norm clamp; tames the first iteration from an Earth-center initial.
const STEP_CLAMP_M: f64 = 1e7;

/// Estimated navigation solution with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PvtSolution {
    /// Estimated receiver position, ECEF meters.
    pub position_ecef: Vector3<f64>,
    /// Receiver clock bias, meters (c * dt). Zero for solvers that do not
    /// estimate it.
    pub clock_bias_m: f64,
    /// Receiver velocity when the estimator models it.
    pub velocity_ecef: Option<Vector3<f64>>,
    /// Receiver frequency bias when the estimator models it (Doppler LS).
    pub freq_bias_hz: Option<f64>,
    /// DOP family evaluated from the line-of-sight geometry at the solution.
    pub dops: DopFamily,
    pub iterations: usize,
    /// RMS of post-fit residuals, in the observation unit (meters for
    /// ranging solvers, hertz for the Doppler solver).
    pub residual_rms: f64,
    pub converged: bool,
    /// State covariance (GT W G)^-1. Position block in meters^2; the fourth
    /// diagonal entry is m^2 for clock-bias states and Hz^2 for the Doppler
    /// solver's frequency bias.
    pub covariance: Matrix4<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("need at least {needed} observations, got {got}")]
    InsufficientSats { needed: usize, got: usize },
    #[error("observation geometry is numerically singular (condition {condition:.3e})")]
    SingularGeometry { condition: f64 },
    #[error("did not converge within {MAX_ITERATIONS} iterations (last update {last_step_m:.3e} m)")]
    NonConvergence {
        last_step_m: f64,
        solution: Box<PvtSolution>,
    },
    #[error("{obs} observations but {sats} satellite states")]
    LengthMismatch { obs: usize, sats: usize },
    #[error("filter step interval must be positive, got {0} s")]
    NonPositiveInterval(f64),
}

impl From<GeometryError> for SolverError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::InsufficientSats { needed, got } => {
                SolverError::InsufficientSats { needed, got }
            }
            GeometryError::SingularGeometry { condition } => {
                SolverError::SingularGeometry { condition }
            }
            GeometryError::CoincidentPoints | GeometryError::DegenerateUser(_) => {
                SolverError::SingularGeometry { condition: f64::INFINITY }
            }
        }
    }
}

/// Weights only matter relatively; zero-sigma (noise-free) observations are
/// treated as unit-variance so exact-data solves stay unweighted.
fn effective_sigma(sigma: f64) -> f64 {
    if sigma > 0.0 {
        sigma
    } else {
        1.0
    }
}

/// DOP family at a solved position, NaN-filled if the local geometry is
/// unusable (e.g. a diverged solution at the Earth center).
fn dops_at(position: &Vector3<f64>, sat_positions: &[Vector3<f64>]) -> DopFamily {
    let views: Result<Vec<_>, _> = sat_positions
        .iter()
        .enumerate()
        .map(|(i, sat)| geometry::topocentric(i as u32, position, sat, &Vector3::zeros()))
        .collect();
    views
        .ok()
        .and_then(|v| geometry::dop(&v).ok())
        .unwrap_or(DopFamily {
            gdop: f64::NAN,
            pdop: f64::NAN,
            hdop: f64::NAN,
            vdop: f64::NAN,
            tdop: f64::NAN,
        })
}

fn solve_normal_equations(
    normal: &Matrix4<f64>,
    rhs: &Vector4<f64>,
) -> Result<(Vector4<f64>, Matrix4<f64>), SolverError> {
    let sv = normal.singular_values();
    let max = sv.max();
    let min = sv.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition > geometry::SINGULARITY_CONDITION {
        return Err(SolverError::SingularGeometry { condition });
    }
    let inv = normal
        .try_inverse()
        .ok_or(SolverError::SingularGeometry { condition: f64::INFINITY })?;
    Ok((inv * rhs, inv))
}

/// A degenerate initial at the Earth center gets projected to the surface
/// point beneath the satellite centroid. Plain Gauss-Newton from the exact
/// center falls into the mirror stationary point on the far side of the
/// constellation shell whenever all satellites share one sky patch, which
/// is the normal situation for a ground user.
fn warm_start(initial: Vector3<f64>, sat_positions: &[Vector3<f64>]) -> Vector3<f64> {
    if initial.norm() >= 1.0 {
        return initial;
    }
    let mean: Vector3<f64> = sat_positions.iter().sum();
    if mean.norm() < 1.0 {
        return initial;
    }
    mean.normalize() * crate::constants::WGS84_A
}

/// Gauss-Newton pseudorange solution for position and clock bias.
///
/// `initial` is (ECEF position, clock bias in meters); the Earth center
/// `(zeros, 0)` is an acceptable default for LEO/MEO geometries.
pub fn solve_ls(
    obs: &[PseudorangeObs],
    sat_positions: &[Vector3<f64>],
    initial: (Vector3<f64>, f64),
) -> Result<PvtSolution, SolverError> {
    if obs.len() != sat_positions.len() {
        return Err(SolverError::LengthMismatch { obs: obs.len(), sats: sat_positions.len() });
    }
    if obs.len() < 4 {
        return Err(SolverError::InsufficientSats { needed: 4, got: obs.len() });
    }

    let (initial_position, mut bias) = initial;
    let mut position = warm_start(initial_position, sat_positions);
    let mut iterations = 0;
    let mut converged = false;
    let mut covariance = Matrix4::zeros();
    let mut last_step = f64::INFINITY;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut normal = Matrix4::<f64>::zeros();
        let mut rhs = Vector4::<f64>::zeros();
        for (o, sat) in obs.iter().zip(sat_positions) {
            let dx = sat - position;
            let range = dx.norm().max(1.0);
            let u = dx / range;
            let row = Vector4::new(-u.x, -u.y, -u.z, 1.0);
            let w = 1.0 / effective_sigma(o.sigma_m).powi(2);
            let residual = o.pseudorange_m - (range + bias);
            normal += w * row * row.transpose();
            rhs += w * residual * row;
        }
        let (mut step, inv) = solve_normal_equations(&normal, &rhs)?;
        covariance = inv;
        let norm = step.norm();
        if norm > STEP_CLAMP_M {
            step *= STEP_CLAMP_M / norm;
        }
        position += Vector3::new(step.x, step.y, step.z);
        bias += step.w;
        last_step = step.norm();
        if last_step < CONVERGENCE_TOL_M {
            converged = true;
            break;
        }
    }

    let residual_rms = (obs
        .iter()
        .zip(sat_positions)
        .map(|(o, sat)| {
            let pred = (sat - position).norm() + bias;
            (o.pseudorange_m - pred).powi(2)
        })
        .sum::<f64>()
        / obs.len() as f64)
        .sqrt();

    let solution = PvtSolution {
        position_ecef: position,
        clock_bias_m: bias,
        velocity_ecef: None,
        freq_bias_hz: None,
        dops: dops_at(&position, sat_positions),
        iterations,
        residual_rms,
        converged,
        covariance,
    };
    if !converged {
        return Err(SolverError::NonConvergence {
            last_step_m: last_step,
            solution: Box::new(solution),
        });
    }
    Ok(solution)
}

/// Gauss-Newton Doppler solution for a static receiver: position plus a
/// common receiver frequency bias. Position enters through the line-of-sight
/// direction only, so the per-satellite velocity diversity carries the
/// geometry.
pub fn solve_doppler_ls(
    obs: &[DopplerObs],
    sat_states: &[StateVector],
    initial: Vector3<f64>,
) -> Result<PvtSolution, SolverError> {
    if obs.len() != sat_states.len() {
        return Err(SolverError::LengthMismatch { obs: obs.len(), sats: sat_states.len() });
    }
    if obs.len() < 4 {
        return Err(SolverError::InsufficientSats { needed: 4, got: obs.len() });
    }

    let sat_positions_for_start: Vec<Vector3<f64>> =
        sat_states.iter().map(|s| s.position).collect();
    let mut position = warm_start(initial, &sat_positions_for_start);
    let mut freq_bias = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    let mut covariance = Matrix4::zeros();
    let mut last_step = f64::INFINITY;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut normal = Matrix4::<f64>::zeros();
        let mut rhs = Vector4::<f64>::zeros();
        for (o, sat) in obs.iter().zip(sat_states) {
            let dx = sat.position - position;
            let range = dx.norm().max(1.0);
            let u = dx / range;
            let radial = sat.velocity.dot(&u);
            let scale = -o.carrier_hz / SPEED_OF_LIGHT;
            let grad = scale * (radial * u - sat.velocity) / range;
            let row = Vector4::new(grad.x, grad.y, grad.z, 1.0);
            let w = 1.0 / effective_sigma(o.sigma_hz).powi(2);
            let residual = o.doppler_hz - (scale * radial + freq_bias);
            normal += w * row * row.transpose();
            rhs += w * residual * row;
        }
        let (mut step, inv) = solve_normal_equations(&normal, &rhs)?;
        covariance = inv;
        let pos_step = Vector3::new(step.x, step.y, step.z);
        if pos_step.norm() > STEP_CLAMP_M {
            step *= STEP_CLAMP_M / pos_step.norm();
        }
        position += Vector3::new(step.x, step.y, step.z);
        freq_bias += step.w;
        last_step = step.norm();
        if last_step < CONVERGENCE_TOL_M {
            converged = true;
            break;
        }
    }

    let residual_rms = (obs
        .iter()
        .zip(sat_states)
        .map(|(o, sat)| {
            let u = (sat.position - position).normalize();
            let pred = -sat.velocity.dot(&u) / SPEED_OF_LIGHT * o.carrier_hz + freq_bias;
            (o.doppler_hz - pred).powi(2)
        })
        .sum::<f64>()
        / obs.len() as f64)
        .sqrt();

    let sat_positions: Vec<Vector3<f64>> = sat_states.iter().map(|s| s.position).collect();
    let solution = PvtSolution {
        position_ecef: position,
        clock_bias_m: 0.0,
        velocity_ecef: None,
        freq_bias_hz: Some(freq_bias),
        dops: dops_at(&position, &sat_positions),
        iterations,
        residual_rms,
        converged,
        covariance,
    };
    if !converged {
        return Err(SolverError::NonConvergence {
            last_step_m: last_step,
            solution: Box::new(solution),
        });
    }
    Ok(solution)
}

/// Process-noise configuration for the constant-velocity EKF.
///
/// Clock defaults follow the standard two-state oscillator model
/// (q = c^2 h0 / 2 and q = 2 pi^2 c^2 h-2 with OCXO-grade h0 = 2e-19,
/// h-2 = 2e-20).
#[derive(Debug, Clone, Copy)]
pub struct EkfConfig {
    /// Position random-walk density, m^2/s.
    pub q_pos: f64,
    /// Velocity random-walk (white acceleration) density, m^2/s^3.
    pub q_vel: f64,
    /// Clock-bias random-walk density, m^2/s.
    pub q_clock_bias: f64,
    /// Clock-drift random-walk density, m^2/s^3.
    pub q_clock_drift: f64,
    /// Normalized-innovation-squared gate; measurements above it are
    /// rejected without touching the state.
    pub innovation_gate: f64,
}

impl Default for EkfConfig {
    fn default() -> Self {
        Self {
            q_pos: 0.0,
            q_vel: 0.1,
            q_clock_bias: 9.0e-3,
            q_clock_drift: 3.6e-2,
            innovation_gate: 25.0,
        }
    }
}

type Vector8 = SVector<f64, 8>;
type Matrix8 = SMatrix<f64, 8, 8>;

/// Constant-velocity extended Kalman filter over pseudorange observations.
/// State: [position (3), velocity (3), clock bias (m), clock drift (m/s)].
#[derive(Debug, Clone)]
pub struct PvtEkf {
    state: Vector8,
    covariance: Matrix8,
    config: EkfConfig,
    epoch: DateTime<Utc>,
}

/// Outcome of one predict/update cycle.
#[derive(Debug, Clone)]
pub struct EkfStep {
    pub solution: PvtSolution,
    /// Measurements rejected by the innovation gate this step.
    pub rejected_sat_ids: Vec<u32>,
}

impl PvtEkf {
    /// Initialize from a prior position/bias guess with diagonal
    /// uncertainty (sigmas in meters, m/s, m, m/s).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        epoch: DateTime<Utc>,
        position: Vector3<f64>,
        clock_bias_m: f64,
        sigma_pos_m: f64,
        sigma_vel_mps: f64,
        sigma_clock_m: f64,
        sigma_drift_mps: f64,
        config: EkfConfig,
    ) -> Self {
        let mut state = Vector8::zeros();
        state.fixed_rows_mut::<3>(0).copy_from(&position);
        state[6] = clock_bias_m;
        let mut covariance = Matrix8::zeros();
        for i in 0..3 {
            covariance[(i, i)] = sigma_pos_m * sigma_pos_m;
            covariance[(i + 3, i + 3)] = sigma_vel_mps * sigma_vel_mps;
        }
        covariance[(6, 6)] = sigma_clock_m * sigma_clock_m;
        covariance[(7, 7)] = sigma_drift_mps * sigma_drift_mps;
        Self { state, covariance, config, epoch }
    }

    pub fn state_position(&self) -> Vector3<f64> {
        self.state.fixed_rows::<3>(0).into_owned()
    }

    pub fn state_velocity(&self) -> Vector3<f64> {
        self.state.fixed_rows::<3>(3).into_owned()
    }

    pub fn covariance(&self) -> &Matrix8 {
        &self.covariance
    }

    fn predict(&mut self, dt: f64) {
        let mut f = Matrix8::identity();
        for i in 0..3 {
            f[(i, i + 3)] = dt;
        }
        f[(6, 7)] = dt;
        self.state = f * self.state;

        let c = &self.config;
        let mut q = Matrix8::zeros();
        for i in 0..3 {
            q[(i, i)] = c.q_vel * dt.powi(3) / 3.0 + c.q_pos * dt;
            q[(i, i + 3)] = c.q_vel * dt * dt / 2.0;
            q[(i + 3, i)] = q[(i, i + 3)];
            q[(i + 3, i + 3)] = c.q_vel * dt;
        }
        q[(6, 6)] = c.q_clock_bias * dt + c.q_clock_drift * dt.powi(3) / 3.0;
        q[(6, 7)] = c.q_clock_drift * dt * dt / 2.0;
        q[(7, 6)] = q[(6, 7)];
        q[(7, 7)] = c.q_clock_drift * dt;
        self.covariance = f * self.covariance * f.transpose() + q;
    }

    /// Predict to `epoch`, then apply each pseudorange as a sequential
    /// scalar update with innovation gating and a Joseph-form covariance
    /// update (keeps the covariance symmetric PSD).
    pub fn step(
        &mut self,
        epoch: DateTime<Utc>,
        obs: &[PseudorangeObs],
        sat_positions: &[Vector3<f64>],
    ) -> Result<EkfStep, SolverError> {
        if obs.len() != sat_positions.len() {
            return Err(SolverError::LengthMismatch { obs: obs.len(), sats: sat_positions.len() });
        }
        let dt = (epoch - self.epoch)
            .num_nanoseconds()
            .map(|ns| ns as f64 / 1e9)
            .unwrap_or(f64::NAN);
        if dt.is_nan() || dt <= 0.0 {
            return Err(SolverError::NonPositiveInterval(dt));
        }
        self.predict(dt);
        self.epoch = epoch;

        let mut rejected = Vec::new();
        for (o, sat) in obs.iter().zip(sat_positions) {
            let p = self.state_position();
            let dx = sat - p;
            let range = dx.norm().max(1.0);
            let u = dx / range;
            let predicted = range + self.state[6];
            let mut h = Vector8::zeros();
            h[0] = -u.x;
            h[1] = -u.y;
            h[2] = -u.z;
            h[6] = 1.0;
            // Absolute (not relative) noise level matters here; keep a
            // millimeter-level floor so noise-free data stays well posed.
            let r = o.sigma_m.max(1e-3).powi(2);
            let s = (h.transpose() * self.covariance * h)[(0, 0)] + r;
            let innovation = o.pseudorange_m - predicted;
            if innovation * innovation / s > self.config.innovation_gate {
                rejected.push(o.sat_id);
                continue;
            }
            let gain = self.covariance * h / s;
            self.state += gain * innovation;
            let ikh = Matrix8::identity() - gain * h.transpose();
            self.covariance =
                ikh * self.covariance * ikh.transpose() + gain * r * gain.transpose();
            self.covariance = (self.covariance + self.covariance.transpose()) / 2.0;
        }

        let position = self.state_position();
        let residual_rms = (obs
            .iter()
            .zip(sat_positions)
            .map(|(o, sat)| {
                let pred = (sat - position).norm() + self.state[6];
                (o.pseudorange_m - pred).powi(2)
            })
            .sum::<f64>()
            / obs.len().max(1) as f64)
            .sqrt();

        let mut covariance = Matrix4::zeros();
        let idx = [0usize, 1, 2, 6];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                covariance[(a, b)] = self.covariance[(i, j)];
            }
        }

        Ok(EkfStep {
            solution: PvtSolution {
                position_ecef: position,
                clock_bias_m: self.state[6],
                velocity_ecef: Some(self.state_velocity()),
                freq_bias_hz: None,
                dops: dops_at(&position, sat_positions),
                iterations: 1,
                residual_rms,
                converged: true,
                covariance,
            },
            rejected_sat_ids: rejected,
        })
    }
}
