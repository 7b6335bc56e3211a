//! RIS extended-line-of-sight (ELoS) ranging: reflected-path geometry,
//! synchronization-error observation synthesis, anchor-based indoor
//! positioning, and the satellite-RIS distance trade-off sweep.
//!
//! Positions in this module live in a local right-handed frame (meters,
//! z up) rather than ECEF; RIS anchors and indoor rooms are naturally
//! described that way.

use nalgebra::{Matrix3, Matrix4, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT;
use crate::geometry::{self, DopFamily};
use crate::link::{ergodic_rates, FadingConfig, PowerSplit, ServiceMode};
use crate::observation::PseudorangeObs;
use crate::solver::{self, PvtSolution, SolverError, CONVERGENCE_TOL_M};

/// Iteration budget for the anchor-range solvers. Deeper than the
/// navigation solver's: near-zero range draws (heavy sync noise against
/// room-scale baselines) park the minimizer next to an anchor's cone
/// vertex, where damped steps shrink geometrically instead of
/// quadratically.
const RANGE_MAX_ITERATIONS: usize = 50;

/// One extended-path range observation through (or from) a RIS anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElosObservation {
    pub anchor_id: u32,
    /// Measured path length, meters: geometric path plus synchronization
    /// and thermal contributions.
    pub total_path_m: f64,
    /// Thermal ranging noise standard deviation, meters.
    pub sigma_m: f64,
    /// The synchronization contribution applied to this observation, meters.
    pub sync_bias_m: f64,
}

/// How the clock-synchronization error enters the ranging domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyncErrorModel {
    /// Zero-mean Gaussian with std c*tau per observation.
    #[default]
    GaussianPerObservation,
    /// Constant offset c*tau on every observation (sensitivity studies).
    ConstantBias,
}

/// Room-scale positioning scenario with RIS panels as ranging anchors.
#[derive(Debug, Clone)]
pub struct IndoorScenario {
    /// Anchor positions, local frame meters.
    pub ris_anchors: Vec<Vector3<f64>>,
    pub user_truth: Vector3<f64>,
    /// Global time-synchronization error, seconds.
    pub sync_error_s: f64,
    /// Thermal ranging noise, meters.
    pub range_sigma_m: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElosError {
    #[error("path endpoints must be distinct points")]
    CoincidentPoints,
    #[error("need at least {needed} anchors, got {got}")]
    InsufficientAnchors { needed: usize, got: usize },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Link(#[from] crate::link::LinkError),
    #[error("sweep distances must be positive, strictly ascending, and start beyond the track start ({min:.1} m)")]
    InvalidDistanceGrid { min: f64 },
}

/// Reflected path length satellite -> RIS -> user.
pub fn elos_path_length(
    sat: &Vector3<f64>,
    ris: &Vector3<f64>,
    user: &Vector3<f64>,
) -> Result<f64, ElosError> {
    let leg_in = (sat - ris).norm();
    let leg_out = (ris - user).norm();
    if leg_in < 1e-9 || leg_out < 1e-9 {
        return Err(ElosError::CoincidentPoints);
    }
    Ok(leg_in + leg_out)
}

/// Synthesize ELoS observations from true path lengths. The sync model adds
/// either a per-observation Gaussian of std c*tau or a constant c*tau bias.
pub fn synth_elos_obs<R: Rng + ?Sized>(
    anchor_paths: &[(u32, f64)],
    sync_error_s: f64,
    sigma_m: f64,
    model: SyncErrorModel,
    rng: &mut R,
) -> Vec<ElosObservation> {
    assert!(sigma_m >= 0.0 && sync_error_s >= 0.0);
    let sync_std = SPEED_OF_LIGHT * sync_error_s;
    let sync_normal = Normal::new(0.0, sync_std).expect("valid sync std");
    let thermal = Normal::new(0.0, sigma_m).expect("valid sigma");
    anchor_paths
        .iter()
        .map(|&(anchor_id, path)| {
            let sync = match model {
                SyncErrorModel::GaussianPerObservation => sync_normal.sample(rng),
                SyncErrorModel::ConstantBias => sync_std,
            };
            ElosObservation {
                anchor_id,
                total_path_m: path + sync + thermal.sample(rng),
                sigma_m,
                sync_bias_m: sync,
            }
        })
        .collect()
}

impl IndoorScenario {
    /// Draw one observation per anchor (RIS -> user direct ranging).
    pub fn synth_obs<R: Rng + ?Sized>(
        &self,
        model: SyncErrorModel,
        rng: &mut R,
    ) -> Vec<ElosObservation> {
        let paths: Vec<(u32, f64)> = self
            .ris_anchors
            .iter()
            .enumerate()
            .map(|(i, a)| (i as u32, (a - self.user_truth).norm()))
            .collect();
        synth_elos_obs(&paths, self.sync_error_s, self.range_sigma_m, model, rng)
    }
}

fn nan_dops() -> DopFamily {
    DopFamily { gdop: f64::NAN, pdop: f64::NAN, hdop: f64::NAN, vdop: f64::NAN, tdop: f64::NAN }
}

/// Position-only range solve (time-synchronized case: no clock unknown).
/// Levenberg-Marquardt damped Gauss-Newton; same step tolerance and
/// iteration budget as the pseudorange solver. Plain Gauss-Newton stalls
/// in this geometry class: far from a compact anchor cluster the vertical
/// direction is nearly unobservable and undamped steps zigzag along the
/// flat valley.
fn solve_ranges_position_only(
    measurements: &[(Vector3<f64>, f64, f64)],
    initial: Vector3<f64>,
) -> Result<PvtSolution, SolverError> {
    let mut position = initial;
    let mut iterations = 0;
    let mut converged = false;
    let mut covariance3 = Matrix3::zeros();
    let mut last_step = f64::INFINITY;
    let mut lambda = 1e-3;

    let cost = |p: &Vector3<f64>| -> f64 {
        measurements
            .iter()
            .map(|(anchor, measured, sigma)| {
                let w = 1.0 / if *sigma > 0.0 { sigma * sigma } else { 1.0 };
                w * (measured - (anchor - p).norm()).powi(2)
            })
            .sum()
    };

    while iterations < RANGE_MAX_ITERATIONS {
        iterations += 1;
        let mut normal = Matrix3::<f64>::zeros();
        let mut rhs = Vector3::<f64>::zeros();
        for (anchor, measured, sigma) in measurements {
            let dx = anchor - position;
            let range = dx.norm().max(1e-6);
            let u = dx / range;
            let w = 1.0 / if *sigma > 0.0 { sigma * sigma } else { 1.0 };
            // d(range)/d(position) = -u, folded into the sign of rhs.
            normal += w * u * u.transpose();
            rhs -= w * (measured - range) * u;
        }
        let sv = normal.singular_values();
        let condition = if sv.min() > 0.0 { sv.max() / sv.min() } else { f64::INFINITY };
        if condition > geometry::SINGULARITY_CONDITION {
            return Err(SolverError::SingularGeometry { condition });
        }
        covariance3 = normal
            .try_inverse()
            .ok_or(SolverError::SingularGeometry { condition: f64::INFINITY })?;

        let current = cost(&position);
        let mut step = Vector3::zeros();
        for _ in 0..12 {
            let mut damped = normal;
            for i in 0..3 {
                damped[(i, i)] += lambda * normal[(i, i)].max(1e-12);
            }
            let candidate = match damped.try_inverse() {
                Some(inv) => inv * rhs,
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            if cost(&(position + candidate)) <= current {
                step = candidate;
                lambda = (lambda / 3.0).max(1e-12);
                break;
            }
            lambda *= 10.0;
        }
        position += step;
        last_step = step.norm();
        // Step below tolerance, or a numerically stationary cost: a
        // measurement drawn below zero pulls the minimizer onto the
        // non-smooth cone vertex at an anchor, where step sizes never
        // reach the tolerance although the cost has fully flattened.
        let stalled = current - cost(&position) <= 1e-12 * current.max(f64::MIN_POSITIVE);
        if last_step < CONVERGENCE_TOL_M || stalled {
            converged = true;
            break;
        }
    }

    let residual_rms = (measurements
        .iter()
        .map(|(anchor, measured, _)| (measured - (anchor - position).norm()).powi(2))
        .sum::<f64>()
        / measurements.len() as f64)
        .sqrt();

    let units: Vec<Vector3<f64>> = measurements
        .iter()
        .map(|(anchor, _, _)| (anchor - position).normalize())
        .collect();
    let dops = geometry::dop_from_unit_vectors(&units, false).unwrap_or_else(|_| nan_dops());

    let mut covariance = Matrix4::zeros();
    for i in 0..3 {
        for j in 0..3 {
            covariance[(i, j)] = covariance3[(i, j)];
        }
    }

    let solution = PvtSolution {
        position_ecef: position,
        clock_bias_m: 0.0,
        velocity_ecef: None,
        freq_bias_hz: None,
        dops,
        iterations,
        residual_rms,
        converged,
        covariance,
    };
    if !converged {
        return Err(SolverError::NonConvergence { last_step_m: last_step, solution: Box::new(solution) });
    }
    Ok(solution)
}

/// Deterministic start point for anchor-range solves: below the best-fit
/// anchor plane, one spread-length from the centroid. RIS anchors hang on
/// ceilings and walls above the user; symmetric starts (the centroid
/// itself) sit on the mirror-ambiguity boundary of near-coplanar anchor
/// sets and can converge to the reflected solution.
pub fn indoor_initial(anchors: &[Vector3<f64>]) -> Vector3<f64> {
    let centroid = anchors.iter().sum::<Vector3<f64>>() / anchors.len() as f64;
    let mut scatter = Matrix3::<f64>::zeros();
    let mut spread_sq = 0.0;
    for a in anchors {
        let d = a - centroid;
        scatter += d * d.transpose();
        spread_sq += d.norm_squared();
    }
    let spread = (spread_sq / anchors.len() as f64).sqrt();
    let eigen = scatter.symmetric_eigen();
    let (mut min_idx, mut min_val) = (0, f64::INFINITY);
    for i in 0..3 {
        if eigen.eigenvalues[i] < min_val {
            min_val = eigen.eigenvalues[i];
            min_idx = i;
        }
    }
    let mut normal = eigen.eigenvectors.column(min_idx).into_owned();
    // Orient the plane normal upward (+z preferred) so "below" is defined.
    if normal.z < 0.0 || (normal.z == 0.0 && (normal.x < 0.0 || (normal.x == 0.0 && normal.y < 0.0)))
    {
        normal = -normal;
    }
    centroid - normal * (spread + 1.0)
}

/// Height-constrained (2D) variant of [`solve_indoor`] for receivers at a
/// known height: estimates x and y only, which keeps the problem observable
/// far from a compact, near-coplanar anchor cluster where the vertical
/// component carries almost no information. Needs at least 3 observations.
pub fn solve_indoor_fixed_height(
    obs: &[ElosObservation],
    anchors: &[Vector3<f64>],
    height: f64,
) -> Result<PvtSolution, ElosError> {
    if obs.len() != anchors.len() {
        return Err(ElosError::Solver(SolverError::LengthMismatch {
            obs: obs.len(),
            sats: anchors.len(),
        }));
    }
    if obs.len() < 3 {
        return Err(ElosError::InsufficientAnchors { needed: 3, got: obs.len() });
    }
    let centroid = anchors.iter().sum::<Vector3<f64>>() / anchors.len() as f64;
    // Closed-form linear multilateration (range-difference equations are
    // linear in position once squared) seeds the iteration; the centroid
    // is the fallback when the anchor baseline is degenerate.
    let linear_init = {
        let a1 = anchors[0];
        let r1 = obs[0].total_path_m;
        let mut normal = nalgebra::Matrix2::<f64>::zeros();
        let mut rhs = nalgebra::Vector2::<f64>::zeros();
        for (o, ai) in obs.iter().zip(anchors).skip(1) {
            let row = nalgebra::Vector2::new(2.0 * (ai.x - a1.x), 2.0 * (ai.y - a1.y));
            let b = ai.norm_squared() - a1.norm_squared()
                - (o.total_path_m * o.total_path_m - r1 * r1)
                - 2.0 * height * (ai.z - a1.z);
            normal += row * row.transpose();
            rhs += b * row;
        }
        normal.try_inverse().map(|inv| inv * rhs)
    };
    let mut position = match linear_init {
        Some(xy) if xy.x.is_finite() && xy.y.is_finite() => Vector3::new(xy.x, xy.y, height),
        _ => Vector3::new(centroid.x, centroid.y, height),
    };
    let mut iterations = 0;
    let mut converged = false;
    let mut covariance2 = nalgebra::Matrix2::<f64>::zeros();
    let mut last_step = f64::INFINITY;
    let mut lambda = 1e-3;

    let cost = |p: &Vector3<f64>| -> f64 {
        obs.iter()
            .zip(anchors)
            .map(|(o, a)| {
                let w = 1.0 / if o.sigma_m > 0.0 { o.sigma_m * o.sigma_m } else { 1.0 };
                w * (o.total_path_m - (a - p).norm()).powi(2)
            })
            .sum()
    };

    while iterations < RANGE_MAX_ITERATIONS {
        iterations += 1;
        let mut normal = nalgebra::Matrix2::<f64>::zeros();
        let mut rhs = nalgebra::Vector2::<f64>::zeros();
        for (o, anchor) in obs.iter().zip(anchors) {
            let dx = anchor - position;
            let range = dx.norm().max(1e-6);
            let u = nalgebra::Vector2::new(dx.x / range, dx.y / range);
            let w = 1.0 / if o.sigma_m > 0.0 { o.sigma_m * o.sigma_m } else { 1.0 };
            normal += w * u * u.transpose();
            rhs -= w * (o.total_path_m - range) * u;
        }
        let sv = normal.singular_values();
        let condition = if sv.min() > 0.0 { sv.max() / sv.min() } else { f64::INFINITY };
        if condition > geometry::SINGULARITY_CONDITION {
            return Err(ElosError::Solver(SolverError::SingularGeometry { condition }));
        }
        covariance2 = normal
            .try_inverse()
            .ok_or(ElosError::Solver(SolverError::SingularGeometry { condition: f64::INFINITY }))?;

        let current = cost(&position);
        let mut step = nalgebra::Vector2::zeros();
        for _ in 0..12 {
            let mut damped = normal;
            for i in 0..2 {
                damped[(i, i)] += lambda * normal[(i, i)].max(1e-12);
            }
            let candidate = match damped.try_inverse() {
                Some(inv) => inv * rhs,
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let moved = position + Vector3::new(candidate.x, candidate.y, 0.0);
            if cost(&moved) <= current {
                step = candidate;
                lambda = (lambda / 3.0).max(1e-12);
                break;
            }
            lambda *= 10.0;
        }
        position += Vector3::new(step.x, step.y, 0.0);
        last_step = step.norm();
        let stalled = current - cost(&position) <= 1e-12 * current.max(f64::MIN_POSITIVE);
        if last_step < CONVERGENCE_TOL_M || stalled {
            converged = true;
            break;
        }
    }

    let residual_rms = (obs
        .iter()
        .zip(anchors)
        .map(|(o, a)| (o.total_path_m - (a - position).norm()).powi(2))
        .sum::<f64>()
        / obs.len() as f64)
        .sqrt();
    // Horizontal DOP of the fixed-height design: unweighted normal matrix
    // over the (x, y) components of the unit lines of sight.
    let mut dop_normal = nalgebra::Matrix2::<f64>::zeros();
    for anchor in anchors {
        let u = (anchor - position).normalize();
        let h = nalgebra::Vector2::new(u.x, u.y);
        dop_normal += h * h.transpose();
    }
    let hdop = dop_normal
        .try_inverse()
        .map(|q| (q[(0, 0)] + q[(1, 1)]).sqrt())
        .unwrap_or(f64::NAN);
    let mut covariance = Matrix4::zeros();
    covariance[(0, 0)] = covariance2[(0, 0)];
    covariance[(0, 1)] = covariance2[(0, 1)];
    covariance[(1, 0)] = covariance2[(1, 0)];
    covariance[(1, 1)] = covariance2[(1, 1)];

    let solution = PvtSolution {
        position_ecef: position,
        clock_bias_m: 0.0,
        velocity_ecef: None,
        freq_bias_hz: None,
        dops: DopFamily { gdop: hdop, pdop: hdop, hdop, vdop: 0.0, tdop: 0.0 },
        iterations,
        residual_rms,
        converged,
        covariance,
    };
    if !converged {
        return Err(ElosError::Solver(SolverError::NonConvergence {
            last_step_m: last_step,
            solution: Box::new(solution),
        }));
    }
    Ok(solution)
}

/// Solve the user position from ELoS range observations against known RIS
/// anchor coordinates. With 4 observations the receiver clock is assumed
/// synchronized (position-only solve); with 5 or more a common range bias
/// is estimated alongside, which is exactly a pseudorange solve with the
/// anchors in place of satellites. Iteration starts at [`indoor_initial`].
pub fn solve_indoor(
    obs: &[ElosObservation],
    anchors: &[Vector3<f64>],
) -> Result<PvtSolution, ElosError> {
    if obs.len() != anchors.len() {
        return Err(ElosError::Solver(SolverError::LengthMismatch {
            obs: obs.len(),
            sats: anchors.len(),
        }));
    }
    if obs.len() < 4 {
        return Err(ElosError::InsufficientAnchors { needed: 4, got: obs.len() });
    }
    let start = indoor_initial(anchors);

    if obs.len() == 4 {
        let measurements: Vec<(Vector3<f64>, f64, f64)> = obs
            .iter()
            .zip(anchors)
            .map(|(o, a)| (*a, o.total_path_m, o.sigma_m))
            .collect();
        return solve_ranges_position_only(&measurements, start).map_err(ElosError::from);
    }

    // Recast as pseudoranges and reuse the navigation solver wholesale.
    let epoch = chrono::DateTime::<chrono::Utc>::UNIX_EPOCH;
    let pseudo: Vec<PseudorangeObs> = obs
        .iter()
        .map(|o| PseudorangeObs {
            sat_id: o.anchor_id,
            pseudorange_m: o.total_path_m,
            sigma_m: o.sigma_m,
            epoch_utc: epoch,
        })
        .collect();
    let mut solution = solver::solve_ls(&pseudo, anchors, (start, 0.0))?;
    // The navigation solver reports DOPs in an Earth-fixed topocentric
    // frame; anchors here live in a local frame, so recompute directly.
    let units: Vec<Vector3<f64>> = anchors
        .iter()
        .map(|a| (a - solution.position_ecef).normalize())
        .collect();
    solution.dops = geometry::dop_from_unit_vectors(&units, true).unwrap_or_else(|_| nan_dops());
    Ok(solution)
}

/// Geometry template for the satellite-RIS distance trade-off sweep.
///
/// One INAC satellite recedes along a straight tilted track above a fixed
/// RIS and user. At each swept satellite-RIS distance the receiver has
/// accumulated one observation pair per visited track point (direct path
/// plus RIS-reflected path, both time-synchronized ranges), so the
/// observation geometry widens monotonically as the sweep advances:
/// position DOP can only fall, while free-space loss over the growing
/// total path pulls the achievable rate down.
#[derive(Debug, Clone)]
pub struct RisDistanceTemplate {
    pub user_position: Vector3<f64>,
    pub ris_position: Vector3<f64>,
    /// Satellite track start, relative to the RIS.
    pub track_start_offset: Vector3<f64>,
    /// Track direction (need not be normalized); must recede from the RIS.
    pub track_direction: Vector3<f64>,
    /// Extra track points sampled before the first grid distance so the
    /// first sweep cell is already solvable.
    pub bootstrap_epochs: usize,
    pub range_sigma_m: f64,
    pub sync_error_s: f64,
    pub sync_model: SyncErrorModel,
    pub carrier_hz: f64,
    pub n_ris_elements: usize,
    pub rician_k: f64,
    pub bandwidth_hz: f64,
    pub noise_power_w: f64,
    /// Linear amplitude factor applied together with the free-space term
    /// (transmit power and antenna gains folded into one knob).
    pub eirp_amplitude_scale: f64,
    pub power_split: PowerSplit,
    pub service_mode: ServiceMode,
}

impl Default for RisDistanceTemplate {
    fn default() -> Self {
        Self {
            user_position: Vector3::new(12.0, -7.0, 1.5),
            ris_position: Vector3::new(150.0, 120.0, 25.0),
            track_start_offset: Vector3::new(0.0, 0.0, 350e3),
            track_direction: Vector3::new(0.866, 0.0, 0.5),
            bootstrap_epochs: 6,
            range_sigma_m: 2.0,
            sync_error_s: 10e-9,
            sync_model: SyncErrorModel::GaussianPerObservation,
            carrier_hz: crate::constants::KU_CARRIER_HZ,
            n_ris_elements: 64,
            rician_k: 10.0,
            bandwidth_hz: 1e6,
            noise_power_w: 1e-13,
            eirp_amplitude_scale: 20.0,
            power_split: PowerSplit::from_comm_power(0.5).expect("valid split"),
            service_mode: ServiceMode::CommunicationOriented,
        }
    }
}

/// One sweep cell of the distance trade-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisDistancePoint {
    /// Satellite-RIS distance, meters.
    pub distance_m: f64,
    /// Position DOP of the accumulated (time-synchronized) geometry.
    pub pdop: f64,
    /// Monte Carlo RMS 3D position error, meters.
    pub rms_error_m: f64,
    /// Mean ergodic rate over the RIS link at this distance, bits/s.
    pub mean_rate_bps: f64,
    /// Solver failures observed across trials.
    pub failures: usize,
}

impl RisDistanceTemplate {
    /// Satellite position at a given satellite-RIS distance.
    fn satellite_at(&self, distance: f64) -> Vector3<f64> {
        let o = self.track_start_offset;
        let t = self.track_direction.normalize();
        let b = o.dot(&t);
        let c = o.norm_squared() - distance * distance;
        let s = -b + (b * b - c).max(0.0).sqrt();
        self.ris_position + o + t * s
    }

    fn min_distance(&self) -> f64 {
        self.track_start_offset.norm()
    }
}

/// Run the Fig.-style distance sweep: per swept distance, accumulated-pass
/// PDoP, Monte Carlo positioning RMS, and the mean ergodic rate with
/// free-space loss over the satellite->RIS->user path. Deterministic for a
/// given seed; trials run in parallel with per-trial streams.
pub fn run_sat_ris_distance_sweep(
    template: &RisDistanceTemplate,
    distances: &[f64],
    trials: usize,
    base_seed: u64,
) -> Result<Vec<RisDistancePoint>, ElosError> {
    let min = template.min_distance();
    let ascending = distances.windows(2).all(|w| w[0] < w[1]);
    if distances.is_empty() || !ascending || distances[0] <= min || distances[0] <= 0.0 {
        return Err(ElosError::InvalidDistanceGrid { min });
    }
    assert!(trials >= 1);

    // Track points: bootstrap epochs strictly between the track start and
    // the first grid distance, then the grid itself.
    let boot = template.bootstrap_epochs;
    let mut track_distances: Vec<f64> = (0..boot)
        .map(|k| min + (distances[0] - min) * (k as f64 + 0.5) / (boot as f64 + 0.5))
        .collect();
    track_distances.extend_from_slice(distances);
    let track_points: Vec<Vector3<f64>> =
        track_distances.iter().map(|&d| template.satellite_at(d)).collect();

    let user = template.user_position;
    let ris = template.ris_position;
    let ris_user = (ris - user).norm();
    let sigma = template.range_sigma_m;

    let mut out = Vec::with_capacity(distances.len());
    for (j, &distance) in distances.iter().enumerate() {
        let epochs = boot + j + 1;
        let anchors_ranges: Vec<(Vector3<f64>, f64)> = track_points[..epochs]
            .iter()
            .flat_map(|sat| {
                let direct = (*sat, (sat - user).norm());
                let reflected_minus_known_leg = (ris, ris_user);
                [direct, reflected_minus_known_leg]
            })
            .collect();

        // Truth-geometry PDoP (grows only by added rows: non-increasing).
        let units: Vec<Vector3<f64>> = anchors_ranges
            .iter()
            .map(|(a, _)| (a - user).normalize())
            .collect();
        let pdop = geometry::dop_from_unit_vectors(&units, false)
            .map(|d| d.pdop)
            .unwrap_or(f64::NAN);

        // Monte Carlo positioning. Per-trial streams draw noise in epoch
        // order, so earlier epochs share draws across sweep cells.
        let results: Vec<Option<f64>> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(crate::scenario::trial_seed(base_seed, trial as u64));
                let paths: Vec<(u32, f64)> = anchors_ranges
                    .iter()
                    .enumerate()
                    .map(|(i, (_, range))| (i as u32, *range))
                    .collect();
                let obs = synth_elos_obs(
                    &paths,
                    template.sync_error_s,
                    sigma,
                    template.sync_model,
                    &mut rng,
                );
                let measurements: Vec<(Vector3<f64>, f64, f64)> = obs
                    .iter()
                    .zip(&anchors_ranges)
                    .map(|(o, (anchor, _))| (*anchor, o.total_path_m, o.sigma_m))
                    .collect();
                solve_ranges_position_only(&measurements, Vector3::zeros())
                    .ok()
                    .map(|sol| (sol.position_ecef - user).norm_squared())
            })
            .collect();
        let failures = results.iter().filter(|r| r.is_none()).count();
        let sum_sq: f64 = results.iter().flatten().sum();
        let succeeded = trials - failures;
        let rms_error_m =
            if succeeded > 0 { (sum_sq / succeeded as f64).sqrt() } else { f64::NAN };

        // Rate over the reflected link at the current distance. The channel
        // stream is re-seeded per cell (common random numbers), so the
        // free-space decay is the only thing moving the mean.
        let d_total = distance + ris_user;
        let wavelength = SPEED_OF_LIGHT / template.carrier_hz;
        let fading = FadingConfig {
            n_elements: template.n_ris_elements,
            rician_k: template.rician_k,
            sat_leg_amplitude: template.eirp_amplitude_scale * wavelength
                / (4.0 * std::f64::consts::PI * d_total),
            bandwidth_hz: template.bandwidth_hz,
            noise_power_w: template.noise_power_w,
        };
        let mut rate_rng =
            ChaCha8Rng::seed_from_u64(crate::scenario::trial_seed(base_seed, u64::MAX));
        let rates = ergodic_rates(
            &fading,
            template.power_split,
            template.service_mode,
            trials,
            &mut rate_rng,
        )?;
        let mean_rate_bps = match template.service_mode {
            ServiceMode::CommunicationOriented => rates.c_com_mean,
            ServiceMode::NavigationOriented => rates.c_nav_mean,
        };

        out.push(RisDistancePoint { distance_m: distance, pdop, rms_error_m, mean_rate_bps, failures });
    }
    Ok(out)
}
