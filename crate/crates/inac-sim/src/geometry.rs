//! User-satellite geometry: topocentric look angles, elevation masks, and
//! the dilution-of-precision family.

use nalgebra::{Matrix3, Matrix4, Vector3};
use thiserror::Error;

use crate::orbit::{ecef_to_geodetic, OrbitError};

/// Look angles of one satellite from one user position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopocentricView {
    pub sat_id: u32,
    /// Azimuth, degrees clockwise from north in [0, 360).
    pub azimuth_deg: f64,
    /// Elevation above the local horizon, degrees in [-90, 90].
    pub elevation_deg: f64,
    /// Slant range, meters.
    pub slant_range_m: f64,
    /// Range rate, meters/second; positive when receding.
    pub range_rate_mps: f64,
}

/// Dilution-of-precision family in the local east/north/up frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopFamily {
    pub gdop: f64,
    pub pdop: f64,
    pub hdop: f64,
    pub vdop: f64,
    pub tdop: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("user and satellite positions are within 1 m of each other")]
    CoincidentPoints,
    #[error("user position is degenerate: {0}")]
    DegenerateUser(OrbitError),
    #[error("need at least {needed} satellites, got {got}")]
    InsufficientSats { needed: usize, got: usize },
    #[error("geometry matrix is numerically singular (condition {condition:.3e})")]
    SingularGeometry { condition: f64 },
}

/// Condition-number ceiling on the normal matrix before the geometry is
/// declared unusable.
pub const SINGULARITY_CONDITION: f64 = 1e12;

/// Local east/north/up basis at an ECEF position (geodetic normal).
pub fn enu_basis(user_ecef: &Vector3<f64>) -> Result<[Vector3<f64>; 3], GeometryError> {
    let g = ecef_to_geodetic(user_ecef).map_err(GeometryError::DegenerateUser)?;
    let lat = g.latitude_deg.to_radians();
    let lon = g.longitude_deg.to_radians();
    let (sin_lat, cos_lat) = lat.sin_cos();
    let (sin_lon, cos_lon) = lon.sin_cos();
    Ok([
        Vector3::new(-sin_lon, cos_lon, 0.0),
        Vector3::new(-sin_lat * cos_lon, -sin_lat * sin_lon, cos_lat),
        Vector3::new(cos_lat * cos_lon, cos_lat * sin_lon, sin_lat),
    ])
}

/// Topocentric decomposition of a satellite state as seen from a user.
/// Both positions are ECEF meters; the range rate assumes a static user.
pub fn topocentric(
    sat_id: u32,
    user_ecef: &Vector3<f64>,
    sat_ecef: &Vector3<f64>,
    sat_vel_ecef: &Vector3<f64>,
) -> Result<TopocentricView, GeometryError> {
    let los = sat_ecef - user_ecef;
    let range = los.norm();
    if range < 1.0 {
        return Err(GeometryError::CoincidentPoints);
    }
    let [east, north, up] = enu_basis(user_ecef)?;
    let u_los = los / range;
    let e = u_los.dot(&east);
    let n = u_los.dot(&north);
    let u = u_los.dot(&up);
    Ok(TopocentricView {
        sat_id,
        azimuth_deg: e.atan2(n).to_degrees().rem_euclid(360.0),
        elevation_deg: u.clamp(-1.0, 1.0).asin().to_degrees(),
        slant_range_m: range,
        range_rate_mps: sat_vel_ecef.dot(&u_los),
    })
}

/// Views at or above the elevation mask, order preserved. The mask is
/// clamped to [0, 90] degrees.
pub fn visible_sats(views: &[TopocentricView], mask_deg: f64) -> Vec<TopocentricView> {
    let mask = mask_deg.clamp(0.0, 90.0);
    views
        .iter()
        .filter(|v| v.elevation_deg >= mask)
        .copied()
        .collect()
}

/// Unit line-of-sight vector in ENU components from look angles.
pub fn los_unit(view: &TopocentricView) -> Vector3<f64> {
    let az = view.azimuth_deg.to_radians();
    let el = view.elevation_deg.to_radians();
    Vector3::new(el.cos() * az.sin(), el.cos() * az.cos(), el.sin())
}

/// DOP family from look angles (standard four-unknown navigation geometry:
/// three position components plus receiver clock).
pub fn dop(views: &[TopocentricView]) -> Result<DopFamily, GeometryError> {
    if views.len() < 4 {
        return Err(GeometryError::InsufficientSats { needed: 4, got: views.len() });
    }
    let units: Vec<Vector3<f64>> = views.iter().map(los_unit).collect();
    dop_from_unit_vectors(&units, true)
}

/// DOP family from unit line-of-sight vectors in any right-handed local
/// frame whose third axis is "up". With `estimate_clock` the classic
/// [-u, 1] design is used; without it the clock column is dropped
/// (tdop = 0, gdop = pdop), matching a time-synchronized solver.
pub fn dop_from_unit_vectors(
    units: &[Vector3<f64>],
    estimate_clock: bool,
) -> Result<DopFamily, GeometryError> {
    let needed = if estimate_clock { 4 } else { 3 };
    if units.len() < needed {
        return Err(GeometryError::InsufficientSats { needed, got: units.len() });
    }

    let q = if estimate_clock {
        let mut normal = Matrix4::<f64>::zeros();
        for u in units {
            let row = nalgebra::Vector4::new(-u.x, -u.y, -u.z, 1.0);
            normal += row * row.transpose();
        }
        check_condition(normal.singular_values().as_slice())?;
        let inv = normal
            .try_inverse()
            .ok_or(GeometryError::SingularGeometry { condition: f64::INFINITY })?;
        [inv[(0, 0)], inv[(1, 1)], inv[(2, 2)], inv[(3, 3)]]
    } else {
        let mut normal = Matrix3::<f64>::zeros();
        for u in units {
            normal += u * u.transpose();
        }
        check_condition(normal.singular_values().as_slice())?;
        let inv = normal
            .try_inverse()
            .ok_or(GeometryError::SingularGeometry { condition: f64::INFINITY })?;
        [inv[(0, 0)], inv[(1, 1)], inv[(2, 2)], 0.0]
    };

    let hdop = (q[0] + q[1]).sqrt();
    let vdop = q[2].sqrt();
    let tdop = q[3].sqrt();
    let pdop = (q[0] + q[1] + q[2]).sqrt();
    let gdop = (q[0] + q[1] + q[2] + q[3]).sqrt();
    Ok(DopFamily { gdop, pdop, hdop, vdop, tdop })
}

fn check_condition(singular_values: &[f64]) -> Result<(), GeometryError> {
    let max = singular_values.iter().cloned().fold(0.0, f64::max);
    let min = singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition > SINGULARITY_CONDITION {
        return Err(GeometryError::SingularGeometry { condition });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{geodetic_to_ecef, GeodeticPosition};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn view(az: f64, el: f64) -> TopocentricView {
        TopocentricView {
            sat_id: 0,
            azimuth_deg: az,
            elevation_deg: el,
            slant_range_m: 1e6,
            range_rate_mps: 0.0,
        }
    }

    #[test]
    fn zenith_satellite_has_ninety_degree_elevation() {
        let g = GeodeticPosition::new(39.95, 116.34, 50.0).unwrap();
        let user = geodetic_to_ecef(&g);
        let above = GeodeticPosition::new(39.95, 116.34, 550_000.0).unwrap();
        let sat = geodetic_to_ecef(&above);
        let v = topocentric(1, &user, &sat, &Vector3::zeros()).unwrap();
        assert!((v.elevation_deg - 90.0).abs() < 1e-6, "el {}", v.elevation_deg);
        assert_relative_eq!(v.slant_range_m, (sat - user).norm(), max_relative = 1e-12);
        assert_eq!(v.range_rate_mps, 0.0);
    }

    #[test]
    fn antipodal_satellite_is_below_horizon() {
        let g = GeodeticPosition::new(10.0, 20.0, 0.0).unwrap();
        let user = geodetic_to_ecef(&g);
        let anti = GeodeticPosition::new(-10.0, -160.0, 550_000.0).unwrap();
        let sat = geodetic_to_ecef(&anti);
        let v = topocentric(1, &user, &sat, &Vector3::zeros()).unwrap();
        assert!(v.elevation_deg < 0.0);
    }

    #[test]
    fn perpendicular_velocity_gives_zero_range_rate() {
        let g = GeodeticPosition::new(0.0, 0.0, 0.0).unwrap();
        let user = geodetic_to_ecef(&g);
        let sat = user + Vector3::new(550_000.0, 0.0, 0.0);
        let vel = Vector3::new(0.0, 7_500.0, 0.0);
        let v = topocentric(1, &user, &sat, &vel).unwrap();
        assert!(v.range_rate_mps.abs() < 1e-9);
    }

    #[test]
    fn coincident_points_rejected() {
        let g = GeodeticPosition::new(0.0, 0.0, 0.0).unwrap();
        let user = geodetic_to_ecef(&g);
        let sat = user + Vector3::new(0.5, 0.0, 0.0);
        assert!(matches!(
            topocentric(1, &user, &sat, &Vector3::zeros()),
            Err(GeometryError::CoincidentPoints)
        ));
    }

    #[test]
    fn mask_filter_clamps_and_is_monotone() {
        let views: Vec<TopocentricView> =
            vec![view(0.0, -5.0), view(90.0, 3.0), view(180.0, 45.0), view(270.0, 89.0)];
        assert_eq!(visible_sats(&views, 90.0).len(), 0);
        // Below-zero masks clamp to the horizon.
        assert_eq!(visible_sats(&views, -90.0).len(), 3);
        let mut prev = usize::MAX;
        for mask in [0.0, 10.0, 50.0, 89.5] {
            let count = visible_sats(&views, mask).len();
            assert!(count <= prev);
            prev = count;
        }
    }

    /// Gauss-Jordan inverse, independent of the nalgebra path used by dop().
    fn invert4(a: [[f64; 4]; 4]) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 8]; 4];
        for i in 0..4 {
            m[i][..4].copy_from_slice(&a[i]);
            m[i][4 + i] = 1.0;
        }
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
                .unwrap();
            m.swap(col, pivot);
            let p = m[col][col];
            assert!(p.abs() > 1e-14, "singular test matrix");
            for x in m[col].iter_mut() {
                *x /= p;
            }
            for row in 0..4 {
                if row != col {
                    let f = m[row][col];
                    let pivot_row = m[col];
                    for (x, p) in m[row].iter_mut().zip(pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            out[i].copy_from_slice(&m[i][4..]);
        }
        out
    }

    #[test]
    fn dop_matches_independent_normal_equation_oracle() {
        // One zenith satellite plus three on the horizon at 0/120/240 deg.
        let views = vec![view(0.0, 90.0), view(0.0, 0.0), view(120.0, 0.0), view(240.0, 0.0)];
        let got = dop(&views).unwrap();

        let mut normal = [[0.0; 4]; 4];
        for v in &views {
            let u = los_unit(v);
            let row = [-u.x, -u.y, -u.z, 1.0];
            for i in 0..4 {
                for j in 0..4 {
                    normal[i][j] += row[i] * row[j];
                }
            }
        }
        let q = invert4(normal);
        assert_relative_eq!(got.hdop, (q[0][0] + q[1][1]).sqrt(), max_relative = 1e-9);
        assert_relative_eq!(got.vdop, q[2][2].sqrt(), max_relative = 1e-9);
        assert_relative_eq!(got.tdop, q[3][3].sqrt(), max_relative = 1e-9);
        assert_relative_eq!(got.pdop, (q[0][0] + q[1][1] + q[2][2]).sqrt(), max_relative = 1e-9);

        // Frozen closed-form values for this configuration.
        assert_relative_eq!(got.hdop, (4.0f64 / 3.0).sqrt(), max_relative = 1e-9);
        assert_relative_eq!(got.vdop, (4.0f64 / 3.0).sqrt(), max_relative = 1e-9);
        assert_relative_eq!(got.tdop, (1.0f64 / 3.0).sqrt(), max_relative = 1e-9);
        assert_relative_eq!(got.pdop, (8.0f64 / 3.0).sqrt(), max_relative = 1e-9);
        assert_relative_eq!(got.gdop, 3.0f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn all_zenith_geometry_is_singular() {
        let views = vec![view(0.0, 90.0); 4];
        assert!(matches!(dop(&views), Err(GeometryError::SingularGeometry { .. })));
    }

    #[test]
    fn three_views_are_insufficient() {
        let views = vec![view(0.0, 90.0), view(0.0, 10.0), view(120.0, 10.0)];
        assert!(matches!(
            dop(&views),
            Err(GeometryError::InsufficientSats { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn duplicating_every_view_scales_dops_by_inverse_sqrt_two() {
        let views = vec![view(10.0, 60.0), view(100.0, 30.0), view(200.0, 20.0), view(300.0, 45.0)];
        let doubled: Vec<TopocentricView> =
            views.iter().chain(views.iter()).copied().collect();
        let d1 = dop(&views).unwrap();
        let d2 = dop(&doubled).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert_relative_eq!(d2.gdop, d1.gdop * s, max_relative = 1e-9);
        assert_relative_eq!(d2.pdop, d1.pdop * s, max_relative = 1e-9);
        assert_relative_eq!(d2.hdop, d1.hdop * s, max_relative = 1e-9);
        assert_relative_eq!(d2.vdop, d1.vdop * s, max_relative = 1e-9);
        assert_relative_eq!(d2.tdop, d1.tdop * s, max_relative = 1e-9);
    }

    fn random_views(rng: &mut ChaCha8Rng, n: usize) -> Vec<TopocentricView> {
        (0..n)
            .map(|i| TopocentricView {
                sat_id: i as u32,
                azimuth_deg: rng.random_range(0.0..360.0),
                elevation_deg: rng.random_range(5.0..90.0),
                slant_range_m: rng.random_range(5e5..3e6),
                range_rate_mps: 0.0,
            })
            .collect()
    }

    #[test]
    fn dop_identities_hold_on_random_geometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.random_range(5..12);
            let views = random_views(&mut rng, n);
            let d = match dop(&views) {
                Ok(d) => d,
                Err(GeometryError::SingularGeometry { .. }) => continue,
                Err(e) => panic!("unexpected {e:?}"),
            };
            assert_relative_eq!(d.gdop * d.gdop, d.pdop * d.pdop + d.tdop * d.tdop, max_relative = 1e-9);
            assert_relative_eq!(d.pdop * d.pdop, d.hdop * d.hdop + d.vdop * d.vdop, max_relative = 1e-9);
        }
    }

    #[test]
    fn dop_invariant_under_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let views = random_views(&mut rng, 8);
        let mut reversed = views.clone();
        reversed.reverse();
        let a = dop(&views).unwrap();
        let b = dop(&reversed).unwrap();
        assert_relative_eq!(a.gdop, b.gdop, max_relative = 1e-12);
        assert_relative_eq!(a.pdop, b.pdop, max_relative = 1e-12);
    }

    #[test]
    fn adding_a_satellite_never_increases_gdop() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let views = random_views(&mut rng, 6);
            let extra = random_views(&mut rng, 1);
            let d1 = match dop(&views) {
                Ok(d) => d,
                Err(_) => continue,
            };
            let mut augmented = views.clone();
            augmented.extend(extra);
            let d2 = dop(&augmented).unwrap();
            assert!(d2.gdop <= d1.gdop + 1e-9, "gdop grew: {} -> {}", d1.gdop, d2.gdop);
        }
    }
}
