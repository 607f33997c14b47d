//! Quasi-static resting poses.
//!
//! Plane: the body is lowered onto z = 0 and tumbled about the support
//! polygon until the centroid projects inside it. Each pivot is about the
//! point of the support polygon closest to the centroid's shadow, which is
//! an edge when the closest point is interior to one and a vertex otherwise.
//! The tipping angle is the smallest rotation that brings another vertex
//! down to the plane, so the centroid descends monotonically.
//!
//! Rollers: the major principal axis is laid along the roller axes (x) and
//! the roll angle about it is scanned; at each angle the cross-section is
//! lowered into the groove between two rollers, free to slide sideways, and
//! the pose with the lowest centroid wins.

use nalgebra::{Vector2, Vector3};

use super::rotation::UnitQuaternion;
use super::SimError;
use crate::geom2d::{closest_point_convex, convex_hull, P2};
use crate::mesh::{principal_axes, volume_centroid, TriMesh};

pub const MAX_PIVOTS: usize = 1000;

/// Roll scan step for roller settling, degrees.
pub const ROLL_STEP_DEG: f64 = 0.5;

/// Heights closer than this (cm) count as ties in the roll scan.
const ROLL_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PlaneRest {
    pub rotation: UnitQuaternion,
    /// Centroid height above the plane in the final pose.
    pub centroid_height: f64,
    /// Centroid height before the first pivot and after each pivot.
    pub height_trace: Vec<f64>,
}

/// Settles `mesh`, first rotated by `initial`, onto the plane z = 0 and
/// returns the composed rotation of the resting pose.
pub fn settle_on_plane(mesh: &TriMesh, initial: UnitQuaternion) -> Result<UnitQuaternion, SimError> {
    settle_on_plane_detailed(mesh, initial).map(|r| r.rotation)
}

pub fn settle_on_plane_detailed(mesh: &TriMesh, initial: UnitQuaternion) -> Result<PlaneRest, SimError> {
    let centroid = volume_centroid(mesh)?;
    let r0 = initial.to_rotation_matrix();
    let mut pts: Vec<Vector3<f64>> = mesh.vertices().iter().map(|v| r0 * (v - centroid)).collect();
    let mut c = Vector3::zeros();
    let mut orientation = initial.to_na();

    let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(SimError::Settle("mesh collapses to a point".into()));
    }
    let contact_tol = 1e-9 * scale;

    let mut trace = Vec::new();
    for _ in 0..=MAX_PIVOTS {
        let floor = pts.iter().map(|p| p.z).fold(f64::INFINITY, f64::min);
        trace.push(c.z - floor);

        let mut contacts = Vec::new();
        let mut contact_mask = vec![false; pts.len()];
        for (i, p) in pts.iter().enumerate() {
            if p.z - floor <= contact_tol {
                contacts.push(P2::new(p.x, p.y));
                contact_mask[i] = true;
            }
        }
        let support = convex_hull(&contacts);
        let shadow = P2::new(c.x, c.y);
        let pivot = closest_point_convex(&support, &shadow);
        let offset = shadow - pivot;
        let dist = offset.norm();
        if dist <= contact_tol {
            return Ok(PlaneRest {
                rotation: UnitQuaternion::from_na(&orientation),
                centroid_height: c.z - floor,
                height_trace: trace,
            });
        }

        // Tip towards the centroid: points on the +e side go down.
        let e = Vector3::new(offset.x / dist, offset.y / dist, 0.0);
        let pivot3 = Vector3::new(pivot.x, pivot.y, floor);
        let mut angle = f64::INFINITY;
        for (i, p) in pts.iter().enumerate() {
            if contact_mask[i] {
                continue;
            }
            let r = p - pivot3;
            let s = r.dot(&e);
            if s > 0.0 {
                angle = angle.min(r.z.atan2(s));
            }
        }
        if !angle.is_finite() {
            return Err(SimError::Settle("no vertex lies beyond the pivot".into()));
        }

        let axis = Vector3::z().cross(&e);
        let rot = nalgebra::UnitQuaternion::from_axis_angle(&nalgebra::Unit::new_unchecked(axis), angle);
        let m = rot.to_rotation_matrix();
        for p in pts.iter_mut() {
            *p = pivot3 + m * (*p - pivot3);
        }
        c = pivot3 + m * (c - pivot3);
        orientation = rot * orientation;
    }
    Err(SimError::Settle(format!("no resting face after {MAX_PIVOTS} pivots")))
}

/// Two parallel rollers along x, centred at y = ±pitch/2 with axes at z = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rollers {
    pub pitch: f64,
    pub radius: f64,
}

impl Rollers {
    pub fn new(pitch: f64, radius: f64) -> Result<Self, SimError> {
        if !(radius > 0.0 && pitch > 2.0 * radius) || !pitch.is_finite() {
            return Err(SimError::Domain(format!("roller pitch {pitch} must exceed twice the radius {radius} > 0")));
        }
        Ok(Self { pitch, radius })
    }

    pub fn gap(&self) -> f64 {
        self.pitch - 2.0 * self.radius
    }
}

#[derive(Debug, Clone)]
pub struct RollerRest {
    pub rotation: UnitQuaternion,
    /// Roll about the aligned major axis, degrees in [0, 360).
    pub roll_deg: f64,
    /// Centroid height above the plane of the roller axes.
    pub centroid_height: f64,
    /// Sideways offset of the centroid from the groove centre.
    pub lateral_offset: f64,
}

pub fn settle_on_rollers(
    mesh: &TriMesh,
    initial: UnitQuaternion,
    rollers: Rollers,
) -> Result<UnitQuaternion, SimError> {
    settle_on_rollers_detailed(mesh, initial, rollers).map(|r| r.rotation)
}

pub fn settle_on_rollers_detailed(
    mesh: &TriMesh,
    initial: UnitQuaternion,
    rollers: Rollers,
) -> Result<RollerRest, SimError> {
    let r0 = initial.to_rotation_matrix();
    let posed = mesh.map_vertices(|p| r0 * p);
    let summary = principal_axes(&posed)?;
    let mut major = summary.major_axis();
    if major.x < 0.0 {
        major = -major;
    }
    let align = nalgebra::UnitQuaternion::rotation_between(&major, &Vector3::x())
        .unwrap_or_else(nalgebra::UnitQuaternion::identity);
    let am = align.to_rotation_matrix();
    let section: Vec<P2> = posed
        .vertices()
        .iter()
        .map(|v| {
            let b = am * (v - summary.centroid);
            P2::new(b.y, b.z)
        })
        .collect();
    let hull = convex_hull(&section);
    if hull.len() < 3 {
        return Err(SimError::Settle("cross-section is degenerate".into()));
    }

    let steps = (360.0 / ROLL_STEP_DEG).round() as usize;
    let mut best: Option<(usize, f64, f64)> = None;
    let mut rotated = vec![P2::origin(); hull.len()];
    for k in 0..steps {
        let theta = (k as f64 * ROLL_STEP_DEG).to_radians();
        rotate_section(&hull, theta, &mut rotated);
        let (height, lateral) = groove_rest(&rotated, rollers)?;
        if best.is_none_or(|(_, h, _)| height < h - ROLL_TIE_TOL) {
            best = Some((k, height, lateral));
        }
    }
    let (k, height, lateral) = best.expect("at least one roll step");
    let roll_deg = k as f64 * ROLL_STEP_DEG;
    let roll = nalgebra::UnitQuaternion::from_axis_angle(&Vector3::x_axis(), roll_deg.to_radians());
    let total = roll * align * initial.to_na();
    Ok(RollerRest {
        rotation: UnitQuaternion::from_na(&total),
        roll_deg,
        centroid_height: height,
        lateral_offset: lateral,
    })
}

/// Rotates cross-section points (y, z) by `theta` about the x axis.
fn rotate_section(src: &[P2], theta: f64, dst: &mut [P2]) {
    let (s, c) = theta.sin_cos();
    for (d, p) in dst.iter_mut().zip(src) {
        *d = P2::new(c * p.x - s * p.y, s * p.x + c * p.y);
    }
}

/// Lowest translation height of a convex section (CCW hull, centroid at the
/// origin) resting in the groove, and the sideways offset achieving it.
pub(crate) fn groove_rest(section: &[P2], rollers: Rollers) -> Result<(f64, f64), SimError> {
    let (ymin, ymax) =
        section.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    if ymax - ymin <= rollers.gap() {
        return Err(SimError::FallThrough { width: ymax - ymin, gap: rollers.gap() });
    }
    let half = 0.5 * rollers.pitch;
    let r = rollers.radius;
    let left = P2::new(-half, 0.0);
    let right = P2::new(half, 0.0);
    let height = |ty: f64| clearance(section, &left, r, ty).max(clearance(section, &right, r, ty));

    // The centroid stays between the roller axes; outside that range the
    // body would roll off. Coarse scan, then golden-section refinement
    // around the best sample.
    let lo = -half;
    let hi = half;
    const SAMPLES: usize = 96;
    let step = (hi - lo) / SAMPLES as f64;
    let mut best_i = 0;
    let mut best_h = f64::INFINITY;
    for i in 0..=SAMPLES {
        let h = height(lo + i as f64 * step);
        if h < best_h {
            best_h = h;
            best_i = i;
        }
    }
    let mut a = lo + best_i.saturating_sub(1) as f64 * step;
    let mut b = lo + (best_i + 1).min(SAMPLES) as f64 * step;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = height(x1);
    let mut f2 = height(x2);
    for _ in 0..80 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = height(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = height(x2);
        }
        if b - a < 1e-13 * (1.0 + hi - lo) {
            break;
        }
    }
    let (mut ty, mut h) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let sampled = lo + best_i as f64 * step;
    if best_h < h {
        ty = sampled;
        h = best_h;
    }
    if !h.is_finite() {
        return Err(SimError::FallThrough { width: ymax - ymin, gap: rollers.gap() });
    }
    Ok((h, ty))
}

/// Smallest vertical offset `tz` such that the section translated by
/// `(ty, tz)` sits on or above the disc of radius `r` at `center`;
/// −∞ when the section passes beside the disc.
///
/// The translations that make the two overlap form the convex set
/// `(center − section) ⊕ disc(r)`; the answer is the top of that set on the
/// vertical line y = ty, which lies on an end-cap circle around a reflected
/// vertex or on an edge offset outward by `r`.
fn clearance(section: &[P2], center: &P2, r: f64, ty: f64) -> f64 {
    let n = section.len();
    let mut top = f64::NEG_INFINITY;
    for i in 0..n {
        // Point reflection keeps counter-clockwise order.
        let a = center - section[i].coords;
        let dy = ty - a.x;
        if dy.abs() <= r {
            top = top.max(a.y + (r * r - dy * dy).sqrt());
        }
        let b = center - section[(i + 1) % n].coords;
        let d: Vector2<f64> = b - a;
        let len = d.norm();
        if len == 0.0 {
            continue;
        }
        let normal = Vector2::new(d.y, -d.x) / len;
        if normal.y <= 0.0 {
            continue;
        }
        let a2 = a + normal * r;
        let b2 = b + normal * r;
        let (y0, y1) = if a2.x <= b2.x { (a2.x, b2.x) } else { (b2.x, a2.x) };
        if ty >= y0 && ty <= y1 && b2.x != a2.x {
            let t = (ty - a2.x) / (b2.x - a2.x);
            top = top.max(a2.y + t * (b2.y - a2.y));
        }
    }
    top
}

/// Vertical height of the volume centroid above the lowest vertex, for a
/// mesh rotated by `q`.
pub fn centroid_height(mesh: &TriMesh, q: UnitQuaternion) -> Result<f64, SimError> {
    let c = volume_centroid(mesh)?;
    let r = q.to_rotation_matrix();
    let cz = (r * c).z;
    let floor = mesh.vertices().iter().map(|v| (r * v).z).fold(f64::INFINITY, f64::min);
    Ok(cz - floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{icosphere, make_ellipsoid, make_elliptic_prism, unit_cube};
    use crate::sim::rotation::{rotate_mesh, shoemake_sample, RandomTriple};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_rotations(seed: u64, n: usize) -> Vec<UnitQuaternion> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                shoemake_sample(
                    RandomTriple::new(
                        rng.sample(rand::distr::Open01),
                        rng.sample(rand::distr::Open01),
                        rng.sample(rand::distr::Open01),
                    )
                    .unwrap(),
                )
            })
            .collect()
    }

    fn assert_monotone(trace: &[f64]) {
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "height rose: {trace:?}");
        }
    }

    #[test]
    fn cube_rests_flat() {
        let cube = unit_cube();
        for q in random_rotations(11, 100) {
            let rest = settle_on_plane_detailed(&cube, q).unwrap();
            assert!((rest.centroid_height - 0.5).abs() < 1e-6, "{}", rest.centroid_height);
            assert_monotone(&rest.height_trace);
            let h = centroid_height(&cube, rest.rotation).unwrap();
            assert!((h - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn spheroid_lies_on_its_side() {
        // the rest face of a tessellated spheroid tilts by up to about half
        // a facet; five subdivisions keep that well under a degree
        let e = make_ellipsoid(4.0, 2.0, 2.0, 5).unwrap();
        for q in random_rotations(5, 30) {
            let rest = settle_on_plane_detailed(&e, q).unwrap();
            assert_monotone(&rest.height_trace);
            let axis = rest.rotation.rotate_vector(&Vector3::x());
            let tilt = axis.z.abs().asin().to_degrees();
            assert!(tilt < 1.0, "major axis tilted {tilt}°");
        }
    }

    #[test]
    fn sphere_rests_on_a_face() {
        let s = icosphere(1.0, 3).unwrap();
        // distance from the centre to the nearest and farthest face planes
        let plane_dists: Vec<f64> = s
            .triangles()
            .map(|[a, b, c]| {
                let n = (b - a).cross(&(c - a)).normalize();
                n.dot(&a.coords)
            })
            .collect();
        let lo = plane_dists.iter().cloned().fold(f64::INFINITY, f64::min);
        for q in random_rotations(3, 20) {
            let rest = settle_on_plane_detailed(&s, q).unwrap();
            // the support is a face, so the height is that face's plane distance
            let hit = plane_dists.iter().any(|d| (d - rest.centroid_height).abs() < 1e-6);
            assert!(hit, "height {} matches no face plane", rest.centroid_height);
            assert!(rest.centroid_height >= lo - 1e-9 && rest.centroid_height <= 1.0);
        }
    }

    #[test]
    fn rollers_reject_bad_geometry() {
        assert!(Rollers::new(2.0, 1.0).is_err());
        assert!(Rollers::new(7.62, 0.0).is_err());
        assert!(Rollers::new(7.62, 2.54).is_ok());
    }

    #[test]
    fn cylinder_roll_is_a_tie() {
        // 720 sides: every 0.5° roll maps the section onto itself.
        let cyl = make_elliptic_prism(2.0, 2.0, 12.0, 720).unwrap();
        let rollers = Rollers::new(7.62, 2.54).unwrap();
        let q = random_rotations(9, 1)[0];
        let rest = settle_on_rollers_detailed(&cyl, q, rollers).unwrap();
        assert_eq!(rest.roll_deg, 0.0);

        let posed = rotate_mesh(&cyl, q).unwrap();
        let s = principal_axes(&posed).unwrap();
        let mut major = s.major_axis();
        if major.x < 0.0 {
            major = -major;
        }
        let align = nalgebra::UnitQuaternion::rotation_between(&major, &Vector3::x()).unwrap();
        let section: Vec<P2> = posed
            .vertices()
            .iter()
            .map(|v| {
                let b = align * (v - s.centroid);
                P2::new(b.y, b.z)
            })
            .collect();
        let hull = convex_hull(&section);
        let mut buf = hull.clone();
        let mut heights = Vec::new();
        for k in 0..720 {
            rotate_section(&hull, (k as f64 * 0.5).to_radians(), &mut buf);
            heights.push(groove_rest(&buf, rollers).unwrap().0);
        }
        let (lo, hi) = heights.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        assert!(hi - lo < 1e-9, "spread {}", hi - lo);
    }

    /// Independent route: sample the analytic ellipse boundary densely, lift
    /// it clear of both roller circles for a given sideways offset, and
    /// minimise that lift over the offset.
    fn ellipse_lift(semi_y: f64, semi_z: f64, theta: f64, ty: f64, rollers: Rollers, n: usize) -> f64 {
        let (s, c) = theta.sin_cos();
        let mut need = f64::NEG_INFINITY;
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            let (y0, z0) = (semi_y * t.cos(), semi_z * t.sin());
            let (y, z) = (c * y0 - s * z0 + ty, s * y0 + c * z0);
            for cy in [-0.5 * rollers.pitch, 0.5 * rollers.pitch] {
                let dy = y - cy;
                if dy.abs() < rollers.radius {
                    need = need.max((rollers.radius * rollers.radius - dy * dy).sqrt() - z);
                }
            }
        }
        need
    }

    fn ellipse_groove_height(semi_y: f64, semi_z: f64, theta: f64, rollers: Rollers, n: usize) -> (f64, f64) {
        let half = 0.5 * rollers.pitch;
        let f = |ty: f64| ellipse_lift(semi_y, semi_z, theta, ty, rollers, n);
        let mut best = (0.0, f64::INFINITY);
        for i in 0..=40 {
            let ty = -half + i as f64 * rollers.pitch / 40.0;
            let h = f(ty);
            if h < best.1 {
                best = (ty, h);
            }
        }
        // ternary refinement inside the bracketing cells
        let (mut a, mut b) = (best.0 - rollers.pitch / 40.0, best.0 + rollers.pitch / 40.0);
        for _ in 0..60 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if f(m1) <= f(m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        let ty = 0.5 * (a + b);
        let h = f(ty);
        if h < best.1 {
            (ty, h)
        } else {
            best
        }
    }

    #[test]
    fn elliptic_prism_settles_wide_side_down() {
        // a close-set pair: the section rests in the V above the gap
        let rollers = Rollers::new(4.0, 1.5).unwrap();
        let prism = make_elliptic_prism(2.0, 1.0, 8.0, 720).unwrap();

        // brute-force oracle over roll at 0.05°, ten times the production step
        let mut oracle_best = (0.0, f64::INFINITY);
        for k in 0..3600 {
            let th = (k as f64 * 0.05).to_radians();
            let (_, h) = ellipse_groove_height(2.0, 1.0, th, rollers, 720);
            if h < oracle_best.1 {
                oracle_best = (th, h);
            }
        }
        let th = oracle_best.0;
        assert!(th.sin().abs() < 0.01, "oracle angle {}", th.to_degrees());

        for q in random_rotations(21, 5) {
            let rest = settle_on_rollers_detailed(&prism, q, rollers).unwrap();
            assert!(
                (rest.centroid_height - oracle_best.1).abs() < 2e-3,
                "{} vs {}",
                rest.centroid_height,
                oracle_best.1
            );
            assert!(rest.lateral_offset.abs() < 0.02, "{}", rest.lateral_offset);
            let posed = rotate_mesh(&prism, rest.rotation).unwrap();
            let (lo, hi) = posed.bounding_box();
            let ext = hi - lo;
            assert!((ext.y - 4.0).abs() < 0.01 && (ext.z - 2.0).abs() < 0.01, "{ext:?}");
            assert!((ext.x - 8.0).abs() < 1e-6);
        }
    }

    #[test]
    fn groove_heights_match_sampled_oracle() {
        let prism = make_elliptic_prism(2.0, 1.0, 8.0, 720).unwrap();
        let hull = convex_hull(&prism.vertices().iter().map(|v| P2::new(v.y, v.z)).collect::<Vec<_>>());
        let mut buf = hull.clone();
        for rollers in [Rollers::new(3.5, 1.0).unwrap(), Rollers::new(4.0, 1.5).unwrap()] {
            for deg in [0.0, 17.0, 45.0, 90.0, 133.5] {
                let th = f64::to_radians(deg);
                rotate_section(&hull, th, &mut buf);
                let (h, ty) = groove_rest(&buf, rollers).unwrap();
                let (oty, oh) = ellipse_groove_height(2.0, 1.0, th, rollers, 4000);
                assert!((h - oh).abs() < 1e-3, "{deg}°: {h} vs {oh}");
                assert!((ty - oty).abs() < 0.02, "{deg}°: offset {ty} vs {oty}");
                if deg == 0.0 || deg == 90.0 {
                    // mirror symmetric: centred
                    assert!(ty.abs() < 1e-6, "{deg}°: {ty}");
                }
            }
        }
    }

    #[test]
    fn narrow_orientation_falls_through() {
        // 2 cm tall section fits a 2.54 cm gap when stood on end
        let prism = make_elliptic_prism(2.0, 1.0, 8.0, 360).unwrap();
        let rollers = Rollers::new(7.62, 2.54).unwrap();
        assert!(matches!(
            settle_on_rollers(&prism, UnitQuaternion::IDENTITY, rollers),
            Err(SimError::FallThrough { .. })
        ));
    }

    #[test]
    fn small_sphere_falls_through() {
        let s = icosphere(1.0, 2).unwrap();
        let rollers = Rollers::new(7.62, 2.54).unwrap();
        assert!(matches!(settle_on_rollers(&s, UnitQuaternion::IDENTITY, rollers), Err(SimError::FallThrough { .. })));
    }
}
