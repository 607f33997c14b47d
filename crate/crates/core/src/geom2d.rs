//! Planar helpers shared by the silhouette, calibration and mask code:
//! convex hull, minimum-area bounding rectangle (rotating calipers),
//! shoelace area and closest-point queries on convex polygons.

use nalgebra::{Point2, Vector2};

pub type P2 = Point2<f64>;

#[inline]
fn cross(o: &P2, a: &P2, b: &P2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull by Andrew's monotone chain. Output is counter-clockwise with
/// collinear points removed. Fewer than three distinct input points yield
/// the distinct points themselves.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.iter().filter(|p| p.x.is_finite() && p.y.is_finite()).copied().collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }

    let mut hull: Vec<P2> = Vec::with_capacity(2 * pts.len());
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

/// Signed shoelace area; positive for counter-clockwise rings.
pub fn signed_area(ring: &[P2]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

/// An oriented rectangle. `axis` is the unit direction of the `long` side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub center: P2,
    pub axis: Vector2<f64>,
    pub long: f64,
    pub short: f64,
}

impl OrientedRect {
    pub fn area(&self) -> f64 {
        self.long * self.short
    }

    pub fn corners(&self) -> [P2; 4] {
        let u = self.axis * (0.5 * self.long);
        let v = Vector2::new(-self.axis.y, self.axis.x) * (0.5 * self.short);
        [self.center - u - v, self.center + u - v, self.center + u + v, self.center - u + v]
    }
}

fn rect_from_frame(origin: &P2, dir: Vector2<f64>, min_u: f64, max_u: f64, min_v: f64, max_v: f64) -> OrientedRect {
    let normal = Vector2::new(-dir.y, dir.x);
    let len_u = max_u - min_u;
    let len_v = max_v - min_v;
    let center = origin + dir * (0.5 * (min_u + max_u)) + normal * (0.5 * (min_v + max_v));
    if len_u >= len_v {
        OrientedRect { center, axis: dir, long: len_u, short: len_v }
    } else {
        OrientedRect { center, axis: normal, long: len_v, short: len_u }
    }
}

/// Minimum-area enclosing rectangle of a convex, counter-clockwise polygon
/// (as returned by [`convex_hull`]) using rotating calipers: one side of the
/// optimum is collinear with a hull edge, and the three remaining support
/// points only ever advance as the edge index does.
///
/// Returns `None` for an empty hull. One- and two-point hulls give a
/// zero-width rectangle.
pub fn min_area_rect(hull: &[P2]) -> Option<OrientedRect> {
    let n = hull.len();
    match n {
        0 => return None,
        1 => {
            return Some(OrientedRect { center: hull[0], axis: Vector2::x(), long: 0.0, short: 0.0 });
        }
        2 => {
            let d = hull[1] - hull[0];
            let len = d.norm();
            let axis = if len > 0.0 { d / len } else { Vector2::x() };
            return Some(OrientedRect { center: nalgebra::center(&hull[0], &hull[1]), axis, long: len, short: 0.0 });
        }
        _ => {}
    }

    let origin = hull[0];
    let rel: Vec<Vector2<f64>> = hull.iter().map(|p| p - origin).collect();
    let next = |i: usize| (i + 1) % n;

    let mut best: Option<(f64, OrientedRect)> = None;
    // Support indices: farthest along the edge, farthest from the edge, and
    // farthest against the edge direction.
    let mut right = 0usize;
    let mut top = 0usize;
    let mut left = 0usize;

    for i in 0..n {
        let e = rel[next(i)] - rel[i];
        let len = e.norm();
        if len == 0.0 {
            continue;
        }
        let dir = e / len;
        let normal = Vector2::new(-dir.y, dir.x);

        if i == 0 {
            right = next(i);
        }
        while rel[next(right)].dot(&dir) > rel[right].dot(&dir) {
            right = next(right);
        }
        if i == 0 {
            top = right;
        }
        while rel[next(top)].dot(&normal) > rel[top].dot(&normal) {
            top = next(top);
        }
        if i == 0 {
            left = top;
        }
        while rel[next(left)].dot(&dir) < rel[left].dot(&dir) {
            left = next(left);
        }

        let base_v = rel[i].dot(&normal);
        let min_u = rel[left].dot(&dir);
        let max_u = rel[right].dot(&dir);
        let max_v = rel[top].dot(&normal);
        let area = (max_u - min_u) * (max_v - base_v);
        if best.as_ref().is_none_or(|(a, _)| area < *a) {
            best = Some((area, rect_from_frame(&origin, dir, min_u, max_u, base_v, max_v)));
        }
    }
    best.map(|(_, r)| r)
}

/// Closest point on (or in) a convex counter-clockwise polygon to `q`.
/// Points inside the polygon are returned unchanged. Handles one- and
/// two-point "polygons" (a point and a segment).
pub fn closest_point_convex(poly: &[P2], q: &P2) -> P2 {
    match poly.len() {
        0 => *q,
        1 => poly[0],
        2 => closest_point_segment(&poly[0], &poly[1], q),
        n => {
            let inside = (0..n).all(|i| cross(&poly[i], &poly[(i + 1) % n], q) >= 0.0);
            if inside {
                return *q;
            }
            let mut best = poly[0];
            let mut best_d = f64::INFINITY;
            for i in 0..n {
                let c = closest_point_segment(&poly[i], &poly[(i + 1) % n], q);
                let d = (c - q).norm_squared();
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            best
        }
    }
}

pub fn closest_point_segment(a: &P2, b: &P2, q: &P2) -> P2 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return *a;
    }
    let t = ((q - a).dot(&ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

/// Proper or touching intersection of closed segments `p1p2` and `q1q2`.
pub fn segments_intersect(p1: &P2, p2: &P2, q1: &P2, q2: &P2) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: &P2, b: &P2, p: &P2, d: f64| {
        d == 0.0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// True when a closed ring has two non-adjacent edges that touch or cross.
pub fn ring_self_intersects(ring: &[P2]) -> bool {
    let n = ring.len();
    if n < 4 {
        return false;
    }
    for i in 0..n {
        let a1 = ring[i];
        let a2 = ring[(i + 1) % n];
        for j in (i + 1)..n {
            // Adjacent edges share a vertex by construction.
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let b1 = ring[j];
            let b2 = ring[(j + 1) % n];
            if segments_intersect(&a1, &a2, &b1, &b2) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> P2 {
        P2::new(x, y)
    }

    /// O(h²) reference: try every hull edge direction against every point.
    fn brute_min_rect(hull: &[P2]) -> (f64, f64, f64) {
        let n = hull.len();
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..n {
            let e = hull[(i + 1) % n] - hull[i];
            let d = e / e.norm();
            let nrm = Vector2::new(-d.y, d.x);
            let (mut lo_u, mut hi_u, mut lo_v, mut hi_v) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
            for q in hull {
                let u = q.coords.dot(&d);
                let v = q.coords.dot(&nrm);
                lo_u = lo_u.min(u);
                hi_u = hi_u.max(u);
                lo_v = lo_v.min(v);
                hi_v = hi_v.max(v);
            }
            let (w, h) = (hi_u - lo_u, hi_v - lo_v);
            if w * h < best.0 {
                best = (w * h, w.max(h), w.min(h));
            }
        }
        best
    }

    fn rotated_rect(w: f64, h: f64, deg: f64, cx: f64, cy: f64) -> Vec<P2> {
        let (s, c) = deg.to_radians().sin_cos();
        [(-w / 2.0, -h / 2.0), (w / 2.0, -h / 2.0), (w / 2.0, h / 2.0), (-w / 2.0, h / 2.0)]
            .iter()
            .map(|&(x, y)| p(cx + c * x - s * y, cy + s * x + c * y))
            .collect()
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = vec![p(0., 0.), p(1., 0.), p(2., 0.), p(2., 2.), p(0., 2.), p(1., 1.)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(signed_area(&hull) > 0.0);
        assert!((signed_area(&hull) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn hull_of_collinear_points_is_two_points() {
        let pts = vec![p(0., 0.), p(1., 1.), p(2., 2.), p(3., 3.)];
        assert_eq!(convex_hull(&pts).len(), 2);
    }

    #[test]
    fn min_rect_of_rotated_rectangle() {
        let corners = rotated_rect(10.0, 4.0, 37.0, 3.0, -2.0);
        let r = min_area_rect(&convex_hull(&corners)).unwrap();
        assert!((r.long - 10.0).abs() < 1e-9);
        assert!((r.short - 4.0).abs() < 1e-9);
        assert!((r.center - p(3.0, -2.0)).norm() < 1e-9);
        let along = r.axis.dot(&Vector2::new(37f64.to_radians().cos(), 37f64.to_radians().sin()));
        assert!((along.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn min_rect_degenerate_inputs() {
        assert!(min_area_rect(&[]).is_none());
        let r = min_area_rect(&[p(0., 0.), p(3., 4.)]).unwrap();
        assert_eq!(r.short, 0.0);
        assert!((r.long - 5.0).abs() < 1e-12);
    }

    #[test]
    fn closest_point_inside_and_outside() {
        let sq = convex_hull(&[p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]);
        assert_eq!(closest_point_convex(&sq, &p(0.5, 0.5)), p(0.5, 0.5));
        assert!((closest_point_convex(&sq, &p(2.0, 0.5)) - p(1.0, 0.5)).norm() < 1e-12);
        assert!((closest_point_convex(&sq, &p(2.0, 2.0)) - p(1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn self_intersection_detection() {
        let bowtie = vec![p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)];
        assert!(ring_self_intersects(&bowtie));
        let square = vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)];
        assert!(!ring_self_intersects(&square));
    }

    proptest! {
        #[test]
        fn calipers_match_brute_force(pts in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..60)) {
            let pts: Vec<P2> = pts.into_iter().map(|(x, y)| p(x, y)).collect();
            let hull = convex_hull(&pts);
            prop_assume!(hull.len() >= 3);
            let r = min_area_rect(&hull).unwrap();
            let (area, long, _) = brute_min_rect(&hull);
            prop_assert!((r.area() - area).abs() <= 1e-9 * area.max(1.0));
            prop_assert!((r.long - long).abs() <= 1e-7 * long.max(1.0) || (r.area() - area).abs() <= 1e-9 * area.max(1.0));
            prop_assert!(r.short <= r.long);
            // every hull point inside the rectangle
            let nrm = Vector2::new(-r.axis.y, r.axis.x);
            for q in &hull {
                let d = q - r.center;
                prop_assert!(d.dot(&r.axis).abs() <= 0.5 * r.long + 1e-7);
                prop_assert!(d.dot(&nrm).abs() <= 0.5 * r.short + 1e-7);
            }
        }
    }
}
