use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::GeometryError;

/// A point (or vector) in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Point at `radius` from the origin in direction `angle`.
    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Linear interpolation `self + u (other - self)`.
    pub fn lerp(self, other: Point, u: f64) -> Point {
        Point::new(
            self.x + u * (other.x - self.x),
            self.y + u * (other.y - self.y),
        )
    }

    /// Rotation about the origin by `angle` radians (counterclockwise).
    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::BadRadius(radius));
        }
        Ok(Self { center, radius })
    }

    /// Circle of the given radius centered at the origin.
    pub fn centered(radius: f64) -> Result<Self, GeometryError> {
        Self::new(Point::ORIGIN, radius)
    }

    pub fn point_at(&self, angle: f64) -> Point {
        self.center + Point::polar(self.radius, angle)
    }
}

/// Counterclockwise arc from `start_angle` to `end_angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularArc {
    pub circle: Circle,
    pub start_angle: f64,
    pub end_angle: f64,
}

impl CircularArc {
    pub fn new(circle: Circle, start_angle: f64, end_angle: f64) -> Self {
        Self {
            circle,
            start_angle,
            end_angle,
        }
    }

    /// Counterclockwise angular span, in `(0, 2π]`.
    pub fn span(&self) -> f64 {
        let s = (self.end_angle - self.start_angle).rem_euclid(TAU);
        if s == 0.0 {
            TAU
        } else {
            s
        }
    }

    pub fn start(&self) -> Point {
        self.circle.point_at(self.start_angle)
    }

    pub fn end(&self) -> Point {
        self.circle.point_at(self.end_angle)
    }

    pub fn length(&self) -> f64 {
        self.span() * self.circle.radius
    }

    /// Point at fraction `u ∈ [0, 1]` of the span.
    pub fn point_at_fraction(&self, u: f64) -> Point {
        self.circle.point_at(self.start_angle + u * self.span())
    }

    /// `count` equally spaced points from start to end, both included.
    /// A single point is placed at the middle of the arc.
    pub fn equally_spaced(&self, count: usize) -> Vec<Point> {
        match count {
            0 => Vec::new(),
            1 => vec![self.point_at_fraction(0.5)],
            _ => (0..count)
                .map(|i| self.point_at_fraction(i as f64 / (count - 1) as f64))
                .collect(),
        }
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        (angle - self.start_angle).rem_euclid(TAU) <= self.span()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Result<Self, GeometryError> {
        if p == q {
            return Err(GeometryError::DegenerateSegment(p));
        }
        Ok(Self { p, q })
    }

    pub fn length(&self) -> f64 {
        self.p.dist(self.q)
    }

    pub fn direction(&self) -> Point {
        self.q - self.p
    }
}

/// `count` points equally spaced on `circle`, clockwise, the first at `phase`.
pub fn regular_polygon_points(
    circle: &Circle,
    count: usize,
    phase: f64,
) -> Result<Vec<Point>, GeometryError> {
    if count < 3 {
        return Err(GeometryError::TooFewVertices(count));
    }
    let step = TAU / count as f64;
    Ok((0..count)
        .map(|k| circle.point_at(phase - k as f64 * step))
        .collect())
}

/// Intersections of the infinite line through `p` and `q` with `circle`,
/// sorted by their position along `p → q`. Tangency yields one point.
pub fn line_circle_intersection(
    p: Point,
    q: Point,
    circle: &Circle,
) -> Result<Vec<Point>, GeometryError> {
    if p == q {
        return Err(GeometryError::DegenerateSegment(p));
    }
    let d = q - p;
    let len = d.norm();
    let u = d * (1.0 / len);
    let w = p - circle.center;
    let proj = w.dot(u);
    let r2 = circle.radius * circle.radius;
    let disc = proj * proj - (w.dot(w) - r2);
    let tangent_tol = 1e-12 * r2.max(w.dot(w));
    if disc < -tangent_tol {
        return Ok(Vec::new());
    }
    if disc.abs() <= tangent_tol {
        return Ok(vec![p + u * (-proj)]);
    }
    let root = disc.sqrt();
    Ok(vec![p + u * (-proj - root), p + u * (-proj + root)])
}

fn orientation(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Proper crossing test: the segments share exactly one interior point.
/// Touching at an endpoint or collinear overlap is not a crossing.
pub fn segments_cross(s1: &Segment, s2: &Segment) -> bool {
    let o1 = orientation(s1.p, s1.q, s2.p);
    let o2 = orientation(s1.p, s1.q, s2.q);
    let o3 = orientation(s2.p, s2.q, s1.p);
    let o4 = orientation(s2.p, s2.q, s1.q);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Crossing point of two properly crossing segments.
pub fn segments_intersection(s1: &Segment, s2: &Segment) -> Option<Point> {
    if !segments_cross(s1, s2) {
        return None;
    }
    let r = s1.direction();
    let s = s2.direction();
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let u = (s2.p - s1.p).cross(s) / denom;
    Some(s1.p.lerp(s1.q, u))
}

/// Parameter range `[u0, u1] ⊆ [0, 1]` of the part of `s` inside the closed disk.
fn disk_parameter_range(s: &Segment, circle: &Circle) -> Option<(f64, f64)> {
    let d = s.direction();
    let w = s.p - circle.center;
    let a = d.dot(d);
    let b = 2.0 * w.dot(d);
    let c = w.dot(w) - circle.radius * circle.radius;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    // numerically stable pair of roots
    let qq = -0.5 * (b + b.signum() * root);
    let (mut u0, mut u1) = if qq == 0.0 {
        let r = (-c / a).max(0.0).sqrt();
        (-r, r)
    } else {
        (qq / a, c / qq)
    };
    if u0 > u1 {
        std::mem::swap(&mut u0, &mut u1);
    }
    let lo = u0.max(0.0);
    let hi = u1.min(1.0);
    (lo <= hi).then_some((lo, hi))
}

/// Total length of `s` inside the closed annulus between two concentric circles.
pub fn segment_annulus_clip(
    s: &Segment,
    inner: &Circle,
    outer: &Circle,
) -> Result<f64, GeometryError> {
    if inner.center != outer.center {
        return Err(GeometryError::NotConcentric);
    }
    if inner.radius >= outer.radius {
        return Err(GeometryError::AnnulusOrder {
            inner: inner.radius,
            outer: outer.radius,
        });
    }
    let len = s.length();
    let outer_part = disk_parameter_range(s, outer).map_or(0.0, |(a, b)| b - a);
    // The inner range is contained in the outer one, so the difference is the clip.
    let inner_part = disk_parameter_range(s, inner).map_or(0.0, |(a, b)| b - a);
    Ok(((outer_part - inner_part) * len).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Point, b: Point) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn square_is_clockwise_from_phase() {
        let c = Circle::centered(1.0).unwrap();
        let pts = regular_polygon_points(&c, 4, 0.0).unwrap();
        let want = [
            Point::new(1.0, 0.0),
            Point::new(0.0, -1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        for (p, w) in pts.iter().zip(want) {
            assert!(close(*p, w), "{p:?} vs {w:?}");
        }
    }

    #[test]
    fn hexagon_side_equals_radius() {
        let c = Circle::centered(2.0).unwrap();
        let pts = regular_polygon_points(&c, 6, 0.3).unwrap();
        for i in 0..6 {
            let d = pts[i].dist(pts[(i + 1) % 6]);
            assert!((d - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polygon_phase_rotates_points() {
        let c = Circle::centered(1.5).unwrap();
        let theta = 0.7;
        let a = regular_polygon_points(&c, 7, 0.0).unwrap();
        let b = regular_polygon_points(&c, 7, theta).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!(close(p.rotate(theta), *q));
        }
    }

    #[test]
    fn polygon_rejects_fewer_than_three() {
        let c = Circle::centered(1.0).unwrap();
        assert_eq!(
            regular_polygon_points(&c, 2, 0.0),
            Err(GeometryError::TooFewVertices(2))
        );
    }

    #[test]
    fn horizontal_line_through_unit_circle() {
        let c = Circle::centered(1.0).unwrap();
        let pts =
            line_circle_intersection(Point::new(-3.0, 0.0), Point::new(5.0, 0.0), &c).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(close(pts[0], Point::new(-1.0, 0.0)));
        assert!(close(pts[1], Point::new(1.0, 0.0)));
        // reversed direction reverses order
        let rev =
            line_circle_intersection(Point::new(5.0, 0.0), Point::new(-3.0, 0.0), &c).unwrap();
        assert!(close(rev[0], Point::new(1.0, 0.0)));
    }

    #[test]
    fn tangent_line_yields_one_point() {
        let c = Circle::centered(1.0).unwrap();
        let pts =
            line_circle_intersection(Point::new(-2.0, 1.0), Point::new(2.0, 1.0), &c).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(close(pts[0], Point::new(0.0, 1.0)));
        let miss =
            line_circle_intersection(Point::new(-2.0, 1.5), Point::new(2.0, 1.5), &c).unwrap();
        assert!(miss.is_empty());
    }

    #[test]
    fn crossing_excludes_shared_endpoints() {
        let a = Segment::new(Point::new(0.0, 0.0), Point::new(2.0, 2.0)).unwrap();
        let b = Segment::new(Point::new(0.0, 2.0), Point::new(2.0, 0.0)).unwrap();
        assert!(segments_cross(&a, &b));
        assert!(segments_cross(&b, &a));
        let x = segments_intersection(&a, &b).unwrap();
        assert!(close(x, Point::new(1.0, 1.0)));
        let c = Segment::new(Point::new(2.0, 2.0), Point::new(3.0, 0.0)).unwrap();
        assert!(!segments_cross(&a, &c));
        let far = Segment::new(Point::new(10.0, 0.0), Point::new(11.0, 5.0)).unwrap();
        assert!(!segments_cross(&a, &far));
    }

    #[test]
    fn annulus_clip_matches_chord_difference_and_sampling() {
        let inner = Circle::centered(1.0).unwrap();
        let outer = Circle::centered(1.05).unwrap();
        let s = Segment::new(Point::new(0.0, 1.01), Point::new(10.0, 1.01)).unwrap();
        let clip = segment_annulus_clip(&s, &inner, &outer).unwrap();
        // the line y = 1.01 misses the inner disk; inside the outer disk for x ≤ √(1.05² − 1.01²)
        let chord = (1.05f64 * 1.05 - 1.01 * 1.01).sqrt();
        assert!((clip - chord).abs() < 1e-12, "{clip} vs {chord}");

        let n = 1_000_000;
        let inside = (0..n)
            .filter(|&i| {
                let p = s.p.lerp(s.q, (i as f64 + 0.5) / n as f64);
                let r = p.norm();
                (1.0..=1.05).contains(&r)
            })
            .count();
        let sampled = inside as f64 / n as f64 * s.length();
        assert!((sampled - clip).abs() < 1e-4, "{sampled} vs {clip}");
    }

    #[test]
    fn annulus_clip_radial_far_and_inside() {
        let inner = Circle::centered(1.0).unwrap();
        let outer = Circle::centered(1.2).unwrap();
        let radial = Segment::new(Point::polar(1.0, 0.4), Point::polar(1.2, 0.4)).unwrap();
        assert!((segment_annulus_clip(&radial, &inner, &outer).unwrap() - 0.2).abs() < 1e-12);
        let through = Segment::new(Point::new(-5.0, 0.0), Point::new(5.0, 0.0)).unwrap();
        assert!((segment_annulus_clip(&through, &inner, &outer).unwrap() - 0.4).abs() < 1e-12);
        let far = Segment::new(Point::new(10.0, 10.0), Point::new(12.0, 11.0)).unwrap();
        assert_eq!(segment_annulus_clip(&far, &inner, &outer).unwrap(), 0.0);
        let inside = Segment::new(Point::polar(1.1, 0.0), Point::polar(1.1, 0.05)).unwrap();
        let got = segment_annulus_clip(&inside, &inner, &outer).unwrap();
        assert!((got - inside.length()).abs() < 1e-12);
    }

    #[test]
    fn annulus_requires_concentric_ordered_circles() {
        let inner = Circle::new(Point::new(0.1, 0.0), 1.0).unwrap();
        let outer = Circle::centered(2.0).unwrap();
        let s = Segment::new(Point::ORIGIN, Point::new(3.0, 0.0)).unwrap();
        assert_eq!(
            segment_annulus_clip(&s, &inner, &outer),
            Err(GeometryError::NotConcentric)
        );
        let big = Circle::centered(3.0).unwrap();
        assert!(matches!(
            segment_annulus_clip(&s, &big, &outer),
            Err(GeometryError::AnnulusOrder { .. })
        ));
    }

    #[test]
    fn arc_spacing_and_span() {
        let c = Circle::centered(2.0).unwrap();
        let arc = CircularArc::new(c, -PI / 4.0, PI / 4.0);
        assert!((arc.span() - PI / 2.0).abs() < 1e-15);
        let pts = arc.equally_spaced(3);
        assert!(close(pts[1], Point::new(2.0, 0.0)));
        assert!(arc.contains_angle(0.1));
        assert!(!arc.contains_angle(PI));
    }

    use proptest::prelude::*;

    fn pt() -> impl Strategy<Value = Point> {
        (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn crossing_is_symmetric(a in pt(), b in pt(), c in pt(), d in pt()) {
            prop_assume!(a != b && c != d);
            let s1 = Segment::new(a, b).unwrap();
            let s2 = Segment::new(c, d).unwrap();
            prop_assert_eq!(segments_cross(&s1, &s2), segments_cross(&s2, &s1));
        }

        #[test]
        fn clip_never_exceeds_length(a in pt(), b in pt(), r in 0.5f64..5.0, w in 0.01f64..3.0) {
            prop_assume!(a != b);
            let s = Segment::new(a, b).unwrap();
            let inner = Circle::centered(r).unwrap();
            let outer = Circle::centered(r + w).unwrap();
            let clip = segment_annulus_clip(&s, &inner, &outer).unwrap();
            prop_assert!(clip >= 0.0);
            prop_assert!(clip <= s.length() * (1.0 + 1e-12) + 1e-12);
        }
    }
}
