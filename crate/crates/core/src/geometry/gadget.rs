use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{GeometryError, Point};

/// Shape of one variable gadget, independent of where it is placed.
///
/// `2·m` literal vertices lie on the inner circle (radius `r2`), clockwise
/// `x_1, x̄_1, x_2, x̄_2, …`. The outer circle (radius `r1`) carries the
/// `Y` vertex between `x_j` and `x̄_j` and the `W` vertex between `x̄_j` and
/// `x_{j+1}`. Every literal is at distance `delta` from its two neighbouring
/// `Y`/`W` vertices and at distance `1.5·delta` from the adjacent literal.
///
/// Angles are relative to the gadget's own rotation and center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetGeometry {
    pub m: usize,
    pub r1: f64,
    pub r2: f64,
    pub delta: f64,
    /// Index `2(j-1)` is `x_j`, index `2(j-1)+1` is `x̄_j`.
    pub literal_angles: Vec<f64>,
    pub y_angles: Vec<f64>,
    pub w_angles: Vec<f64>,
}

/// Radius ratio `r2 / r1` for which the adjacent-literal chord is 1.5 times
/// the literal-to-outer-vertex distance.
///
/// With half-step angle `θ = π/(2m)`, `c = cos θ`, `s = sin θ` and
/// `ρ = r2/r1`, squaring `2ρ s = 1.5 · √(1 + ρ² − 2ρc)` gives
/// `(2.25 − 4s²)ρ² − 4.5cρ + 2.25 = 0`; the smaller root is the one inside S₁.
fn unit_ratio(m: usize) -> f64 {
    let theta = PI / (2.0 * m as f64);
    let (s, c) = theta.sin_cos();
    let a = 2.25 - 4.0 * s * s;
    let b = 4.5 * c;
    let cc = 2.25;
    let disc = b * b - 4.0 * a * cc;
    2.0 * cc / (b + disc.sqrt())
}

/// Builds the gadget for `m` occurrences per literal and spacing `delta`.
pub fn solve_gadget(m: usize, delta: f64) -> Result<GadgetGeometry, GeometryError> {
    if m < 3 {
        return Err(GeometryError::GadgetTooSmall(m));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(GeometryError::BadDelta(delta));
    }
    let rho = unit_ratio(m);
    let theta = PI / (2.0 * m as f64);
    // chord between adjacent literals for r1 = 1 is 2ρ sin θ = 1.5 δ_unit
    let delta_unit = 2.0 * rho * theta.sin() / 1.5;
    let r1 = delta / delta_unit;
    let r2 = rho * r1;
    let step = PI / m as f64;
    let literal_angles = (0..2 * m).map(|k| -(k as f64) * step).collect();
    let y_angles = (0..m).map(|j| -(2.0 * j as f64 + 0.5) * step).collect();
    let w_angles = (0..m).map(|j| -(2.0 * j as f64 + 1.5) * step).collect();
    Ok(GadgetGeometry {
        m,
        r1,
        r2,
        delta,
        literal_angles,
        y_angles,
        w_angles,
    })
}

impl GadgetGeometry {
    /// Outer radius per unit `delta`.
    pub fn unit_outer_radius(m: usize) -> Result<f64, GeometryError> {
        Ok(solve_gadget(m, 1.0)?.r1)
    }

    pub fn literal_point(&self, center: Point, rotation: f64, k: usize) -> Point {
        center + Point::polar(self.r2, self.literal_angles[k] + rotation)
    }

    pub fn y_point(&self, center: Point, rotation: f64, j: usize) -> Point {
        center + Point::polar(self.r1, self.y_angles[j] + rotation)
    }

    pub fn w_point(&self, center: Point, rotation: f64, j: usize) -> Point {
        center + Point::polar(self.r1, self.w_angles[j] + rotation)
    }

    /// Literal index of `x_j` (0-based `j`).
    pub fn positive_index(j: usize) -> usize {
        2 * j
    }

    /// Literal index of `x̄_j` (0-based `j`).
    pub fn negative_index(j: usize) -> usize {
        2 * j + 1
    }

    /// Largest deviation from the prescribed distances: `δ` for every
    /// literal/`Y`/`W` adjacency and `1.5·δ` between `x_j` and `x̄_j`.
    pub fn max_distance_error(&self) -> f64 {
        let c = Point::ORIGIN;
        let mut worst: f64 = 0.0;
        for j in 0..self.m {
            let x = self.literal_point(c, 0.0, Self::positive_index(j));
            let xb = self.literal_point(c, 0.0, Self::negative_index(j));
            let next = self.literal_point(c, 0.0, Self::positive_index((j + 1) % self.m));
            let y = self.y_point(c, 0.0, j);
            let w = self.w_point(c, 0.0, j);
            for d in [x.dist(y), xb.dist(y), xb.dist(w), next.dist(w)] {
                worst = worst.max((d - self.delta).abs());
            }
            worst = worst.max((x.dist(xb) - 1.5 * self.delta).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from an independent bisection on the constructed points
    // (ratio d(x, x̄)/d(x, y) = 1.5, r1 = 1).
    const M3_R2: f64 = 0.7651203334926122;
    const M3_DELTA: f64 = 0.5100802223284082;
    const M4_R2: f64 = 0.792785903987024;
    const M7_R2: f64 = 0.8538448717383811;

    #[test]
    fn unit_gadget_m3_matches_oracle() {
        let g = solve_gadget(3, M3_DELTA).unwrap();
        assert!((g.r1 - 1.0).abs() < 1e-12, "r1 = {}", g.r1);
        assert!((g.r2 - M3_R2).abs() < 1e-12);
        // the quadratic 1.25 r² − 2.25√3 r + 2.25 = 0 vanishes at r2
        let q = 1.25 * g.r2 * g.r2 - 2.25 * 3f64.sqrt() * g.r2 + 2.25;
        assert!(q.abs() < 1e-12);
    }

    #[test]
    fn ratio_matches_oracle_for_other_m() {
        for (m, r2) in [(4, M4_R2), (7, M7_R2)] {
            let g = solve_gadget(m, 1.0).unwrap();
            assert!((g.r2 / g.r1 - r2).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn distances_hold_for_m_up_to_40() {
        for m in 3..=40 {
            let delta = 0.37;
            let g = solve_gadget(m, delta).unwrap();
            assert!(g.r2 < g.r1);
            assert!(g.max_distance_error() <= 1e-9 * delta, "m = {m}");
            let x = g.literal_point(Point::ORIGIN, 0.0, 0);
            let xb = g.literal_point(Point::ORIGIN, 0.0, 1);
            let y = g.y_point(Point::ORIGIN, 0.0, 0);
            assert!(((x.dist(xb) / x.dist(y)) - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn scale_covariance() {
        let a = solve_gadget(5, 0.25).unwrap();
        let b = solve_gadget(5, 0.5).unwrap();
        assert_eq!(b.r1, 2.0 * a.r1);
        assert_eq!(b.r2, 2.0 * a.r2);
    }

    #[test]
    fn rejects_small_m_and_bad_delta() {
        assert_eq!(solve_gadget(2, 1.0), Err(GeometryError::GadgetTooSmall(2)));
        assert!(matches!(
            solve_gadget(3, 0.0),
            Err(GeometryError::BadDelta(_))
        ));
    }

    #[test]
    fn outer_vertices_alternate_with_literals() {
        let g = solve_gadget(3, 1.0).unwrap();
        // clockwise order: x1, y1, x̄1, w1, x2, ...
        for j in 0..3 {
            let x = g.literal_angles[2 * j];
            let xb = g.literal_angles[2 * j + 1];
            assert!(g.y_angles[j] < x && g.y_angles[j] > xb);
            assert!(g.w_angles[j] < xb);
        }
    }
}
