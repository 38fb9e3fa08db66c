use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::{BalancedCnf, ConstructionParams, Literal, ReductionError};
use crate::geometry::{
    line_circle_intersection, solve_gadget, Circle, CircularArc, GadgetGeometry, Point,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum VertexRole {
    Base,
    Clause { clause: usize },
    Literal { var: usize, index: usize },
    Y { var: usize, j: usize },
    W { var: usize, j: usize },
    BaseParking { clause: usize },
    /// Interior breadcrumb `k` (1..t−1) of the edge in `slot` of `clause`;
    /// the two ends coincide with a literal and a clause vertex.
    Breadcrumb { clause: usize, slot: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub role: VertexRole,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetPlacement {
    pub center: Point,
    pub rotation: f64,
    pub geometry: GadgetGeometry,
}

impl GadgetPlacement {
    pub fn literal(&self, k: usize) -> Point {
        self.geometry.literal_point(self.center, self.rotation, k)
    }

    pub fn y(&self, j: usize) -> Point {
        self.geometry.y_point(self.center, self.rotation, j)
    }

    pub fn w(&self, j: usize) -> Point {
        self.geometry.w_point(self.center, self.rotation, j)
    }

    pub fn literals(&self) -> impl Iterator<Item = Point> + '_ {
        (0..2 * self.geometry.m).map(|k| self.literal(k))
    }

    /// Literal, Y and W vertices.
    pub fn all_vertices(&self) -> impl Iterator<Item = Point> + '_ {
        let m = self.geometry.m;
        self.literals()
            .chain((0..m).map(|j| self.y(j)))
            .chain((0..m).map(|j| self.w(j)))
    }
}

/// Directed segment from an indexed literal vertex to its clause vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreadcrumbEdge {
    pub clause: usize,
    pub slot: usize,
    pub literal: Literal,
    pub start: Point,
    pub end: Point,
    pub length: f64,
    /// `t` equally spaced points, `start` first and `end` last.
    pub points: Vec<Point>,
}

impl BreadcrumbEdge {
    pub fn point_at_offset(&self, x: f64) -> Point {
        self.start.lerp(self.end, x / self.length)
    }
}

/// Reference arcs and circles of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutArcs {
    /// Clause arc, angles `[−π/4, π/4]` on the clause circle.
    pub clause_arc: CircularArc,
    /// Narrow clause arc `[−α, α]`, `α = π/(4(l−1))`.
    pub clause_inner_arc: CircularArc,
    /// Gadget arc, angles `[−π/4, π/4]` on the gadget circle.
    pub gadget_arc: CircularArc,
    /// Sub-arc carrying the gadget centers.
    pub gadget_inner_arc: CircularArc,
    pub collision_circle: Circle,
    /// Pivot `(R₃, 0)` through which the narrow clause arc is projected.
    pub pivot: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionLayout {
    pub base: Point,
    pub clause_vertices: Vec<Point>,
    /// One per variable, index `var − 1`.
    pub gadgets: Vec<GadgetPlacement>,
    pub base_parking: Vec<Point>,
    /// Three per clause, in clause order then slot order.
    pub edges: Vec<BreadcrumbEdge>,
    pub arcs: LayoutArcs,
}

impl ConstructionLayout {
    pub fn literal_point(&self, lit: Literal) -> Point {
        self.gadgets[lit.var - 1].literal(lit.vertex_index())
    }

    pub fn edge(&self, clause: usize, slot: usize) -> &BreadcrumbEdge {
        &self.edges[3 * clause + slot]
    }

    /// Every placed vertex once, breadcrumb ends excluded since they are
    /// literal or clause vertices.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = vec![Vertex {
            role: VertexRole::Base,
            point: self.base,
        }];
        for (clause, &point) in self.clause_vertices.iter().enumerate() {
            out.push(Vertex {
                role: VertexRole::Clause { clause },
                point,
            });
        }
        for (var, g) in self.gadgets.iter().enumerate() {
            for index in 0..2 * g.geometry.m {
                out.push(Vertex {
                    role: VertexRole::Literal { var, index },
                    point: g.literal(index),
                });
            }
            for j in 0..g.geometry.m {
                out.push(Vertex {
                    role: VertexRole::Y { var, j },
                    point: g.y(j),
                });
                out.push(Vertex {
                    role: VertexRole::W { var, j },
                    point: g.w(j),
                });
            }
        }
        for (clause, &point) in self.base_parking.iter().enumerate() {
            out.push(Vertex {
                role: VertexRole::BaseParking { clause },
                point,
            });
        }
        for e in &self.edges {
            let t = e.points.len();
            for k in 1..t.saturating_sub(1) {
                out.push(Vertex {
                    role: VertexRole::Breadcrumb {
                        clause: e.clause,
                        slot: e.slot,
                        k,
                    },
                    point: e.points[k],
                });
            }
        }
        out
    }
}

fn clause_angle(j: usize, l: usize) -> f64 {
    -FRAC_PI_4 + j as f64 * PI / (2.0 * (l - 1) as f64)
}

/// Arc of the gadget circle between the projections of the narrow clause
/// arc's ends through the pivot `(R₃, 0)`; `None` if a projection line
/// misses the gadget arc.
pub fn d2_inner_arc(l: usize, big_r1: f64, big_r2: f64, big_r3: f64) -> Option<CircularArc> {
    let alpha = PI / (4.0 * (l - 1) as f64);
    let d2 = Circle::centered(big_r2).ok()?;
    let pivot = Point::new(big_r3, 0.0);
    let project = |from: Point| -> Option<Point> {
        let hits = line_circle_intersection(from, pivot, &d2).ok()?;
        hits.into_iter().max_by(|a, b| a.x.total_cmp(&b.x))
    };
    let b2 = project(Point::polar(big_r1, -alpha))?;
    let a2 = project(Point::polar(big_r1, alpha))?;
    let (sa, sb) = (a2.angle(), b2.angle());
    if !(sa < sb && sa.abs() <= FRAC_PI_4 && sb.abs() <= FRAC_PI_4) {
        return None;
    }
    Some(CircularArc::new(d2, sa, sb))
}

fn arcs(l: usize, p: &ConstructionParams) -> Result<LayoutArcs, ReductionError> {
    let (r1, r2, r3) = (p.clause_radius, p.gadget_circle_radius, p.collision_radius);
    let alpha = PI / (4.0 * (l - 1) as f64);
    let d1 = Circle::centered(r1)?;
    let d2 = Circle::centered(r2)?;
    let gadget_inner_arc = d2_inner_arc(l, r1, r2, r3).ok_or_else(|| {
        ReductionError::LayoutMismatch("projection lines miss the gadget arc".into())
    })?;
    Ok(LayoutArcs {
        clause_arc: CircularArc::new(d1, -FRAC_PI_4, FRAC_PI_4),
        clause_inner_arc: CircularArc::new(d1, -alpha, alpha),
        gadget_arc: CircularArc::new(d2, -FRAC_PI_4, FRAC_PI_4),
        gadget_inner_arc,
        collision_circle: Circle::centered(r3)?,
        pivot: Point::new(r3, 0.0),
    })
}

fn place_gadgets(
    balanced: &BalancedCnf,
    p: &ConstructionParams,
    arc: &CircularArc,
    rotation_step: f64,
) -> Result<Vec<GadgetPlacement>, ReductionError> {
    let centers = arc.equally_spaced(balanced.num_vars());
    balanced
        .m
        .iter()
        .zip(centers)
        .enumerate()
        .map(|(i, (&m, center))| {
            Ok(GadgetPlacement {
                center,
                rotation: (i + 1) as f64 * rotation_step,
                geometry: solve_gadget(m, p.delta)?,
            })
        })
        .collect()
}

/// Places every vertex without checking gadget separation or general
/// position.
pub fn build_layout_unchecked(
    balanced: &BalancedCnf,
    p: &ConstructionParams,
) -> Result<ConstructionLayout, ReductionError> {
    let l = balanced.num_clauses();
    if l < 2 {
        return Err(ReductionError::TooFewClauses(l));
    }
    if p.num_clauses != l || p.num_vars != balanced.num_vars() {
        return Err(ReductionError::LayoutMismatch(format!(
            "parameters are for {} variables and {} clauses",
            p.num_vars, p.num_clauses
        )));
    }
    let arcs = arcs(l, p)?;
    let d1 = arcs.clause_arc.circle;
    let clause_vertices: Vec<Point> = (0..l).map(|j| d1.point_at(clause_angle(j, l))).collect();
    let base_parking = (0..l)
        .map(|j| Point::polar(p.delta, clause_angle(j, l)))
        .collect();
    let gadgets = place_gadgets(balanced, p, &arcs.gadget_inner_arc, p.rotation_step)?;

    let t = p.breadcrumbs.max(2);
    let mut edges = Vec::with_capacity(3 * l);
    for (clause, lits) in balanced.occurrences.iter().enumerate() {
        let end = clause_vertices[clause];
        for (slot, &literal) in lits.iter().enumerate() {
            let start = gadgets[literal.var - 1].literal(literal.vertex_index());
            let points = (0..t)
                .map(|k| start.lerp(end, k as f64 / (t - 1) as f64))
                .collect();
            edges.push(BreadcrumbEdge {
                clause,
                slot,
                literal,
                start,
                end,
                length: start.dist(end),
                points,
            });
        }
    }
    Ok(ConstructionLayout {
        base: Point::ORIGIN,
        clause_vertices,
        gadgets,
        base_parking,
        edges,
        arcs,
    })
}

/// Places every vertex, rejecting overlapping gadgets and collinear
/// literal/clause triples.
pub fn build_layout(
    balanced: &BalancedCnf,
    p: &ConstructionParams,
) -> Result<ConstructionLayout, ReductionError> {
    let layout = build_layout_unchecked(balanced, p)?;
    check_gadget_separation(&layout, p.delta)?;
    if !in_general_position(&general_position_points(&layout)) {
        return Err(ReductionError::GeneralPosition);
    }
    Ok(layout)
}

fn check_gadget_separation(layout: &ConstructionLayout, delta: f64) -> Result<(), ReductionError> {
    let required = 2.0 * delta;
    for (a, ga) in layout.gadgets.iter().enumerate() {
        for (b, gb) in layout.gadgets.iter().enumerate().skip(a + 1) {
            for u in ga.all_vertices() {
                for v in gb.all_vertices() {
                    let distance = u.dist(v);
                    if distance < required {
                        return Err(ReductionError::GadgetOverlap {
                            a: a + 1,
                            b: b + 1,
                            distance,
                            required,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn general_position_points(layout: &ConstructionLayout) -> Vec<Point> {
    layout
        .gadgets
        .iter()
        .flat_map(|g| g.literals().collect::<Vec<_>>())
        .chain(layout.clause_vertices.iter().copied())
        .collect()
}

/// No three points within `1e-12` (relative to the longest side) of a line.
fn in_general_position(points: &[Point]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let longest = a.dist(b).max(b.dist(c)).max(a.dist(c));
                let height = (b - a).cross(c - a).abs() / longest;
                if height <= 1e-12 * longest {
                    return false;
                }
            }
        }
    }
    true
}

const MAX_ROTATION_DOUBLINGS: u32 = 20;

/// Smallest `rotation_step · 2^k` (starting from the one in `p`) that puts
/// literal and clause vertices in general position.
pub fn general_position_rotation(
    balanced: &BalancedCnf,
    p: &ConstructionParams,
) -> Result<f64, ReductionError> {
    let l = balanced.num_clauses();
    let arcs = arcs(l, p)?;
    let d1 = arcs.clause_arc.circle;
    let clauses: Vec<Point> = (0..l).map(|j| d1.point_at(clause_angle(j, l))).collect();
    let mut step = p.rotation_step;
    for _ in 0..=MAX_ROTATION_DOUBLINGS {
        let gadgets = place_gadgets(balanced, p, &arcs.gadget_inner_arc, step)?;
        let points: Vec<Point> = gadgets
            .iter()
            .flat_map(|g| g.literals().collect::<Vec<_>>())
            .chain(clauses.iter().copied())
            .collect();
        if in_general_position(&points) {
            return Ok(step);
        }
        step *= 2.0;
    }
    Err(ReductionError::GeneralPosition)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_arc_is_symmetric_and_inside_gadget_arc() {
        let arc = d2_inner_arc(6, 100.0, 1.0, 1.0 + 1.0 / 30.0).unwrap();
        assert!((arc.start_angle + arc.end_angle).abs() < 1e-12);
        assert!(arc.end_angle > 0.0 && arc.end_angle < FRAC_PI_4);
    }

    #[test]
    fn collinear_points_are_detected() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0)];
        assert!(!in_general_position(&pts));
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.1)];
        assert!(in_general_position(&pts));
    }
}
