//! Numeric checks of every parameter condition the hardness argument uses.
//!
//! Each predicate reports a margin in the units of its inequality; it passes
//! iff the margin is strictly positive.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::{BalancedCnf, ConstructionLayout, ConstructionParams, ScheduleIndex};
use crate::geometry::{segment_annulus_clip, segments_intersection, Circle, Point, Segment};
use crate::model::{FilmPlan, Scene};

pub const PREDICATE_IDS: [&str; 18] = [
    "clauses_separated",
    "collision_band",
    "crossings_in_collision_zone",
    "epsilon_order",
    "epsilon_rate",
    "gadget_ratio",
    "gadgets_far_apart",
    "max_zigzag",
    "no_cheating",
    "no_interior_crossing",
    "no_past",
    "one_scene",
    "outer_vertices_far",
    "r1_penalty",
    "r2_penalty",
    "segment_lower_bound",
    "segment_upper_bound",
    "short_zone_chords",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateResult {
    pub id: String,
    pub description: String,
    pub pass: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    /// Sorted by id.
    pub predicates: Vec<PredicateResult>,
}

impl ReductionCertificate {
    fn push(&mut self, id: &str, description: impl Into<String>, margin: f64) {
        self.predicates.push(PredicateResult {
            id: id.to_owned(),
            description: description.into(),
            pass: margin > 0.0,
            margin,
        });
    }

    fn sort(&mut self) {
        self.predicates.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn all_pass(&self) -> bool {
        self.predicates.iter().all(|p| p.pass && p.margin > 0.0)
    }

    pub fn failing(&self) -> Vec<String> {
        self.predicates
            .iter()
            .filter(|p| !p.pass)
            .map(|p| p.id.clone())
            .collect()
    }

    pub fn get(&self, id: &str) -> Option<&PredicateResult> {
        self.predicates.iter().find(|p| p.id == id)
    }
}

/// Every predicate that depends only on parameters and geometry.
pub fn check_geometry(
    balanced: &BalancedCnf,
    p: &ConstructionParams,
    layout: &ConstructionLayout,
) -> ReductionCertificate {
    let mut cert = ReductionCertificate::default();
    geometric_predicates(&mut cert, balanced, p, layout);
    cert.sort();
    cert
}

/// All predicates, including the schedule-level ones.
pub fn check_constraints(
    balanced: &BalancedCnf,
    p: &ConstructionParams,
    layout: &ConstructionLayout,
    film_plan: &FilmPlan,
    index: &ScheduleIndex,
) -> ReductionCertificate {
    let mut cert = ReductionCertificate::default();
    geometric_predicates(&mut cert, balanced, p, layout);
    schedule_predicates(&mut cert, p, layout, film_plan, index);
    cert.sort();
    cert
}

fn min_edge_length(p: &ConstructionParams, layout: &ConstructionLayout) -> f64 {
    layout
        .edges
        .iter()
        .map(|e| e.length)
        .fold(p.clause_radius, f64::min)
}

fn geometric_predicates(
    cert: &mut ReductionCertificate,
    balanced: &BalancedCnf,
    p: &ConstructionParams,
    layout: &ConstructionLayout,
) {
    let l = p.num_clauses as f64;
    let (big_r1, big_r2, big_r3) = (p.clause_radius, p.gadget_circle_radius, p.collision_radius);
    let r1 = p.gadget_outer_radius;
    let delta = p.delta;
    let band = p.band();
    let slack = p.corollary_slack();
    let shortest = min_edge_length(p, layout);
    let longest = layout.edges.iter().map(|e| e.length).fold(0.0, f64::max);

    let mut ratio_err: f64 = 0.0;
    for g in &layout.gadgets {
        let m = g.geometry.m;
        for j in 0..m {
            let (x, xb, next) = (g.literal(2 * j), g.literal(2 * j + 1), g.literal(2 * ((j + 1) % m)));
            let (y, w) = (g.y(j), g.w(j));
            for d in [x.dist(y), xb.dist(y), xb.dist(w), next.dist(w)] {
                ratio_err = ratio_err.max((d - delta).abs());
            }
            ratio_err = ratio_err.max((x.dist(xb) - 1.5 * delta).abs());
        }
    }
    cert.push(
        "gadget_ratio",
        "every literal is δ from its Y/W neighbours and 1.5δ from its partner (to 1e-9·δ)",
        1e-9 * delta - ratio_err,
    );

    cert.push(
        "segment_lower_bound",
        "every literal-to-clause edge is longer than R1 − R2 − r1",
        shortest - (big_r1 - big_r2 - r1),
    );
    cert.push(
        "segment_upper_bound",
        "every literal-to-clause edge is shorter than R1 + r1",
        big_r1 + r1 - longest,
    );
    cert.push(
        "clauses_separated",
        "consecutive clause vertices are at least 3·R2 apart along the clause arc",
        std::f64::consts::PI * big_r1 / (2.0 * (l - 1.0)) - 3.0 * big_r2,
    );
    cert.push(
        "collision_band",
        "0 < R3 − R2 ≤ R2/(6(l−1))",
        (big_r2 / (6.0 * (l - 1.0)) - band).min(band),
    );

    // (q − x)·x̂ ≥ |x| on the extreme pairs of the two arcs covers every pair,
    // since the inner product only depends on the angle difference.
    let inner = &layout.arcs.gadget_inner_arc;
    let outer = &layout.arcs.clause_arc;
    let mut no_int = f64::INFINITY;
    for x in [inner.start(), inner.end()] {
        for q in [outer.start(), outer.end()] {
            no_int = no_int.min(q.dot(x) / x.norm() - x.norm());
        }
    }
    cert.push(
        "no_interior_crossing",
        "segments from the centre arc to the clause arc stay outside the open gadget disk",
        no_int,
    );

    let gadgets_apart = if layout.gadgets.len() < 2 {
        2.0 * delta
    } else {
        let mut best = f64::INFINITY;
        for (a, ga) in layout.gadgets.iter().enumerate() {
            for gb in &layout.gadgets[a + 1..] {
                for u in ga.all_vertices() {
                    for v in gb.all_vertices() {
                        best = best.min(u.dist(v));
                    }
                }
            }
        }
        best - 2.0 * delta
    };
    cert.push(
        "gadgets_far_apart",
        "vertices of distinct gadgets are at least 2δ apart",
        gadgets_apart,
    );

    let literals: Vec<(usize, usize, Point)> = layout
        .gadgets
        .iter()
        .enumerate()
        .flat_map(|(v, g)| (0..2 * g.geometry.m).map(move |k| (v, k, g.literal(k))))
        .collect();
    let mut outer_far = f64::INFINITY;
    for (var, g) in layout.gadgets.iter().enumerate() {
        let m = g.geometry.m;
        for j in 0..m {
            let y_near = [2 * j, 2 * j + 1];
            let w_near = [2 * j + 1, 2 * ((j + 1) % m)];
            for (pt, near) in [(g.y(j), y_near), (g.w(j), w_near)] {
                for &(v, k, lp) in &literals {
                    if v == var && near.contains(&k) {
                        continue;
                    }
                    outer_far = outer_far.min(pt.dist(lp) - 2.0 * delta);
                }
            }
        }
    }
    cert.push(
        "outer_vertices_far",
        "a Y/W vertex is more than 2δ from every literal except its two neighbours",
        outer_far,
    );

    let segments: Vec<Segment> = layout
        .edges
        .iter()
        .map(|e| Segment { p: e.start, q: e.end })
        .collect();
    // Edges leave their gadget outwards, so no crossing lies below R2 − r1;
    // the zone is thickened inwards by r1 to admit crossings of edges that
    // start on the inner side of the same gadget.
    let mut zone = band;
    for (a, sa) in segments.iter().enumerate() {
        for sb in &segments[a + 1..] {
            if let Some(x) = segments_intersection(sa, sb) {
                let r = x.norm();
                let angular = big_r2 * (FRAC_PI_4 - x.angle().abs());
                zone = zone.min(r - (big_r2 - r1)).min(big_r3 - r).min(angular);
            }
        }
    }
    cert.push(
        "crossings_in_collision_zone",
        "crossing literal-to-clause edges meet between radii R2 − r1 and R3 inside the clause sector",
        zone,
    );

    let d2 = Circle {
        center: Point::ORIGIN,
        radius: big_r2,
    };
    let d3 = Circle {
        center: Point::ORIGIN,
        radius: big_r3,
    };
    let mut chords: Vec<Segment> = segments.clone();
    let anchors = [inner.start(), inner.end()]
        .into_iter()
        .chain(layout.gadgets.iter().map(|g| g.center));
    for x in anchors {
        for &q in &layout.clause_vertices {
            chords.push(Segment { p: x, q });
        }
    }
    let longest_clip = chords
        .iter()
        .map(|s| segment_annulus_clip(s, &d2, &d3).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    cert.push(
        "short_zone_chords",
        "edges and centre-arc-to-clause segments cross the collision annulus in at most 2(R3 − R2)",
        2.0 * band - longest_clip,
    );

    cert.push(
        "epsilon_rate",
        "3(R3 − R2)·ε2 / min(R1 − R2, shortest edge) < ε1",
        p.parking_budget - 3.0 * band * p.travel_budget / shortest.min(big_r1 - big_r2),
    );
    cert.push(
        "r1_penalty",
        "R1 − R2 − r1 > 2lε2 + l(l−1)/2·ε1",
        big_r1 - big_r2 - r1 - slack,
    );
    cert.push(
        "r2_penalty",
        "2(R2 − r1 − δ) > 2lε2 + l(l−1)/2·ε1",
        2.0 * (big_r2 - r1 - delta) - slack,
    );
    cert.push(
        "no_cheating",
        "l·d*·ε2/(R1 − R2) < ε1/l",
        p.parking_budget / l - l * p.zigzag_distance * p.travel_budget / (big_r1 - big_r2),
    );
    let eps1 = p.parking_budget;
    let eps2 = p.travel_budget;
    cert.push(
        "epsilon_order",
        "0 < ε1 < ε2 < δ and ε2 > l²·ε1",
        (eps2 - l * l * eps1).min(eps1).min(eps2 - eps1).min(delta - eps2),
    );
    debug_assert_eq!(layout.gadgets.len(), balanced.num_vars());
}

/// Largest offset along any edge from which, leaving at the earliest
/// moment the breadcrumb there is available, a drone can still reach the end
/// of some edge of a later clause before its last travelling scene ends.
pub fn zigzag_distance(p: &ConstructionParams, layout: &ConstructionLayout) -> f64 {
    let mut worst: f64 = 0.0;
    for e in &layout.edges {
        for f in layout.edges.iter().filter(|f| f.clause > e.clause) {
            let gap = p.release_times[f.clause] - p.release_times[e.clause];
            let g = |x: f64| {
                e.point_at_offset(x).dist(f.end) + x - gap - f.length - p.travel_budget
            };
            let x = if g(0.0) > 0.0 {
                0.0
            } else if g(e.length) <= 0.0 {
                e.length
            } else {
                let (mut lo, mut hi) = (0.0, e.length);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if g(mid) > 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            };
            worst = worst.max(x);
        }
    }
    worst
}

struct Tagged<'a> {
    scene: &'a Scene,
    clause: usize,
    offset: f64,
}

fn schedule_predicates(
    cert: &mut ReductionCertificate,
    p: &ConstructionParams,
    layout: &ConstructionLayout,
    film_plan: &FilmPlan,
    index: &ScheduleIndex,
) {
    let t = p.breadcrumbs;
    let h = p.travel_budget / t as f64;
    let scene = |id: usize| film_plan.scene(id).expect("index refers to known scenes");

    let mut travelling: Vec<Tagged> = Vec::new();
    for (e, ids) in layout.edges.iter().zip(&index.travelling) {
        let hop = e.length / (t - 1) as f64;
        for (k, &id) in ids.iter().enumerate() {
            travelling.push(Tagged {
                scene: scene(id),
                clause: e.clause,
                offset: k as f64 * hop,
            });
        }
    }

    // one scene per ε2/t: time-sorted sweep over travelling ∪ parking scenes
    let mut pool: Vec<&Scene> = travelling.iter().map(|s| s.scene).collect();
    pool.extend(index.parking.iter().map(|ps| scene(ps.id)));
    pool.sort_by(|a, b| a.window.start.total_cmp(&b.window.start));
    let max_len = pool.iter().map(|s| s.window.length()).fold(0.0, f64::max);
    let mut one_scene = h;
    for a in &pool {
        let lo = pool.partition_point(|s| s.window.start < a.window.start - max_len);
        let hi = pool.partition_point(|s| s.window.start <= a.window.end + h);
        for b in &pool[lo..hi] {
            if std::ptr::eq(*a, *b) || b.window.end < a.window.start {
                continue;
            }
            let d = a.location.dist(b.location);
            let m = (d - h)
                .max(d - (b.window.end - a.window.start))
                .max(b.window.start - a.window.end - h);
            one_scene = one_scene.min(m);
        }
    }
    cert.push(
        "one_scene",
        "no drone can film parts of two travelling/parking scenes within ε2/t",
        one_scene,
    );

    let unreachable = |a: &Tagged, b: &Tagged| {
        a.scene.location.dist(b.scene.location) - (b.scene.window.end - a.scene.window.start)
    };
    let mut no_past = f64::INFINITY;
    let mut zigzag = f64::INFINITY;
    for a in &travelling {
        for b in &travelling {
            if b.scene.window.start < a.scene.window.start {
                continue;
            }
            if b.clause < a.clause {
                no_past = no_past.min(unreachable(a, b));
            } else if b.clause > a.clause && a.offset >= p.zigzag_distance {
                zigzag = zigzag.min(unreachable(a, b));
            }
        }
    }
    cert.push(
        "no_past",
        "after a travelling scene of clause j no later travelling scene of an earlier clause is reachable",
        no_past,
    );
    cert.push(
        "max_zigzag",
        "past offset d* on a clause edge no later travelling scene of a later clause is reachable",
        zigzag,
    );
}
