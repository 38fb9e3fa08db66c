use serde::{Deserialize, Serialize};

use super::{BalancedCnf, ConstructionLayout, ConstructionParams, ReductionError};
use crate::model::{FilmPlan, Scene, SceneKind, TimeInterval};

/// A literal parking scene: slot `slot` of release window `window` at
/// literal `index` of gadget `var` (both 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParkingScene {
    pub window: usize,
    pub slot: usize,
    pub var: usize,
    pub index: usize,
    pub id: usize,
}

/// Scene ids by role. Variables, clauses and windows are 0-based.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScheduleIndex {
    /// `w[var][j]`.
    pub w: Vec<Vec<usize>>,
    /// Base scene per clause.
    pub base: Vec<usize>,
    /// `literal[var][index]`.
    pub literal: Vec<Vec<usize>>,
    /// `y[var][j]`.
    pub y: Vec<Vec<usize>>,
    pub parking: Vec<ParkingScene>,
    /// `t` scenes per breadcrumb edge, edges in layout order.
    pub travelling: Vec<Vec<usize>>,
    pub clause: Vec<usize>,
}

impl ScheduleIndex {
    /// Parking scene ids at one literal vertex in one window, by slot.
    pub fn parking_at(&self, var: usize, index: usize, window: usize) -> Vec<usize> {
        let mut found: Vec<&ParkingScene> = self
            .parking
            .iter()
            .filter(|p| p.var == var && p.index == index && p.window == window)
            .collect();
        found.sort_by_key(|p| p.slot);
        found.into_iter().map(|p| p.id).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub film_plan: FilmPlan,
    pub index: ScheduleIndex,
}

struct Builder {
    scenes: Vec<Scene>,
}

impl Builder {
    fn push(&mut self, kind: SceneKind, location: crate::geometry::Point, start: f64, length: f64) -> usize {
        let id = self.scenes.len() + 1;
        self.scenes.push(Scene {
            id,
            location,
            window: TimeInterval {
                start,
                end: start + length,
            },
            kind,
        });
        id
    }
}

fn require_non_negative(kind: SceneKind, length: f64) -> Result<(), ReductionError> {
    if length < 0.0 || !length.is_finite() {
        Err(ReductionError::NegativeSceneLength { kind, length })
    } else {
        Ok(())
    }
}

/// Lays out all scenes in id order W, base, literal, Y, literal parking,
/// travelling, clause.
///
/// Parking slots split each release window into `t` equal parts with one
/// scene of length `ε₁/t` centered in each, so that scenes of consecutive
/// windows never touch.
pub fn build_schedule(
    balanced: &BalancedCnf,
    p: &ConstructionParams,
    layout: &ConstructionLayout,
) -> Result<Schedule, ReductionError> {
    let l = balanced.num_clauses();
    let t = p.breadcrumbs;
    if t < 2 {
        return Err(ReductionError::LayoutMismatch(format!(
            "need at least 2 breadcrumbs per edge, got {t}"
        )));
    }
    if layout.edges.iter().any(|e| e.points.len() != t) {
        return Err(ReductionError::LayoutMismatch(
            "breadcrumb count differs from parameters".into(),
        ));
    }
    require_non_negative(SceneKind::BaseParking, p.base_scene_length())?;
    require_non_negative(SceneKind::Clause, p.clause_scene_length())?;
    let park_len = p.parking_budget / t as f64;
    let slot = p.parking_slot();
    require_non_negative(SceneKind::LiteralParking, park_len)?;
    require_non_negative(SceneKind::LiteralParking, slot - park_len)?;
    let travel_len = p.travel_budget / t as f64;
    require_non_negative(SceneKind::Travelling, travel_len)?;

    let mut b = Builder { scenes: Vec::new() };
    let mut index = ScheduleIndex::default();
    let big_r1 = p.clause_radius;

    for g in &layout.gadgets {
        let ids = (0..g.geometry.m)
            .map(|j| b.push(SceneKind::W, g.w(j), p.w_start, big_r1))
            .collect();
        index.w.push(ids);
    }
    for &beta in &layout.base_parking {
        index
            .base
            .push(b.push(SceneKind::BaseParking, beta, p.w_start, p.base_scene_length()));
    }
    for g in &layout.gadgets {
        let ids = (0..2 * g.geometry.m)
            .map(|k| b.push(SceneKind::Literal, g.literal(k), p.literal_start, big_r1))
            .collect();
        index.literal.push(ids);
    }
    for g in &layout.gadgets {
        let ids = (0..g.geometry.m)
            .map(|j| b.push(SceneKind::Y, g.y(j), p.y_start, p.y_end - p.y_start))
            .collect();
        index.y.push(ids);
    }

    for window in 0..l - 1 {
        let used: Vec<(usize, usize)> = balanced.occurrences[window]
            .iter()
            .map(|lit| (lit.var - 1, lit.vertex_index()))
            .collect();
        for s in 0..t {
            let start = p.release_times[window] + s as f64 * slot + 0.5 * (slot - park_len);
            for (var, g) in layout.gadgets.iter().enumerate() {
                for k in 0..2 * g.geometry.m {
                    if used.contains(&(var, k)) {
                        continue;
                    }
                    let id = b.push(SceneKind::LiteralParking, g.literal(k), start, park_len);
                    index.parking.push(ParkingScene {
                        window,
                        slot: s,
                        var,
                        index: k,
                        id,
                    });
                }
            }
        }
    }

    for e in &layout.edges {
        let hop = e.length / (t - 1) as f64;
        let release = p.release_times[e.clause];
        let ids = e
            .points
            .iter()
            .enumerate()
            .map(|(k, &pt)| {
                let start = release + k as f64 * (travel_len + hop);
                b.push(SceneKind::Travelling, pt, start, travel_len)
            })
            .collect();
        index.travelling.push(ids);
    }
    for &q in &layout.clause_vertices {
        index
            .clause
            .push(b.push(SceneKind::Clause, q, p.clause_start, p.clause_scene_length()));
    }

    let film_plan = FilmPlan::new(layout.base, b.scenes)?;
    Ok(Schedule { film_plan, index })
}
