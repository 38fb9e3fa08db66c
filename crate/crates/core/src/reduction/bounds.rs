use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{target_filming_time, ConstructionParams};
use crate::model::{interval_union_length, FilmPlan, FlightPlan, ModelError, SceneRef, TimeInterval};

/// Upper bounds on the filming time of any `k`-drone plan within each stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageBounds {
    pub bound_i: f64,
    pub bound_ii: f64,
    pub bound_iii: f64,
    pub bound_iv: f64,
    pub corollary_total: f64,
    /// `[s0, t0]`, `[s1, t1]`, `[t1, t2]`, and `[t2, last scene end]`.
    pub stages: [TimeInterval; 4],
}

impl StageBounds {
    pub fn as_array(&self) -> [f64; 4] {
        [self.bound_i, self.bound_ii, self.bound_iii, self.bound_iv]
    }
}

pub fn compute_stage_bounds(p: &ConstructionParams) -> StageBounds {
    let m = p.total_occurrences as f64;
    let l = p.num_clauses as f64;
    let big_r1 = p.clause_radius;
    let (t1, t2) = (p.literal_end, p.parking_end);
    let r1 = p.gadget_outer_radius;
    let (delta, eps1, eps2) = (p.delta, p.parking_budget, p.travel_budget);

    let bound_i = (m + l) * big_r1 - l * (p.gadget_circle_radius + r1 + delta);
    let bound_ii = (m + l) * big_r1;
    let bound_iii = m * (t2 - t1 - delta) + l * (l - 1.0) * eps1;
    let bound_iv = m * (big_r1 - t2 + t1 + delta) + 3.0 * l * eps2 + l * p.clause_scene_length();
    let corollary_total = (3.0 * m + 2.0 * l) * big_r1
        - 0.5 * l * p.gadget_circle_radius
        - 3.0 * l * r1
        - 3.0 * l * delta
        + 2.0 * l * eps2
        + l * (l - 1.0) * eps1;
    let last = (p.clause_start + p.clause_scene_length()).max(p.y_end);
    StageBounds {
        bound_i,
        bound_ii,
        bound_iii,
        bound_iv,
        corollary_total,
        stages: [
            TimeInterval {
                start: p.w_start,
                end: p.w_end,
            },
            TimeInterval {
                start: p.literal_start,
                end: p.literal_end,
            },
            TimeInterval {
                start: t1,
                end: t2,
            },
            TimeInterval {
                start: t2,
                end: last,
            },
        ],
    }
}

/// Filming time of a plan restricted to each stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageFilming {
    pub per_stage: [f64; 4],
    pub total: f64,
}

pub fn clip_to_stages(
    plan: &FlightPlan,
    film_plan: &FilmPlan,
    bounds: &StageBounds,
) -> Result<StageFilming, ModelError> {
    let mut per_stage = [0.0; 4];
    for (s, stage) in bounds.stages.iter().enumerate() {
        let mut filmed: BTreeMap<usize, Vec<TimeInterval>> = BTreeMap::new();
        for entry in plan.paths.iter().flat_map(|p| &p.entries) {
            let SceneRef::Scene(id) = entry.scene else {
                continue;
            };
            let scene = film_plan.scene(id).ok_or(ModelError::UnknownScene(id))?;
            let clipped = scene
                .window
                .intersect(&entry.interval)
                .and_then(|iv| iv.intersect(stage));
            if let Some(iv) = clipped {
                filmed.entry(id).or_default().push(iv);
            }
        }
        per_stage[s] = filmed.values().map(|ivs| interval_union_length(ivs)).sum();
    }
    Ok(StageFilming {
        per_stage,
        total: per_stage.iter().sum(),
    })
}

/// `corollary_total − T`, which equals `2lε₂ + (l(l−1)/2)·ε₁`.
pub fn corollary_gap(p: &ConstructionParams) -> f64 {
    compute_stage_bounds(p).corollary_total - target_filming_time(p)
}
