use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::certificate::{check_constraints, check_geometry, zigzag_distance, ReductionCertificate};
use super::layout::{build_layout_unchecked, d2_inner_arc, general_position_rotation, ConstructionLayout};
use super::schedule::{build_schedule, Schedule};
use super::{BalancedCnf, ReductionError};
use crate::geometry::{solve_gadget, GadgetGeometry};

/// Parameters chosen by the search; everything else is derived from these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeParams {
    /// Radius of the clause circle.
    pub clause_radius: f64,
    /// Radius of the circle carrying the gadget centers.
    pub gadget_circle_radius: f64,
    /// Outer radius of the collision zone.
    pub collision_radius: f64,
    /// Literal-to-neighbour distance inside every gadget.
    pub delta: f64,
    /// Parking time per literal vertex per release window.
    pub parking_budget: f64,
    /// Travelling time per clause-literal edge.
    pub travel_budget: f64,
    /// Breadcrumb vertices per clause-literal edge.
    pub breadcrumbs: usize,
    /// Gadget `i` (1-based) is rotated by `i · rotation_step` radians.
    pub rotation_step: f64,
}

/// Every number the construction uses, including derived radii and times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub total_occurrences: usize,

    pub clause_radius: f64,
    pub gadget_circle_radius: f64,
    pub collision_radius: f64,
    pub delta: f64,
    pub parking_budget: f64,
    pub travel_budget: f64,
    pub breadcrumbs: usize,
    pub rotation_step: f64,

    /// Outer (Y/W) radius per gadget.
    pub gadget_outer_radii: Vec<f64>,
    /// Literal radius per gadget.
    pub gadget_inner_radii: Vec<f64>,
    /// Largest outer radius; the one used in every time formula.
    pub gadget_outer_radius: f64,

    /// W-scene and base-scene start.
    pub w_start: f64,
    pub w_end: f64,
    pub literal_start: f64,
    pub literal_end: f64,
    pub y_start: f64,
    pub y_end: f64,
    /// Start of travelling along the edges of clause `i`, one per clause.
    pub release_times: Vec<f64>,
    /// End of the last literal parking scene.
    pub parking_end: f64,
    pub clause_start: f64,
    /// Offset along an edge past which no later clause can be reached.
    pub zigzag_distance: f64,
}

impl ConstructionParams {
    pub fn derive(balanced: &BalancedCnf, free: &FreeParams) -> Result<Self, ReductionError> {
        let l = balanced.num_clauses();
        if l < 2 {
            return Err(ReductionError::TooFewClauses(l));
        }
        let gadgets = balanced
            .m
            .iter()
            .map(|&m| solve_gadget(m, free.delta))
            .collect::<Result<Vec<_>, _>>()?;
        let gadget_outer_radii: Vec<f64> = gadgets.iter().map(|g| g.r1).collect();
        let gadget_inner_radii = gadgets.iter().map(|g| g.r2).collect();
        let r1 = gadget_outer_radii.iter().copied().fold(0.0, f64::max);

        let big_r1 = free.clause_radius;
        let band = free.collision_radius - free.gadget_circle_radius;
        let w_start = free.gadget_circle_radius + r1;
        let w_end = w_start + big_r1;
        let literal_start = w_end + free.delta;
        let literal_end = literal_start + big_r1;
        let y_start = literal_end + free.delta;
        let y_end = y_start + big_r1;
        let release_times: Vec<f64> = (0..l)
            .map(|i| literal_end + 3.0 * i as f64 * band)
            .collect();
        let parking_end = literal_end + 3.0 * (l - 1) as f64 * band;
        let clause_start = parking_end + big_r1 + r1 + free.travel_budget;

        Ok(Self {
            num_vars: balanced.num_vars(),
            num_clauses: l,
            total_occurrences: balanced.total_occurrences(),
            clause_radius: free.clause_radius,
            gadget_circle_radius: free.gadget_circle_radius,
            collision_radius: free.collision_radius,
            delta: free.delta,
            parking_budget: free.parking_budget,
            travel_budget: free.travel_budget,
            breadcrumbs: free.breadcrumbs,
            rotation_step: free.rotation_step,
            gadget_outer_radii,
            gadget_inner_radii,
            gadget_outer_radius: r1,
            w_start,
            w_end,
            literal_start,
            literal_end,
            y_start,
            y_end,
            release_times,
            parking_end,
            clause_start,
            zigzag_distance: 0.0,
        })
    }

    pub fn free(&self) -> FreeParams {
        FreeParams {
            clause_radius: self.clause_radius,
            gadget_circle_radius: self.gadget_circle_radius,
            collision_radius: self.collision_radius,
            delta: self.delta,
            parking_budget: self.parking_budget,
            travel_budget: self.travel_budget,
            breadcrumbs: self.breadcrumbs,
            rotation_step: self.rotation_step,
        }
    }

    /// Width of the collision annulus, `R₃ − R₂`.
    pub fn band(&self) -> f64 {
        self.collision_radius - self.gadget_circle_radius
    }

    pub fn base_scene_length(&self) -> f64 {
        self.clause_radius - (self.gadget_circle_radius + self.gadget_outer_radius + self.delta)
    }

    pub fn clause_scene_length(&self) -> f64 {
        0.5 * self.gadget_circle_radius
            - 2.0 * self.gadget_outer_radius
            - 2.0 * self.delta
            - self.travel_budget
    }

    /// Gap between consecutive parking slots in a release window.
    pub fn parking_slot(&self) -> f64 {
        3.0 * self.band() / self.breadcrumbs as f64
    }

    /// Slack of the witness over the bound: `2lε₂ + (l(l−1)/2)ε₁`.
    pub fn corollary_slack(&self) -> f64 {
        let l = self.num_clauses as f64;
        2.0 * l * self.travel_budget + 0.5 * l * (l - 1.0) * self.parking_budget
    }
}

/// Smallest clause radius for which consecutive clause vertices are at
/// least `3R₂` apart along the clause arc.
pub fn clause_separation_lower_bound(num_clauses: usize, gadget_circle_radius: f64) -> f64 {
    6.0 * (num_clauses - 1) as f64 * gadget_circle_radius / PI
}

const MAX_RADIUS_DOUBLINGS: u32 = 60;
const MAX_DELTA_HALVINGS: u32 = 20;
const MAX_BREADCRUMBS: usize = 1_000_000;
/// Rotation step before any doubling: a golden-angle multiple, kept tiny.
const BASE_ROTATION: f64 = 1e-4 * 2.399_963_229_728_653;
/// `R₃` sits this fraction inside the band-width limit so its margin is positive.
const BAND_SHRINK: f64 = 1.0 - 1e-6;

/// Searches for parameters under which every certificate predicate passes.
///
/// `R₂ = 1` and `R₃` sit just inside the band limit. The clause radius
/// starts at the separation bound and doubles; for each candidate the gadget
/// spacing `δ` starts at a fixed fraction of the center spacing on the inner
/// arc and halves while only the collision-zone predicate fails. Then
/// `ε₂ = δ/2`, `ε₁ = ε₂/(l² + 1)`, and the breadcrumb count starts at the
/// smallest value the parking-rate argument allows, doubling while only the
/// one-scene predicate fails.
pub fn choose_parameters(
    balanced: &BalancedCnf,
) -> Result<(ConstructionParams, ConstructionLayout, Schedule, ReductionCertificate), ReductionError>
{
    let l = balanced.num_clauses();
    if l < 2 {
        return Err(ReductionError::TooFewClauses(l));
    }
    let big_r2 = 1.0;
    let big_r3 = big_r2 + BAND_SHRINK * big_r2 / (6.0 * (l as f64 - 1.0));
    let unit_outer = balanced
        .m
        .iter()
        .map(|&m| GadgetGeometry::unit_outer_radius(m))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let start = clause_separation_lower_bound(l, big_r2);
    let mut failing: Vec<String> = Vec::new();
    for doubling in 0..=MAX_RADIUS_DOUBLINGS {
        let big_r1 = start * 2f64.powi(doubling as i32);
        let Some(arc) = d2_inner_arc(l, big_r1, big_r2, big_r3) else {
            failing = vec!["no_interior_crossing".into()];
            continue;
        };
        let n = balanced.num_vars();
        let spacing = if n == 1 {
            arc.start().dist(arc.end())
        } else {
            arc.circle.radius * 2.0 * (0.5 * arc.span() / (n - 1) as f64).sin()
        };
        let mut delta = spacing / 8f64.max(2.0 * unit_outer + 4.0);
        for _ in 0..=MAX_DELTA_HALVINGS {
            let candidate = FreeParams {
                clause_radius: big_r1,
                gadget_circle_radius: big_r2,
                collision_radius: big_r3,
                delta,
                parking_budget: 0.5 * delta / ((l * l) as f64 + 1.0),
                travel_budget: 0.5 * delta,
                breadcrumbs: 2,
                rotation_step: BASE_ROTATION,
            };
            match try_candidate(balanced, candidate)? {
                Ok(found) => return Ok(found),
                Err(f) => failing = f,
            }
            if failing != ["crossings_in_collision_zone"] {
                break;
            }
            delta /= 2.0;
        }
    }
    Err(ReductionError::ParameterSearch { failing })
}

type Found = (ConstructionParams, ConstructionLayout, Schedule, ReductionCertificate);

/// Completes one `(R₁, δ)` candidate: rotation for general position, the
/// geometric predicates, then the breadcrumb count. The inner `Err` lists
/// the predicates still failing.
fn try_candidate(
    balanced: &BalancedCnf,
    mut free: FreeParams,
) -> Result<Result<Found, Vec<String>>, ReductionError> {
    let probe = ConstructionParams::derive(balanced, &free)?;
    free.rotation_step = match general_position_rotation(balanced, &probe) {
        Ok(step) => step,
        Err(ReductionError::GeneralPosition) => return Ok(Err(vec!["general_position".into()])),
        Err(e) => return Err(e),
    };

    let mut params = ConstructionParams::derive(balanced, &free)?;
    let layout = build_layout_unchecked(balanced, &params)?;
    params.zigzag_distance = zigzag_distance(&params, &layout);
    let geometric = check_geometry(balanced, &params, &layout);
    if !geometric.all_pass() {
        return Ok(Err(geometric.failing()));
    }

    free.breadcrumbs = min_breadcrumbs(&params, &layout);
    loop {
        let mut params = ConstructionParams::derive(balanced, &free)?;
        let layout = build_layout_unchecked(balanced, &params)?;
        params.zigzag_distance = zigzag_distance(&params, &layout);
        let schedule = build_schedule(balanced, &params, &layout)?;
        let cert = check_constraints(balanced, &params, &layout, &schedule.film_plan, &schedule.index);
        if cert.all_pass() {
            return Ok(Ok((params, layout, schedule, cert)));
        }
        let failing = cert.failing();
        let only_one_scene = failing.iter().all(|f| f == "one_scene");
        if !only_one_scene || free.breadcrumbs * 2 > MAX_BREADCRUMBS {
            return Ok(Err(failing));
        }
        free.breadcrumbs *= 2;
    }
}

/// Smallest `t ≥ 2` for which one travelling scene, `ε₂/t`, fits in the
/// slack `(1 − κ)·ε₁` left in a release window by the travel-rate bound
/// `κ·ε₁`, where `κ = 3(R₃ − R₂)ε₂ / (d_min·ε₁)`.
fn min_breadcrumbs(p: &ConstructionParams, layout: &ConstructionLayout) -> usize {
    let l = p.num_clauses as f64;
    let shortest = layout
        .edges
        .iter()
        .map(|e| e.length)
        .fold(p.clause_radius - p.gadget_circle_radius, f64::min);
    let kappa = 3.0 * p.band() * p.travel_budget / (shortest * p.parking_budget);
    if kappa >= 1.0 {
        return 2;
    }
    let t = ((l * l + 1.0) / (1.0 - kappa)).ceil();
    (t as usize).max(2)
}
