//! The 3-SAT → FTLB reduction: formula balancing, geometric layout, scene
//! schedule, witness flight plans, stage bounds and the numeric certificate
//! of every parameter condition the hardness argument relies on.

mod bounds;
mod certificate;
mod formula;
mod layout;
mod params;
mod schedule;
mod witness;

pub use bounds::{clip_to_stages, compute_stage_bounds, corollary_gap, StageBounds, StageFilming};
pub use certificate::{
    check_constraints, check_geometry, zigzag_distance, PredicateResult, ReductionCertificate,
    PREDICATE_IDS,
};
pub use formula::{
    balance_formula, brute_force_sat, BalancedCnf, Clause, CnfFormula, Lit, Literal,
    MAX_BRUTE_FORCE_VARS,
};
pub use layout::{
    build_layout, build_layout_unchecked, BreadcrumbEdge, ConstructionLayout, GadgetPlacement,
    LayoutArcs, Vertex, VertexRole,
};
pub use params::{choose_parameters, clause_separation_lower_bound, ConstructionParams, FreeParams};
pub use schedule::{build_schedule, ParkingScene, Schedule, ScheduleIndex};
pub use witness::build_witness_plan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::model::{FtlbInstance, ModelError, SceneKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("formula has no clauses or no variables")]
    EmptyFormula,
    #[error("variable {var} is outside 1..={num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("variable {var} is not balanced ({positive} positive, {negative} negative occurrences)")]
    NotBalanced {
        var: usize,
        positive: usize,
        negative: usize,
    },
    #[error("{vars} variables exceed the brute-force limit of {limit}")]
    TooManyVariables { vars: usize, limit: usize },
    #[error("the construction needs at least 2 clauses, got {0}")]
    TooFewClauses(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("parameter search gave up; still failing: {}", failing.join(", "))]
    ParameterSearch { failing: Vec<String> },
    #[error("gadgets overlap: vertices of gadgets {a} and {b} are {distance} apart, need at least {required}")]
    GadgetOverlap {
        a: usize,
        b: usize,
        distance: f64,
        required: f64,
    },
    #[error("no rotation found that puts literal and clause vertices in general position")]
    GeneralPosition,
    #[error("{kind} scenes would have negative length {length}")]
    NegativeSceneLength { kind: SceneKind, length: f64 },
    #[error("scene count {count} exceeds the polynomial bound {bound}")]
    TooManyScenes { count: usize, bound: usize },
    #[error("assignment has {got} values, formula has {expected} variables")]
    AssignmentLength { got: usize, expected: usize },
    #[error("assignment does not satisfy clause {clause}")]
    UnsatisfiedClause { clause: usize },
    #[error("layout does not match the formula: {0}")]
    LayoutMismatch(String),
}

/// Everything produced by the reduction for one formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedInstance {
    pub instance: FtlbInstance,
    pub balanced: BalancedCnf,
    pub params: ConstructionParams,
    pub layout: ConstructionLayout,
    pub index: ScheduleIndex,
    pub certificate: ReductionCertificate,
}

/// Drone count `m + l`.
pub fn drone_count(balanced: &BalancedCnf) -> usize {
    balanced.total_occurrences() + balanced.num_clauses()
}

/// Battery endurance `3R₁ + 2(R₂ + r₁ + δ)`.
pub fn battery_endurance(p: &ConstructionParams) -> f64 {
    3.0 * p.clause_radius + 2.0 * (p.gadget_circle_radius + p.gadget_outer_radius + p.delta)
}

/// Filming time of the witness plan:
/// `(3m + 2l)R₁ − (l/2)R₂ − 3l·r₁ − 3l·δ + (l(l−1)/2)·ε₁`.
pub fn target_filming_time(p: &ConstructionParams) -> f64 {
    let m = p.total_occurrences as f64;
    let l = p.num_clauses as f64;
    (3.0 * m + 2.0 * l) * p.clause_radius
        - 0.5 * l * p.gadget_circle_radius
        - 3.0 * l * p.gadget_outer_radius
        - 3.0 * l * p.delta
        + 0.5 * l * (l - 1.0) * p.parking_budget
}

/// Upper bound on the number of scenes: `4m + 2l + (l−1)·2m·t + 3lt`.
pub fn scene_count_bound(p: &ConstructionParams) -> usize {
    let (m, l, t) = (p.total_occurrences, p.num_clauses, p.breadcrumbs);
    4 * m + 2 * l + (l - 1) * 2 * m * t + 3 * l * t
}

/// Assembles the instance from certified parameters.
pub fn assemble(
    balanced: BalancedCnf,
    params: ConstructionParams,
    layout: ConstructionLayout,
    schedule: Schedule,
    certificate: ReductionCertificate,
) -> Result<ReducedInstance, ReductionError> {
    let bound = scene_count_bound(&params);
    if schedule.film_plan.len() > bound {
        return Err(ReductionError::TooManyScenes {
            count: schedule.film_plan.len(),
            bound,
        });
    }
    let instance = FtlbInstance::new(
        schedule.film_plan,
        drone_count(&balanced),
        battery_endurance(&params),
        target_filming_time(&params),
    )?;
    Ok(ReducedInstance {
        instance,
        balanced,
        params,
        layout,
        index: schedule.index,
        certificate,
    })
}

/// Full pipeline: balance, search parameters, lay out, schedule, certify.
pub fn build_instance(formula: &CnfFormula) -> Result<ReducedInstance, ReductionError> {
    let balanced = balance_formula(formula)?;
    build_instance_balanced(balanced)
}

pub fn build_instance_balanced(balanced: BalancedCnf) -> Result<ReducedInstance, ReductionError> {
    let (params, layout, schedule, certificate) = choose_parameters(&balanced)?;
    assemble(balanced, params, layout, schedule, certificate)
}

/// Rebuilds layout and schedule from stored parameters, e.g. after loading
/// an instance document.
pub fn rebuild(
    balanced: &BalancedCnf,
    params: &ConstructionParams,
) -> Result<(ConstructionLayout, Schedule), ReductionError> {
    let layout = build_layout_unchecked(balanced, params)?;
    let schedule = build_schedule(balanced, params, &layout)?;
    Ok((layout, schedule))
}
