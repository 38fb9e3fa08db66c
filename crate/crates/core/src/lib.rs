//! Filming time with limited battery (FTLB).
//!
//! A film plan is a set of scenes, each a point in the plane with a time
//! window. A team of `k` unit-speed drones starts at a base, films scenes by
//! hovering at their locations, and must return to the base (where batteries
//! are swapped instantly) before being away longer than the endurance `L`.
//! The filming time of a flight plan is the measure of the union of filmed
//! sub-intervals, per scene.
//!
//! The crate is organised as:
//!
//! - [`model`]: scenes, flight paths, the filming-time measure and the
//!   realizability verifier.
//! - [`geometry`]: planar primitives and the variable-gadget solver.
//! - [`reduction`]: the 3-SAT to FTLB construction, its witness flight plan,
//!   stage bounds and the numeric certificate of every parameter condition.
//! - [`solvers`]: time-expanded dynamic programming for one drone, a
//!   sequential greedy for `k` drones and an exhaustive oracle for tiny inputs.
//! - [`io`]: DIMACS parsing, JSON instance/plan documents and SVG rendering.

pub mod geometry;
pub mod io;
pub mod model;
pub mod reduction;
pub mod solvers;

pub use geometry::Point;
pub use model::{
    FilmPlan, FlightPath, FlightPlan, FtlbInstance, PathEntry, Scene, SceneKind, SceneRef,
    TimeInterval, VerificationReport,
};

/// Absolute slack used by every `≤`/`≥` comparison on times and distances.
///
/// Construction coordinates are irrational, so comparisons are done with
/// `1e-9 · max(1, scale)` where `scale` is the largest time value involved.
pub fn tolerance(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}
