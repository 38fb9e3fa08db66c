//! Planar geometry used by the hardness construction.
//!
//! Everything is plain `f64` with explicit tolerances; the construction
//! places points at irrational coordinates so there is nothing to gain from
//! an exact kernel.

mod gadget;
mod primitives;

pub use gadget::{solve_gadget, GadgetGeometry};
pub use primitives::{
    line_circle_intersection, regular_polygon_points, segment_annulus_clip, segments_cross,
    segments_intersection, Circle, CircularArc, Point, Segment,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a regular polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("circle radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("degenerate segment: both endpoints are {0:?}")]
    DegenerateSegment(Point),
    #[error("annulus circles must be concentric")]
    NotConcentric,
    #[error("annulus inner radius {inner} must be smaller than outer radius {outer}")]
    AnnulusOrder { inner: f64, outer: f64 },
    #[error("a variable gadget needs m_i >= 3 occurrences, got {0}")]
    GadgetTooSmall(usize),
    #[error("gadget spacing delta must be positive and finite, got {0}")]
    BadDelta(f64),
}
