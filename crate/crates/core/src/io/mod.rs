//! File formats: DIMACS CNF input, JSON instance and plan documents, SVG
//! rendering of the construction.
//!
//! Reals are written in shortest round-trip decimal form and parsed back
//! exactly, so a saved instance reloads bit for bit.

mod dimacs;
mod document;
mod render;

pub use dimacs::{parse_assignment, parse_dimacs, write_dimacs};
pub use document::{
    ConstructionBlock, EntryRecord, InstanceDocument, PlanDocument, SceneRecord,
    VerificationSummary, INSTANCE_SCHEMA, PLAN_SCHEMA,
};
pub use render::{render_svg, RenderOptions};

use thiserror::Error;

use crate::model::ModelError;
use crate::reduction::ReductionError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("assignment line {line}: {message}")]
    Assignment { line: usize, message: String },
    #[error("invalid JSON document: {0}")]
    Json(String),
    #[error("expected schema `{expected}`, found `{found}`")]
    Schema { expected: &'static str, found: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}
