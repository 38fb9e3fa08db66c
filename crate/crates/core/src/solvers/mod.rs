//! Discretized solvers on a time-expanded graph.
//!
//! Time is cut into steps of fixed length. A drone either stays where it is
//! for one step (filming if the location is a scene whose window covers the
//! whole step) or flies to another location in `⌈dist/step⌉` steps. Battery
//! is counted in steps away from the base and resets on every base visit.
//! Window endpoints are rounded inward and travel is rounded up, so every
//! plan emitted here is realizable in continuous time.

mod dp;
mod exact;
mod grid;

pub use dp::{greedy_multi, single_drone_dp};
pub use exact::{brute_force_tiny, MAX_ENUMERATED};
pub use grid::{discretize, DiscretizeOptions, TimeExpandedGraph, TimeGrid};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FlightPath, FlightPlan, PathEntry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("grid step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("scene {scene} has a window of {length} s, shorter than the grid step {step} s")]
    SubgridWindow { scene: usize, length: f64, step: f64 },
    #[error("need at least one drone")]
    NoDrones,
    #[error("battery endurance {battery} s is shorter than one grid step {step} s")]
    BatteryTooShort { battery: f64, step: f64 },
    #[error("{what}: estimated size {estimate:.3e} exceeds the limit {limit:.3e}")]
    TooLarge {
        what: &'static str,
        estimate: f64,
        limit: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Dp,
    Greedy,
    Exact,
}

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverMethod::Dp => "dp",
            SolverMethod::Greedy => "greedy",
            SolverMethod::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub plan: FlightPlan,
    /// Filmed grid steps times the step length.
    pub objective: f64,
    pub method: SolverMethod,
    pub step: f64,
    pub battery_steps: usize,
    /// True when the endurance was not a multiple of the step and got
    /// rounded down.
    pub battery_rounded: bool,
    pub dropped_scenes: Vec<usize>,
    pub node_count: usize,
    pub arc_count: usize,
}

/// One move of a discrete trajectory starting at the base at time 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Stay,
    Travel(usize),
}

/// Battery capacity in whole steps.
fn battery_steps(battery: f64, step: f64) -> Result<(usize, bool), SolverError> {
    let ratio = battery / step;
    let steps = (ratio + 1e-9).floor();
    if steps < 1.0 {
        return Err(SolverError::BatteryTooShort { battery, step });
    }
    Ok((steps as usize, (ratio - steps).abs() > 1e-9))
}

/// Per-location filmed flags for each grid step, used as residual coverage.
#[derive(Debug, Clone)]
struct Coverage {
    filmed: Vec<Vec<bool>>,
}

impl Coverage {
    fn new(graph: &TimeExpandedGraph) -> Self {
        let h = graph.grid.horizon;
        Self {
            filmed: vec![vec![false; h + 1]; graph.locations.len()],
        }
    }

    fn gain(&self, graph: &TimeExpandedGraph, loc: usize, tau: usize) -> u32 {
        u32::from(graph.is_filmable(loc, tau) && !self.filmed[loc][tau])
    }

    fn mark(&mut self, graph: &TimeExpandedGraph, actions: &[Action]) {
        let (mut loc, mut tau) = (0, 0);
        for &a in actions {
            match a {
                Action::Stay => {
                    if graph.is_filmable(loc, tau) {
                        self.filmed[loc][tau] = true;
                    }
                    tau += 1;
                }
                Action::Travel(to) => {
                    tau += graph.travel(loc, to);
                    loc = to;
                }
            }
        }
    }
}

/// Turns a trajectory into a flight path. Scene visits are clamped to the
/// inward-rounded window; visits that film nothing are dropped, which never
/// lengthens travel by the triangle inequality.
fn trajectory_to_path(graph: &TimeExpandedGraph, actions: &[Action]) -> FlightPath {
    let mut visits: Vec<(usize, usize, usize)> = vec![(0, 0, 0)];
    for &a in actions {
        let last = visits.last_mut().expect("non-empty");
        match a {
            Action::Stay => last.2 += 1,
            Action::Travel(to) => {
                let arrive = last.2 + graph.travel(last.0, to);
                visits.push((to, arrive, arrive));
            }
        }
    }
    debug_assert_eq!(visits.last().map(|v| v.0), Some(0));
    let step = graph.grid.step;
    let entries = visits
        .into_iter()
        .filter_map(|(loc, arrive, leave)| {
            if loc == 0 {
                return Some(PathEntry::base(arrive as f64 * step, leave as f64 * step));
            }
            let (first, last) = graph.filmable[loc]?;
            let (lo, hi) = (arrive.max(first), leave.min(last));
            (lo < hi).then(|| PathEntry::scene(loc, lo as f64 * step, hi as f64 * step))
        })
        .collect();
    FlightPath::new(entries)
}
