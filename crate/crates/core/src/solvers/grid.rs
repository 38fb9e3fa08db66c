use crate::geometry::Point;
use crate::model::FilmPlan;

use super::SolverError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub step: f64,
    /// Grid times are `0, step, …, horizon·step`.
    pub horizon: usize,
}

impl TimeGrid {
    pub fn time(&self, tau: usize) -> f64 {
        tau as f64 * self.step
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DiscretizeOptions {
    /// Drop scenes whose window is shorter than one step instead of
    /// rejecting the grid.
    pub drop_subgrid_windows: bool,
}

/// Locations are the base (index 0) and every scene (index = scene id).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeExpandedGraph {
    pub grid: TimeGrid,
    pub locations: Vec<Point>,
    /// Filmable grid steps `[first, last)` per location after inward
    /// rounding; `None` for the base and for scenes with no whole step.
    pub filmable: Vec<Option<(usize, usize)>>,
    /// Scenes left out because their window is shorter than one step.
    pub dropped: Vec<usize>,
}

impl TimeExpandedGraph {
    /// `⌈dist(a, b)/step⌉`, at least one step between distinct locations so
    /// the graph stays acyclic in time.
    pub fn travel(&self, a: usize, b: usize) -> usize {
        if a == b {
            return 0;
        }
        let steps = (self.locations[a].dist(self.locations[b]) / self.grid.step).ceil() as usize;
        steps.max(1)
    }

    /// Nodes over the base and the filmable scenes only.
    pub fn node_count(&self) -> usize {
        self.targets().len() * (self.grid.horizon + 1)
    }

    /// Wait arcs plus travel arcs between targets that stay within the horizon.
    pub fn arc_count(&self) -> usize {
        let targets = self.targets();
        let h = self.grid.horizon;
        let mut arcs = targets.len() * h;
        for &a in &targets {
            for &b in &targets {
                if a != b {
                    arcs += (h + 1).saturating_sub(self.travel(a, b));
                }
            }
        }
        arcs
    }

    pub fn is_filmable(&self, loc: usize, tau: usize) -> bool {
        matches!(self.filmable[loc], Some((a, b)) if a <= tau && tau < b)
    }

    /// Locations worth flying to: the base and every scene with a filmable step.
    pub fn targets(&self) -> Vec<usize> {
        (0..self.locations.len())
            .filter(|&i| i == 0 || self.filmable[i].is_some())
            .collect()
    }
}

pub fn discretize(
    film_plan: &FilmPlan,
    step: f64,
    options: DiscretizeOptions,
) -> Result<TimeExpandedGraph, SolverError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(SolverError::BadStep(step));
    }
    let mut locations = vec![film_plan.base];
    let mut filmable = vec![None];
    let mut dropped = Vec::new();
    let mut latest: f64 = 0.0;
    for s in &film_plan.scenes {
        locations.push(s.location);
        let len = s.window.length();
        if len < step {
            if !options.drop_subgrid_windows {
                return Err(SolverError::SubgridWindow {
                    scene: s.id,
                    length: len,
                    step,
                });
            }
            dropped.push(s.id);
            filmable.push(None);
            continue;
        }
        let first = (s.window.start / step).ceil().max(0.0) as usize;
        let last = (s.window.end / step).floor().max(0.0) as usize;
        filmable.push((first < last).then_some((first, last)));
        latest = latest.max(s.window.end + s.location.dist(film_plan.base));
    }
    let horizon = (latest / step).ceil() as usize + 1;
    Ok(TimeExpandedGraph {
        grid: TimeGrid { step, horizon },
        locations,
        filmable,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TimeInterval;

    fn one(x: f64, a: f64, b: f64) -> FilmPlan {
        FilmPlan::from_windows(
            Point::ORIGIN,
            [(Point::new(x, 0.0), TimeInterval::new(a, b).unwrap())],
        )
        .unwrap()
    }

    #[test]
    fn three_grid_times_in_window() {
        let g = discretize(&one(0.5, 0.0, 2.0), 1.0, DiscretizeOptions::default()).unwrap();
        assert_eq!(g.filmable[1], Some((0, 2)));
    }

    #[test]
    fn windows_round_inward() {
        let g = discretize(&one(0.5, 0.4, 2.6), 1.0, DiscretizeOptions::default()).unwrap();
        assert_eq!(g.filmable[1], Some((1, 2)));
    }

    #[test]
    fn travel_rounds_up() {
        let g = discretize(&one(2.3, 0.0, 5.0), 1.0, DiscretizeOptions::default()).unwrap();
        assert_eq!(g.travel(0, 1), 3);
        assert_eq!(g.travel(1, 0), 3);
    }

    #[test]
    fn short_windows_are_rejected_or_dropped() {
        let fp = one(1.0, 0.0, 0.5);
        assert!(matches!(
            discretize(&fp, 1.0, DiscretizeOptions::default()),
            Err(SolverError::SubgridWindow { scene: 1, .. })
        ));
        let g = discretize(
            &fp,
            1.0,
            DiscretizeOptions {
                drop_subgrid_windows: true,
            },
        )
        .unwrap();
        assert_eq!(g.dropped, vec![1]);
        assert_eq!(g.targets(), vec![0]);
    }

    #[test]
    fn bad_step_is_rejected() {
        assert!(discretize(&one(1.0, 0.0, 2.0), 0.0, DiscretizeOptions::default()).is_err());
    }
}
