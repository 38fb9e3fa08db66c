use super::{
    battery_steps, discretize, trajectory_to_path, Action, Coverage, DiscretizeOptions,
    SolverError, SolverMethod, SolverResult, TimeExpandedGraph,
};
use crate::model::{FilmPlan, FlightPlan};

/// Largest DP table (states) the solver will allocate.
const MAX_STATES: usize = 200_000_000;

const INFEASIBLE: i32 = -1;
const STAY: u32 = 0;

/// Best single-drone trajectory for the residual coverage, with its gain in
/// grid steps.
fn best_trajectory(
    graph: &TimeExpandedGraph,
    capacity: usize,
    coverage: &Coverage,
) -> Result<(u32, Vec<Action>), SolverError> {
    let targets = graph.targets();
    let n = targets.len();
    let h = graph.grid.horizon;
    let width = capacity + 1;
    let states = (h + 1) * n * width;
    if states > MAX_STATES {
        return Err(SolverError::TooLarge {
            what: "dynamic program states",
            estimate: states as f64,
            limit: MAX_STATES as f64,
        });
    }
    let idx = |tau: usize, li: usize, b: usize| (tau * n + li) * width + b;
    let mut value = vec![INFEASIBLE; states];
    let mut choice = vec![STAY; states];
    value[idx(h, 0, 0)] = 0;

    // Last grid time at which arriving at a location can still film.
    let useful_until: Vec<usize> = targets
        .iter()
        .map(|&loc| graph.filmable[loc].map_or(usize::MAX, |(_, last)| last))
        .collect();

    for tau in (0..h).rev() {
        for li in 0..n {
            let loc = targets[li];
            let max_b = if loc == 0 { 0 } else { capacity };
            for b in 0..=max_b {
                let mut best = INFEASIBLE;
                let mut pick = STAY;
                let stay_b = if loc == 0 { 0 } else { b + 1 };
                if stay_b <= capacity {
                    let next = value[idx(tau + 1, li, stay_b)];
                    if next != INFEASIBLE {
                        best = next + coverage.gain(graph, loc, tau) as i32;
                    }
                }
                for lj in 0..n {
                    if lj == li {
                        continue;
                    }
                    let to = targets[lj];
                    let k = graph.travel(loc, to);
                    if tau + k > h || b + k > capacity || tau + k >= useful_until[lj] {
                        continue;
                    }
                    let nb = if to == 0 { 0 } else { b + k };
                    let next = value[idx(tau + k, lj, nb)];
                    if next > best {
                        best = next;
                        pick = lj as u32 + 1;
                    }
                }
                value[idx(tau, li, b)] = best;
                choice[idx(tau, li, b)] = pick;
            }
        }
    }

    let gain = value[idx(0, 0, 0)].max(0) as u32;
    let mut actions = Vec::new();
    let (mut tau, mut li, mut b) = (0, 0, 0);
    while tau < h {
        let c = choice[idx(tau, li, b)];
        if c == STAY {
            actions.push(Action::Stay);
            b = if targets[li] == 0 { 0 } else { b + 1 };
            tau += 1;
        } else {
            let lj = (c - 1) as usize;
            let to = targets[lj];
            tau += graph.travel(targets[li], to);
            b = if to == 0 { 0 } else { b + graph.travel(targets[li], to) };
            actions.push(Action::Travel(to));
            li = lj;
        }
    }
    Ok((gain, actions))
}

fn result(
    graph: &TimeExpandedGraph,
    method: SolverMethod,
    capacity: usize,
    rounded: bool,
    gain: u32,
    plan: FlightPlan,
) -> SolverResult {
    SolverResult {
        plan,
        objective: gain as f64 * graph.grid.step,
        method,
        step: graph.grid.step,
        battery_steps: capacity,
        battery_rounded: rounded,
        dropped_scenes: graph.dropped.clone(),
        node_count: graph.node_count(),
        arc_count: graph.arc_count(),
    }
}

/// Optimal single-drone plan for the discretized problem.
pub fn single_drone_dp(graph: &TimeExpandedGraph, battery: f64) -> Result<SolverResult, SolverError> {
    let (capacity, rounded) = battery_steps(battery, graph.grid.step)?;
    let (gain, actions) = best_trajectory(graph, capacity, &Coverage::new(graph))?;
    let plan = FlightPlan::new(vec![trajectory_to_path(graph, &actions)]);
    Ok(result(graph, SolverMethod::Dp, capacity, rounded, gain, plan))
}

/// Runs the single-drone DP `k` times, each time on the grid steps not yet
/// filmed by earlier drones.
pub fn greedy_multi(
    film_plan: &FilmPlan,
    k: usize,
    battery: f64,
    step: f64,
    options: DiscretizeOptions,
) -> Result<SolverResult, SolverError> {
    if k == 0 {
        return Err(SolverError::NoDrones);
    }
    let graph = discretize(film_plan, step, options)?;
    let (capacity, rounded) = battery_steps(battery, step)?;
    let mut coverage = Coverage::new(&graph);
    let mut total = 0;
    let mut paths = Vec::with_capacity(k);
    for _ in 0..k {
        let (gain, actions) = best_trajectory(&graph, capacity, &coverage)?;
        coverage.mark(&graph, &actions);
        total += gain;
        paths.push(trajectory_to_path(&graph, &actions));
    }
    Ok(result(
        &graph,
        SolverMethod::Greedy,
        capacity,
        rounded,
        total,
        FlightPlan::new(paths),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::model::{check_realizable, filming_time, TimeInterval};

    fn single(x: f64, a: f64, b: f64) -> FilmPlan {
        FilmPlan::from_windows(
            Point::ORIGIN,
            [(Point::new(x, 0.0), TimeInterval::new(a, b).unwrap())],
        )
        .unwrap()
    }

    fn dp(fp: &FilmPlan, battery: f64, step: f64) -> SolverResult {
        let g = discretize(fp, step, DiscretizeOptions::default()).unwrap();
        single_drone_dp(&g, battery).unwrap()
    }

    #[test]
    fn no_scenes_gives_zero() {
        let fp = FilmPlan::new(Point::ORIGIN, vec![]).unwrap();
        let r = dp(&fp, 4.0, 1.0);
        assert_eq!(r.objective, 0.0);
        assert_eq!(r.plan.paths.len(), 1);
    }

    #[test]
    fn three_sorties_film_five_seconds() {
        let fp = single(1.0, 0.0, 10.0);
        let r = dp(&fp, 4.0, 1.0);
        assert_eq!(r.objective, 5.0);
        let path = &r.plan.paths[0];
        let check = check_realizable(path, &fp, 4.0).unwrap();
        assert!(check.feasible, "{:?}", check.violations);
        assert_eq!(filming_time(&r.plan, &fp).unwrap().total, 5.0);
    }

    #[test]
    fn short_window_films_one_second() {
        assert_eq!(dp(&single(1.0, 0.0, 2.0), 4.0, 1.0).objective, 1.0);
    }

    #[test]
    fn unreachable_scene_gives_zero() {
        assert_eq!(dp(&single(3.0, 0.0, 10.0), 4.0, 1.0).objective, 0.0);
    }

    #[test]
    fn battery_is_rounded_down() {
        let r = dp(&single(1.0, 0.0, 10.0), 4.5, 1.0);
        assert_eq!(r.battery_steps, 4);
        assert!(r.battery_rounded);
        assert_eq!(r.objective, 5.0);
    }

    #[test]
    fn second_drone_fills_the_gaps() {
        let fp = single(1.0, 0.0, 10.0);
        let r = greedy_multi(&fp, 2, 4.0, 1.0, DiscretizeOptions::default()).unwrap();
        assert_eq!(r.objective, 9.0);
        assert_eq!(filming_time(&r.plan, &fp).unwrap().total, 9.0);
    }

    #[test]
    fn greedy_with_one_drone_is_the_dp() {
        let fp = single(1.0, 0.0, 10.0);
        let g = greedy_multi(&fp, 1, 4.0, 1.0, DiscretizeOptions::default()).unwrap();
        let d = dp(&fp, 4.0, 1.0);
        assert_eq!(g.objective, d.objective);
        assert_eq!(g.plan, d.plan);
    }

    #[test]
    fn zero_drones_rejected() {
        let fp = single(1.0, 0.0, 10.0);
        assert_eq!(
            greedy_multi(&fp, 0, 4.0, 1.0, DiscretizeOptions::default()),
            Err(SolverError::NoDrones)
        );
    }
}
