use std::collections::{HashMap, HashSet};

use super::{
    battery_steps, discretize, trajectory_to_path, Action, DiscretizeOptions, SolverError,
    SolverMethod, SolverResult, TimeExpandedGraph,
};
use crate::model::{FilmPlan, FlightPlan};

/// Cap on enumerated single-drone states and on drone combinations.
pub const MAX_ENUMERATED: usize = 10_000_000;

/// Filmable `(location, grid step)` cells, numbered for bit masks.
struct Cells {
    offset: Vec<Option<usize>>,
    count: usize,
}

impl Cells {
    fn new(graph: &TimeExpandedGraph) -> Self {
        let mut count = 0;
        let offset = graph
            .filmable
            .iter()
            .map(|f| {
                f.map(|(a, b)| {
                    let o = count;
                    count += b - a;
                    o
                })
            })
            .collect();
        Self { offset, count }
    }

    fn bit(&self, graph: &TimeExpandedGraph, loc: usize, tau: usize) -> Option<u128> {
        let (a, _) = graph.filmable[loc]?;
        let offset = self.offset[loc]?;
        graph
            .is_filmable(loc, tau)
            .then(|| 1u128 << (offset + tau - a))
    }
}

struct Enumerator<'a> {
    graph: &'a TimeExpandedGraph,
    cells: Cells,
    targets: Vec<usize>,
    capacity: usize,
    seen: HashSet<(usize, usize, usize, u128)>,
    /// Coverage mask of every complete trajectory, with one trajectory
    /// achieving it (the first found).
    masks: HashMap<u128, Vec<Action>>,
    stack: Vec<Action>,
}

impl Enumerator<'_> {
    fn visit(&mut self, loc: usize, tau: usize, b: usize, mask: u128) -> Result<(), SolverError> {
        if !self.seen.insert((loc, tau, b, mask)) {
            return Ok(());
        }
        if self.seen.len() > MAX_ENUMERATED {
            return Err(SolverError::TooLarge {
                what: "single-drone trajectory enumeration",
                estimate: self.seen.len() as f64,
                limit: MAX_ENUMERATED as f64,
            });
        }
        let h = self.graph.grid.horizon;
        if loc == 0 {
            self.masks.entry(mask).or_insert_with(|| self.stack.clone());
        }
        if tau >= h {
            return Ok(());
        }
        let stay_b = if loc == 0 { 0 } else { b + 1 };
        if stay_b <= self.capacity {
            let bit = self.cells.bit(self.graph, loc, tau).unwrap_or(0);
            self.stack.push(Action::Stay);
            self.visit(loc, tau + 1, stay_b, mask | bit)?;
            self.stack.pop();
        }
        for i in 0..self.targets.len() {
            let to = self.targets[i];
            if to == loc {
                continue;
            }
            let k = self.graph.travel(loc, to);
            let useful = self.graph.filmable[to].is_none_or(|(_, last)| tau + k < last);
            if tau + k > h || b + k > self.capacity || !useful {
                continue;
            }
            let nb = if to == 0 { 0 } else { b + k };
            self.stack.push(Action::Travel(to));
            self.visit(to, tau + k, nb, mask)?;
            self.stack.pop();
        }
        Ok(())
    }
}

/// Best union of `k` masks, searched in popcount order with a simple bound.
fn best_combination(masks: &[u128], k: usize) -> Result<Vec<usize>, SolverError> {
    fn search(
        masks: &[u128],
        k: usize,
        from: usize,
        union: u128,
        picked: &mut Vec<usize>,
        best: &mut (u32, Vec<usize>),
        nodes: &mut usize,
    ) -> Result<(), SolverError> {
        *nodes += 1;
        if *nodes > MAX_ENUMERATED {
            return Err(SolverError::TooLarge {
                what: "drone combination search",
                estimate: *nodes as f64,
                limit: MAX_ENUMERATED as f64,
            });
        }
        let value = union.count_ones();
        if value > best.0 || best.1.is_empty() {
            *best = (value, picked.clone());
        }
        if picked.len() == k {
            return Ok(());
        }
        let remaining = (k - picked.len()) as u32;
        for i in from..masks.len() {
            if value + remaining * masks[i].count_ones() <= best.0 {
                break;
            }
            picked.push(i);
            search(masks, k, i + 1, union | masks[i], picked, best, nodes)?;
            picked.pop();
        }
        Ok(())
    }
    let mut best = (0, Vec::new());
    let mut nodes = 0;
    search(masks, k, 0, 0, &mut Vec::new(), &mut best, &mut nodes)?;
    Ok(best.1)
}

/// Exact optimum of the discretized problem for `k` drones, by enumerating
/// every single-drone coverage pattern and the best union of `k` of them.
pub fn brute_force_tiny(
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
    let cells = Cells::new(&graph);
    if cells.count > 128 {
        return Err(SolverError::TooLarge {
            what: "filmable grid cells",
            estimate: cells.count as f64,
            limit: 128.0,
        });
    }
    let mut e = Enumerator {
        graph: &graph,
        cells,
        targets: graph.targets(),
        capacity,
        seen: HashSet::new(),
        masks: HashMap::new(),
        stack: Vec::new(),
    };
    e.visit(0, 0, 0, 0)?;

    // Keep only masks not contained in another one; order by size, then
    // value, for determinism.
    let mut all: Vec<u128> = e.masks.keys().copied().collect();
    all.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    let mut maximal: Vec<u128> = Vec::new();
    for &m in &all {
        if !maximal.iter().any(|&big| big & m == m) {
            maximal.push(m);
        }
    }
    let picked = best_combination(&maximal, k)?;
    let union = picked.iter().fold(0u128, |u, &i| u | maximal[i]);
    let paths = picked
        .iter()
        .map(|&i| trajectory_to_path(&graph, &e.masks[&maximal[i]]))
        .collect();
    Ok(SolverResult {
        plan: FlightPlan::new(paths),
        objective: union.count_ones() as f64 * step,
        method: SolverMethod::Exact,
        step,
        battery_steps: capacity,
        battery_rounded: rounded,
        dropped_scenes: graph.dropped.clone(),
        node_count: graph.node_count(),
        arc_count: graph.arc_count(),
    })
}
