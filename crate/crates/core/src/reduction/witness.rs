use super::{BalancedCnf, ConstructionLayout, ConstructionParams, ReductionError, ScheduleIndex};
use crate::model::{FilmPlan, FlightPath, FlightPlan, PathEntry};

/// The flight plan that films exactly the target time from a satisfying
/// assignment (`assignment[i]` is the value of variable `i + 1`).
///
/// Selector drone `(i, j)` films `w_ij`, then `x̄_ij` and `y_ij` when `x_i`
/// is true, or `x_i(j+1)` and `y_i(j+1)` when false. Clause drone `j` films
/// base parking scene `j`, the literal scene of the first true literal `z`
/// of `C_j`, every parking scene at `z` before its release, the travelling
/// scenes from `z` to `q_j`, and the clause scene.
pub fn build_witness_plan(
    balanced: &BalancedCnf,
    params: &ConstructionParams,
    layout: &ConstructionLayout,
    index: &ScheduleIndex,
    film_plan: &FilmPlan,
    assignment: &[bool],
) -> Result<FlightPlan, ReductionError> {
    let n = balanced.num_vars();
    if assignment.len() != n {
        return Err(ReductionError::AssignmentLength {
            got: assignment.len(),
            expected: n,
        });
    }
    if let Some(c) = balanced.formula.first_unsatisfied(assignment) {
        return Err(ReductionError::UnsatisfiedClause { clause: c + 1 });
    }
    let window = |id: usize| {
        film_plan
            .scene(id)
            .map(|s| s.window)
            .ok_or_else(|| ReductionError::LayoutMismatch(format!("missing scene {id}")))
    };
    let visit = |id: usize| -> Result<PathEntry, ReductionError> {
        let w = window(id)?;
        Ok(PathEntry::scene(id, w.start, w.end))
    };

    let mut paths = Vec::with_capacity(balanced.total_occurrences() + balanced.num_clauses());
    for (var, g) in layout.gadgets.iter().enumerate() {
        let m = g.geometry.m;
        for j in 0..m {
            let (literal, y) = if assignment[var] {
                (2 * j + 1, j)
            } else {
                (2 * ((j + 1) % m), (j + 1) % m)
            };
            let out = (params.w_start - g.w(j).norm()).max(0.0);
            let back = params.y_end + g.y(y).norm();
            paths.push(FlightPath::new(vec![
                PathEntry::base(0.0, out),
                visit(index.w[var][j])?,
                visit(index.literal[var][literal])?,
                visit(index.y[var][y])?,
                PathEntry::base(back, back),
            ]));
        }
    }

    for (clause, lits) in balanced.occurrences.iter().enumerate() {
        let slot = lits
            .iter()
            .position(|l| l.lit().is_satisfied_by(assignment))
            .ok_or(ReductionError::UnsatisfiedClause { clause: clause + 1 })?;
        let lit = lits[slot];
        let (var, k) = (lit.var - 1, lit.vertex_index());
        let z = layout.gadgets[var].literal(k);
        let base_scene = visit(index.base[clause])?;
        let beta = layout.base_parking[clause].norm();

        let mut entries = vec![
            PathEntry::base(0.0, (params.w_start - beta).max(0.0)),
            base_scene,
        ];
        let home = base_scene.interval.end + beta;
        entries.push(PathEntry::base(home, (params.literal_start - z.norm()).max(home)));
        entries.push(visit(index.literal[var][k])?);
        for w in 0..clause {
            for id in index.parking_at(var, k, w) {
                entries.push(visit(id)?);
            }
        }
        for &id in &index.travelling[3 * clause + slot] {
            entries.push(visit(id)?);
        }
        let last = visit(index.clause[clause])?;
        entries.push(last);
        let back = last.interval.end + layout.clause_vertices[clause].norm();
        entries.push(PathEntry::base(back, back));
        paths.push(FlightPath::new(entries));
    }
    Ok(FlightPlan::new(paths))
}
