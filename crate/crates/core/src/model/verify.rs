use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    filming_time, FilmPlan, FlightPath, FlightPlan, FtlbInstance, ModelError, PathViolation,
    SceneRef,
};
use crate::tolerance;

/// A feasibility failure of a structurally valid path.
#[derive(Debug, Clone, PartialEq)]
pub enum Infeasibility {
    /// Not enough time to fly between entries `from` and `to = from + 1`.
    Travel {
        from: usize,
        to: usize,
        available: f64,
        required: f64,
    },
    /// Sortie `sortie` (0-based, between two battery swaps) is away too long.
    Battery { sortie: usize, away: f64, limit: f64 },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::Travel {
                from,
                to,
                available,
                required,
            } => write!(
                f,
                "travel infeasible between entries ({from}, {to}): {available} s available, {required} s needed"
            ),
            Infeasibility::Battery {
                sortie,
                away,
                limit,
            } => write!(
                f,
                "battery exceeded on sortie {sortie}: away {away} s, endurance {limit} s"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Realizability {
    pub feasible: bool,
    pub violations: Vec<Infeasibility>,
    /// Away time of every sortie, in path order.
    pub sortie_away_times: Vec<f64>,
}

/// Checks one path with the default tolerance for its time scale.
pub fn check_realizable(
    path: &FlightPath,
    film_plan: &FilmPlan,
    battery: f64,
) -> Result<Realizability, PathViolation> {
    let scale = film_plan
        .time_scale()
        .max(path.max_time())
        .max(battery.abs());
    check_realizable_with_tolerance(path, film_plan, battery, tolerance(scale))
}

fn structure(path: &FlightPath, film_plan: &FilmPlan, tol: f64) -> Result<(), PathViolation> {
    let entries = &path.entries;
    let (first, last) = match (entries.first(), entries.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(PathViolation::Empty),
    };
    if !first.scene.is_base() {
        return Err(PathViolation::StartNotBase);
    }
    if !last.scene.is_base() {
        return Err(PathViolation::EndNotBase);
    }
    for (j, e) in entries.iter().enumerate() {
        let iv = e.interval;
        if !iv.is_valid() {
            return Err(PathViolation::BadInterval {
                entry: j,
                start: iv.start,
                end: iv.end,
            });
        }
        if let SceneRef::Scene(id) = e.scene {
            let scene = film_plan
                .scene(id)
                .ok_or(PathViolation::UnknownScene { entry: j, scene: id })?;
            if !scene.window.contains(&iv, tol) {
                return Err(PathViolation::OutsideWindow {
                    entry: j,
                    scene: id,
                    start: iv.start,
                    end: iv.end,
                });
            }
        }
        if j > 0 && entries[j - 1].interval.end > iv.start + tol {
            return Err(PathViolation::NotChronological(j - 1, j));
        }
    }
    Ok(())
}

/// Checks travel feasibility between consecutive entries (unit speed) and
/// that no sortie exceeds the endurance.
///
/// The battery is swapped whenever the drone is at the base location, which
/// includes filming a scene located exactly at the base. Nearby scenes do
/// not count, however small the distance.
pub fn check_realizable_with_tolerance(
    path: &FlightPath,
    film_plan: &FilmPlan,
    battery: f64,
    tol: f64,
) -> Result<Realizability, PathViolation> {
    structure(path, film_plan, tol)?;
    let entries = &path.entries;
    let locations: Vec<_> = entries
        .iter()
        .map(|e| film_plan.location(e.scene).expect("checked by structure"))
        .collect();

    let mut violations = Vec::new();
    for j in 0..entries.len().saturating_sub(1) {
        let available = entries[j + 1].interval.start - entries[j].interval.end;
        let required = locations[j].dist(locations[j + 1]);
        if available < required - tol {
            violations.push(Infeasibility::Travel {
                from: j,
                to: j + 1,
                available,
                required,
            });
        }
    }

    let at_base: Vec<bool> = entries
        .iter()
        .zip(&locations)
        .map(|(e, p)| e.scene.is_base() || *p == film_plan.base)
        .collect();
    let mut sortie_away_times = Vec::new();
    let mut last_base = 0;
    for j in 1..entries.len() {
        if !at_base[j] {
            continue;
        }
        if j > last_base + 1 {
            let away = entries[j].interval.start - entries[last_base].interval.end;
            if away > battery + tol {
                violations.push(Infeasibility::Battery {
                    sortie: sortie_away_times.len(),
                    away,
                    limit: battery,
                });
            }
            sortie_away_times.push(away);
        }
        last_base = j;
    }

    Ok(Realizability {
        feasible: violations.is_empty(),
        violations,
        sortie_away_times,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub realizable_per_path: Vec<bool>,
    /// Human-readable reasons, one list per path (empty when realizable).
    pub diagnostics: Vec<Vec<String>>,
    pub total_filming_time: f64,
    pub per_scene_coverage: BTreeMap<usize, f64>,
    pub per_sortie_away_times: Vec<Vec<f64>>,
    pub target: f64,
    pub battery: f64,
    pub tolerance: f64,
    pub meets_target: bool,
}

impl VerificationReport {
    pub fn all_realizable(&self) -> bool {
        self.realizable_per_path.iter().all(|&b| b)
    }

    pub fn max_away_time(&self) -> f64 {
        self.per_sortie_away_times
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }
}

/// Verifies a flight plan against an instance.
pub fn verify(instance: &FtlbInstance, plan: &FlightPlan) -> Result<VerificationReport, ModelError> {
    if plan.paths.len() > instance.k {
        return Err(ModelError::TooManyPaths {
            paths: plan.paths.len(),
            k: instance.k,
        });
    }
    let film = filming_time(plan, &instance.film_plan)?;
    let tol = tolerance(instance.time_scale().max(plan.max_time()));

    let mut realizable_per_path = Vec::with_capacity(plan.paths.len());
    let mut diagnostics = Vec::with_capacity(plan.paths.len());
    let mut per_sortie_away_times = Vec::with_capacity(plan.paths.len());
    for path in &plan.paths {
        match check_realizable_with_tolerance(path, &instance.film_plan, instance.battery, tol) {
            Ok(r) => {
                realizable_per_path.push(r.feasible);
                diagnostics.push(r.violations.iter().map(ToString::to_string).collect());
                per_sortie_away_times.push(r.sortie_away_times);
            }
            Err(v) => {
                realizable_per_path.push(false);
                diagnostics.push(vec![v.to_string()]);
                per_sortie_away_times.push(Vec::new());
            }
        }
    }
    let all_ok = realizable_per_path.iter().all(|&b| b);
    Ok(VerificationReport {
        realizable_per_path,
        diagnostics,
        total_filming_time: film.total,
        per_scene_coverage: film.per_scene,
        per_sortie_away_times,
        target: instance.target,
        battery: instance.battery,
        tolerance: tol,
        meets_target: all_ok && film.total >= instance.target - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::model::{PathEntry, TimeInterval};

    fn plan_345() -> FilmPlan {
        FilmPlan::from_windows(
            Point::ORIGIN,
            [(Point::new(3.0, 4.0), TimeInterval::new(5.0, 8.0).unwrap())],
        )
        .unwrap()
    }

    fn path_345() -> FlightPath {
        FlightPath::new(vec![
            PathEntry::base(0.0, 0.0),
            PathEntry::scene(1, 5.0, 8.0),
            PathEntry::base(13.0, 13.0),
        ])
    }

    #[test]
    fn trivial_base_path_is_realizable() {
        let p = FlightPath::new(vec![PathEntry::base(0.0, 0.0), PathEntry::base(0.0, 0.0)]);
        let r = check_realizable(&p, &plan_345(), 1.0).unwrap();
        assert!(r.feasible);
        assert!(r.sortie_away_times.is_empty());
    }

    #[test]
    fn three_four_five_battery_boundary() {
        let r = check_realizable(&path_345(), &plan_345(), 13.0).unwrap();
        assert!(r.feasible);
        assert_eq!(r.sortie_away_times, vec![13.0]);
        let r = check_realizable(&path_345(), &plan_345(), 12.0).unwrap();
        assert!(!r.feasible);
        assert!(matches!(r.violations[0], Infeasibility::Battery { .. }));
    }

    #[test]
    fn travel_gap_too_short() {
        let fp = FilmPlan::from_windows(
            Point::ORIGIN,
            [
                (Point::new(1.0, 0.0), TimeInterval::new(0.0, 10.0).unwrap()),
                (Point::new(3.0, 0.0), TimeInterval::new(0.0, 10.0).unwrap()),
            ],
        )
        .unwrap();
        let p = FlightPath::new(vec![
            PathEntry::base(0.0, 0.0),
            PathEntry::scene(1, 1.0, 2.0),
            PathEntry::scene(2, 3.0, 4.0),
            PathEntry::base(7.0, 7.0),
        ]);
        let r = check_realizable(&p, &fp, 100.0).unwrap();
        assert!(!r.feasible);
        let msg = r.violations[0].to_string();
        assert!(msg.starts_with("travel infeasible between entries (1, 2)"), "{msg}");
    }

    #[test]
    fn structural_violations_are_named() {
        let fp = plan_345();
        let no_base = FlightPath::new(vec![PathEntry::scene(1, 5.0, 6.0), PathEntry::base(9.0, 9.0)]);
        assert_eq!(
            check_realizable(&no_base, &fp, 20.0).unwrap_err(),
            PathViolation::StartNotBase
        );
        let outside = FlightPath::new(vec![
            PathEntry::base(0.0, 0.0),
            PathEntry::scene(1, 4.0, 6.0),
            PathEntry::base(20.0, 20.0),
        ]);
        assert!(matches!(
            check_realizable(&outside, &fp, 50.0).unwrap_err(),
            PathViolation::OutsideWindow { entry: 1, .. }
        ));
        let backwards = FlightPath::new(vec![
            PathEntry::base(0.0, 6.0),
            PathEntry::scene(1, 5.0, 6.0),
            PathEntry::base(20.0, 20.0),
        ]);
        assert_eq!(
            check_realizable(&backwards, &fp, 50.0).unwrap_err(),
            PathViolation::NotChronological(0, 1)
        );
        assert_eq!(
            check_realizable(&FlightPath::default(), &fp, 1.0).unwrap_err(),
            PathViolation::Empty
        );
    }

    #[test]
    fn scene_at_base_recharges() {
        let fp = FilmPlan::from_windows(
            Point::ORIGIN,
            [
                (Point::new(1.0, 0.0), TimeInterval::new(0.0, 100.0).unwrap()),
                (Point::ORIGIN, TimeInterval::new(0.0, 100.0).unwrap()),
            ],
        )
        .unwrap();
        // two 4-second sorties separated by filming the base-located scene
        let p = FlightPath::new(vec![
            PathEntry::base(0.0, 0.0),
            PathEntry::scene(1, 1.0, 3.0),
            PathEntry::scene(2, 4.0, 10.0),
            PathEntry::scene(1, 11.0, 13.0),
            PathEntry::base(14.0, 14.0),
        ]);
        let r = check_realizable(&p, &fp, 4.0).unwrap();
        assert!(r.feasible, "{:?}", r.violations);
        assert_eq!(r.sortie_away_times, vec![4.0, 4.0]);
    }

    #[test]
    fn verify_counts_and_flags() {
        let inst = FtlbInstance::new(plan_345(), 1, 13.0, 3.0).unwrap();
        let plan = FlightPlan::new(vec![path_345()]);
        let rep = verify(&inst, &plan).unwrap();
        assert!(rep.meets_target);
        assert_eq!(rep.total_filming_time, 3.0);

        let empty = FtlbInstance::new(plan_345(), 1, 13.0, 0.0).unwrap();
        assert!(verify(&empty, &FlightPlan::default()).unwrap().meets_target);

        let short = FtlbInstance::new(plan_345(), 1, 12.0, 0.0).unwrap();
        let rep = verify(&short, &plan).unwrap();
        assert!(!rep.meets_target);
        assert_eq!(rep.total_filming_time, 3.0);

        let two = FlightPlan::new(vec![path_345(), path_345()]);
        assert_eq!(
            verify(&inst, &two).unwrap_err(),
            ModelError::TooManyPaths { paths: 2, k: 1 }
        );
    }
}
