use std::collections::BTreeMap;

use super::{FilmPlan, FlightPlan, ModelError, SceneRef, TimeInterval};

/// Lebesgue measure of a union of intervals.
pub fn interval_union_length(intervals: &[TimeInterval]) -> f64 {
    let mut sorted: Vec<TimeInterval> = intervals.to_vec();
    sorted.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for iv in sorted {
        match current {
            Some((s, e)) if iv.start <= e => current = Some((s, e.max(iv.end))),
            Some((s, e)) => {
                total += e - s;
                current = Some((iv.start, iv.end));
            }
            None => current = Some((iv.start, iv.end)),
        }
    }
    if let Some((s, e)) = current {
        total += e - s;
    }
    total
}

/// Filming time of a plan, with the covered measure of every touched scene.
#[derive(Debug, Clone, PartialEq)]
pub struct FilmingTime {
    pub total: f64,
    pub per_scene: BTreeMap<usize, f64>,
}

/// Σ over scenes of the measure of `∪ (window ∩ J)` over every entry
/// referencing that scene, across all paths of the plan.
pub fn filming_time(plan: &FlightPlan, film_plan: &FilmPlan) -> Result<FilmingTime, ModelError> {
    let mut filmed: BTreeMap<usize, Vec<TimeInterval>> = BTreeMap::new();
    for path in &plan.paths {
        for entry in &path.entries {
            let SceneRef::Scene(id) = entry.scene else {
                continue;
            };
            let scene = film_plan.scene(id).ok_or(ModelError::UnknownScene(id))?;
            let covered = filmed.entry(id).or_default();
            if let Some(iv) = scene.window.intersect(&entry.interval) {
                covered.push(iv);
            }
        }
    }
    let per_scene: BTreeMap<usize, f64> = filmed
        .into_iter()
        .map(|(id, ivs)| (id, interval_union_length(&ivs)))
        .collect();
    let total = per_scene.values().sum();
    Ok(FilmingTime { total, per_scene })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::model::{FlightPath, PathEntry};
    use proptest::prelude::*;

    fn iv(a: f64, b: f64) -> TimeInterval {
        TimeInterval::new(a, b).unwrap()
    }

    #[test]
    fn union_examples() {
        assert_eq!(interval_union_length(&[]), 0.0);
        assert_eq!(interval_union_length(&[iv(2.0, 5.0), iv(4.0, 7.0)]), 5.0);
        let got = interval_union_length(&[iv(0.0, 1.0), iv(2.0, 3.0), iv(2.5, 3.5)]);
        assert!((got - 2.5).abs() < 1e-15);
    }

    fn one_scene_plan(window: TimeInterval) -> FilmPlan {
        FilmPlan::from_windows(Point::ORIGIN, [(Point::new(1.0, 0.0), window)]).unwrap()
    }

    #[test]
    fn filming_time_examples() {
        let fp = one_scene_plan(iv(1.0, 6.0));
        assert_eq!(filming_time(&FlightPlan::default(), &fp).unwrap().total, 0.0);

        let single = FlightPlan::new(vec![FlightPath::new(vec![
            PathEntry::base(0.0, 0.0),
            PathEntry::scene(1, 2.0, 5.0),
            PathEntry::base(6.0, 6.0),
        ])]);
        assert_eq!(filming_time(&single, &fp).unwrap().total, 3.0);

        let fp = one_scene_plan(iv(0.0, 10.0));
        let two = FlightPlan::new(vec![
            FlightPath::new(vec![PathEntry::scene(1, 2.0, 5.0)]),
            FlightPath::new(vec![PathEntry::scene(1, 4.0, 7.0)]),
        ]);
        let ft = filming_time(&two, &fp).unwrap();
        assert_eq!(ft.total, 5.0);
        assert_eq!(ft.per_scene[&1], 5.0);
    }

    #[test]
    fn unknown_scene_is_rejected() {
        let fp = one_scene_plan(iv(0.0, 1.0));
        let plan = FlightPlan::new(vec![FlightPath::new(vec![PathEntry::scene(7, 0.0, 1.0)])]);
        assert_eq!(filming_time(&plan, &fp), Err(ModelError::UnknownScene(7)));
    }

    fn intervals() -> impl Strategy<Value = Vec<TimeInterval>> {
        prop::collection::vec(
            (-50.0f64..50.0, 0.0f64..20.0).prop_map(|(s, l)| iv(s, s + l)),
            0..12,
        )
    }

    proptest! {
        #[test]
        fn union_is_order_independent(mut ivs in intervals()) {
            let a = interval_union_length(&ivs);
            ivs.reverse();
            let b = interval_union_length(&ivs);
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn union_bounded_by_sum_and_max(ivs in intervals()) {
            let u = interval_union_length(&ivs);
            let sum: f64 = ivs.iter().map(TimeInterval::length).sum();
            let max = ivs.iter().map(TimeInterval::length).fold(0.0, f64::max);
            prop_assert!(u <= sum + 1e-9);
            prop_assert!(u + 1e-9 >= max);
        }
    }
}
