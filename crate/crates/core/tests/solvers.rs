use ftlb::model::{check_realizable, filming_time};
use ftlb::solvers::{
    brute_force_tiny, discretize, greedy_multi, single_drone_dp, DiscretizeOptions, SolverResult,
};
use ftlb::{FilmPlan, Point, TimeInterval};
use proptest::prelude::*;

const OPTS: DiscretizeOptions = DiscretizeOptions {
    drop_subgrid_windows: false,
};

/// Up to three scenes within distance 2.5 of the base, integer windows in
/// `[0, 8]` of length at least 1.
fn tiny_plan() -> impl Strategy<Value = FilmPlan> {
    let scene = (-2.0f64..2.0, -1.5f64..1.5, 0u32..7, 1u32..5).prop_map(|(x, y, a, len)| {
        let end = (a + len).min(8);
        (Point::new(x, y), TimeInterval::new(a as f64, end as f64).unwrap())
    });
    prop::collection::vec(scene, 1..=3)
        .prop_map(|scenes| FilmPlan::from_windows(Point::ORIGIN, scenes).unwrap())
}

fn assert_realizable(r: &SolverResult, fp: &FilmPlan, battery: f64) {
    for path in &r.plan.paths {
        let check = check_realizable(path, fp, battery).expect("structurally valid");
        assert!(check.feasible, "{:?}", check.violations);
    }
    let filmed = filming_time(&r.plan, fp).unwrap().total;
    assert!(
        (filmed - r.objective).abs() < 1e-9,
        "continuous {filmed} vs discrete {}",
        r.objective
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dp_matches_oracle_for_one_drone(fp in tiny_plan(), battery in 2u32..=6) {
        let battery = battery as f64;
        let g = discretize(&fp, 1.0, OPTS).unwrap();
        let dp = single_drone_dp(&g, battery).unwrap();
        let exact = brute_force_tiny(&fp, 1, battery, 1.0, OPTS).unwrap();
        prop_assert_eq!(dp.objective, exact.objective);
        assert_realizable(&dp, &fp, battery);
        assert_realizable(&exact, &fp, battery);
    }

    #[test]
    fn greedy_is_bounded_by_oracle_and_monotone(fp in tiny_plan(), battery in 2u32..=6) {
        let battery = battery as f64;
        let g1 = greedy_multi(&fp, 1, battery, 1.0, OPTS).unwrap();
        let g2 = greedy_multi(&fp, 2, battery, 1.0, OPTS).unwrap();
        let exact = brute_force_tiny(&fp, 2, battery, 1.0, OPTS).unwrap();
        prop_assert!(g2.objective <= exact.objective);
        prop_assert!(g2.objective >= g1.objective);
        assert_realizable(&g2, &fp, battery);
        assert_realizable(&exact, &fp, battery);
    }

    #[test]
    fn halving_the_step_loses_at_most_rounding_slack(fp in tiny_plan(), battery in 2u32..=6) {
        let battery = battery as f64;
        let coarse = single_drone_dp(&discretize(&fp, 1.0, OPTS).unwrap(), battery).unwrap();
        let fine = single_drone_dp(&discretize(&fp, 0.5, OPTS).unwrap(), battery).unwrap();
        let slack = 2.0 * fp.len() as f64 * 1.0;
        prop_assert!(fine.objective >= coarse.objective - slack);
        assert_realizable(&fine, &fp, battery);
    }
}

#[test]
fn greedy_fills_gaps_with_second_drone() {
    let fp = FilmPlan::from_windows(
        Point::ORIGIN,
        [(Point::new(1.0, 0.0), TimeInterval::new(0.0, 10.0).unwrap())],
    )
    .unwrap();
    assert_eq!(greedy_multi(&fp, 1, 4.0, 1.0, OPTS).unwrap().objective, 5.0);
    assert_eq!(greedy_multi(&fp, 2, 4.0, 1.0, OPTS).unwrap().objective, 9.0);
    assert_eq!(brute_force_tiny(&fp, 2, 4.0, 1.0, OPTS).unwrap().objective, 9.0);
}

#[test]
fn non_integer_step_plans_stay_realizable() {
    let fp = FilmPlan::from_windows(
        Point::new(0.3, -0.2),
        [
            (Point::new(1.7, 0.4), TimeInterval::new(0.35, 6.1).unwrap()),
            (Point::new(-0.9, 1.3), TimeInterval::new(2.2, 9.9).unwrap()),
        ],
    )
    .unwrap();
    let r = greedy_multi(&fp, 2, 4.9, 0.3, OPTS).unwrap();
    assert!(r.battery_rounded);
    assert!(r.objective > 0.0);
    assert_realizable(&r, &fp, 4.9);
}
