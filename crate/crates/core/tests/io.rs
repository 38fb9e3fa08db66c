mod common;

use std::collections::HashSet;

use ftlb::io::{
    parse_assignment, parse_dimacs, render_svg, write_dimacs, InstanceDocument, IoError,
    PlanDocument, RenderOptions,
};
use ftlb::model::verify;
use ftlb::reduction::{brute_force_sat, build_witness_plan, ReducedInstance};

use common::{formula, reduce};

fn small() -> ReducedInstance {
    reduce(1, &[[1, 1, -1], [-1, -1, 1]])
}

#[test]
fn dimacs_with_comments_and_percent_trailer() {
    let text = "c example\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n%\n0\n";
    let f = parse_dimacs(text).unwrap();
    assert_eq!(f, formula(3, &[[1, -2, 3], [-1, 2, -3]]));
    assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
}

#[test]
fn dimacs_errors_name_the_line() {
    let err = parse_dimacs("p cnf 4 1\n1 2 3 4 0\n").unwrap_err();
    match err {
        IoError::Dimacs { line, message } => {
            assert_eq!(line, 2);
            assert!(message.contains("clause 1 has 4 literals"), "{message}");
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse_dimacs("p cnf 2 1\n1 2 3 0\n"),
        Err(IoError::Dimacs { line: 2, .. })
    ));
    assert!(parse_dimacs("p cnf 3 2\n1 2 3 0\n").is_err());
}

#[test]
fn assignment_lines_round_trip() {
    let a = parse_assignment("s SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
    assert_eq!(a, vec![true, false, true]);
    assert!(parse_assignment("v 1 0\n", 2).is_err());
}

#[test]
fn instance_document_reloads_bit_for_bit() {
    let r = small();
    let doc = InstanceDocument::from_reduced(&r);
    let text = doc.to_json();
    let back = InstanceDocument::from_json(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_json(), text);

    let instance = back.instance().unwrap();
    assert_eq!(instance, r.instance);
    for (a, b) in instance.film_plan.scenes.iter().zip(&r.instance.film_plan.scenes) {
        assert_eq!(a.window.start.to_bits(), b.window.start.to_bits());
        assert_eq!(a.location.x.to_bits(), b.location.x.to_bits());
    }
    let rebuilt = back.reduced().unwrap().unwrap();
    assert_eq!(rebuilt.layout, r.layout);
    assert_eq!(rebuilt.index, r.index);
}

#[test]
fn tampered_scene_fails_the_rebuild_check() {
    let mut doc = InstanceDocument::from_reduced(&small());
    doc.scenes[3].end += 1.0;
    assert!(matches!(doc.reduced(), Err(IoError::Reduction(_))));
}

#[test]
fn wrong_schema_is_rejected() {
    let text = InstanceDocument::from_reduced(&small())
        .to_json()
        .replacen("ftlb-instance/1", "ftlb-instance/9", 1);
    assert!(matches!(
        InstanceDocument::from_json(&text),
        Err(IoError::Schema { .. })
    ));
}

#[test]
fn plan_document_round_trip_preserves_the_verdict() {
    let r = small();
    let a = brute_force_sat(&r.balanced.formula).unwrap().unwrap();
    let plan = build_witness_plan(
        &r.balanced,
        &r.params,
        &r.layout,
        &r.index,
        &r.instance.film_plan,
        &a,
    )
    .unwrap();
    let report = verify(&r.instance, &plan).unwrap();
    let doc = PlanDocument::new(&plan, "witness").with_verification(&report);
    let back = PlanDocument::from_json(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.plan(), plan);
    assert_eq!(verify(&r.instance, &back.plan()).unwrap(), report);
}

#[test]
fn svg_draws_every_vertex_once_with_zone_radii_and_stages() {
    let r = small();
    let svg = render_svg(
        &r.layout,
        &r.params,
        Some(&r.instance.film_plan),
        RenderOptions::default(),
    );
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));

    let ids: Vec<&str> = svg
        .split("data-vertex=\"")
        .skip(1)
        .map(|rest| &rest[..rest.find('"').unwrap()])
        .collect();
    assert_eq!(ids.len(), r.layout.vertices().len());
    assert_eq!(ids.iter().collect::<HashSet<_>>().len(), ids.len());

    assert_eq!(svg.matches("class=\"collision-zone\"").count(), 1);
    assert!(svg.contains(&format!("data-inner-radius=\"{}\"", r.params.gadget_circle_radius)));
    assert!(svg.contains(&format!("data-outer-radius=\"{}\"", r.params.collision_radius)));
    for stage in ["I", "II", "III", "IV"] {
        assert_eq!(svg.matches(&format!("data-stage=\"{stage}\"")).count(), 1);
    }
    assert_eq!(svg.matches("data-scene=").count(), r.instance.film_plan.len());
}

#[test]
fn svg_without_timeline_has_no_stage_bands() {
    let r = small();
    let options = RenderOptions {
        timeline: false,
        ..RenderOptions::default()
    };
    let svg = render_svg(&r.layout, &r.params, Some(&r.instance.film_plan), options);
    assert!(!svg.contains("data-stage"));
    assert!(svg.contains("data-vertex=\"base\""));
}
