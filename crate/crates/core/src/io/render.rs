use std::f64::consts::TAU;
use std::fmt::Write;

use crate::geometry::{CircularArc, Point};
use crate::model::{FilmPlan, SceneKind};
use crate::reduction::{compute_stage_bounds, ConstructionLayout, ConstructionParams, VertexRole};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Width of the image in pixels.
    pub width: f64,
    /// Adds a panel with every scene window and the four stage bands.
    pub timeline: bool,
    /// Draws text labels next to gadget vertices.
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width: 1200.0,
            timeline: true,
            labels: true,
        }
    }
}

const PANEL_HEIGHT: f64 = 560.0;
const TIMELINE_HEIGHT: f64 = 320.0;
const PAD: f64 = 20.0;
const STAGE_NAMES: [&str; 4] = ["I", "II", "III", "IV"];

/// Axis-aligned world box mapped onto a pixel rectangle, y pointing up.
#[derive(Debug, Clone, Copy)]
struct Panel {
    min: Point,
    max: Point,
    left: f64,
    top: f64,
    scale: f64,
}

impl Panel {
    fn fit(min: Point, max: Point, left: f64, top: f64, width: f64, height: f64) -> Self {
        let w = (max.x - min.x).max(1e-12);
        let h = (max.y - min.y).max(1e-12);
        let scale = ((width - 2.0 * PAD) / w).min((height - 2.0 * PAD) / h);
        Self {
            min,
            max,
            left: left + PAD,
            top: top + PAD,
            scale,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.left + (p.x - self.min.x) * self.scale,
            self.top + (self.max.y - p.y) * self.scale,
        )
    }

    fn contains(&self, p: Point) -> bool {
        (self.min.x..=self.max.x).contains(&p.x) && (self.min.y..=self.max.y).contains(&p.y)
    }
}

fn bbox(points: impl IntoIterator<Item = Point>) -> (Point, Point) {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min = Point::new(min.x.min(p.x), min.y.min(p.y));
        max = Point::new(max.x.max(p.x), max.y.max(p.y));
    }
    (min, max)
}

fn grow(min: Point, max: Point, frac: f64) -> (Point, Point) {
    let dx = (max.x - min.x).max(1e-9) * frac;
    let dy = (max.y - min.y).max(1e-9) * frac;
    (Point::new(min.x - dx, min.y - dy), Point::new(max.x + dx, max.y + dy))
}

fn arc_samples(arc: &CircularArc, n: usize) -> Vec<Point> {
    (0..=n).map(|i| arc.point_at_fraction(i as f64 / n as f64)).collect()
}

fn polyline(out: &mut String, panel: &Panel, points: &[Point], class: &str) {
    let coords: Vec<String> = points
        .iter()
        .map(|&p| {
            let (x, y) = panel.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(out, r#"<polyline class="{class}" points="{}"/>"#, coords.join(" "));
}

fn vertex_id(role: VertexRole) -> String {
    match role {
        VertexRole::Base => "base".into(),
        VertexRole::Clause { clause } => format!("clause-{clause}"),
        VertexRole::Literal { var, index } => format!("literal-{var}-{index}"),
        VertexRole::Y { var, j } => format!("y-{var}-{j}"),
        VertexRole::W { var, j } => format!("w-{var}-{j}"),
        VertexRole::BaseParking { clause } => format!("base-parking-{clause}"),
        VertexRole::Breadcrumb { clause, slot, k } => format!("crumb-{clause}-{slot}-{k}"),
    }
}

fn vertex_class(role: VertexRole) -> &'static str {
    match role {
        VertexRole::Base => "base",
        VertexRole::Clause { .. } => "clause",
        VertexRole::Literal { .. } => "literal",
        VertexRole::Y { .. } => "y",
        VertexRole::W { .. } => "w",
        VertexRole::BaseParking { .. } => "base-parking",
        VertexRole::Breadcrumb { .. } => "crumb",
    }
}

fn label(role: VertexRole) -> Option<String> {
    match role {
        VertexRole::Literal { var, index } => Some(format!(
            "{}x{}",
            if index % 2 == 1 { "¬" } else { "" },
            var + 1
        )),
        VertexRole::Y { var, j } => Some(format!("Y{}.{j}", var + 1)),
        VertexRole::W { var, j } => Some(format!("W{}.{j}", var + 1)),
        VertexRole::Clause { clause } => Some(format!("C{}", clause + 1)),
        _ => None,
    }
}

const STYLE: &str = r#"<style>
.panel { fill: #fcfcfc; stroke: #999; stroke-width: 1 }
.arc { fill: none; stroke: #555; stroke-width: 1 }
.arc-inner { fill: none; stroke: #c33; stroke-width: 2 }
.edge { fill: none; stroke: #7a7; stroke-width: 0.6 }
.collision-zone { fill: #9cf; fill-opacity: 0.45; stroke: none }
.detail-frame { fill: none; stroke: #36c; stroke-dasharray: 4 3 }
circle.base { fill: #000 } circle.clause { fill: #c33 } circle.literal { fill: #06c }
circle.y { fill: #e90 } circle.w { fill: #7a3 } circle.base-parking { fill: #888 }
circle.crumb { fill: #7a7 }
text { font: 10px sans-serif; fill: #333 }
.stage { fill-opacity: 0.18 } .stage-I { fill: #36c } .stage-II { fill: #c33 }
.stage-III { fill: #e90 } .stage-IV { fill: #7a3 }
.window { stroke: #333; stroke-width: 2 }
</style>"#;

/// Draws the construction: an overview with the base, clause arc and
/// breadcrumb edges, a zoomed panel on the gadget arc with the collision
/// zone, and optionally a timeline of scene windows. Every placed vertex is
/// drawn once, in whichever panel shows it.
pub fn render_svg(
    layout: &ConstructionLayout,
    params: &ConstructionParams,
    film_plan: Option<&FilmPlan>,
    options: RenderOptions,
) -> String {
    let width = options.width;
    let half = width / 2.0;
    let timeline = options.timeline && film_plan.is_some();
    let height = PANEL_HEIGHT + if timeline { TIMELINE_HEIGHT } else { 0.0 };
    let arcs = &layout.arcs;
    let (r2, r3) = (params.gadget_circle_radius, arcs.collision_circle.radius);

    let vertices = layout.vertices();
    let gadget_points = layout.gadgets.iter().flat_map(|g| g.all_vertices());
    let zone_arc = CircularArc::new(
        arcs.collision_circle,
        arcs.gadget_inner_arc.start_angle,
        arcs.gadget_inner_arc.end_angle,
    );
    let (dmin, dmax) = bbox(
        gadget_points
            .chain(arc_samples(&arcs.gadget_inner_arc, 16))
            .chain(arc_samples(&zone_arc, 16)),
    );
    let (dmin, dmax) = grow(dmin, dmax, 0.08);
    let detail = Panel::fit(dmin, dmax, half, 0.0, half, PANEL_HEIGHT);

    let (omin, omax) = bbox(
        vertices
            .iter()
            .map(|v| v.point)
            .chain(arc_samples(&arcs.clause_arc, 32)),
    );
    let (omin, omax) = grow(omin, omax, 0.05);
    let overview = Panel::fit(omin, omax, 0.0, 0.0, half, PANEL_HEIGHT);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    out.push_str(STYLE);
    out.push('\n');

    for (panel, name) in [(&overview, "overview"), (&detail, "detail")] {
        let left = panel.left - PAD;
        let _ = writeln!(
            out,
            r#"<rect class="panel" data-panel="{name}" x="{left:.2}" y="0" width="{half:.2}" height="{PANEL_HEIGHT:.2}"/>"#
        );
        let _ = writeln!(
            out,
            r#"<svg x="{left:.2}" y="0" width="{half:.2}" height="{PANEL_HEIGHT:.2}" viewBox="{left:.2} 0 {half:.2} {PANEL_HEIGHT:.2}" overflow="hidden">"#
        );
        if name == "detail" {
            let mut ring = arc_samples(&zone_arc, 96);
            let inner = CircularArc::new(
                arcs.gadget_arc.circle,
                zone_arc.start_angle,
                zone_arc.end_angle,
            );
            ring.extend(arc_samples(&inner, 96).into_iter().rev());
            let d: Vec<String> = ring
                .iter()
                .map(|&p| {
                    let (x, y) = panel.map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polygon class="collision-zone" data-inner-radius="{r2}" data-outer-radius="{r3}" points="{}"/>"#,
                d.join(" ")
            );
            polyline(&mut out, panel, &arc_samples(&arcs.gadget_arc, 256), "arc");
            polyline(&mut out, panel, &arc_samples(&arcs.gadget_inner_arc, 64), "arc-inner");
            let full = CircularArc::new(arcs.collision_circle, 0.0, TAU);
            polyline(&mut out, panel, &arc_samples(&full, 720), "arc");
        } else {
            polyline(&mut out, panel, &arc_samples(&arcs.clause_arc, 128), "arc");
            polyline(&mut out, panel, &arc_samples(&arcs.clause_inner_arc, 32), "arc-inner");
            let (a, b) = (overview.map(dmin), overview.map(dmax));
            let _ = writeln!(
                out,
                r#"<rect class="detail-frame" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
                a.0,
                b.1,
                (b.0 - a.0).max(2.0),
                (a.1 - b.1).max(2.0)
            );
        }
        for e in &layout.edges {
            polyline(&mut out, panel, &[e.start, e.end], "edge");
        }
        for v in &vertices {
            let in_detail = detail.contains(v.point) && !matches!(v.role, VertexRole::Base);
            if in_detail != (name == "detail") {
                continue;
            }
            let (x, y) = panel.map(v.point);
            let r = if matches!(v.role, VertexRole::Breadcrumb { .. }) { 1.2 } else { 3.0 };
            let _ = writeln!(
                out,
                r#"<circle class="{}" data-vertex="{}" cx="{x:.2}" cy="{y:.2}" r="{r}"/>"#,
                vertex_class(v.role),
                vertex_id(v.role)
            );
            if options.labels {
                if let Some(text) = label(v.role) {
                    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{text}</text>"#, x + 4.0, y - 4.0);
                }
            }
        }
        out.push_str("</svg>\n");
    }

    if let (true, Some(fp)) = (timeline, film_plan) {
        render_timeline(&mut out, params, fp, width);
    }
    out.push_str("</svg>\n");
    out
}

fn render_timeline(out: &mut String, params: &ConstructionParams, fp: &FilmPlan, width: f64) {
    let bounds = compute_stage_bounds(params);
    let t_max = bounds.stages[3]
        .end
        .max(fp.scenes.iter().map(|s| s.window.end).fold(0.0, f64::max))
        .max(1e-9);
    let top = PANEL_HEIGHT + PAD;
    let left = PAD + 110.0;
    let span = width - left - PAD;
    let x_of = |t: f64| left + t / t_max * span;
    let kinds = [
        SceneKind::W,
        SceneKind::BaseParking,
        SceneKind::Literal,
        SceneKind::Y,
        SceneKind::LiteralParking,
        SceneKind::Travelling,
        SceneKind::Clause,
        SceneKind::Generic,
    ];
    let row_h = (TIMELINE_HEIGHT - 2.0 * PAD - 20.0) / kinds.len() as f64;
    let rows_top = top + 20.0;

    for (i, stage) in bounds.stages.iter().enumerate() {
        let (a, b) = (x_of(stage.start), x_of(stage.end));
        let _ = writeln!(
            out,
            r#"<rect class="stage stage-{name}" data-stage="{name}" data-start="{}" data-end="{}" x="{a:.2}" y="{top:.2}" width="{:.2}" height="{:.2}"/>"#,
            stage.start,
            stage.end,
            (b - a).max(0.5),
            TIMELINE_HEIGHT - 2.0 * PAD,
            name = STAGE_NAMES[i]
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, a + 2.0, top + 12.0, STAGE_NAMES[i]);
    }
    for (row, kind) in kinds.iter().enumerate() {
        let y = rows_top + (row as f64 + 0.5) * row_h;
        let _ = writeln!(out, r#"<text x="{PAD:.2}" y="{:.2}">{kind}</text>"#, y + 3.0);
        for s in fp.scenes.iter().filter(|s| s.kind == *kind) {
            let (a, b) = (x_of(s.window.start), x_of(s.window.end));
            let _ = writeln!(
                out,
                r#"<line class="window" data-scene="{}" x1="{a:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
                s.id,
                b.max(a + 0.5)
            );
        }
    }
}
