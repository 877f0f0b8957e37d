//! Deterministic SVG 1.1 figures: a domain pane with labeled boundary
//! pieces on the left, and the traced image with classified components on
//! the right.

use std::fmt::Write as _;

use crate::classifier::{ComponentReport, Raster, Status};
use crate::geometry::{boundary_pieces, DomainSpec, TracedCurve};

const PANE: f64 = 360.0;
const MARGIN: f64 = 24.0;

pub fn status_color(s: Status) -> &'static str {
    match s {
        Status::Filled => "#8bc34a",
        Status::Excluded => "#e57373",
        Status::Undetermined => "#ffd54f",
    }
}

fn fmt(x: f64) -> String {
    format!("{:.2}", x)
}

/// Affine world-to-pane mapping (y flipped).
struct Frame {
    ox: f64,
    oy: f64,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Frame {
    fn to_pane(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.ox + (x - self.x0) / (self.x1 - self.x0) * PANE,
            self.oy + (self.y1 - y) / (self.y1 - self.y0) * PANE,
        )
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }
}

/// A drawing box for the domain pane, clipped to something bounded.
fn domain_box(d: &DomainSpec) -> (f64, f64, f64, f64) {
    use std::f64::consts::FRAC_PI_2;
    match d {
        DomainSpec::PuncturedSphere => (-2.0, -2.0, 2.0, 2.0),
        DomainSpec::FirstQuadrant => (-0.5, -0.5, 3.0, 3.0),
        DomainSpec::HalfStrip => (-0.3, -0.3, FRAC_PI_2 + 0.3, 3.0),
        DomainSpec::Disk { r } | DomainSpec::DiskComplement { r } => {
            (-1.4 * r, -1.4 * r, 1.4 * r, 1.4 * r)
        }
        DomainSpec::Rectangle { x0, y0, x1, y1 } => {
            let (w, h) = (x1 - x0, y1 - y0);
            (x0 - 0.2 * w, y0 - 0.2 * h, x1 + 0.2 * w, y1 + 0.2 * h)
        }
    }
}

fn domain_pane(out: &mut String, d: &DomainSpec, frame: &Frame) {
    for piece in boundary_pieces(d) {
        let (lo, hi) = piece.param_range();
        if lo == hi {
            // a point piece: mark it if finite and inside the box
            if let Some((x, y)) = piece.at(lo).finite() {
                if frame.contains(x, y) {
                    let (px, py) = frame.to_pane(x, y);
                    let _ = writeln!(
                        out,
                        r##"<circle class="piece" cx="{}" cy="{}" r="3" fill="#333"/>"##,
                        fmt(px),
                        fmt(py)
                    );
                    let _ = writeln!(
                        out,
                        r##"<text x="{}" y="{}" font-size="13">{}</text>"##,
                        fmt(px + 6.0),
                        fmt(py - 6.0),
                        piece.id
                    );
                }
            }
            continue;
        }
        let mut pts = String::new();
        let mut label_at: Option<(f64, f64)> = None;
        let n = 192;
        for k in 0..=n {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            if let Some((x, y)) = piece.at(t).finite() {
                let (cx, cy) = (
                    x.clamp(frame.x0, frame.x1),
                    y.clamp(frame.y0, frame.y1),
                );
                let (px, py) = frame.to_pane(cx, cy);
                let _ = write!(pts, "{},{} ", fmt(px), fmt(py));
                if k == n / 2 {
                    label_at = Some((px, py));
                }
            }
        }
        let _ = writeln!(
            out,
            r##"<polyline class="piece" points="{}" fill="none" stroke="#333" stroke-width="1.5"/>"##,
            pts.trim_end()
        );
        if let Some((px, py)) = label_at {
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" font-size="13">{}</text>"##,
                fmt(px + 6.0),
                fmt(py - 6.0),
                piece.id
            );
        }
    }
}

/// Run-length rectangles of a component's cells, as one filled group.
fn component_region(out: &mut String, raster: &Raster, rep: &ComponentReport, frame: &Frame) {
    let res = raster.vp.resolution;
    let _ = writeln!(
        out,
        r##"<g class="component" id="comp-{}" fill="{}" fill-opacity="0.45">"##,
        rep.id,
        status_color(rep.status)
    );
    for j in 0..res {
        let mut i = 0;
        while i < res {
            if raster.component_of(i, j) != Some(rep.id) {
                i += 1;
                continue;
            }
            let start = i;
            while i < res && raster.component_of(i, j) == Some(rep.id) {
                i += 1;
            }
            let (x0, y0) = raster.vp.cell_center(start, j);
            let (x1, y1) = raster.vp.cell_center(i - 1, j);
            let (cw, ch) = raster.vp.cell_size();
            let (px0, py0) = frame.to_pane(x0 - cw / 2.0, y1 + ch / 2.0);
            let (px1, py1) = frame.to_pane(x1 + cw / 2.0, y0 - ch / 2.0);
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                fmt(px0),
                fmt(py0),
                fmt(px1 - px0),
                fmt(py1 - py0)
            );
        }
    }
    let _ = writeln!(out, "</g>");
}

/// One path element per traced curve; disconnected runs become `M`
/// subpaths of the same element.
fn curve_path(out: &mut String, curve: &TracedCurve, frame: &Frame) {
    let mut d = String::new();
    for run in &curve.runs {
        for (k, &(x, y)) in run.iter().enumerate() {
            let (px, py) = frame.to_pane(x, y);
            let _ = write!(d, "{}{},{} ", if k == 0 { "M" } else { "L" }, fmt(px), fmt(py));
        }
    }
    let _ = writeln!(
        out,
        r##"<path class="curve" id="curve-{}" d="{}" fill="none" stroke="#000" stroke-width="1.2"/>"##,
        curve.piece_id,
        d.trim_end()
    );
}

/// Render the full two-pane figure.
pub fn render_figure(
    d: &DomainSpec,
    curves: &[TracedCurve],
    raster: &Raster,
    reports: &[ComponentReport],
) -> String {
    let width = 2.0 * PANE + 3.0 * MARGIN;
    let height = PANE + 2.0 * MARGIN + 20.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        width, height, width, height
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#fff"/>"##,
        width, height
    );

    let (dx0, dy0, dx1, dy1) = domain_box(d);
    let dom = Frame {
        ox: MARGIN,
        oy: MARGIN,
        x0: dx0,
        y0: dy0,
        x1: dx1,
        y1: dy1,
    };
    let img = Frame {
        ox: 2.0 * MARGIN + PANE,
        oy: MARGIN,
        x0: raster.vp.x0,
        y0: raster.vp.y0,
        x1: raster.vp.x1,
        y1: raster.vp.y1,
    };
    for f in [&dom, &img] {
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#999"/>"##,
            fmt(f.ox),
            fmt(f.oy),
            PANE,
            PANE
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-size="14">domain</text>"##,
        fmt(MARGIN),
        fmt(MARGIN + PANE + 16.0)
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-size="14">image</text>"##,
        fmt(2.0 * MARGIN + PANE),
        fmt(MARGIN + PANE + 16.0)
    );

    domain_pane(&mut out, d, &dom);
    let mut sorted: Vec<_> = reports.iter().collect();
    sorted.sort_by_key(|r| r.id);
    for rep in sorted {
        component_region(&mut out, raster, rep, &img);
    }
    for curve in curves {
        curve_path(&mut out, curve, &img);
    }
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{classify, label_components, rasterize_curves};
    use crate::geometry::{interior_samples, trace_image, Viewport};
    use crate::maps::{eval_map, MapSpec};
    use crate::xplane::PrecisionCtx;

    fn identity_figure() -> (DomainSpec, Vec<TracedCurve>, Raster, Vec<ComponentReport>) {
        let ctx = PrecisionCtx::native();
        let d = DomainSpec::Disk { r: 1.0 };
        let map = MapSpec::RationalExpr(crate::maps::parse_expr("z").unwrap());
        let vp = Viewport::new(-2.0, -2.0, 2.0, 2.0, 96).unwrap();
        let (cw, _) = vp.cell_size();
        let curves: Vec<_> = boundary_pieces(&d)
            .iter()
            .map(|p| trace_image(&map, p, &vp, 0.75 * cw, &ctx).unwrap())
            .collect();
        let mut raster = rasterize_curves(&curves, &vp);
        let comps = label_components(&mut raster);
        let witnesses: Vec<_> = interior_samples(&d, 200)
            .into_iter()
            .map(|z| (z, eval_map(&map, z, &ctx).unwrap()))
            .collect();
        let reports = classify(&raster, &comps, &witnesses, true).unwrap();
        (d, curves, raster, reports)
    }

    #[test]
    fn figure_structure() {
        let (d, curves, raster, reports) = identity_figure();
        let svg = render_figure(&d, &curves, &raster, &reports);
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        let paths = svg.matches(r#"<path class="curve""#).count();
        assert_eq!(paths, curves.len(), "one path per traced curve");
        let groups = svg.matches(r#"<g class="component""#).count();
        assert_eq!(groups, reports.len(), "one filled region per component");
        assert!(svg.contains(status_color(Status::Filled)));
    }

    #[test]
    fn figure_is_deterministic() {
        let (d, curves, raster, reports) = identity_figure();
        let a = render_figure(&d, &curves, &raster, &reports);
        let b = render_figure(&d, &curves, &raster, &reports);
        assert_eq!(a, b);
    }

    #[test]
    fn balanced_tags() {
        let (d, curves, raster, reports) = identity_figure();
        let svg = render_figure(&d, &curves, &raster, &reports);
        assert_eq!(svg.matches("<g ").count(), svg.matches("</g>").count());
        assert_eq!(svg.matches("<svg").count(), svg.matches("</svg>").count());
        // every element line closes itself or is a recognized container
        for line in svg.lines() {
            assert!(
                line.ends_with("/>")
                    || line.ends_with("</text>")
                    || line.starts_with("<svg")
                    || line.starts_with("<g")
                    || line == "</g>"
                    || line == "</svg>",
                "unexpected line: {line}"
            );
        }
    }
}
