//! Orthographic SVG: the sphere seen from `-y` (west) and `+y` (east).
//! The outline of each view is the seam great circle.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;

use nalgebra::Matrix2;

use crate::curve::CurveSpec;
use crate::geom::{Arc, Vec3};

const VIEW_RADIUS: f64 = 180.0;
const MARGIN: f64 = 30.0;

struct View {
    label: &'static str,
    toward_viewer: Vec3,
    right: Vec3,
    up: Vec3,
    cx: f64,
    cy: f64,
}

impl View {
    fn screen(&self, p: &Vec3) -> (f64, f64) {
        (
            self.cx + VIEW_RADIUS * p.dot(&self.right),
            self.cy - VIEW_RADIUS * p.dot(&self.up),
        )
    }

    /// Linear part of the screen map applied to a direction.
    fn linear(&self, v: &Vec3) -> (f64, f64) {
        (VIEW_RADIUS * v.dot(&self.right), -VIEW_RADIUS * v.dot(&self.up))
    }
}

fn views() -> [View; 2] {
    let up = Vec3::z();
    let d = VIEW_RADIUS + MARGIN;
    [
        View {
            label: "west (-y)",
            toward_viewer: -Vec3::y(),
            right: up.cross(&-Vec3::y()),
            up,
            cx: d,
            cy: d + 20.0,
        },
        View {
            label: "east (+y)",
            toward_viewer: Vec3::y(),
            right: up.cross(&Vec3::y()),
            up,
            cx: 3.0 * d,
            cy: d + 20.0,
        },
    ]
}

/// Path data for one arc: elliptical `A` segments, or a polyline when the
/// arc's plane is seen edge-on.
fn arc_path(view: &View, arc: &Arc) -> String {
    let mut d = String::new();
    let (x0, y0) = view.screen(arc.start().vec());
    write!(d, "M {x0:.3} {y0:.3}").unwrap();

    let r = arc.rho.sin();
    let (ux, uy) = view.linear(arc.e1.vec());
    let (vx, vy) = view.linear(arc.e2.vec());
    let b = Matrix2::new(ux * r, vx * r, uy * r, vy * r);
    let det = b.determinant();
    let scale = b.norm_squared();

    let pieces = ((arc.sweep.abs() / FRAC_PI_2).ceil() as usize).max(1);
    if det.abs() <= 1e-6 * scale.max(1e-300) {
        let steps = 16 * pieces;
        for s in 1..=steps {
            let (x, y) = view.screen(arc.point_at_fraction(s as f64 / steps as f64).vec());
            write!(d, " L {x:.3} {y:.3}").unwrap();
        }
        return d;
    }

    let svd = b.svd(true, false);
    let u = svd.u.expect("requested U");
    let (rx, ry) = (svd.singular_values[0], svd.singular_values[1]);
    let rotation = u[(1, 0)].atan2(u[(0, 0)]).to_degrees();
    let sweep_flag = u8::from((det > 0.0) == (arc.sweep > 0.0));
    for s in 1..=pieces {
        let (x, y) = view.screen(arc.point_at_fraction(s as f64 / pieces as f64).vec());
        write!(
            d,
            " A {rx:.3} {ry:.3} {rotation:.3} 0 {sweep_flag} {x:.3} {y:.3}"
        )
        .unwrap();
    }
    d
}

pub fn to_svg(spec: &CurveSpec) -> String {
    let width = 4.0 * (VIEW_RADIUS + MARGIN);
    let height = 2.0 * (VIEW_RADIUS + MARGIN) + 40.0;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    if let Some(id) = spec.meta {
        writeln!(out, "  <title>{id}</title>").unwrap();
    }
    writeln!(out, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    for view in views() {
        writeln!(out, "  <g>").unwrap();
        writeln!(
            out,
            r##"    <text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"##,
            view.cx,
            view.cy - VIEW_RADIUS - 10.0,
            view.label
        )
        .unwrap();
        writeln!(
            out,
            r##"    <circle cx="{:.3}" cy="{:.3}" r="{VIEW_RADIUS:.3}" fill="none" stroke="#888888" stroke-width="1"/>"##,
            view.cx, view.cy
        )
        .unwrap();
        for arc in &spec.arcs {
            let facing = arc.midpoint().vec().dot(&view.toward_viewer) >= -1e-12;
            let style = if facing {
                r##"stroke="#c0392b" stroke-width="2""##
            } else {
                r##"stroke="#bbbbbb" stroke-width="1" stroke-dasharray="4 3""##
            };
            writeln!(
                out,
                r#"    <path d="{}" fill="none" {style}/>"#,
                arc_path(&view, arc)
            )
            .unwrap();
        }
        writeln!(out, "  </g>").unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::generate_closed;
    use crate::geom::UnitVec;

    #[test]
    fn deterministic_and_complete() {
        let spec = generate_closed(4, 1).unwrap();
        let a = to_svg(&spec);
        assert_eq!(a, to_svg(&spec));
        assert!(a.starts_with("<?xml"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<path").count(), 2 * spec.arcs.len());
        assert_eq!(a.matches("<circle").count(), 2);
    }

    #[test]
    fn tilted_arc_uses_ellipse() {
        let axis = UnitVec::from_xyz(0.0, 1.0, 1.0).unwrap();
        let e1 = UnitVec::X;
        let arc = Arc::new(axis, 0.5, e1, 0.0, 3.0);
        let spec = CurveSpec::new(vec![arc], false);
        let svg = to_svg(&spec);
        assert!(svg.contains(" A "));
        let edge_on = generate_closed(1, 0).unwrap();
        assert!(!to_svg(&edge_on).contains(" A "));
    }
}
