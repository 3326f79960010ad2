//! SVG rendering of a point set with an island and its certificate.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::balanced::Certificate;
use crate::ceder::SixPartition;
use crate::geom::{Rational, RationalPoint};
use crate::oracle::Island;
use crate::points::{Color, ColoredPointSet};

const RED: &str = "#d62728";
const BLUE: &str = "#1f77b4";
const HULL: &str = "#2ca02c";
const CERT: &str = "#555555";

fn f(v: &num_bigint::BigInt) -> f64 {
    v.to_f64().unwrap_or(0.0)
}

fn fr(v: &Rational) -> f64 {
    f(v.numer()) / f(v.denom())
}

fn fp(p: &RationalPoint) -> (f64, f64) {
    (fr(&p.x), fr(&p.y))
}

#[derive(Clone, Copy)]
struct Frame {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Frame {
    fn fit(pts: &[(f64, f64)]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in pts {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if pts.is_empty() {
            (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1.0);
        let m = span * 0.05;
        Frame {
            x0: x0 - m,
            y0: y0 - m,
            x1: x1 + m,
            y1: y1 + m,
        }
    }

    fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Parameter range of `p + t d` inside the frame, intersected with `[lo, hi]`.
    fn clip(&self, p: (f64, f64), d: (f64, f64), mut lo: f64, mut hi: f64) -> Option<(f64, f64)> {
        for (pv, dv, a, b) in [(p.0, d.0, self.x0, self.x1), (p.1, d.1, self.y0, self.y1)] {
            if dv.abs() < 1e-300 {
                if pv < a || pv > b {
                    return None;
                }
                continue;
            }
            let (t0, t1) = ((a - pv) / dv, (b - pv) / dv);
            let (t0, t1) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
            lo = lo.max(t0);
            hi = hi.min(t1);
        }
        (lo < hi).then_some((lo, hi))
    }
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), width: f64) {
    let _ = writeln!(
        out,
        r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{CERT}" stroke-width="{width:.3}" />"#,
        a.0, -a.1, b.0, -b.1,
    );
}

/// Scale-dependent drawing sizes and the point positions of one document.
struct Canvas {
    frame: Frame,
    pts: Vec<(f64, f64)>,
    radius: f64,
    stroke: f64,
}

/// Lays out the frame around the points and `extra` positions, lets `draw`
/// add certificate geometry underneath, then draws the island hull and the
/// points on top.
fn compose(
    set: &ColoredPointSet,
    island: &Island,
    extra: &[(f64, f64)],
    draw: impl FnOnce(&Canvas, &mut String),
) -> String {
    let pts: Vec<(f64, f64)> = set.positions().iter().map(|p| (f(&p.x), f(&p.y))).collect();
    let all: Vec<(f64, f64)> = pts.iter().chain(extra).copied().collect();
    let frame = Frame::fit(&all);
    let span = frame.width().max(frame.height());
    let canvas = Canvas {
        frame,
        pts,
        radius: span * 0.008,
        stroke: span * 0.003,
    };
    let (pts, radius, stroke) = (&canvas.pts, canvas.radius, canvas.stroke);
    let mut out = svg_header(&frame);
    draw(&canvas, &mut out);
    let hull = island.hull(set);
    if hull.len() >= 2 {
        let pts_attr: Vec<String> = hull
            .indices
            .iter()
            .map(|&i| format!("{:.3},{:.3}", pts[i].0, -pts[i].1))
            .collect();
        let _ = writeln!(
            out,
            r#"  <polygon points="{}" fill="{HULL}" fill-opacity="0.15" stroke="{HULL}" stroke-width="{stroke:.3}" />"#,
            pts_attr.join(" ")
        );
    }
    for (id, p) in set.points().iter().enumerate() {
        let fill = if p.color == Color::Red { RED } else { BLUE };
        let ring = if island.contains(id) {
            format!(r#" stroke="black" stroke-width="{stroke:.3}""#)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            r#"  <circle cx="{:.3}" cy="{:.3}" r="{radius:.3}" fill="{fill}"{ring}><title>{id}</title></circle>"#,
            pts[id].0, -pts[id].1
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Full line through `p` along `d`, clipped to the frame.
fn full_line(out: &mut String, c: &Canvas, p: (f64, f64), d: (f64, f64)) {
    if let Some((t0, t1)) = c.frame.clip(p, d, f64::MIN, f64::MAX) {
        line(
            out,
            (p.0 + t0 * d.0, p.1 + t0 * d.1),
            (p.0 + t1 * d.0, p.1 + t1 * d.1),
            c.stroke,
        );
    }
}

/// SVG 1.1 document: points as filled circles, the island hull outlined and
/// the certificate drawn (wedge apex and rays, strip boundary lines, or the
/// fan center of a path certificate). Geometry is fitted with a 5% margin.
pub fn render_svg(
    set: &ColoredPointSet,
    island: &Island,
    certificate: Option<&Certificate>,
) -> String {
    let anchor: Vec<(f64, f64)> = match certificate {
        Some(Certificate::Wedge(w)) if w.bounds.is_some() => vec![fp(&w.apex)],
        Some(Certificate::Path { center, .. }) => vec![fp(center)],
        _ => Vec::new(),
    };
    compose(set, island, &anchor, |c, out| match certificate {
        Some(Certificate::Wedge(w)) => {
            if let Some((u, v)) = w.bounds {
                let apex = fp(&w.apex);
                for id in [u, v] {
                    let d = (c.pts[id].0 - apex.0, c.pts[id].1 - apex.1);
                    if let Some((_, t1)) = c.frame.clip(apex, d, 0.0, f64::MAX) {
                        line(out, apex, (apex.0 + t1 * d.0, apex.1 + t1 * d.1), c.stroke);
                    }
                }
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="{CERT}" />"#,
                    apex.0,
                    -apex.1,
                    c.radius * 0.8
                );
            }
        }
        Some(Certificate::Strip(s)) => {
            if let Some((u, v)) = s.bounds {
                let d = (-f(&s.direction[1]), f(&s.direction[0]));
                for id in [u, v] {
                    full_line(out, c, c.pts[id], d);
                }
            }
        }
        Some(Certificate::Path { center, .. }) => {
            let p = fp(center);
            let _ = writeln!(
                out,
                r#"  <circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{CERT}" stroke-width="{:.3}" />"#,
                p.0,
                -p.1,
                c.radius * 1.5,
                c.stroke
            );
        }
        Some(Certificate::Oracle) | None => {}
    })
}

/// Points with the three lines of a six-partition through its center.
pub fn render_six_partition(set: &ColoredPointSet, sp: &SixPartition) -> String {
    let center = fp(&sp.center);
    compose(set, &Island::empty(), &[center], |c, out| {
        for d in &sp.directions {
            full_line(out, c, center, (f(&d[0]), f(&d[1])));
        }
    })
}

fn svg_header(frame: &Frame) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.3} {:.3} {:.3} {:.3}" width="640" height="{:.0}">"#,
        frame.x0,
        -frame.y1,
        frame.width(),
        frame.height(),
        640.0 * frame.height() / frame.width()
    );
    let _ = writeln!(
        out,
        r#"  <rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="white" />"#,
        frame.x0,
        -frame.y1,
        frame.width(),
        frame.height()
    );
    out
}
