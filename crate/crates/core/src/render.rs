//! Deterministic SVG 1.1 output: curve plots with stroke-weight ladders,
//! logarithmic curvature graphs, and ornaments of primitives placed along a
//! curve.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{LcgReport, StressMarker};
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::pseudospiral::{CurveSample, SampledCurve};

const CURVE_COLORS: [&str; 6] = ["#000000", "#1f4e9c", "#b22222", "#2e7d32", "#6a1b9a", "#e65100"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

impl Default for Canvas {
    fn default() -> Self {
        Canvas {
            width: 800.0,
            height: 600.0,
            margin: 40.0,
        }
    }
}

impl Canvas {
    fn validate(&self) -> Result<()> {
        let ok = self.width > 0.0
            && self.height > 0.0
            && self.margin >= 0.0
            && 2.0 * self.margin < self.width.min(self.height);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("canvas needs positive size larger than twice the margin".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub curves: Vec<SampledCurve>,
    /// One row of the plot per width, in canvas units.
    pub stroke_widths: Vec<f64>,
    pub canvas: Canvas,
    pub axes: bool,
    /// Stress arrows; entry `i` belongs to `curves[i]`.
    pub annotations: Vec<StressMarker>,
}

/// World bounding box `(min, max)`.
pub type BBox = (Point2, Point2);

fn bbox_of<'a>(points: impl Iterator<Item = &'a CurveSample>) -> Option<BBox> {
    let mut it = points.peekable();
    it.peek()?;
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for c in it {
        lo = [lo[0].min(c.x), lo[1].min(c.y)];
        hi = [hi[0].max(c.x), hi[1].max(c.y)];
    }
    Some((lo, hi))
}

/// Uniform scale plus translation; the y axis points down on the canvas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldToCanvas {
    pub scale: f64,
    pub origin: Point2,
    pub offset: Point2,
}

impl WorldToCanvas {
    /// Fits `bbox` centred into the box `[left, left + w] x [top, top + h]`.
    pub fn fit(bbox: BBox, left: f64, top: f64, w: f64, h: f64) -> Self {
        let (lo, hi) = bbox;
        let (bw, bh) = (hi[0] - lo[0], hi[1] - lo[1]);
        let scale = match (bw > 0.0, bh > 0.0) {
            (true, true) => (w / bw).min(h / bh),
            (true, false) => w / bw,
            (false, true) => h / bh,
            (false, false) => 1.0,
        };
        let cx = left + 0.5 * (w - bw * scale);
        let cy = top + 0.5 * (h - bh * scale);
        WorldToCanvas {
            scale,
            origin: [lo[0], hi[1]],
            offset: [cx, cy],
        }
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        [
            self.offset[0] + (p[0] - self.origin[0]) * self.scale,
            self.offset[1] + (self.origin[1] - p[1]) * self.scale,
        ]
    }

    /// Canvas direction of a world heading.
    pub fn direction(&self, theta: f64) -> Point2 {
        [theta.cos(), -theta.sin()]
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

fn header(out: &mut String, canvas: &Canvas) {
    let (w, h) = (num(canvas.width), num(canvas.height));
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>");
}

fn path_data(points: impl Iterator<Item = Point2>) -> String {
    let mut d = String::new();
    for (i, p) in points.enumerate() {
        if i > 0 {
            d.push(' ');
        }
        let _ = write!(d, "{}{} {}", if i == 0 { 'M' } else { 'L' }, num(p[0]), num(p[1]));
    }
    d
}

/// Linear interpolation of a sampled curve at arc length `s` (clamped).
pub fn interpolate(curve: &SampledCurve, s: f64) -> Option<CurveSample> {
    let c = &curve.samples;
    let first = c.first()?;
    if c.len() == 1 || s <= first.s {
        return Some(*first);
    }
    let last = c[c.len() - 1];
    if s >= last.s {
        return Some(last);
    }
    let i = c.partition_point(|p| p.s <= s) - 1;
    let (a, b) = (c[i], c[i + 1]);
    let t = (s - a.s) / (b.s - a.s);
    let lerp = |u: f64, v: f64| u + t * (v - u);
    Some(CurveSample {
        s,
        x: lerp(a.x, b.x),
        y: lerp(a.y, b.y),
        theta: lerp(a.theta, b.theta),
        kappa: lerp(a.kappa, b.kappa),
    })
}

fn arrow(out: &mut String, map: &WorldToCanvas, at: CurveSample, color: &str, length: f64) {
    let tip = map.apply([at.x, at.y]);
    // Arrows arrive from the convex side, along the normal.
    let d = map.direction(at.theta + std::f64::consts::FRAC_PI_2);
    let side = if at.kappa >= 0.0 { -1.0 } else { 1.0 };
    let tail = [tip[0] + side * d[0] * length, tip[1] + side * d[1] * length];
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>",
        num(tail[0]),
        num(tail[1]),
        num(tip[0]),
        num(tip[1])
    );
}

/// Curves drawn once per stroke width, each width in its own row.
pub fn plot_svg(spec: &PlotSpec) -> Result<String> {
    if spec.curves.is_empty() || spec.curves.iter().any(|c| c.is_empty()) {
        return Err(Error::EmptyInput("plot needs at least one nonempty curve".into()));
    }
    if spec.stroke_widths.is_empty() || spec.stroke_widths.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::InvalidParameter("stroke widths must be positive".into()));
    }
    spec.canvas.validate()?;

    let bbox = bbox_of(spec.curves.iter().flat_map(|c| c.samples.iter())).expect("nonempty");
    let rows = spec.stroke_widths.len();
    let row_h = spec.canvas.height / rows as f64;
    let m = spec.canvas.margin.min(0.25 * row_h);
    let inner_w = spec.canvas.width - 2.0 * m;
    let inner_h = row_h - 2.0 * m;

    let mut out = String::new();
    header(&mut out, &spec.canvas);
    if !spec.annotations.is_empty() {
        out.push_str(
            "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><path d=\"M0 0 L10 5 L0 10 z\" fill=\"#b22222\"/></marker></defs>\n",
        );
    }
    for (row, &width) in spec.stroke_widths.iter().enumerate() {
        let top = row as f64 * row_h + m;
        let map = WorldToCanvas::fit(bbox, m, top, inner_w, inner_h);
        let _ = writeln!(out, "<g id=\"row-{row}\">");
        if spec.axes {
            let o = map.apply([0.0, 0.0]);
            let (x0, x1) = (m, spec.canvas.width - m);
            let (y0, y1) = (top, top + inner_h);
            if o[1] >= y0 && o[1] <= y1 {
                let _ = writeln!(
                    out,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#9e9e9e\" stroke-width=\"0.5\"/>",
                    num(x0),
                    num(o[1]),
                    num(x1),
                    num(o[1])
                );
            }
            if o[0] >= x0 && o[0] <= x1 {
                let _ = writeln!(
                    out,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#9e9e9e\" stroke-width=\"0.5\"/>",
                    num(o[0]),
                    num(y0),
                    num(o[0]),
                    num(y1)
                );
            }
        }
        for (i, curve) in spec.curves.iter().enumerate() {
            let d = path_data(curve.samples.iter().map(|c| map.apply([c.x, c.y])));
            let _ = writeln!(
                out,
                "<path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>",
                CURVE_COLORS[i % CURVE_COLORS.len()],
                num(width)
            );
        }
        for (curve, marker) in spec.curves.iter().zip(&spec.annotations) {
            let start = curve.samples[0].s;
            if let Some(p) = interpolate(curve, start + marker.s_at_max_kappa) {
                arrow(&mut out, &map, p, "#b22222", 30.0);
            }
            if let Some(p) = interpolate(curve, start + marker.s_at_max_kappa_slope) {
                arrow(&mut out, &map, p, "#e65100", 20.0);
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// The LCG points with the fitted line.
pub fn lcg_svg(report: &LcgReport, canvas: &Canvas) -> Result<String> {
    if report.points.is_empty() {
        return Err(Error::EmptyInput("LCG has no points".into()));
    }
    canvas.validate()?;
    let pts: Vec<CurveSample> = report
        .points
        .iter()
        .map(|&(u, v)| CurveSample { s: 0.0, x: u, y: v, theta: 0.0, kappa: 0.0 })
        .collect();
    let bbox = bbox_of(pts.iter()).expect("nonempty");
    let m = canvas.margin;
    let map = WorldToCanvas::fit(bbox, m, m, canvas.width - 2.0 * m, canvas.height - 2.0 * m);
    let (u0, u1) = (bbox.0[0], bbox.1[0]);
    let line = [
        [u0, report.slope * u0 + report.intercept],
        [u1, report.slope * u1 + report.intercept],
    ];

    let mut out = String::new();
    header(&mut out, canvas);
    let _ = writeln!(
        out,
        "<path d=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2.0000\"/>",
        path_data(pts.iter().map(|c| map.apply([c.x, c.y])))
    );
    let _ = writeln!(
        out,
        "<path d=\"{}\" fill=\"none\" stroke=\"#b22222\" stroke-width=\"1.0000\" stroke-dasharray=\"6 4\"/>",
        path_data(line.iter().map(|p| map.apply(*p)))
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\">slope {} intercept {} rms {}</text>",
        num(m),
        num(m * 0.6),
        escape(&format!("{:.6}", report.slope)),
        escape(&format!("{:.6}", report.intercept)),
        escape(&format!("{:.3e}", report.rms_residual))
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    Circle,
    Square,
    Triangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeRule {
    Constant,
    ProportionalToRadiusOfCurvature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrnamentSpec {
    pub path: SampledCurve,
    pub primitive: Primitive,
    pub count: usize,
    pub size_rule: SizeRule,
    pub size_base: f64,
    /// Relative sizes repeated along the path.
    pub rhythm: Vec<f64>,
    /// Fill colors cycled per station, passed through verbatim.
    pub palette: Vec<String>,
    pub canvas: Canvas,
}

/// One placed primitive, in world units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub s: f64,
    pub center: Point2,
    pub angle: f64,
    pub size: f64,
    pub color: String,
}

/// Stations at uniform arc length from the start to the end of the path.
pub fn ornament_stations(spec: &OrnamentSpec) -> Result<Vec<Station>> {
    if spec.path.len() < 2 {
        return Err(Error::EmptyInput("ornament path needs at least 2 samples".into()));
    }
    if spec.count == 0 {
        return Err(Error::EmptyInput("ornament needs at least one station".into()));
    }
    if spec.rhythm.is_empty() || spec.rhythm.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidParameter("rhythm must be nonempty with positive entries".into()));
    }
    if !(spec.size_base > 0.0) {
        return Err(Error::InvalidParameter("size_base must be positive".into()));
    }
    let s0 = spec.path.samples[0].s;
    let len = spec.path.total_length();
    let mut out = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let s = if spec.count == 1 {
            s0
        } else {
            s0 + len * i as f64 / (spec.count - 1) as f64
        };
        let p = interpolate(&spec.path, s).expect("path is nonempty");
        let mut size = spec.size_base * spec.rhythm[i % spec.rhythm.len()];
        if spec.size_rule == SizeRule::ProportionalToRadiusOfCurvature {
            if p.kappa == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "radius of curvature is unbounded at s = {s}"
                )));
            }
            size /= p.kappa.abs();
        }
        let color = if spec.palette.is_empty() {
            "#000000".to_string()
        } else {
            spec.palette[i % spec.palette.len()].clone()
        };
        out.push(Station {
            s,
            center: [p.x, p.y],
            angle: p.theta,
            size,
            color,
        });
    }
    Ok(out)
}

pub fn ornament_svg(spec: &OrnamentSpec) -> Result<String> {
    let stations = ornament_stations(spec)?;
    spec.canvas.validate()?;
    let max_size = stations.iter().fold(0.0_f64, |m, st| m.max(st.size));
    let (mut lo, mut hi) = bbox_of(spec.path.samples.iter()).expect("nonempty");
    for st in &stations {
        let r = 0.5 * st.size;
        lo = [lo[0].min(st.center[0] - r), lo[1].min(st.center[1] - r)];
        hi = [hi[0].max(st.center[0] + r), hi[1].max(st.center[1] + r)];
    }
    if hi[0] - lo[0] == 0.0 && hi[1] - lo[1] == 0.0 {
        let pad = max_size.max(1.0);
        lo = [lo[0] - pad, lo[1] - pad];
        hi = [hi[0] + pad, hi[1] + pad];
    }
    let c = &spec.canvas;
    let m = c.margin;
    let map = WorldToCanvas::fit((lo, hi), m, m, c.width - 2.0 * m, c.height - 2.0 * m);

    let mut out = String::new();
    header(&mut out, c);
    let _ = writeln!(
        out,
        "<path d=\"{}\" fill=\"none\" stroke=\"#9e9e9e\" stroke-width=\"0.5000\"/>",
        path_data(spec.path.samples.iter().map(|p| map.apply([p.x, p.y])))
    );
    for st in &stations {
        let ctr = map.apply(st.center);
        let half = 0.5 * st.size * map.scale;
        let fill = escape(&st.color);
        match spec.primitive {
            Primitive::Circle => {
                let _ = writeln!(
                    out,
                    "<circle class=\"station\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>",
                    num(ctr[0]),
                    num(ctr[1]),
                    num(half)
                );
            }
            Primitive::Square | Primitive::Triangle => {
                let (corners, radius): (&[f64], f64) = match spec.primitive {
                    Primitive::Square => (&[45.0, 135.0, 225.0, 315.0], half * std::f64::consts::SQRT_2),
                    _ => (&[0.0, 120.0, 240.0], half),
                };
                let pts: Vec<String> = corners
                    .iter()
                    .map(|deg| {
                        let d = map.direction(st.angle + deg.to_radians());
                        format!("{},{}", num(ctr[0] + radius * d[0]), num(ctr[1] + radius * d[1]))
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    "<polygon class=\"station\" points=\"{}\" fill=\"{fill}\"/>",
                    pts.join(" ")
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Pose;
    use crate::pseudospiral::NaturalEquation;

    fn euler() -> SampledCurve {
        NaturalEquation::new(-1.0, 1.0).unwrap().sample(0.9, 200, Pose::default()).unwrap()
    }

    fn spec(widths: Vec<f64>) -> PlotSpec {
        PlotSpec {
            curves: vec![euler()],
            stroke_widths: widths,
            canvas: Canvas::default(),
            axes: false,
            annotations: vec![],
        }
    }

    #[test]
    fn one_path_per_width() {
        assert_eq!(plot_svg(&spec(vec![1.0])).unwrap().matches("<path").count(), 1);
        let svg = plot_svg(&spec(vec![0.5, 1.0, 2.0, 4.0, 8.0])).unwrap();
        let widths: Vec<&str> = svg
            .match_indices("stroke-width=\"")
            .map(|(i, _)| {
                let rest = &svg[i + 14..];
                &rest[..rest.find('"').unwrap()]
            })
            .collect();
        assert_eq!(widths, ["0.5000", "1.0000", "2.0000", "4.0000", "8.0000"]);
    }

    #[test]
    fn deterministic() {
        let mut s = spec(vec![1.0, 3.0]);
        s.axes = true;
        s.annotations = vec![crate::analysis::stress_marker(&s.curves[0]).unwrap()];
        assert_eq!(plot_svg(&s).unwrap(), plot_svg(&s).unwrap());
    }

    #[test]
    fn empty_input() {
        let mut s = spec(vec![1.0]);
        s.curves.clear();
        assert!(matches!(plot_svg(&s), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn interpolation_clamps() {
        let c = euler();
        assert_eq!(interpolate(&c, -1.0).unwrap(), c.samples[0]);
        assert_eq!(interpolate(&c, 5.0).unwrap(), *c.samples.last().unwrap());
        let mid = interpolate(&c, 0.45).unwrap();
        assert!((mid.kappa - 0.55).abs() < 1e-4);
    }

    #[test]
    fn palette_is_escaped() {
        let o = OrnamentSpec {
            path: euler(),
            primitive: Primitive::Square,
            count: 3,
            size_rule: SizeRule::Constant,
            size_base: 0.05,
            rhythm: vec![1.0],
            palette: vec!["a\"<&".into()],
            canvas: Canvas::default(),
        };
        let svg = ornament_svg(&o).unwrap();
        assert!(svg.contains("fill=\"a&quot;&lt;&amp;\""));
    }
}
