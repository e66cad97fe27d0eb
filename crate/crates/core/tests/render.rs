mod common;

use mcurve::analysis::stress_marker;
use mcurve::pseudospiral::CurveSample;
use mcurve::render::{
    lcg_svg, ornament_stations, ornament_svg, plot_svg, Canvas, OrnamentSpec, PlotSpec, Primitive, SizeRule,
    WorldToCanvas,
};
use mcurve::{NaturalEquation, Pose, SampledCurve};

const KNOWN: [&str; 10] = ["svg", "rect", "g", "path", "line", "circle", "polygon", "defs", "marker", "text"];

fn well_formed(svg: &str) -> roxmltree::Document<'_> {
    let doc = roxmltree::Document::parse(svg).expect("well-formed XML");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
    assert_eq!(root.attribute("version"), Some("1.1"));
    for n in doc.descendants().filter(|n| n.is_element()) {
        assert!(KNOWN.contains(&n.tag_name().name()), "unexpected <{}>", n.tag_name().name());
    }
    doc
}

fn euler() -> SampledCurve {
    NaturalEquation::new(-1.0, 1.0).unwrap().sample(0.9, 300, Pose::default()).unwrap()
}

fn line(n: usize) -> SampledCurve {
    let samples = (0..n)
        .map(|i| {
            let s = 3.0 * i as f64 / (n - 1) as f64;
            CurveSample { s, x: 0.5 + s * 0.6, y: -1.0 + s * 0.8, theta: 0.8f64.atan2(0.6), kappa: 0.0 }
        })
        .collect();
    SampledCurve::from_samples(samples).unwrap()
}

#[test]
fn thickness_ladder() {
    let c = euler();
    let spec = PlotSpec {
        annotations: vec![stress_marker(&c).unwrap()],
        curves: vec![c],
        stroke_widths: vec![0.5, 1.0, 2.0, 4.0, 8.0],
        canvas: Canvas::default(),
        axes: true,
    };
    let svg = plot_svg(&spec).unwrap();
    let doc = well_formed(&svg);
    let widths: Vec<f64> = doc
        .descendants()
        .filter(|n| n.has_tag_name("path") && n.attribute("fill") == Some("none"))
        .map(|n| n.attribute("stroke-width").unwrap().parse().unwrap())
        .collect();
    assert_eq!(widths, [0.5, 1.0, 2.0, 4.0, 8.0]);
    assert_eq!(svg, plot_svg(&spec).unwrap());
}

#[test]
fn transform_keeps_circles_round() {
    let pts: Vec<[f64; 2]> = (0..360)
        .map(|i| {
            let t = i as f64 * std::f64::consts::PI / 180.0;
            [2.0 + 0.7 * t.cos(), -1.0 + 0.7 * t.sin()]
        })
        .collect();
    let map = WorldToCanvas::fit(([1.3, -1.7], [2.7, -0.3]), 40.0, 40.0, 720.0, 300.0);
    let canvas: Vec<[f64; 2]> = pts.iter().map(|p| map.apply(*p)).collect();
    let (c, r) = common::kasa_fit(&canvas);
    let dev = common::max_circle_deviation(&canvas, c, r);
    assert!(dev < 1e-9 * r);
    assert!((r - 0.7 * map.scale).abs() < 1e-9 * r);
}

fn ornament(path: SampledCurve, count: usize, rule: SizeRule) -> OrnamentSpec {
    OrnamentSpec {
        path,
        primitive: Primitive::Circle,
        count,
        size_rule: rule,
        size_base: 0.05,
        rhythm: vec![1.0],
        palette: vec!["#1f4e9c".into(), "#b22222".into()],
        canvas: Canvas::default(),
    }
}

#[test]
fn single_station_sits_at_start() {
    let st = ornament_stations(&ornament(euler(), 1, SizeRule::Constant)).unwrap();
    assert_eq!(st.len(), 1);
    assert_eq!(st[0].s, 0.0);
    assert_eq!(st[0].center, [0.0, 0.0]);
}

#[test]
fn stations_on_a_line_are_evenly_spaced() {
    let spec = ornament(line(50), 13, SizeRule::Constant);
    let st = ornament_stations(&spec).unwrap();
    let gaps: Vec<f64> = st
        .windows(2)
        .map(|w| (w[1].center[0] - w[0].center[0]).hypot(w[1].center[1] - w[0].center[1]))
        .collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let var = gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / gaps.len() as f64;
    assert!(var < 1e-9);
    assert!(st.iter().all(|s| s.size == 0.05));
    assert_eq!(st[1].color, "#b22222");
}

#[test]
fn proportional_sizes_shrink_toward_high_curvature() {
    // Reversed Euler arc: curvature grows along the path.
    let path = euler().reversed();
    let spec = ornament(path, 12, SizeRule::ProportionalToRadiusOfCurvature);
    let st = ornament_stations(&spec).unwrap();
    assert!(st.windows(2).all(|w| w[1].size < w[0].size));
    for s in &st {
        // The reversed arc starts at s = 0.9 on the original, where kappa = 0.1.
        let kappa = 1.0 - (0.9 - s.s);
        assert!((s.size - 0.05 / kappa).abs() < 1e-3 * s.size);
    }
}

#[test]
fn ornament_documents() {
    for (prim, tag) in [(Primitive::Circle, "circle"), (Primitive::Square, "polygon"), (Primitive::Triangle, "polygon")] {
        let mut spec = ornament(euler(), 17, SizeRule::Constant);
        spec.primitive = prim;
        spec.rhythm = vec![1.0, 0.5, 0.25];
        let svg = ornament_svg(&spec).unwrap();
        let doc = well_formed(&svg);
        let n = doc.descendants().filter(|n| n.attribute("class") == Some("station")).count();
        assert_eq!(n, 17);
        assert!(doc.descendants().filter(|n| n.attribute("class") == Some("station")).all(|n| n.has_tag_name(tag)));
        assert_eq!(svg, ornament_svg(&spec).unwrap());
    }
}

#[test]
fn lcg_document() {
    let eq = NaturalEquation::new(2.0, 1.0).unwrap();
    let r = mcurve::analysis::lcg_analytic(&eq, 0.0, 3.0, 100).unwrap();
    well_formed(&lcg_svg(&r, &Canvas::default()).unwrap());
}
