use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, ValueEnum};
use serde::Serialize;

use mcurve::analysis::{check_curve_monotone, lcg_analytic, lcg_from_curve, stress_marker, LcgReport};
use mcurve::csvio::{export_csv, export_csv_3d, export_region_csv, parse_csv};
use mcurve::hermite::{drawable_region, fit_g1_with, lambda_grid, FitOptions, FittedSegment, HermiteProblem};
use mcurve::qi3d::{QiCurveSpec, QuaternionCurve, UnitQuaternion};
use mcurve::render::{lcg_svg, ornament_stations, ornament_svg, plot_svg, Canvas, OrnamentSpec, PlotSpec, Primitive, SizeRule};
use mcurve::{Error, NamedCurve, NaturalEquation, Pose, SampledCurve};

use crate::config::Config;

pub struct Context {
    pub cfg: Config,
    pub json: bool,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn args(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::DomainExceeded { .. }
            | Error::TurningUnreachable { .. }
            | Error::MaxDepthExceeded { .. }
            | Error::NonFiniteIntegrand { .. } => 2,
            Error::DegenerateLcg(_) | Error::AntipodalSingularity => 3,
            Error::NoSolution { .. } | Error::EmptyRegion { .. } => 4,
            Error::InvalidParameter(_)
            | Error::UnknownName(_)
            | Error::DegenerateInput(_)
            | Error::EmptyInput(_)
            | Error::Csv(_) => 1,
        };
        let message = match &e {
            Error::DomainExceeded { s_max, .. } => format!("{e} (s_max_domain = {s_max})"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

type CmdResult = Result<(), Failure>;

/// Files are staged in full and only then moved into place.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    fn add(&mut self, name: String, contents: String) {
        self.files.push((name, contents));
    }

    fn commit(self) -> Result<Vec<PathBuf>, Failure> {
        let io = |e: std::io::Error| Failure::args(format!("cannot write to {}: {e}", self.dir.display()));
        std::fs::create_dir_all(&self.dir).map_err(io)?;
        let mut staged = Vec::new();
        for (name, contents) in &self.files {
            let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
            tmp.write_all(contents.as_bytes()).map_err(io)?;
            staged.push((tmp, self.dir.join(name)));
        }
        let mut written = Vec::new();
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| io(e.error))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

fn parse_point2(text: &str) -> Result<[f64; 2], String> {
    match parse_list(text)?.as_slice() {
        [x, y] => Ok([*x, *y]),
        _ => Err(format!("expected `x,y`, got `{text}`")),
    }
}

fn parse_point3(text: &str) -> Result<[f64; 3], String> {
    match parse_list(text)?.as_slice() {
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err(format!("expected `x,y,z`, got `{text}`")),
    }
}

fn equation(named: Option<&str>, alpha: Option<f64>, lambda: f64) -> Result<NaturalEquation, Failure> {
    match (named, alpha) {
        (Some(name), _) => Ok(NaturalEquation::named(name.parse::<NamedCurve>()?, lambda)?),
        (None, Some(a)) => Ok(NaturalEquation::new(a, lambda)?),
        (None, None) => Err(Failure::args("give --named or --alpha")),
    }
}

/// Most of the bounded domain, or a few decay lengths when unbounded.
fn default_s_end(eq: &NaturalEquation) -> f64 {
    let s_max = eq.s_max_domain();
    if s_max.is_finite() {
        0.9 * s_max
    } else {
        5.0 / eq.lambda()
    }
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("shape").required(true).args(["named", "alpha"])))]
pub struct CurveArgs {
    /// euler, nielsen, log_spiral, involute or quasi_circle.
    #[arg(long)]
    named: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: f64,
    /// Arc length to sample up to [default: 0.9 s_max, or 5/lambda when unbounded].
    #[arg(long)]
    s_end: Option<f64>,
    /// Number of samples [default: config samples].
    #[arg(long)]
    n: Option<usize>,
    /// File stem for the outputs.
    #[arg(long, default_value = "curve")]
    out: String,
    /// Also write an SVG plot.
    #[arg(long)]
    svg: bool,
}

#[derive(Serialize)]
struct CurveSummary {
    alpha: f64,
    lambda: f64,
    s_end: f64,
    samples: usize,
    kappa_start: f64,
    kappa_end: f64,
    theta_total: f64,
    s_max_domain: Option<f64>,
}

pub fn curve(ctx: &Context, a: &CurveArgs) -> CmdResult {
    let eq = equation(a.named.as_deref(), a.alpha, a.lambda)?;
    let s_end = a.s_end.unwrap_or_else(|| default_s_end(&eq));
    let n = a.n.unwrap_or(ctx.cfg.samples);
    let c = eq.sample_with_tol(s_end, n, Pose::default(), ctx.cfg.tol)?;
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.csv", a.out), export_csv(&c)?);
    if a.svg {
        out.add(format!("{}.svg", a.out), plot_svg(&single_plot(c.clone(), vec![2.0]))?);
    }
    let (first, last) = (c.samples[0], *c.samples.last().expect("n >= 2"));
    let summary = CurveSummary {
        alpha: eq.alpha(),
        lambda: eq.lambda(),
        s_end,
        samples: c.len(),
        kappa_start: first.kappa,
        kappa_end: last.kappa,
        theta_total: last.theta - first.theta,
        s_max_domain: Some(eq.s_max_domain()).filter(|v| v.is_finite()),
    };
    let files = out.commit()?;
    if ctx.json {
        print!("{}", to_json(&summary));
    } else {
        println!(
            "s_end {}  kappa {} -> {}  theta total {}",
            summary.s_end, summary.kappa_start, summary.kappa_end, summary.theta_total
        );
        print_files(&files);
    }
    Ok(())
}

fn single_plot(c: SampledCurve, widths: Vec<f64>) -> PlotSpec {
    PlotSpec {
        curves: vec![c],
        stroke_widths: widths,
        canvas: Canvas::default(),
        axes: true,
        annotations: vec![],
    }
}

/// A curve read from CSV, or sampled from a family member.
#[derive(Args, Debug)]
pub struct SourceArgs {
    /// CSV curve (`s,x,y,theta,kappa`).
    #[arg(long, conflicts_with_all = ["named", "alpha", "lambda"])]
    input: Option<PathBuf>,
    #[arg(long, conflicts_with = "alpha")]
    named: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Arc length to sample up to [default: 0.9 s_max, or 5/lambda when unbounded].
    #[arg(long)]
    s_end: Option<f64>,
    /// Number of samples [default: config samples].
    #[arg(long)]
    n: Option<usize>,
}

enum Source {
    Csv(SampledCurve),
    Family { eq: NaturalEquation, s_end: f64, n: usize },
}

impl SourceArgs {
    fn resolve(&self, cfg: &Config) -> Result<Source, Failure> {
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::args(format!("cannot read {}: {e}", path.display())))?;
            return Ok(Source::Csv(parse_csv(&text)?));
        }
        let lambda = self
            .lambda
            .ok_or_else(|| Failure::args("give --input, or a family with --named/--alpha and --lambda"))?;
        let eq = equation(self.named.as_deref(), self.alpha, lambda)?;
        Ok(Source::Family {
            s_end: self.s_end.unwrap_or_else(|| default_s_end(&eq)),
            n: self.n.unwrap_or(cfg.samples),
            eq,
        })
    }

    fn curve(&self, cfg: &Config) -> Result<SampledCurve, Failure> {
        match self.resolve(cfg)? {
            Source::Csv(c) => Ok(c),
            Source::Family { eq, s_end, n } => Ok(eq.sample_with_tol(s_end, n, Pose::default(), cfg.tol)?),
        }
    }
}

#[derive(Args, Debug)]
pub struct LcgArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// For a family, estimate from samples instead of the closed form.
    #[arg(long)]
    sampled: bool,
    #[arg(long, default_value = "lcg")]
    out: String,
    #[arg(long)]
    svg: bool,
}

pub fn lcg(ctx: &Context, a: &LcgArgs) -> CmdResult {
    let report: LcgReport = match a.source.resolve(&ctx.cfg)? {
        Source::Csv(c) => lcg_from_curve(&c)?,
        Source::Family { eq, s_end, n } if a.sampled => {
            lcg_from_curve(&eq.sample_with_tol(s_end, n, Pose::default(), ctx.cfg.tol)?)?
        }
        Source::Family { eq, s_end, n } => lcg_analytic(&eq, 0.0, s_end, n)?,
    };
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.json", a.out), to_json(&report));
    if a.svg {
        out.add(format!("{}.svg", a.out), lcg_svg(&report, &Canvas::default())?);
    }
    let files = out.commit()?;
    if ctx.json {
        print!("{}", to_json(&report));
    } else {
        println!(
            "slope {}  intercept {}  rms residual {}  points {}",
            report.slope,
            report.intercept,
            report.rms_residual,
            report.points.len()
        );
        print_files(&files);
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Start point `x,y`.
    #[arg(long, value_parser = parse_point2, allow_hyphen_values = true)]
    start: [f64; 2],
    /// End point `x,y`.
    #[arg(long, value_parser = parse_point2, allow_hyphen_values = true)]
    end: [f64; 2],
    /// Tangent direction at the start, radians.
    #[arg(long, allow_negative_numbers = true)]
    start_angle: f64,
    /// Tangent direction at the end, radians.
    #[arg(long, allow_negative_numbers = true)]
    end_angle: f64,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long)]
    lambda_min: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Chord-angle tolerance of the solver, radians.
    #[arg(long, default_value_t = mcurve::hermite::DEFAULT_FIT_TOL)]
    fit_tol: f64,
    /// Samples of the fitted segment [default: config samples].
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "fit")]
    out: String,
}

#[derive(Serialize)]
struct FitOutput<'a> {
    alpha: f64,
    lambda: f64,
    world_lambda: f64,
    world_length: f64,
    #[serde(flatten)]
    segment: &'a FittedSegment,
}

fn grid(ctx: &Context, alpha: f64, delta: f64, min: Option<f64>, max: Option<f64>, n: usize) -> Result<Vec<f64>, Failure> {
    let min = min.unwrap_or(ctx.cfg.lambda_min);
    let max = max.unwrap_or(ctx.cfg.lambda_max);
    Ok(lambda_grid(alpha, delta, min, max, n)?)
}

pub fn fit(ctx: &Context, a: &FitArgs) -> CmdResult {
    let p = HermiteProblem::from_angles(a.start, a.end, a.start_angle, a.end_angle, a.alpha);
    let delta = p.delta_theta().abs();
    let opts = FitOptions {
        tol: a.fit_tol,
        lambda_grid: Some(grid(ctx, a.alpha, delta, a.lambda_min, a.lambda_max, mcurve::hermite::DEFAULT_GRID_POINTS)?),
    };
    let seg = fit_g1_with(&p, &opts)?;
    let c = seg.sample(a.n.unwrap_or(ctx.cfg.samples))?;
    let output = FitOutput {
        alpha: a.alpha,
        lambda: seg.lambda(),
        world_lambda: seg.world_lambda(),
        world_length: seg.world_length(),
        segment: &seg,
    };
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.json", a.out), to_json(&output));
    out.add(format!("{}.csv", a.out), export_csv(&c)?);
    out.add(format!("{}.svg", a.out), plot_svg(&single_plot(c, vec![2.0]))?);
    let files = out.commit()?;
    if ctx.json {
        print!("{}", to_json(&output));
    } else {
        println!(
            "lambda {}  world length {}  residual {}{}",
            seg.lambda(),
            seg.world_length(),
            seg.residual,
            if seg.reversed { "  (reversed traversal)" } else { "" }
        );
        print_files(&files);
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Turning angle, radians in (0, pi).
    #[arg(long)]
    delta_theta: f64,
    #[arg(long)]
    lambda_min: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Log-uniform grid stations.
    #[arg(long, default_value_t = mcurve::hermite::DEFAULT_GRID_POINTS)]
    grid_points: usize,
    #[arg(long, default_value = "region")]
    out: String,
}

pub fn region(ctx: &Context, a: &RegionArgs) -> CmdResult {
    let g = grid(ctx, a.alpha, a.delta_theta, a.lambda_min, a.lambda_max, a.grid_points)?;
    let r = drawable_region(a.alpha, a.delta_theta, &g)?;
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.json", a.out), to_json(&r));
    out.add(format!("{}.csv", a.out), export_region_csv(&r));
    let files = out.commit()?;
    if ctx.json {
        print!("{}", to_json(&r));
    } else {
        println!(
            "chord angle in [{}, {}] of turning {} ({} of {} grid values reach it)",
            r.psi_min,
            r.psi_max,
            r.delta_theta,
            r.boundary_samples.len(),
            g.len()
        );
        print_files(&files);
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct QiArgs {
    /// JSON spec with p0, v0, qcurve and s_total; overrides the other flags.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Control quaternions `w,x,y,z;w,x,y,z;...`.
    #[arg(long, default_value = "1,0,0,0", allow_hyphen_values = true)]
    controls: String,
    #[arg(long, value_parser = parse_point3, default_value = "0,0,0", allow_hyphen_values = true)]
    p0: [f64; 3],
    #[arg(long, value_parser = parse_point3, default_value = "1,0,0", allow_hyphen_values = true)]
    v0: [f64; 3],
    #[arg(long, default_value_t = 1.0)]
    s_total: f64,
    /// Number of samples [default: config samples].
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "qi")]
    out: String,
}

fn parse_controls(text: &str) -> Result<Vec<UnitQuaternion>, Failure> {
    text.split(';')
        .map(|q| match parse_list(q).map_err(Failure::args)?.as_slice() {
            [w, x, y, z] => Ok(UnitQuaternion::new(*w, *x, *y, *z)?),
            _ => Err(Failure::args(format!("expected `w,x,y,z`, got `{q}`"))),
        })
        .collect()
}

pub fn qi(ctx: &Context, a: &QiArgs) -> CmdResult {
    let spec = match &a.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::args(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<QiCurveSpec>(&text)
                .map_err(|e| Failure::args(format!("invalid spec {}: {e}", path.display())))?
        }
        None => QiCurveSpec::new(a.p0, a.v0, QuaternionCurve::new(parse_controls(&a.controls)?)?, a.s_total)?,
    };
    let samples = spec.sample(a.n.unwrap_or(ctx.cfg.samples), ctx.cfg.tol)?;
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.csv", a.out), export_csv_3d(&samples)?);
    out.add(format!("{}.json", a.out), to_json(&spec));
    let files = out.commit()?;
    let end = samples.last().expect("n >= 2").point;
    if ctx.json {
        print!("{}", to_json(&samples.last()));
    } else {
        println!("s_total {}  end point {:?}", spec.s_total, end);
        print_files(&files);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PrimitiveArg {
    Circle,
    Square,
    Triangle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SizeRuleArg {
    Constant,
    /// Scale by the local radius of curvature.
    Proportional,
}

#[derive(Args, Debug)]
pub struct CanvasArgs {
    #[arg(long, default_value_t = 800.0)]
    width: f64,
    #[arg(long, default_value_t = 600.0)]
    height: f64,
    #[arg(long, default_value_t = 40.0)]
    margin: f64,
}

impl CanvasArgs {
    fn canvas(&self) -> Canvas {
        Canvas {
            width: self.width,
            height: self.height,
            margin: self.margin,
        }
    }
}

#[derive(Args, Debug)]
pub struct OrnamentArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "circle")]
    primitive: PrimitiveArg,
    #[arg(long, default_value_t = 12)]
    count: usize,
    #[arg(long, value_enum, default_value = "constant")]
    size_rule: SizeRuleArg,
    /// Primitive size in world units.
    #[arg(long, default_value_t = 0.05)]
    size_base: f64,
    /// Relative sizes, repeated along the path.
    #[arg(long, default_value = "1")]
    rhythm: String,
    /// Colors cycled per station, comma separated.
    #[arg(long, default_value = "#000000")]
    palette: String,
    #[command(flatten)]
    canvas: CanvasArgs,
    #[arg(long, default_value = "ornament")]
    out: String,
}

pub fn ornament(ctx: &Context, a: &OrnamentArgs) -> CmdResult {
    let spec = OrnamentSpec {
        path: a.source.curve(&ctx.cfg)?,
        primitive: match a.primitive {
            PrimitiveArg::Circle => Primitive::Circle,
            PrimitiveArg::Square => Primitive::Square,
            PrimitiveArg::Triangle => Primitive::Triangle,
        },
        count: a.count,
        size_rule: match a.size_rule {
            SizeRuleArg::Constant => SizeRule::Constant,
            SizeRuleArg::Proportional => SizeRule::ProportionalToRadiusOfCurvature,
        },
        size_base: a.size_base,
        rhythm: parse_list(&a.rhythm).map_err(Failure::args)?,
        palette: a.palette.split(',').map(|c| c.trim().to_string()).collect(),
        canvas: a.canvas.canvas(),
    };
    let svg = ornament_svg(&spec)?;
    let stations = ornament_stations(&spec)?;
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.svg", a.out), svg);
    let files = out.commit()?;
    if ctx.json {
        print!("{}", to_json(&stations));
    } else {
        println!("{} stations", stations.len());
        print_files(&files);
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Steps smaller than this are ignored [default: 1e-12 max |kappa|].
    #[arg(long)]
    monotone_tol: Option<f64>,
    #[arg(long, default_value = "check")]
    out: String,
}

pub fn check(ctx: &Context, a: &CheckArgs) -> CmdResult {
    let c = a.source.curve(&ctx.cfg)?;
    let report = check_curve_monotone(&c, a.monotone_tol)?;
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.json", a.out), to_json(&report));
    let files = out.commit()?;
    if ctx.json {
        print!("{}", to_json(&report));
    } else {
        println!(
            "monotone {}  direction {}  violations {}",
            report.is_monotone,
            serde_json::to_string(&report.direction).expect("enum").trim_matches('"'),
            report.violations.len()
        );
        print_files(&files);
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// CSV curves; repeat for several.
    #[arg(long, conflicts_with_all = ["named", "alpha", "lambda"])]
    input: Vec<PathBuf>,
    #[arg(long, conflicts_with = "alpha")]
    named: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    s_end: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// Stroke widths, one row each.
    #[arg(long, default_value = "1")]
    widths: String,
    #[arg(long)]
    axes: bool,
    /// Mark the points of highest curvature and curvature change.
    #[arg(long)]
    annotate: bool,
    #[command(flatten)]
    canvas: CanvasArgs,
    #[arg(long, default_value = "plot")]
    out: String,
}

pub fn plot(ctx: &Context, a: &PlotArgs) -> CmdResult {
    let curves = if a.input.is_empty() {
        let src = SourceArgs {
            input: None,
            named: a.named.clone(),
            alpha: a.alpha,
            lambda: a.lambda,
            s_end: a.s_end,
            n: a.n,
        };
        vec![src.curve(&ctx.cfg)?]
    } else {
        let mut v = Vec::new();
        for path in &a.input {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::args(format!("cannot read {}: {e}", path.display())))?;
            v.push(parse_csv(&text)?);
        }
        v
    };
    let annotations = if a.annotate {
        curves.iter().map(stress_marker).collect::<Result<Vec<_>, _>>()?
    } else {
        vec![]
    };
    let spec = PlotSpec {
        curves,
        stroke_widths: parse_list(&a.widths).map_err(Failure::args)?,
        canvas: a.canvas.canvas(),
        axes: a.axes,
        annotations,
    };
    let mut out = Outputs::new(&ctx.cfg.out_dir);
    out.add(format!("{}.svg", a.out), plot_svg(&spec)?);
    let files = out.commit()?;
    if ctx.json {
        print!("{}", to_json(&spec.annotations));
    } else {
        println!("{} curves, {} widths", spec.curves.len(), spec.stroke_widths.len());
        print_files(&files);
    }
    Ok(())
}
