//! Two-point G1 Hermite fitting with a single log-aesthetic segment.
//!
//! For fixed `alpha` the normalized segment (unit start curvature, origin
//! start, heading +x) is a one-parameter family in `lambda`. Once the
//! turning `delta_theta` is fixed, the only remaining shape measure is the
//! chord angle `psi(lambda)` relative to the start tangent. Fitting scans
//! a `lambda` grid for sign changes of `psi(lambda) - psi*`, bisects, and
//! places the normalized segment with a similarity transform.
//!
//! Curvature decreases along the segment, so `psi > delta_theta / 2`.
//! Targets below the half turning are solved on the reversed problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{wrap_angle, Point2, Pose, Similarity};
use crate::pseudospiral::{CurveSample, NaturalEquation, SampledCurve};

pub const DEFAULT_FIT_TOL: f64 = 1e-10;
pub const DEFAULT_LAMBDA_MIN: f64 = 1e-6;
pub const DEFAULT_LAMBDA_MAX: f64 = 1e6;
pub const DEFAULT_GRID_POINTS: usize = 97;
const MAX_BISECTIONS: usize = 200;
const CHORD_TOL: f64 = 1e-13;
/// Extra stations `lambda_b (1 - 10^-k)` approaching the reachability bound.
const BOUND_APPROACH_DIGITS: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteProblem {
    pub p_start: Point2,
    pub p_end: Point2,
    pub t_start: Point2,
    pub t_end: Point2,
    pub alpha: f64,
}

fn angle_of(v: Point2) -> f64 {
    v[1].atan2(v[0])
}

impl HermiteProblem {
    pub fn new(p_start: Point2, p_end: Point2, t_start: Point2, t_end: Point2, alpha: f64) -> Self {
        HermiteProblem {
            p_start,
            p_end,
            t_start,
            t_end,
            alpha,
        }
    }

    /// Tangents given as heading angles.
    pub fn from_angles(p_start: Point2, p_end: Point2, start_angle: f64, end_angle: f64, alpha: f64) -> Self {
        let (s0, c0) = start_angle.sin_cos();
        let (s1, c1) = end_angle.sin_cos();
        Self::new(p_start, p_end, [c0, s0], [c1, s1], alpha)
    }

    /// Signed turning from the start tangent to the end tangent, in `(-pi, pi]`.
    pub fn delta_theta(&self) -> f64 {
        wrap_angle(angle_of(self.t_end) - angle_of(self.t_start))
    }

    pub fn chord(&self) -> Point2 {
        [self.p_end[0] - self.p_start[0], self.p_end[1] - self.p_start[1]]
    }

    /// Intersection of the two tangent lines (the control-triangle apex).
    pub fn control_point(&self) -> Option<Point2> {
        let [a, b] = [self.t_start, self.t_end];
        let det = a[0] * (-b[1]) - a[1] * (-b[0]);
        if det.abs() < 1e-14 {
            return None;
        }
        let d = self.chord();
        let u = (d[0] * (-b[1]) - d[1] * (-b[0])) / det;
        Some([self.p_start[0] + u * a[0], self.p_start[1] + u * a[1]])
    }

    /// Same problem traversed from end to start.
    pub fn reversed(&self) -> HermiteProblem {
        HermiteProblem {
            p_start: self.p_end,
            p_end: self.p_start,
            t_start: [-self.t_end[0], -self.t_end[1]],
            t_end: [-self.t_start[0], -self.t_start[1]],
            alpha: self.alpha,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [self.p_start, self.p_end, self.t_start, self.t_end];
        if !all.iter().flatten().all(|v| v.is_finite()) || !self.alpha.is_finite() {
            return Err(Error::DegenerateInput("non-finite problem data".into()));
        }
        for t in [self.t_start, self.t_end] {
            if (t[0].hypot(t[1]) - 1.0).abs() > 1e-9 {
                return Err(Error::DegenerateInput("tangents must be unit vectors".into()));
            }
        }
        let d = self.chord();
        let scale = self.p_start[0].abs().max(self.p_start[1].abs()).max(1.0);
        if d[0].hypot(d[1]) <= 1e-15 * scale {
            return Err(Error::DegenerateInput("start and end points coincide".into()));
        }
        let dt = self.delta_theta();
        if dt == 0.0 {
            return Err(Error::DegenerateInput("tangents are parallel (zero turning)".into()));
        }
        if dt.abs() >= std::f64::consts::PI {
            return Err(Error::DegenerateInput("turning of pi or more".into()));
        }
        Ok(())
    }
}

/// A problem expressed in the frame where the traversal starts at the
/// origin heading +x and turns counterclockwise.
#[derive(Debug, Clone, Copy)]
struct Normalized {
    delta_theta: f64,
    psi: f64,
    frame: Similarity,
    chord_length: f64,
}

fn normalize(p: &HermiteProblem) -> Normalized {
    let beta = angle_of(p.t_start);
    let d = p.chord();
    let mut delta_theta = p.delta_theta();
    let mut psi = wrap_angle(angle_of(d) - beta);
    let mirror = delta_theta < 0.0;
    if mirror {
        delta_theta = -delta_theta;
        psi = -psi;
    }
    Normalized {
        delta_theta,
        psi,
        frame: Similarity {
            rotation: beta,
            scale: 1.0,
            translation: p.p_start,
            mirror,
        },
        chord_length: d[0].hypot(d[1]),
    }
}

/// Chord angle of the normalized segment after it has turned `delta_theta`.
pub fn chord_angle(alpha: f64, lambda: f64, delta_theta: f64) -> Result<f64> {
    let eq = NaturalEquation::new(alpha, lambda)?;
    chord_angle_of(&eq, delta_theta)
}

fn chord_angle_of(eq: &NaturalEquation, delta_theta: f64) -> Result<f64> {
    if !(delta_theta > 0.0 && delta_theta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "turning must be positive (got {delta_theta})"
        )));
    }
    // The segment must exist: its arc length has to be finite and in domain.
    eq.arc_length_at_turning(delta_theta)?;
    let e = eq.scaled_chord(delta_theta, CHORD_TOL)?;
    Ok(e[1].atan2(e[0]))
}

pub fn log_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min && max.is_finite()) || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "lambda grid needs 0 < min < max and n >= 2 (got {min}, {max}, {n})"
        )));
    }
    let (a, b) = (min.ln(), max.ln());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                max
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// The log-uniform grid on `[1e-6, 1e6]` plus, for `alpha < 1`, stations
/// crowding the largest `lambda` that can still turn by `delta_theta`.
/// Log stations between the last of those and the bound are dropped.
pub fn default_lambda_grid(alpha: f64, delta_theta: f64) -> Vec<f64> {
    lambda_grid(alpha, delta_theta, DEFAULT_LAMBDA_MIN, DEFAULT_LAMBDA_MAX, DEFAULT_GRID_POINTS)
        .expect("constant grid bounds are valid")
}

/// [`default_lambda_grid`] on `[min, max]` with `n` log-uniform stations;
/// the approach stations are kept only inside the bounds.
pub fn lambda_grid(alpha: f64, delta_theta: f64, min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    let mut grid = log_grid(min, max, n)?;
    if alpha < 1.0 && delta_theta > 0.0 {
        let bound = 1.0 / ((1.0 - alpha) * delta_theta);
        // Closer than the last approach station, lambda no longer resolves psi.
        let last = bound * (1.0 - 10f64.powi(-BOUND_APPROACH_DIGITS));
        grid.retain(|l| *l <= last);
        grid.extend(
            (1..=BOUND_APPROACH_DIGITS)
                .map(|k| bound * (1.0 - 10f64.powi(-k)))
                .filter(|l| *l >= min && *l <= max),
        );
    }
    grid.retain(|l| l.is_finite() && *l > 0.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawableRegion {
    pub alpha: f64,
    pub delta_theta: f64,
    /// Chord-angle range reached with decreasing curvature along the segment.
    pub psi_min: f64,
    pub psi_max: f64,
    /// `(lambda, psi)` for every reachable grid value.
    pub boundary_samples: Vec<(f64, f64)>,
}

impl DrawableRegion {
    /// True when `psi` is reachable in either traversal direction.
    pub fn contains(&self, psi: f64) -> bool {
        let fwd = |p: f64| p >= self.psi_min && p <= self.psi_max;
        fwd(psi) || fwd(self.delta_theta - psi)
    }
}

fn scan(alpha: f64, delta_theta: f64, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let eq = NaturalEquation::new(alpha, lambda)?;
        match chord_angle_of(&eq, delta_theta) {
            Ok(psi) => out.push((lambda, psi)),
            Err(Error::TurningUnreachable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn drawable_region(alpha: f64, delta_theta: f64, lambda_grid: &[f64]) -> Result<DrawableRegion> {
    if !(delta_theta > 0.0 && delta_theta < std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!(
            "turning must lie in (0, pi) (got {delta_theta})"
        )));
    }
    if lambda_grid.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidParameter("lambda grid values must be positive".into()));
    }
    let samples = scan(alpha, delta_theta, lambda_grid)?;
    if samples.is_empty() {
        return Err(Error::EmptyRegion { delta_theta });
    }
    let psi_min = samples.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let psi_max = samples.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(DrawableRegion {
        alpha,
        delta_theta,
        psi_min,
        psi_max,
        boundary_samples: samples,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Target accuracy on the chord angle, radians.
    pub tol: f64,
    /// Overrides [`default_lambda_grid`].
    pub lambda_grid: Option<Vec<f64>>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            tol: DEFAULT_FIT_TOL,
            lambda_grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedSegment {
    /// Normalized segment (unit start curvature).
    pub equation: NaturalEquation,
    /// Arc length of the normalized segment.
    pub s_total: f64,
    /// Turning of the normalized segment, positive.
    pub delta_theta: f64,
    /// Maps the normalized segment onto the traversal.
    pub transform: Similarity,
    /// Set when the segment runs from the problem's end point to its start.
    pub reversed: bool,
    /// Chord-direction error of the placed segment, radians.
    pub residual: f64,
    /// Other `lambda` roots found by the scan, ascending.
    pub other_lambdas: Vec<f64>,
    pub control_point: Option<Point2>,
}

impl FittedSegment {
    pub fn lambda(&self) -> f64 {
        self.equation.lambda()
    }

    /// `lambda` of the placed (world-size) segment.
    pub fn world_lambda(&self) -> f64 {
        self.equation.lambda() / self.transform.scale
    }

    pub fn world_length(&self) -> f64 {
        self.s_total * self.transform.scale
    }

    /// `n` world-frame samples at uniform arc length, ordered from the
    /// problem's start point to its end point. Curvature is signed.
    pub fn sample(&self, n: usize) -> Result<SampledCurve> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 samples (got {n})")));
        }
        let eq = &self.equation;
        let mut samples = Vec::with_capacity(n);
        let mut p = [0.0, 0.0];
        let mut prev_theta = 0.0;
        let rho_end = eq.radius_at_turning(self.delta_theta);
        for i in 0..n {
            let s = if i == n - 1 {
                self.s_total
            } else {
                self.s_total * i as f64 / (n - 1) as f64
            };
            let theta = if i == n - 1 {
                self.delta_theta
            } else {
                eq.turning_angle(s.min(eq.s_limit()))?
            };
            if i > 0 {
                // Same reference radius as the fit, so the end lands on the chord.
                let d = eq.scaled_increment(prev_theta, theta, self.delta_theta, CHORD_TOL)?;
                let d = [d[0] * rho_end, d[1] * rho_end];
                p[0] += d[0];
                p[1] += d[1];
            }
            prev_theta = theta;
            samples.push(CurveSample {
                s,
                x: p[0],
                y: p[1],
                theta,
                kappa: eq.curvature(s.min(eq.s_limit()))?,
            });
        }
        let normalized = SampledCurve {
            equation: Some(*eq),
            pose: Pose::default(),
            scale: 1.0,
            samples,
        };
        let placed = normalized.transformed(&self.transform);
        Ok(if self.reversed { placed.reversed() } else { placed })
    }
}

/// Solves with [`FitOptions::default`] except for the tolerance.
pub fn fit_g1(problem: &HermiteProblem, tol: f64) -> Result<FittedSegment> {
    fit_g1_with(
        problem,
        &FitOptions {
            tol,
            ..FitOptions::default()
        },
    )
}

pub fn fit_g1_with(problem: &HermiteProblem, opts: &FitOptions) -> Result<FittedSegment> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive (got {})", opts.tol)));
    }
    problem.validate()?;
    let alpha = problem.alpha;

    let mut reversed = false;
    let mut traversal = *problem;
    let mut norm = normalize(&traversal);
    let delta = norm.delta_theta;
    if !(norm.psi > 0.0 && norm.psi < delta) {
        let grid = opts.lambda_grid.clone().unwrap_or_else(|| default_lambda_grid(alpha, delta));
        let (psi_min, psi_max) = region_bounds(alpha, delta, &grid);
        return Err(Error::NoSolution {
            psi_target: norm.psi,
            psi_min,
            psi_max,
        });
    }
    if norm.psi < 0.5 * delta {
        reversed = true;
        traversal = problem.reversed();
        norm = normalize(&traversal);
    }
    let target = norm.psi;

    let grid = opts.lambda_grid.clone().unwrap_or_else(|| default_lambda_grid(alpha, delta));
    let samples = scan(alpha, delta, &grid)?;
    let g = |lambda: f64| -> Result<f64> {
        Ok(chord_angle_of(&NaturalEquation::new(alpha, lambda)?, delta)? - target)
    };

    let mut roots = Vec::new();
    for (i, &(lambda, psi)) in samples.iter().enumerate() {
        let gi = psi - target;
        if gi.abs() <= opts.tol {
            roots.push(lambda);
            continue;
        }
        if let Some(&(l_next, psi_next)) = samples.get(i + 1) {
            let gn = psi_next - target;
            if gn.abs() > opts.tol && gi.signum() != gn.signum() {
                roots.push(bisect(&g, lambda, l_next, gi)?);
            }
        }
    }
    if roots.is_empty() {
        if let Some(root) = circle_limit_root(&g, &samples, target, delta, opts.tol)? {
            roots.push(root);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    let Some((&lambda, others)) = roots.split_first() else {
        let (psi_min, psi_max) = bounds_of(&samples);
        return Err(Error::NoSolution {
            psi_target: target,
            psi_min,
            psi_max,
        });
    };

    let equation = NaturalEquation::new(alpha, lambda)?;
    let s_total = equation.arc_length_at_turning(delta)?;
    let e_scaled = equation.scaled_chord(delta, CHORD_TOL)?;
    let e_len = e_scaled[0].hypot(e_scaled[1]) * equation.radius_at_turning(delta);
    let frame = norm.frame;
    let transform = Similarity {
        scale: norm.chord_length / e_len,
        ..frame
    };
    let placed = transform.apply_angle(e_scaled[1].atan2(e_scaled[0]));
    let wanted = angle_of(traversal.chord());
    Ok(FittedSegment {
        equation,
        s_total,
        delta_theta: delta,
        transform,
        reversed,
        residual: wrap_angle(placed - wanted).abs(),
        other_lambdas: others.to_vec(),
        control_point: problem.control_point(),
    })
}

fn bounds_of(samples: &[(f64, f64)]) -> (f64, f64) {
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let lo = samples.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn region_bounds(alpha: f64, delta: f64, grid: &[f64]) -> (f64, f64) {
    scan(alpha, delta, grid).map_or((f64::NAN, f64::NAN), |s| bounds_of(&s))
}

/// Bisection in `ln lambda` on a bracket with `g(lo)` of sign `g_lo`.
fn bisect<G>(g: &G, mut lo: f64, mut hi: f64, g_lo: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let lo_sign = g_lo.signum();
    let mut best = (g_lo.abs(), lo);
    for _ in 0..MAX_BISECTIONS {
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        let gm = g(mid)?;
        if gm.abs() < best.0 {
            best = (gm.abs(), mid);
        }
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 <= 4.0 * f64::EPSILON {
            break;
        }
    }
    // Converged to machine resolution; the evaluated point closest to the root wins.
    Ok(best.1)
}

/// As `lambda -> 0` the segment tends to a circular arc with
/// `psi = delta_theta / 2`. Targets between that limit and the smallest
/// grid value are reached by continuing the scan downward.
fn circle_limit_root<G>(g: &G, samples: &[(f64, f64)], target: f64, delta: f64, tol: f64) -> Result<Option<f64>>
where
    G: Fn(f64) -> Result<f64>,
{
    let Some(&(lambda0, psi0)) = samples.first() else {
        return Ok(None);
    };
    if !(target >= 0.5 * delta - tol && target < psi0) {
        return Ok(None);
    }
    let mut upper = lambda0;
    let mut lambda = lambda0;
    while lambda > 1e-290 {
        lambda *= 0.1;
        let gl = g(lambda)?;
        if gl.abs() <= tol {
            return Ok(Some(lambda));
        }
        if gl < 0.0 {
            return bisect(g, lambda, upper, gl).map(Some);
        }
        upper = lambda;
    }
    Ok(None)
}
