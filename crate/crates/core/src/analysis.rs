//! Aesthetic measurements: logarithmic curvature graphs (LCG), curvature
//! monotonicity and stress markers.
//!
//! LCG axes are `u = ln rho` and `v = ln(rho |ds/drho|)` with `rho = 1/kappa`.
//! On a log-aesthetic curve the graph is the line `v = alpha u - ln lambda`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudospiral::{NaturalEquation, SampledCurve};

/// A curvature function of arc length with its derivative.
pub trait CurvatureProfile {
    fn curvature(&self, s: f64) -> Result<f64>;
    fn curvature_derivative(&self, s: f64) -> Result<f64>;
}

impl CurvatureProfile for NaturalEquation {
    fn curvature(&self, s: f64) -> Result<f64> {
        NaturalEquation::curvature(self, s)
    }

    fn curvature_derivative(&self, s: f64) -> Result<f64> {
        NaturalEquation::curvature_derivative(self, s)
    }
}

/// A circular arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCurvature(pub f64);

impl CurvatureProfile for ConstantCurvature {
    fn curvature(&self, _s: f64) -> Result<f64> {
        Ok(self.0)
    }

    fn curvature_derivative(&self, _s: f64) -> Result<f64> {
        Ok(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcgReport {
    /// `(u, v)` pairs.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    /// Samples discarded because `drho/ds` vanished there.
    pub dropped: usize,
}

fn fit_line(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let n = points.len() as f64;
    let mu = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut suu, mut suv) = (0.0, 0.0);
    for &(u, v) in points {
        suu += (u - mu) * (u - mu);
        suv += (u - mu) * (v - mv);
    }
    if !(suu > 0.0) {
        return Err(Error::DegenerateLcg("all points share one radius of curvature".into()));
    }
    let slope = suv / suu;
    let intercept = mv - slope * mu;
    let ss: f64 = points
        .iter()
        .map(|&(u, v)| {
            let r = v - (slope * u + intercept);
            r * r
        })
        .sum();
    Ok((slope, intercept, (ss / n).sqrt()))
}

fn report(points: Vec<(f64, f64)>, dropped: usize) -> Result<LcgReport> {
    if points.len() < 3 {
        return Err(Error::DegenerateLcg(format!(
            "only {} usable points ({dropped} dropped)",
            points.len()
        )));
    }
    let (slope, intercept, rms_residual) = fit_line(&points)?;
    Ok(LcgReport {
        points,
        slope,
        intercept,
        rms_residual,
        dropped,
    })
}

/// LCG from the closed-form curvature and its derivative at `n` uniform stations.
pub fn lcg_analytic<P: CurvatureProfile + ?Sized>(
    profile: &P,
    s_start: f64,
    s_end: f64,
    n: usize,
) -> Result<LcgReport> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 stations (got {n})")));
    }
    if !(s_end > s_start) {
        return Err(Error::InvalidParameter(format!(
            "empty arc-length range [{s_start}, {s_end}]"
        )));
    }
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let s = s_start + (s_end - s_start) * i as f64 / (n - 1) as f64;
        let k = profile.curvature(s)?;
        let dk = profile.curvature_derivative(s)?;
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!("curvature must be positive (s = {s})")));
        }
        if dk == 0.0 {
            return Err(Error::DegenerateLcg(format!("drho/ds vanishes at s = {s}")));
        }
        // rho |ds/drho| = kappa / |dkappa/ds|
        points.push((-k.ln(), (k / dk.abs()).ln()));
    }
    report(points, 0)
}

/// Three-point derivative of `y` at `x[i]` from the stencil `x[j..j+3]`.
fn lagrange_derivative(x: &[f64], y: &[f64], j: usize, i: usize) -> f64 {
    let (x0, x1, x2) = (x[j], x[j + 1], x[j + 2]);
    let t = x[i];
    let d0 = (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2));
    let d1 = (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2));
    let d2 = (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1));
    y[j] * d0 + y[j + 1] * d1 + y[j + 2] * d2
}

/// LCG from discrete `(s, kappa)` samples.
///
/// `drho/ds` uses centered three-point differences (one-sided three-point at
/// the ends). Stations where `|drho/ds|` falls below `1e-12` of its largest
/// magnitude are dropped.
pub fn lcg_from_samples(s: &[f64], kappa: &[f64]) -> Result<LcgReport> {
    if s.len() != kappa.len() {
        return Err(Error::InvalidParameter("s and kappa lengths differ".into()));
    }
    if s.len() < 5 {
        return Err(Error::InvalidParameter(format!("need at least 5 samples (got {})", s.len())));
    }
    if s.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("arc length must be strictly increasing".into()));
    }
    if kappa.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return Err(Error::InvalidParameter("curvature must be positive at every sample".into()));
    }
    let rho: Vec<f64> = kappa.iter().map(|k| 1.0 / k).collect();
    let n = s.len();
    let drho: Vec<f64> = (0..n)
        .map(|i| {
            let j = i.saturating_sub(1).min(n - 3);
            lagrange_derivative(s, &rho, j, i)
        })
        .collect();
    let max_d = drho.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let cutoff = 1e-12 * max_d;

    let mut points = Vec::with_capacity(n);
    let mut dropped = 0;
    for i in 0..n {
        let d = drho[i].abs();
        if !(d > cutoff) {
            dropped += 1;
            continue;
        }
        points.push((rho[i].ln(), (rho[i] / d).ln()));
    }
    report(points, dropped)
}

pub fn lcg_from_curve(curve: &SampledCurve) -> Result<LcgReport> {
    lcg_from_samples(&curve.arc_lengths(), &curve.curvatures())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Decreasing,
    Increasing,
    Constant,
    NonMonotone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub is_monotone: bool,
    pub direction: Direction,
    /// `(s, kappa)` at each sample that moved against the established direction.
    pub violations: Vec<(f64, f64)>,
    pub tolerance: f64,
}

/// Default strictness: `1e-12 * max |kappa|`.
pub fn default_monotone_tolerance(kappa: &[f64]) -> f64 {
    1e-12 * kappa.iter().fold(0.0_f64, |m, k| m.max(k.abs()))
}

/// Classifies the curvature sequence. The direction is fixed by the first
/// step that exceeds `tol`; later steps against it are violations.
pub fn check_monotone(s: &[f64], kappa: &[f64], tol: Option<f64>) -> Result<MonotonicityReport> {
    if s.len() != kappa.len() || s.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 samples with matching s and kappa".into(),
        ));
    }
    let tol = tol.unwrap_or_else(|| default_monotone_tolerance(kappa));
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be non-negative (got {tol})")));
    }

    let mut direction = None;
    let mut violations = Vec::new();
    for i in 0..s.len() - 1 {
        let d = kappa[i + 1] - kappa[i];
        match direction {
            None if d > tol => direction = Some(Direction::Increasing),
            None if d < -tol => direction = Some(Direction::Decreasing),
            Some(Direction::Increasing) if d < -tol => violations.push((s[i + 1], kappa[i + 1])),
            Some(Direction::Decreasing) if d > tol => violations.push((s[i + 1], kappa[i + 1])),
            _ => {}
        }
    }
    let direction = match direction {
        None => Direction::Constant,
        Some(_) if !violations.is_empty() => Direction::NonMonotone,
        Some(d) => d,
    };
    Ok(MonotonicityReport {
        is_monotone: violations.is_empty(),
        direction,
        violations,
        tolerance: tol,
    })
}

pub fn check_curve_monotone(curve: &SampledCurve, tol: Option<f64>) -> Result<MonotonicityReport> {
    check_monotone(&curve.arc_lengths(), &curve.curvatures(), tol)
}

/// Where the curve is most strained: peak curvature magnitude and the
/// steepest curvature change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressMarker {
    pub s_at_max_kappa: f64,
    pub kappa_max: f64,
    pub s_at_max_kappa_slope: f64,
    pub max_kappa_slope: f64,
}

const TIE_TOL: f64 = 1e-9;

pub fn stress_marker(curve: &SampledCurve) -> Result<StressMarker> {
    let c = &curve.samples;
    if c.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 samples (got {})", c.len())));
    }
    let mut i_k = 0;
    for (i, smp) in c.iter().enumerate() {
        if smp.kappa.abs() > c[i_k].kappa.abs() {
            i_k = i;
        }
    }
    // Forward differences, attributed to the left sample. Near-equal slopes
    // count as ties and resolve to the smallest s.
    let slopes: Vec<f64> = c
        .windows(2)
        .map(|w| ((w[1].kappa.abs() - w[0].kappa.abs()) / (w[1].s - w[0].s)).abs())
        .collect();
    let max_slope = slopes.iter().fold(0.0_f64, |m, v| m.max(*v));
    let i_d = slopes
        .iter()
        .position(|v| *v >= max_slope * (1.0 - TIE_TOL))
        .unwrap_or(0);
    Ok(StressMarker {
        s_at_max_kappa: c[i_k].s,
        kappa_max: c[i_k].kappa.abs(),
        s_at_max_kappa_slope: c[i_d].s,
        max_kappa_slope: max_slope,
    })
}
