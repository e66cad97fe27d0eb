//! The log-aesthetic (pseudospiral) family `kappa(s) = e^{-lambda s}` for
//! `alpha = 0` and `(lambda alpha s + 1)^{-1/alpha}` otherwise.
//!
//! Every member starts with unit curvature at `s = 0` and turns
//! counterclockwise. Placement and size come from [`Pose`] plus a uniform
//! scale on [`SampledCurve`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom::{Point2, Pose, Similarity};
use crate::quadrature::DEFAULT_TOL;

/// Values of `alpha` this close to 0 or 1 use the exponential or logarithmic branch.
pub const BRANCH_SNAP: f64 = 1e-12;
/// Fraction of the finite domain (alpha < 0) that may be evaluated.
pub const DOMAIN_GUARD: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Exponential,
    Logarithmic,
    Power,
}

/// Shape parameter `alpha` and scaling factor `lambda > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalEquation {
    alpha: f64,
    lambda: f64,
}

#[derive(Serialize, Deserialize)]
struct EquationRepr {
    alpha: f64,
    lambda: f64,
    /// `None` stands for an unbounded domain.
    #[serde(default)]
    s_max_domain: Option<f64>,
}

impl Serialize for NaturalEquation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let s_max = self.s_max_domain();
        EquationRepr {
            alpha: self.alpha,
            lambda: self.lambda,
            s_max_domain: s_max.is_finite().then_some(s_max),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NaturalEquation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = EquationRepr::deserialize(deserializer)?;
        NaturalEquation::new(repr.alpha, repr.lambda).map_err(serde::de::Error::custom)
    }
}

impl NaturalEquation {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite (got {alpha})")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive and finite (got {lambda})"
            )));
        }
        Ok(NaturalEquation { alpha, lambda })
    }

    pub fn named(name: NamedCurve, lambda: f64) -> Result<Self> {
        Self::new(name.alpha(), lambda)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn branch(&self) -> Branch {
        if self.alpha.abs() < BRANCH_SNAP {
            Branch::Exponential
        } else if (self.alpha - 1.0).abs() < BRANCH_SNAP {
            Branch::Logarithmic
        } else {
            Branch::Power
        }
    }

    /// Supremum of the valid arc length: `-1/(lambda alpha)` for `alpha < 0`, else infinity.
    pub fn s_max_domain(&self) -> f64 {
        if self.alpha < 0.0 && self.branch() == Branch::Power {
            -1.0 / (self.lambda * self.alpha)
        } else {
            f64::INFINITY
        }
    }

    /// Largest arc length accepted by the evaluators.
    pub fn s_limit(&self) -> f64 {
        let s_max = self.s_max_domain();
        if s_max.is_finite() {
            DOMAIN_GUARD * s_max
        } else {
            s_max
        }
    }

    fn check_domain(&self, s: f64) -> Result<()> {
        if s.is_finite() && s >= 0.0 && s <= self.s_limit() {
            Ok(())
        } else {
            Err(Error::DomainExceeded {
                s,
                s_max: self.s_max_domain(),
            })
        }
    }

    /// `1 + lambda alpha s`, the base of the power branch.
    fn base_ln(&self, s: f64) -> f64 {
        (self.lambda * self.alpha * s).ln_1p()
    }

    pub(crate) fn curvature_unchecked(&self, s: f64) -> f64 {
        match self.branch() {
            Branch::Exponential => (-self.lambda * s).exp(),
            Branch::Logarithmic => 1.0 / (1.0 + self.lambda * s),
            Branch::Power => (-self.base_ln(s) / self.alpha).exp(),
        }
    }

    pub(crate) fn turning_unchecked(&self, s: f64) -> f64 {
        let l = self.lambda;
        match self.branch() {
            Branch::Exponential => -(-l * s).exp_m1() / l,
            Branch::Logarithmic => (l * s).ln_1p() / l,
            Branch::Power => {
                let a = self.alpha;
                ((a - 1.0) / a * self.base_ln(s)).exp_m1() / (l * (a - 1.0))
            }
        }
    }

    pub fn curvature(&self, s: f64) -> Result<f64> {
        self.check_domain(s)?;
        Ok(self.curvature_unchecked(s))
    }

    /// `d kappa / ds`, strictly negative on the domain.
    pub fn curvature_derivative(&self, s: f64) -> Result<f64> {
        self.check_domain(s)?;
        let k = self.curvature_unchecked(s);
        Ok(match self.branch() {
            Branch::Exponential => -self.lambda * k,
            _ => -self.lambda * k / (1.0 + self.lambda * self.alpha * s),
        })
    }

    /// Tangent angle `theta(s)`, the integral of curvature from 0.
    pub fn turning_angle(&self, s: f64) -> Result<f64> {
        self.check_domain(s)?;
        Ok(self.turning_unchecked(s))
    }

    /// Supremum of the turning angle over the whole domain:
    /// `1/(lambda (1 - alpha))` for `alpha < 1`, infinite otherwise.
    pub fn theta_sup(&self) -> f64 {
        match self.branch() {
            Branch::Exponential => 1.0 / self.lambda,
            Branch::Logarithmic => f64::INFINITY,
            Branch::Power if self.alpha < 1.0 => 1.0 / (self.lambda * (1.0 - self.alpha)),
            Branch::Power => f64::INFINITY,
        }
    }

    /// Largest turning angle reachable inside the guarded domain.
    pub fn theta_reachable(&self) -> f64 {
        let s_limit = self.s_limit();
        if s_limit.is_finite() {
            self.turning_unchecked(s_limit)
        } else {
            self.theta_sup()
        }
    }

    /// Inverse of [`turning_angle`](Self::turning_angle).
    pub fn arc_length_at_turning(&self, theta: f64) -> Result<f64> {
        let unreachable = || Error::TurningUnreachable {
            delta_theta: theta,
            theta_max: self.theta_reachable(),
        };
        if !(theta >= 0.0) || theta > self.theta_reachable() {
            return Err(unreachable());
        }
        let l = self.lambda;
        let s = match self.branch() {
            Branch::Exponential => -(-l * theta).ln_1p() / l,
            Branch::Logarithmic => (l * theta).exp_m1() / l,
            Branch::Power => {
                let a = self.alpha;
                let m = l * (a - 1.0) * theta;
                if m <= -1.0 {
                    return Err(unreachable());
                }
                (m.ln_1p() * a / (a - 1.0)).exp_m1() / (l * a)
            }
        };
        if !s.is_finite() {
            return Err(unreachable());
        }
        Ok(s.min(self.s_limit()))
    }

    /// Radius of curvature as a function of the turning angle `phi`.
    pub fn radius_at_turning(&self, phi: f64) -> f64 {
        self.radius_ratio(phi, 0.0)
    }

    /// `rho(phi) / rho(phi_ref)`, computed without forming either radius.
    pub(crate) fn radius_ratio(&self, phi: f64, phi_ref: f64) -> f64 {
        self.ratio_by_gap(phi_ref - phi, phi_ref)
    }

    /// `rho(phi_ref - t) / rho(phi_ref)`. Taking the gap `t` directly keeps
    /// it exact and smooth right next to the reference.
    fn ratio_by_gap(&self, t: f64, phi_ref: f64) -> f64 {
        let l = self.lambda;
        match self.branch() {
            Branch::Exponential => {
                let u = 1.0 - l * phi_ref;
                u / (u + l * t)
            }
            Branch::Logarithmic => (-l * t).exp(),
            Branch::Power => {
                let a1 = self.alpha - 1.0;
                let u = 1.0 + l * a1 * phi_ref;
                ((-l * a1 * t / u).ln_1p() / a1).exp()
            }
        }
    }

    /// Closed form of the integral of `ratio_by_gap` over `[t1, t0]`.
    fn ratio_integral(&self, t1: f64, t0: f64, phi_ref: f64) -> f64 {
        let l = self.lambda;
        let dt = t0 - t1;
        match self.branch() {
            Branch::Exponential => {
                let u = 1.0 - l * phi_ref;
                u / l * (l * dt / (u + l * t1)).ln_1p()
            }
            Branch::Logarithmic => (-l * t1).exp() * -(-l * dt).exp_m1() / l,
            Branch::Power => {
                let a1 = self.alpha - 1.0;
                let u = 1.0 + l * a1 * phi_ref;
                let c = -l * a1 / u;
                let p = self.alpha / a1;
                let base = 1.0 + c * t1;
                base.powf(p) / (c * p) * (p * (c * dt / base).ln_1p()).exp_m1()
            }
        }
    }

    /// Integral of `rho(phi) / rho(phi_ref) (cos phi, sin phi)` over
    /// `[phi0, phi1]`, with `tol` relative to the arc length covered.
    ///
    /// The radius ratio can spike next to `phi_ref` when the curvature there
    /// is tiny. Its integral is known in closed form, so only the part
    /// weighted by `exp(-i t) - 1`, which vanishes at the spike, is left to
    /// quadrature.
    pub(crate) fn scaled_increment(&self, phi0: f64, phi1: f64, phi_ref: f64, tol: f64) -> Result<Point2> {
        if phi1 == phi0 {
            return Ok([0.0, 0.0]);
        }
        let (t1, t0) = (phi_ref - phi1, phi_ref - phi0);
        let w = self.ratio_integral(t1, t0, phi_ref);
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::NonFiniteIntegrand { at: phi1 });
        }
        let [x, y] = crate::quadrature::integrate_vec(
            |t| {
                let r = self.ratio_by_gap(t, phi_ref) / w;
                let h = (0.5 * t).sin();
                [-2.0 * h * h * r, -t.sin() * r]
            },
            t1,
            t0,
            tol,
        )?;
        let (re, im) = (1.0 + x.value, y.value);
        let (sin, cos) = phi_ref.sin_cos();
        Ok([w * (re * cos - im * sin), w * (re * sin + im * cos)])
    }

    /// Position increment between turning angles `phi0 <= phi1`, integrating
    /// `rho(phi) (cos phi, sin phi)` instead of the unit tangent over arc length.
    /// Stays well conditioned when the arc length is huge. `tol` is relative
    /// to the arc length between the two angles.
    pub fn position_by_turning(&self, phi0: f64, phi1: f64, tol: f64) -> Result<Point2> {
        let [x, y] = self.scaled_increment(phi0, phi1, phi1, tol)?;
        let r = self.radius_at_turning(phi1);
        Ok([x * r, y * r])
    }

    /// Endpoint after turning `delta`, divided by `rho(delta)`; its direction
    /// is the chord direction and its components never overflow.
    pub(crate) fn scaled_chord(&self, delta: f64, tol: f64) -> Result<Point2> {
        self.scaled_increment(0.0, delta, delta, tol)
    }

    /// Point at arc length `s` for the curve starting at the origin heading +x.
    pub fn evaluate_point(&self, s: f64, tol: f64) -> Result<Point2> {
        self.check_domain(s)?;
        self.integrate_position(0.0, s, tol)
    }

    fn integrate_position(&self, s0: f64, s1: f64, tol: f64) -> Result<Point2> {
        // The quadrature tolerance is relative above unit magnitude.
        let tol = tol / s1.max(1.0);
        let [x, y] = crate::quadrature::integrate_vec(
            |t| {
                let (sin, cos) = self.turning_unchecked(t).sin_cos();
                [cos, sin]
            },
            s0,
            s1,
            tol,
        )?;
        Ok([x.value, y.value])
    }

    /// `n` samples at uniform arc-length stations on `[0, s_end]`, placed at `pose`.
    pub fn sample(&self, s_end: f64, n: usize, pose: Pose) -> Result<SampledCurve> {
        self.sample_with_tol(s_end, n, pose, DEFAULT_TOL)
    }

    pub fn sample_with_tol(&self, s_end: f64, n: usize, pose: Pose, tol: f64) -> Result<SampledCurve> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 samples (got {n})")));
        }
        if !(s_end > 0.0) {
            return Err(Error::DomainExceeded {
                s: s_end,
                s_max: self.s_max_domain(),
            });
        }
        self.check_domain(s_end)?;

        let place = Similarity::from_pose(pose, 1.0);
        let mut samples = Vec::with_capacity(n);
        let mut p = [0.0, 0.0];
        let mut prev = 0.0;
        for i in 0..n {
            let s = if i == n - 1 {
                s_end
            } else {
                s_end * i as f64 / (n - 1) as f64
            };
            if i > 0 {
                let d = self.integrate_position(prev, s, tol)?;
                p[0] += d[0];
                p[1] += d[1];
            }
            prev = s;
            let w = place.apply_point(p);
            samples.push(CurveSample {
                s,
                x: w[0],
                y: w[1],
                theta: place.apply_angle(self.turning_unchecked(s)),
                kappa: self.curvature_unchecked(s),
            });
        }
        Ok(SampledCurve {
            equation: Some(*self),
            pose,
            scale: 1.0,
            samples,
        })
    }
}

/// The named members of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedCurve {
    Euler,
    Nielsen,
    LogSpiral,
    Involute,
    QuasiCircle,
}

impl NamedCurve {
    pub const ALL: [NamedCurve; 5] = [
        NamedCurve::Euler,
        NamedCurve::Nielsen,
        NamedCurve::LogSpiral,
        NamedCurve::Involute,
        NamedCurve::QuasiCircle,
    ];

    pub fn alpha(self) -> f64 {
        match self {
            NamedCurve::Euler => -1.0,
            NamedCurve::Nielsen => 0.0,
            NamedCurve::LogSpiral => 1.0,
            NamedCurve::Involute => 2.0,
            NamedCurve::QuasiCircle => 10.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NamedCurve::Euler => "euler",
            NamedCurve::Nielsen => "nielsen",
            NamedCurve::LogSpiral => "log_spiral",
            NamedCurve::Involute => "involute",
            NamedCurve::QuasiCircle => "quasi_circle",
        }
    }
}

impl fmt::Display for NamedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedCurve::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

pub fn named_curve(name: &str, lambda: f64) -> Result<NaturalEquation> {
    NaturalEquation::named(name.parse()?, lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub kappa: f64,
}

/// Arc-length stamped samples of a planar curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    /// Generating equation, if the curve came from the family.
    pub equation: Option<NaturalEquation>,
    pub pose: Pose,
    pub scale: f64,
    pub samples: Vec<CurveSample>,
}

impl SampledCurve {
    /// Wraps raw samples; `s` must be finite and strictly increasing.
    pub fn from_samples(samples: Vec<CurveSample>) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::EmptyInput("curve has no samples".into()))?;
        for w in samples.windows(2) {
            if !(w[1].s > w[0].s) {
                return Err(Error::InvalidParameter(format!(
                    "arc length must be strictly increasing ({} then {})",
                    w[0].s, w[1].s
                )));
            }
        }
        if samples
            .iter()
            .any(|c| ![c.s, c.x, c.y, c.theta, c.kappa].iter().all(|v| v.is_finite()))
        {
            return Err(Error::InvalidParameter("samples must be finite".into()));
        }
        let pose = Pose::new(first.x, first.y, first.theta);
        Ok(SampledCurve {
            equation: None,
            pose,
            scale: 1.0,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn arc_lengths(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.s).collect()
    }

    pub fn curvatures(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.kappa).collect()
    }

    pub fn points(&self) -> Vec<Point2> {
        self.samples.iter().map(|c| [c.x, c.y]).collect()
    }

    pub fn total_length(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.s - a.s,
            _ => 0.0,
        }
    }

    pub fn polyline_length(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1].x - w[0].x).hypot(w[1].y - w[0].y))
            .sum()
    }

    /// Applies a similarity; arc length scales, curvature scales inversely
    /// and flips sign under a mirror.
    pub fn transformed(&self, t: &Similarity) -> SampledCurve {
        let samples: Vec<CurveSample> = self
            .samples
            .iter()
            .map(|c| {
                let p = t.apply_point([c.x, c.y]);
                CurveSample {
                    s: c.s * t.scale,
                    x: p[0],
                    y: p[1],
                    theta: t.apply_angle(c.theta),
                    kappa: t.apply_curvature(c.kappa),
                }
            })
            .collect();
        let start = t.apply_point([self.pose.x, self.pose.y]);
        SampledCurve {
            equation: self.equation,
            pose: Pose::new(start[0], start[1], t.apply_angle(self.pose.angle)),
            scale: self.scale * t.scale,
            samples,
        }
    }

    /// Same geometry traversed from the last sample to the first.
    pub fn reversed(&self) -> SampledCurve {
        let end = self.samples.last().map_or(0.0, |c| c.s);
        let samples: Vec<CurveSample> = self
            .samples
            .iter()
            .rev()
            .map(|c| CurveSample {
                s: end - c.s,
                x: c.x,
                y: c.y,
                theta: c.theta + std::f64::consts::PI,
                kappa: -c.kappa,
            })
            .collect();
        let pose = samples
            .first()
            .map_or(self.pose, |c| Pose::new(c.x, c.y, c.theta));
        SampledCurve {
            equation: self.equation,
            pose,
            scale: self.scale,
            samples,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eq(a: f64, l: f64) -> NaturalEquation {
        NaturalEquation::new(a, l).unwrap()
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(eq(0.0, 1.0).curvature(0.0).unwrap(), 1.0);
        assert!((eq(-1.0, 0.25).curvature(2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((eq(2.0, 1.0).curvature(3.0).unwrap() - 0.377_964_473_009_227_2).abs() < 1e-12);
    }

    #[test]
    fn unit_curvature_at_start() {
        for a in [-3.0, -1.0, 0.0, 0.3, 1.0, 2.0, 10.0] {
            assert_eq!(eq(a, 1.7).curvature(0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn domain_errors() {
        let e = eq(-1.0, 1.0);
        assert_eq!(e.s_max_domain(), 1.0);
        assert!(matches!(e.curvature(1.0), Err(Error::DomainExceeded { .. })));
        assert!(matches!(e.turning_angle(-0.1), Err(Error::DomainExceeded { .. })));
        assert!(e.curvature(0.999_999).is_ok());
        assert!(eq(2.0, 1.0).s_max_domain().is_infinite());
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(NaturalEquation::new(1.0, 0.0).is_err());
        assert!(NaturalEquation::new(1.0, -2.0).is_err());
        assert!(NaturalEquation::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn turning_examples() {
        assert_eq!(eq(3.0, 2.0).turning_angle(0.0).unwrap(), 0.0);
        let e1 = eq(1.0, 1.0);
        assert!((e1.turning_angle(std::f64::consts::E - 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((eq(-1.0, 0.1).turning_angle(2.0).unwrap() - 1.8).abs() < 1e-14);
    }

    #[test]
    fn branch_snapping_is_continuous() {
        for (base, off) in [(0.0, 5e-13), (1.0, 5e-13), (0.0, 1e-9), (1.0, 1e-9)] {
            let a = eq(base, 0.7).turning_angle(2.3).unwrap();
            let b = eq(base + off, 0.7).turning_angle(2.3).unwrap();
            assert!((a - b).abs() < 1e-8, "{base}+{off}: {a} vs {b}");
        }
    }

    #[test]
    fn turning_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let e = eq(rng.gen_range(-2.0..10.0), rng.gen_range(0.1..5.0));
            let s_hi = e.s_limit().min(20.0);
            let s = rng.gen_range(0.0..s_hi);
            let q = integrate(|t| e.curvature_unchecked(t), 0.0, s, 1e-13).unwrap();
            assert!((q.value - e.turning_angle(s).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn turning_derivative_is_curvature() {
        let h = 1e-6;
        for a in [-1.0, 0.0, 0.5, 1.0, 2.0, 10.0] {
            let e = eq(a, 0.8);
            let s = 0.4;
            let fd = (e.turning_angle(s + h).unwrap() - e.turning_angle(s - h).unwrap()) / (2.0 * h);
            let k = e.curvature(s).unwrap();
            assert!(((fd - k) / k).abs() < 1e-6);
        }
    }

    #[test]
    fn inverse_turning_round_trip() {
        for a in [-1.0, 0.0, 0.25, 1.0, 2.0, 10.0] {
            let e = eq(a, 0.6);
            for s in [0.0, 0.1, 0.9, 1.5] {
                if s > e.s_limit() {
                    continue;
                }
                let th = e.turning_angle(s).unwrap();
                let back = e.arc_length_at_turning(th).unwrap();
                assert!((back - s).abs() < 1e-12 * s.max(1.0), "alpha {a} s {s} back {back}");
            }
        }
        assert!(matches!(
            eq(0.0, 2.0).arc_length_at_turning(1.0),
            Err(Error::TurningUnreachable { .. })
        ));
    }

    #[test]
    fn radius_as_function_of_turning() {
        for a in [-1.0, 0.0, 0.5, 1.0, 3.0] {
            let e = eq(a, 0.9);
            let s = 0.7;
            let th = e.turning_angle(s).unwrap();
            let rho = 1.0 / e.curvature(s).unwrap();
            assert!((e.radius_at_turning(th) - rho).abs() < 1e-12 * rho);
        }
    }

    #[test]
    fn curvature_strictly_decreasing() {
        for a in [-1.0, 0.0, 0.5, 1.0, 2.0, 10.0] {
            let e = eq(a, 0.9);
            let end = e.s_limit().min(10.0) * 0.999;
            let ks: Vec<f64> = (0..2000).map(|i| e.curvature(end * i as f64 / 1999.0).unwrap()).collect();
            assert!(ks.windows(2).all(|w| w[1] < w[0]), "alpha {a}");
            assert!(e.curvature_derivative(0.3).unwrap() < 0.0);
        }
    }

    #[test]
    fn euler_curvature_is_affine() {
        let e = eq(-1.0, 0.37);
        let (s0, s1) = (0.1, 2.0);
        let (k0, k1) = (e.curvature(s0).unwrap(), e.curvature(s1).unwrap());
        let mut worst: f64 = 0.0;
        for i in 0..=500 {
            let s = 2.6 * i as f64 / 500.0;
            let line = k0 + (k1 - k0) * (s - s0) / (s1 - s0);
            worst = worst.max((e.curvature(s).unwrap() - line).abs());
        }
        assert!(worst < 1e-14, "{worst}");
    }

    #[test]
    fn point_at_origin_and_small_arc() {
        let e = eq(2.0, 1.0);
        assert_eq!(e.evaluate_point(0.0, 1e-12).unwrap(), [0.0, 0.0]);
        let p = e.evaluate_point(1e-4, 1e-15).unwrap();
        assert!(((p[0] - 1e-4) / 1e-4).abs() < 0.01);
        assert!(((p[1] - 5e-9) / 5e-9).abs() < 0.01);
    }

    #[test]
    fn log_spiral_point_matches_polar_form() {
        // z(theta) = (e^{(lambda + i) theta} - 1) / (lambda + i).
        let l = 1.0;
        let e = eq(1.0, l);
        let th = e.turning_angle(5.0).unwrap();
        let m = (l * th).exp();
        let (re, im) = (m * th.cos() - 1.0, m * th.sin());
        let d = l * l + 1.0;
        let oracle = [(re * l + im) / d, (im * l - re) / d];
        let p = e.evaluate_point(5.0, 1e-12).unwrap();
        assert!((p[0] - oracle[0]).abs() < 1e-8 && (p[1] - oracle[1]).abs() < 1e-8);
    }

    #[test]
    fn unit_speed() {
        let h = 1e-6;
        for a in [-1.0, 0.0, 2.0] {
            let e = eq(a, 0.5);
            let p0 = e.evaluate_point(0.7 - h, 1e-14).unwrap();
            let p1 = e.evaluate_point(0.7 + h, 1e-14).unwrap();
            let speed = (p1[0] - p0[0]).hypot(p1[1] - p0[1]) / (2.0 * h);
            assert!((speed - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn two_samples_are_endpoints() {
        let pose = Pose::new(1.0, 2.0, 0.5);
        let c = eq(0.5, 1.0).sample(3.0, 2, pose).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!((c.samples[0].x, c.samples[0].y, c.samples[0].theta), (1.0, 2.0, 0.5));
        assert_eq!(c.samples[1].s, 3.0);
    }

    #[test]
    fn sampling_matches_direct_evaluation() {
        let e = eq(-1.0, 0.3);
        let c = e.sample(2.5, 50, Pose::default()).unwrap();
        let last = c.samples.last().unwrap();
        let p = e.evaluate_point(2.5, 1e-12).unwrap();
        assert!((last.x - p[0]).abs() < 1e-11 && (last.y - p[1]).abs() < 1e-11);
    }

    #[test]
    fn polyline_shorter_than_arc_and_converging() {
        let e = eq(-1.0, 1.0);
        let coarse = e.sample(0.9, 10, Pose::default()).unwrap().polyline_length();
        let fine = e.sample(0.9, 10_000, Pose::default()).unwrap().polyline_length();
        assert!(coarse < fine && fine <= 0.9);
        assert!(0.9 - fine < 1e-7);
    }

    #[test]
    fn named_curves() {
        let e = named_curve("euler", 1.0).unwrap();
        assert_eq!((e.alpha(), e.s_max_domain()), (-1.0, 1.0));
        let n = named_curve("nielsen", 2.0).unwrap();
        assert_eq!(n.alpha(), 0.0);
        assert!(n.s_max_domain().is_infinite());
        assert_eq!(named_curve("involute", 1.0).unwrap().alpha(), 2.0);
        assert_eq!(named_curve("log_spiral", 1.0).unwrap().alpha(), 1.0);
        assert_eq!(named_curve("quasi_circle", 1.0).unwrap().alpha(), 10.0);
        assert!(matches!(named_curve("cornu", 1.0), Err(Error::UnknownName(_))));
    }

    #[test]
    fn reversal_and_transform() {
        let c = eq(1.0, 1.0).sample(2.0, 20, Pose::default()).unwrap();
        let r = c.reversed();
        assert_eq!(r.samples[0].s, 0.0);
        assert_eq!((r.samples[0].x, r.samples[0].y), (c.samples[19].x, c.samples[19].y));
        let t = Similarity {
            rotation: 0.3,
            scale: 2.0,
            translation: [1.0, 1.0],
            mirror: true,
        };
        let w = c.transformed(&t);
        assert!((w.total_length() - 4.0).abs() < 1e-15);
        assert!(w.samples[0].kappa < 0.0);
        assert!((w.polyline_length() - 2.0 * c.polyline_length()).abs() < 1e-12);
    }

    #[test]
    fn equation_json() {
        let e = eq(-1.0, 0.5);
        let j = serde_json::to_string(&e).unwrap();
        assert_eq!(j, r#"{"alpha":-1.0,"lambda":0.5,"s_max_domain":2.0}"#);
        let back: NaturalEquation = serde_json::from_str(&j).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::to_string(&eq(1.0, 1.0)).unwrap().contains("null"));
    }
}
