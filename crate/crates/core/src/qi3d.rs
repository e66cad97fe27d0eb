//! Unit quaternion integral (QI) curves.
//!
//! A QI curve is `C(s) = P0 + integral_0^s q(u) v0 q(u)^-1 du`: the tangent
//! is a fixed unit vector carried around by a unit quaternion curve, so the
//! result is parameterized by arc length. The quaternion curve here is the
//! cumulative-basis Bezier form
//! `q(t) = q0 * prod_i exp(omega_i * cumB_i(t))`, `omega_i = log(q_{i-1}^-1 q_i)`.

use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate_vec;

pub type Vec3 = [f64; 3];

fn norm3(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Normalizes `(w, x, y, z)`; fails on zero or non-finite input.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "quaternion ({w}, {x}, {y}, {z}) cannot be normalized"
            )));
        }
        Ok(UnitQuaternion {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Rotation by `angle` about `axis`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self> {
        let n = norm3(axis);
        if !(n > 0.0) {
            return Err(Error::InvalidParameter("rotation axis must be nonzero".into()));
        }
        let h = 0.5 * angle / n;
        Ok(q_exp([axis[0] * h, axis[1] * h, axis[2] * h]))
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn renormalized(self) -> Self {
        let n = self.norm();
        UnitQuaternion {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    pub fn dot(&self, o: &UnitQuaternion) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// The inverse of a unit quaternion.
    pub fn conjugate(&self) -> Self {
        UnitQuaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// `q v q^-1`.
    pub fn rotate(&self, v: Vec3) -> Vec3 {
        let u = [self.x, self.y, self.z];
        let w = self.w;
        // v + 2 u x (u x v + w v)
        let c1 = [
            u[1] * v[2] - u[2] * v[1] + w * v[0],
            u[2] * v[0] - u[0] * v[2] + w * v[1],
            u[0] * v[1] - u[1] * v[0] + w * v[2],
        ];
        [
            v[0] + 2.0 * (u[1] * c1[2] - u[2] * c1[1]),
            v[1] + 2.0 * (u[2] * c1[0] - u[0] * c1[2]),
            v[2] + 2.0 * (u[0] * c1[1] - u[1] * c1[0]),
        ]
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, r: UnitQuaternion) -> UnitQuaternion {
        let l = self;
        UnitQuaternion {
            w: l.w * r.w - l.x * r.x - l.y * r.y - l.z * r.z,
            x: l.w * r.x + l.x * r.w + l.y * r.z - l.z * r.y,
            y: l.w * r.y - l.x * r.z + l.y * r.w + l.z * r.x,
            z: l.w * r.z + l.x * r.y - l.y * r.x + l.z * r.w,
        }
        .renormalized()
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;

    fn neg(self) -> UnitQuaternion {
        UnitQuaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// `(cos |v|, sin |v| v/|v|)`; rotates by `2|v|` about `v`.
pub fn q_exp(v: Vec3) -> UnitQuaternion {
    let th = norm3(v);
    if th == 0.0 {
        return UnitQuaternion::IDENTITY;
    }
    let (s, c) = th.sin_cos();
    let k = s / th;
    UnitQuaternion {
        w: c,
        x: k * v[0],
        y: k * v[1],
        z: k * v[2],
    }
    .renormalized()
}

/// Principal logarithm, `|log q| <= pi`.
pub fn q_log(q: UnitQuaternion) -> Result<Vec3> {
    let vn = norm3([q.x, q.y, q.z]);
    if vn == 0.0 {
        return if q.w > 0.0 {
            Ok([0.0; 3])
        } else {
            Err(Error::AntipodalSingularity)
        };
    }
    let k = vn.atan2(q.w) / vn;
    Ok([k * q.x, k * q.y, k * q.z])
}

/// `sum_{j=i..n} C(n, j) t^j (1-t)^(n-j)`.
pub fn cumulative_bernstein(n: usize, i: usize, t: f64) -> f64 {
    if i == 0 {
        return 1.0;
    }
    if i > n {
        return 0.0;
    }
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 0..=n {
        if j > 0 {
            binom = binom * (n - j + 1) as f64 / j as f64;
        }
        if j >= i {
            sum += binom * t.powi(j as i32) * (1.0 - t).powi((n - j) as i32);
        }
    }
    sum
}

/// Cumulative-basis quaternion Bezier curve on `t in [0, 1]`.
///
/// Controls are stored on a consistent hemisphere: each is negated if its
/// dot product with its predecessor is negative, so every segment takes the
/// shorter arc.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct QuaternionCurve {
    controls: Vec<UnitQuaternion>,
    #[serde(skip)]
    omegas: Vec<Vec3>,
}

impl<'de> Deserialize<'de> for QuaternionCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<UnitQuaternion>::deserialize(d)?;
        let mut controls = Vec::with_capacity(raw.len());
        for q in raw {
            controls.push(UnitQuaternion::new(q.w, q.x, q.y, q.z).map_err(serde::de::Error::custom)?);
        }
        QuaternionCurve::new(controls).map_err(serde::de::Error::custom)
    }
}

impl QuaternionCurve {
    pub fn new(controls: Vec<UnitQuaternion>) -> Result<Self> {
        if controls.is_empty() {
            return Err(Error::EmptyInput("quaternion curve needs at least one control".into()));
        }
        let mut fixed: Vec<UnitQuaternion> = Vec::with_capacity(controls.len());
        for q in controls {
            if (q.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter("controls must be unit quaternions".into()));
            }
            let q = q.renormalized();
            let q = match fixed.last() {
                Some(prev) if prev.dot(&q) < 0.0 => -q,
                _ => q,
            };
            fixed.push(q);
        }
        let omegas = fixed
            .windows(2)
            .map(|w| q_log(w[0].conjugate() * w[1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuaternionCurve {
            controls: fixed,
            omegas,
        })
    }

    pub fn constant(q: UnitQuaternion) -> Self {
        QuaternionCurve::new(vec![q]).expect("single unit control")
    }

    pub fn degree(&self) -> usize {
        self.controls.len() - 1
    }

    pub fn controls(&self) -> &[UnitQuaternion] {
        &self.controls
    }

    pub fn eval(&self, t: f64) -> Result<UnitQuaternion> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("curve parameter {t} outside [0, 1]")));
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> UnitQuaternion {
        let n = self.degree();
        if t == 0.0 {
            return self.controls[0];
        }
        if t == 1.0 {
            return self.controls[n];
        }
        let mut q = self.controls[0];
        for (k, w) in self.omegas.iter().enumerate() {
            let b = cumulative_bernstein(n, k + 1, t);
            q = q * q_exp([w[0] * b, w[1] * b, w[2] * b]);
        }
        q
    }

    /// Every control conjugated by `r`, i.e. `r q r^-1`.
    pub fn conjugated_by(&self, r: UnitQuaternion) -> Result<Self> {
        QuaternionCurve::new(self.controls.iter().map(|q| r * *q * r.conjugate()).collect())
    }
}

/// Start point, reference tangent, orientation curve and length of a QI curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QiSpecRepr")]
pub struct QiCurveSpec {
    pub p0: Vec3,
    pub v0: Vec3,
    pub qcurve: QuaternionCurve,
    pub s_total: f64,
}

#[derive(Deserialize)]
struct QiSpecRepr {
    p0: Vec3,
    v0: Vec3,
    qcurve: QuaternionCurve,
    s_total: f64,
}

impl TryFrom<QiSpecRepr> for QiCurveSpec {
    type Error = Error;

    fn try_from(r: QiSpecRepr) -> Result<Self> {
        QiCurveSpec::new(r.p0, r.v0, r.qcurve, r.s_total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QiSample {
    pub s: f64,
    pub point: Vec3,
    pub tangent: Vec3,
}

impl QiCurveSpec {
    pub fn new(p0: Vec3, v0: Vec3, qcurve: QuaternionCurve, s_total: f64) -> Result<Self> {
        if !p0.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("p0 must be finite".into()));
        }
        let n = norm3(v0);
        if !((n - 1.0).abs() <= 1e-9) {
            return Err(Error::InvalidParameter(format!("v0 must be a unit vector (|v0| = {n})")));
        }
        if !(s_total > 0.0 && s_total.is_finite()) {
            return Err(Error::InvalidParameter(format!("s_total must be positive (got {s_total})")));
        }
        Ok(QiCurveSpec {
            p0,
            v0: [v0[0] / n, v0[1] / n, v0[2] / n],
            qcurve,
            s_total,
        })
    }

    fn check(&self, s: f64) -> Result<()> {
        if s >= 0.0 && s <= self.s_total {
            Ok(())
        } else {
            Err(Error::DomainExceeded { s, s_max: self.s_total })
        }
    }

    fn tangent_unchecked(&self, s: f64) -> Vec3 {
        let t = (s / self.s_total).clamp(0.0, 1.0);
        self.qcurve.eval_unchecked(t).rotate(self.v0)
    }

    pub fn tangent(&self, s: f64) -> Result<Vec3> {
        self.check(s)?;
        Ok(self.tangent_unchecked(s))
    }

    fn displacement(&self, s0: f64, s1: f64, tol: f64) -> Result<Vec3> {
        let tol = tol / s1.max(1.0);
        let r = integrate_vec(|u| self.tangent_unchecked(u), s0, s1, tol)?;
        Ok([r[0].value, r[1].value, r[2].value])
    }

    pub fn point(&self, s: f64, tol: f64) -> Result<Vec3> {
        self.check(s)?;
        let d = self.displacement(0.0, s, tol)?;
        Ok([self.p0[0] + d[0], self.p0[1] + d[1], self.p0[2] + d[2]])
    }

    /// Point and unit tangent at `s`.
    pub fn frame(&self, s: f64, tol: f64) -> Result<(Vec3, Vec3)> {
        Ok((self.point(s, tol)?, self.tangent(s)?))
    }

    /// `n` samples at uniform arc length, integrated station to station.
    pub fn sample(&self, n: usize, tol: f64) -> Result<Vec<QiSample>> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 samples (got {n})")));
        }
        let mut out = Vec::with_capacity(n);
        let mut p = self.p0;
        let mut prev = 0.0;
        for i in 0..n {
            let s = if i == n - 1 {
                self.s_total
            } else {
                self.s_total * i as f64 / (n - 1) as f64
            };
            if i > 0 {
                let d = self.displacement(prev, s, tol)?;
                for k in 0..3 {
                    p[k] += d[k];
                }
            }
            prev = s;
            out.push(QiSample {
                s,
                point: p,
                tangent: self.tangent_unchecked(s),
            });
        }
        Ok(out)
    }
}

/// `C(s)` of a QI curve.
pub fn qi_point(spec: &QiCurveSpec, s: f64, tol: f64) -> Result<Vec3> {
    spec.point(s, tol)
}

pub fn qi_frame(spec: &QiCurveSpec, s: f64, tol: f64) -> Result<(Vec3, Vec3)> {
    spec.frame(s, tol)
}
