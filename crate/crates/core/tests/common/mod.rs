#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Composite Simpson rule, `panels` rounded up to even.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> [f64; 3] {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        *o = det(mk) / d;
    }
    out
}

/// Algebraic (Kasa) least-squares circle: `(centre, radius)`.
pub fn kasa_fit(points: &[[f64; 2]]) -> ([f64; 2], f64) {
    // x^2 + y^2 + D x + E y + F = 0
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for p in points {
        let row = [p[0], p[1], 1.0];
        let rhs = -(p[0] * p[0] + p[1] * p[1]);
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * rhs;
        }
    }
    let [d, e, f] = solve3(ata, atb);
    let c = [-0.5 * d, -0.5 * e];
    (c, (c[0] * c[0] + c[1] * c[1] - f).sqrt())
}

pub fn max_circle_deviation(points: &[[f64; 2]], c: [f64; 2], r: f64) -> f64 {
    points
        .iter()
        .map(|p| ((p[0] - c[0]).hypot(p[1] - c[1]) - r).abs())
        .fold(0.0, f64::max)
}

use mcurve::hermite::{default_lambda_grid, drawable_region, HermiteProblem};
use rand::Rng;

/// A random problem whose chord angle lies in the scanned drawable region.
pub fn in_region_problem(rng: &mut impl Rng, alpha: f64) -> HermiteProblem {
    loop {
        let delta: f64 = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let region = drawable_region(alpha, delta.abs(), &default_lambda_grid(alpha, delta.abs())).unwrap();
        let psi: f64 = rng.gen_range(0.0..1.0) * delta.abs();
        if psi <= 0.0 || !region.contains(psi) {
            continue;
        }
        let psi = psi * delta.signum();
        let start: f64 = rng.gen_range(-3.0..3.0);
        let len = 10f64.powf(rng.gen_range(-1.0..1.0));
        let p0 = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let p1 = [p0[0] + len * (start + psi).cos(), p0[1] + len * (start + psi).sin()];
        return HermiteProblem::from_angles(p0, p1, start, start + delta, alpha);
    }
}

use mcurve::qi3d::{QiCurveSpec, QuaternionCurve, UnitQuaternion};

pub fn random_rotation(rng: &mut impl Rng, max_angle: f64) -> UnitQuaternion {
    let axis = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    UnitQuaternion::from_axis_angle(axis, rng.gen_range(0.0..max_angle)).unwrap()
}

/// Random QI spec with a quaternion Bezier of the given degree.
pub fn random_qi_spec(rng: &mut impl Rng, degree: usize) -> QiCurveSpec {
    let mut q = vec![random_rotation(rng, std::f64::consts::PI)];
    for _ in 0..degree {
        let step = random_rotation(rng, 1.5);
        q.push(*q.last().unwrap() * step);
    }
    let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.2..1.0)];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    QiCurveSpec::new(
        [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        [v[0] / n, v[1] / n, v[2] / n],
        QuaternionCurve::new(q).unwrap(),
        rng.gen_range(1.0..5.0),
    )
    .unwrap()
}

/// Polyline length of `n` uniform segments, Richardson-extrapolated twice
/// over `n`, `2n`, `4n` (chord error is even in the step).
pub fn richardson_length(spec: &QiCurveSpec, n: usize) -> f64 {
    let poly = |m: usize| -> f64 {
        let s = spec.sample(m + 1, 1e-14).unwrap();
        s.windows(2)
            .map(|w| {
                let d = [0, 1, 2].map(|k| w[1].point[k] - w[0].point[k]);
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
            })
            .sum()
    };
    let (l1, l2, l4) = (poly(n), poly(2 * n), poly(4 * n));
    let (r1, r2) = ((4.0 * l2 - l1) / 3.0, (4.0 * l4 - l2) / 3.0);
    (16.0 * r2 - r1) / 15.0
}
