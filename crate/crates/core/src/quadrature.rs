//! Adaptive Gauss-Kronrod integration (7-point Gauss / 15-point Kronrod).
//!
//! Panels are bisected globally: the panel with the largest `|G7 - K15|`
//! is split until the summed estimate drops below the requested tolerance.
//! Every curve evaluation in the crate funnels through [`integrate_vec`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Absolute floor applied to every target.
pub const ABS_FLOOR: f64 = 1e-14;
/// Maximum number of bisections applied to any single panel.
pub const MAX_DEPTH: u32 = 50;
const MAX_PANELS: usize = 1 << 16;

// Kronrod abscissae; odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.99145537112081263921,
    0.94910791234275852453,
    0.86486442335976907279,
    0.74153118559939443986,
    0.58608723546769113029,
    0.40584515137739716691,
    0.20778495500789846760,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224964,
    0.063092092629978553291,
    0.10479001032225018384,
    0.14065325971552591875,
    0.16900472663926790283,
    0.19035057806478540991,
    0.20443294007529889241,
    0.20948214108472782801,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.12948496616886969327,
    0.27970539148927666790,
    0.38183005050511894495,
    0.41795918367346938776,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationResult {
    pub value: f64,
    /// Absolute error bound, the sum of per-panel `|G7 - K15|`.
    pub error_estimate: f64,
    pub subdivisions: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    depth: u32,
    kronrod: [f64; N],
    /// Reported error, `|G7 - K15|` floored at the round-off level.
    err: [f64; N],
    /// `|G7 - K15|`, or zero once it is below round-off. Drives refinement.
    live: [f64; N],
    worst: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const N: usize> Eq for Panel<N> {}

impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Largest error first; ties go to the leftmost panel.
        self.worst
            .total_cmp(&other.worst)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn eval_checked<const N: usize, F>(f: &F, x: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> [f64; N],
{
    let v = f(x);
    if v.iter().all(|c| c.is_finite()) {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { at: x })
    }
}

fn gauss_kronrod<const N: usize, F>(f: &F, a: f64, b: f64, depth: u32) -> Result<Panel<N>>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_checked(f, center)?;

    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let mut abs_sum = [0.0; N];
    for c in 0..N {
        kronrod[c] = WGK[7] * fc[c];
        gauss[c] = WG[3] * fc[c];
        abs_sum[c] = WGK[7] * fc[c].abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval_checked(f, center - dx)?;
        let f2 = eval_checked(f, center + dx)?;
        for c in 0..N {
            let sum = f1[c] + f2[c];
            kronrod[c] += WGK[j] * sum;
            abs_sum[c] += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * sum;
            }
        }
    }

    let mut err = [0.0; N];
    let mut live = [0.0; N];
    let mut worst: f64 = 0.0;
    for c in 0..N {
        kronrod[c] *= half;
        gauss[c] *= half;
        let roundoff = 50.0 * f64::EPSILON * abs_sum[c] * half.abs();
        let diff = (kronrod[c] - gauss[c]).abs();
        err[c] = diff.max(roundoff);
        live[c] = if diff > roundoff { diff } else { 0.0 };
        worst = worst.max(live[c]);
    }
    Ok(Panel {
        a,
        b,
        depth,
        kronrod,
        err,
        live,
        worst,
    })
}

/// Integrates an `N`-component function over `[a, b]` with shared panels.
///
/// Each component meets `|value - exact| <= max(tol, tol * |value|)`, floored at
/// [`ABS_FLOOR`].
pub fn integrate_vec<const N: usize, F>(f: F, a: f64, b: f64, tol: f64) -> Result<[IntegrationResult; N]>
where
    F: Fn(f64) -> [f64; N],
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidParameter(format!(
            "integration bounds must be finite with a <= b (got [{a}, {b}])"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive (got {tol})")));
    }
    if a == b {
        return Ok([IntegrationResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 1,
        }; N]);
    }

    let first = gauss_kronrod(&f, a, b, 0)?;
    let mut value = first.kronrod;
    let mut live = first.live;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        // Running sums pick the moment; the exact sums confirm it.
        if (0..N).all(|c| live[c] <= target(tol, value[c])) {
            let mut panels = std::mem::take(&mut heap).into_vec();
            // Sum left to right so the result does not depend on heap layout.
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            let mut out = [IntegrationResult {
                value: 0.0,
                error_estimate: 0.0,
                subdivisions: panels.len(),
            }; N];
            for c in 0..N {
                out[c].value = panels.iter().map(|p| p.kronrod[c]).sum();
                out[c].error_estimate = panels.iter().map(|p| p.err[c]).sum();
                live[c] = panels.iter().map(|p| p.live[c]).sum();
                value[c] = out[c].value;
            }
            if (0..N).all(|c| live[c] <= target(tol, value[c])) {
                return Ok(out);
            }
            heap = panels.into_iter().collect();
        }

        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= MAX_DEPTH || heap.len() + 2 > MAX_PANELS {
            return Err(Error::MaxDepthExceeded {
                depth: worst.depth,
                at: 0.5 * (worst.a + worst.b),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&f, worst.a, mid, worst.depth + 1)?;
        let right = gauss_kronrod(&f, mid, worst.b, worst.depth + 1)?;
        for c in 0..N {
            value[c] += left.kronrod[c] + right.kronrod[c] - worst.kronrod[c];
            live[c] += left.live[c] + right.live[c] - worst.live[c];
        }
        heap.push(left);
        heap.push(right);
    }
}

fn target(tol: f64, value: f64) -> f64 {
    (tol * value.abs().max(1.0)).max(ABS_FLOOR)
}

/// Integrates a scalar function over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    let [r] = integrate_vec(|x| [f(x)], a, b, tol)?;
    Ok(r)
}

/// Componentwise integration of a planar vector field, sharing subdivision.
pub fn integrate_vector2<FX, FY>(
    fx: FX,
    fy: FY,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(IntegrationResult, IntegrationResult)>
where
    FX: Fn(f64) -> f64,
    FY: Fn(f64) -> f64,
{
    let [x, y] = integrate_vec(|t| [fx(t), fy(t)], a, b, tol)?;
    Ok((x, y))
}
