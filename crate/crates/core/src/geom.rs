//! Planar poses and similarity transforms.

use serde::{Deserialize, Serialize};

pub type Point2 = [f64; 2];

/// Start point and heading of a planar curve.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, counterclockwise from +x.
    pub angle: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, angle: f64) -> Self {
        Pose { x, y, angle }
    }
}

/// `p -> translation + scale * R(rotation) * M * p`, where `M` flips the
/// y axis when `mirror` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub rotation: f64,
    pub scale: f64,
    pub translation: Point2,
    pub mirror: bool,
}

impl Default for Similarity {
    fn default() -> Self {
        Similarity {
            rotation: 0.0,
            scale: 1.0,
            translation: [0.0, 0.0],
            mirror: false,
        }
    }
}

impl Similarity {
    pub fn from_pose(pose: Pose, scale: f64) -> Self {
        Similarity {
            rotation: pose.angle,
            scale,
            translation: [pose.x, pose.y],
            mirror: false,
        }
    }

    pub fn apply_point(&self, p: Point2) -> Point2 {
        let y = if self.mirror { -p[1] } else { p[1] };
        let (s, c) = self.rotation.sin_cos();
        [
            self.translation[0] + self.scale * (c * p[0] - s * y),
            self.translation[1] + self.scale * (s * p[0] + c * y),
        ]
    }

    /// Maps a direction angle.
    pub fn apply_angle(&self, theta: f64) -> f64 {
        let t = if self.mirror { -theta } else { theta };
        t + self.rotation
    }

    /// Maps a signed curvature.
    pub fn apply_curvature(&self, kappa: f64) -> f64 {
        let k = kappa / self.scale;
        if self.mirror {
            -k
        } else {
            k
        }
    }

    /// `self` applied after `inner`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        let inner_rot = if self.mirror { -inner.rotation } else { inner.rotation };
        Similarity {
            rotation: self.rotation + inner_rot,
            scale: self.scale * inner.scale,
            translation: self.apply_point(inner.translation),
            mirror: self.mirror ^ inner.mirror,
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = a % two_pi;
    if r <= -std::f64::consts::PI {
        r += two_pi;
    } else if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}
