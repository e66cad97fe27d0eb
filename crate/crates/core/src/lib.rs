//! Curves with monotone curvature.
//!
//! The crate evaluates the log-aesthetic (pseudospiral) family given by its
//! natural equation, measures it through logarithmic curvature graphs and
//! monotonicity checks, solves two-point G1 Hermite problems against it,
//! builds unit quaternion integral curves in 3D, and writes SVG and CSV.

pub mod analysis;
pub mod csvio;
pub mod error;
pub mod geom;
pub mod hermite;
pub mod pseudospiral;
pub mod qi3d;
pub mod quadrature;
pub mod render;

pub use error::{Error, Result};
pub use geom::{Pose, Similarity};
pub use pseudospiral::{named_curve, CurveSample, NamedCurve, NaturalEquation, SampledCurve};
