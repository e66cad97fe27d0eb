use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature tolerance unreachable at depth limit {depth} near x = {at}")]
    MaxDepthExceeded { depth: u32, at: f64 },
    #[error("integrand is not finite at x = {at}")]
    NonFiniteIntegrand { at: f64 },
    #[error("arc length {s} outside the valid domain [0, {s_max})")]
    DomainExceeded { s: f64, s_max: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown curve name `{0}` (expected euler, nielsen, log_spiral, involute or quasi_circle)")]
    UnknownName(String),
    #[error("degenerate logarithmic curvature graph: {0}")]
    DegenerateLcg(String),
    #[error("turning angle {delta_theta} unreachable (supremum {theta_max})")]
    TurningUnreachable { delta_theta: f64, theta_max: f64 },
    #[error("no solution: chord angle {psi_target} outside drawable range [{psi_min}, {psi_max}]")]
    NoSolution {
        psi_target: f64,
        psi_min: f64,
        psi_max: f64,
    },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("empty drawable region: no lambda in the grid reaches turning {delta_theta}")]
    EmptyRegion { delta_theta: f64 },
    #[error("quaternion log undefined at the antipodal point (-1, 0, 0, 0)")]
    AntipodalSingularity,
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
}
