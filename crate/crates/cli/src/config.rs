//! `key = value` configuration file.

use std::path::PathBuf;

use mcurve::hermite::{DEFAULT_LAMBDA_MAX, DEFAULT_LAMBDA_MIN};
use mcurve::quadrature::DEFAULT_TOL;

pub const OUT_DIR_ENV: &str = "MCURVE_OUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tol: f64,
    pub samples: usize,
    pub out_dir: PathBuf,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: DEFAULT_TOL,
            samples: 500,
            out_dir: PathBuf::from("."),
            lambda_min: DEFAULT_LAMBDA_MIN,
            lambda_max: DEFAULT_LAMBDA_MAX,
        }
    }
}

impl Config {
    /// Blank lines and `#` comments are skipped; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Config, String> {
        let mut cfg = Config::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected `key = value`", no + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| format!("config line {}: `{v}` is not a number", no + 1));
            match key {
                "tol" => cfg.tol = num(value)?,
                "samples" => {
                    cfg.samples = value
                        .parse()
                        .map_err(|_| format!("config line {}: `{value}` is not a count", no + 1))?
                }
                "out_dir" => cfg.out_dir = PathBuf::from(value),
                "lambda_min" => cfg.lambda_min = num(value)?,
                "lambda_max" => cfg.lambda_max = num(value)?,
                other => return Err(format!("config line {}: unknown key `{other}`", no + 1)),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0) {
            return Err(format!("tol must be positive (got {})", self.tol));
        }
        if self.samples < 2 {
            return Err(format!("samples must be at least 2 (got {})", self.samples));
        }
        if !(self.lambda_min > 0.0 && self.lambda_max > self.lambda_min && self.lambda_max.is_finite()) {
            return Err(format!(
                "lambda bounds need 0 < lambda_min < lambda_max (got {}, {})",
                self.lambda_min, self.lambda_max
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let c = Config::parse("# defaults\ntol = 1e-10\nsamples=42\n\nout_dir = /tmp/x # here\nlambda_min = 0.5\nlambda_max = 20\n")
            .unwrap();
        assert_eq!(c.tol, 1e-10);
        assert_eq!(c.samples, 42);
        assert_eq!(c.out_dir, PathBuf::from("/tmp/x"));
        assert_eq!((c.lambda_min, c.lambda_max), (0.5, 20.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Config::parse("tol = -1").is_err());
        assert!(Config::parse("samples = 1").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("just words").is_err());
        assert!(Config::parse("lambda_min = 5\nlambda_max = 1").is_err());
    }
}
