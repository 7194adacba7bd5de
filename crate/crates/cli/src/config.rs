//! Run configuration: defaults, config-file parsing, flag overlay.
//!
//! The file format is flat `key = value` text grouped by `[section]`
//! headers; '#' and ';' start comments. Command-line flags override file
//! values, which override the built-in defaults. Every output artifact
//! echoes the effective configuration, so a run is reproducible from its
//! own header.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rough_heston::hawkes::HawkesMicroConfig;
use rough_heston::pricing::lewis_n_steps;
use rough_heston::riccati::RoughHestonParams;

use crate::CliError;

/// Effective settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub rho: f64,
    pub nu: f64,
    pub theta: f64,
    pub v0: f64,
    /// Adams panels per solve; 0 picks a maturity-dependent default.
    pub steps: usize,
    /// Log-strike half-width of the skew difference quotient.
    pub skew_eps: f64,
    pub mu: f64,
    pub beta: f64,
    pub xi: f64,
    pub horizon: f64,
    pub paths: usize,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 0.6,
            lambda: 2.0,
            rho: -0.5,
            nu: 0.05,
            theta: 0.04,
            v0: 0.4,
            steps: 0,
            skew_eps: 1e-3,
            mu: 1.0,
            beta: 1.0,
            xi: 1.0,
            horizon: 50.0,
            paths: 1000,
            seed: 41,
            out_dir: None,
        }
    }
}

/// One echoed configuration entry, typed so the JSON meta block can keep
/// numbers as numbers.
#[derive(Debug, Clone)]
pub enum EchoValue {
    Float(f64),
    Int(u64),
    Text(String),
}

impl fmt::Display for EchoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EchoValue::Float(x) => write!(f, "{x}"),
            EchoValue::Int(n) => write!(f, "{n}"),
            EchoValue::Text(s) => write!(f, "{s}"),
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<RoughHestonParams, CliError> {
        Ok(RoughHestonParams::new(
            self.alpha,
            self.lambda,
            self.rho,
            self.nu,
            self.theta,
            self.v0,
        )?)
    }

    pub fn micro_config(&self) -> Result<HawkesMicroConfig, CliError> {
        Ok(HawkesMicroConfig::new(
            self.alpha,
            self.lambda,
            self.mu,
            self.beta,
            self.xi,
            self.theta,
            self.horizon,
        )?)
    }

    /// Adams panel count for a transform solve at maturity `t`.
    pub fn steps_for(&self, t: f64) -> usize {
        if self.steps > 0 {
            self.steps
        } else {
            lewis_n_steps(t)
        }
    }

    /// Panel count of the Hawkes fixed-point grid.
    pub fn solver_steps(&self) -> usize {
        if self.steps > 0 {
            self.steps
        } else {
            2000
        }
    }

    /// The full configuration in a fixed order, for headers and meta blocks.
    pub fn echo(&self) -> Vec<(&'static str, EchoValue)> {
        vec![
            ("model.alpha", EchoValue::Float(self.alpha)),
            ("model.lambda", EchoValue::Float(self.lambda)),
            ("model.rho", EchoValue::Float(self.rho)),
            ("model.nu", EchoValue::Float(self.nu)),
            ("model.theta", EchoValue::Float(self.theta)),
            ("model.v0", EchoValue::Float(self.v0)),
            ("numerics.steps", EchoValue::Int(self.steps as u64)),
            ("numerics.skew_eps", EchoValue::Float(self.skew_eps)),
            ("hawkes.mu", EchoValue::Float(self.mu)),
            ("hawkes.beta", EchoValue::Float(self.beta)),
            ("hawkes.xi", EchoValue::Float(self.xi)),
            ("hawkes.horizon", EchoValue::Float(self.horizon)),
            ("hawkes.paths", EchoValue::Int(self.paths as u64)),
            ("hawkes.seed", EchoValue::Int(self.seed)),
            (
                "output.dir",
                EchoValue::Text(match &self.out_dir {
                    Some(d) => d.display().to_string(),
                    None => "-".into(),
                }),
            ),
        ]
    }

    /// Reads a config file on top of the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let at = |msg: String| CliError::Usage(format!("{}:{}: {msg}", path.display(), idx + 1));
            let line = match raw.find(['#', ';']) {
                Some(cut) => raw[..cut].trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| at(format!("unterminated section header '{line}'")))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected 'key = value', got '{line}'")))?;
            self.set(&section, key.trim(), value.trim())
                .map_err(|msg| at(msg))?;
        }
        Ok(())
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> Result<(), String> {
        fn float(value: &str) -> Result<f64, String> {
            value
                .parse()
                .map_err(|_| format!("'{value}' is not a number"))
        }
        fn int(value: &str) -> Result<u64, String> {
            value
                .parse()
                .map_err(|_| format!("'{value}' is not a nonnegative integer"))
        }
        match (section, key) {
            ("model", "alpha") => self.alpha = float(value)?,
            ("model", "lambda") => self.lambda = float(value)?,
            ("model", "rho") => self.rho = float(value)?,
            ("model", "nu") => self.nu = float(value)?,
            ("model", "theta") => self.theta = float(value)?,
            ("model", "v0") => self.v0 = float(value)?,
            ("numerics", "steps") => self.steps = int(value)? as usize,
            ("numerics", "skew_eps") => self.skew_eps = float(value)?,
            ("hawkes", "mu") => self.mu = float(value)?,
            ("hawkes", "beta") => self.beta = float(value)?,
            ("hawkes", "xi") => self.xi = float(value)?,
            ("hawkes", "horizon") => self.horizon = float(value)?,
            ("hawkes", "paths") => self.paths = int(value)? as usize,
            ("hawkes", "seed") => self.seed = int(value)?,
            ("output", "dir") => self.out_dir = Some(PathBuf::from(value)),
            _ => {
                return Err(if section.is_empty() {
                    format!("key '{key}' appears before any [section] header")
                } else {
                    format!("unknown key '{section}.{key}'")
                })
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn parse(text: &str) -> Result<RunConfig, CliError> {
        let mut file = tempfile_path();
        write!(file.1, "{text}").unwrap();
        let mut config = RunConfig::default();
        config.apply_file(&file.0)?;
        Ok(config)
    }

    fn tempfile_path() -> (PathBuf, fs::File) {
        use std::sync::atomic::{AtomicUsize, Ordering};
        static COUNTER: AtomicUsize = AtomicUsize::new(0);
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        let dir = std::env::temp_dir();
        let path = dir.join(format!(
            "rough-heston-config-{}-{n}.conf",
            std::process::id()
        ));
        let file = fs::File::create(&path).unwrap();
        (path, file)
    }

    #[test]
    fn sections_comments_and_overrides_parse() {
        let config = parse(
            "# a comment\n\
             [model]\n\
             alpha = 0.7   ; trailing comment\n\
             rho = 0.1\n\
             \n\
             [hawkes]\n\
             seed = 99\n\
             horizon = 25\n",
        )
        .unwrap();
        assert_eq!(config.alpha, 0.7);
        assert_eq!(config.rho, 0.1);
        assert_eq!(config.seed, 99);
        assert_eq!(config.horizon, 25.0);
        assert_eq!(config.lambda, 2.0, "untouched keys keep their defaults");
    }

    #[test]
    fn bad_lines_report_position() {
        for (text, needle) in [
            ("[model]\nalpha == 0.7\n", "is not a number"),
            ("[model]\nwhat = 1\n", "unknown key 'model.what'"),
            ("alpha = 0.7\n", "before any [section]"),
            ("[model\nalpha = 0.7\n", "unterminated section"),
            ("[model]\njust words\n", "expected 'key = value'"),
        ] {
            let err = parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err:?} lacks {needle:?}");
            assert!(err.contains(":2:") || err.contains(":1:"), "{err:?} lacks a line number");
        }
    }

    #[test]
    fn echo_covers_every_field_once() {
        let config = RunConfig::default();
        let keys: Vec<&str> = config.echo().iter().map(|(k, _)| *k).collect();
        assert_eq!(keys.len(), 15);
        let mut dedup = keys.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), keys.len(), "duplicate echo keys");
    }
}
