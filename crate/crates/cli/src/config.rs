//! Optional key=value configuration file plus the HELIKE_THREADS
//! environment variable. Command-line flags always win; the
//! environment variable only ever sets the thread count.

use std::path::Path;

use helike::optimizer::OptimizerConfig;

#[derive(Debug, Default)]
pub struct Config {
    outer_tol: Option<f64>,
    max_outer_iters: Option<usize>,
    simplex_scale: Option<f64>,
    restarts: Option<u32>,
    seed: Option<u64>,
    threads: Option<usize>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let mut cfg = Config::default();
        if let Some(path) = path {
            let body = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            for (lineno, raw) in body.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| format!("config line {} is not key=value: {raw:?}", lineno + 1))?;
                let (key, value) = (key.trim(), value.trim());
                let bad = |e: std::num::ParseFloatError| {
                    format!("config key {key}: bad value {value:?}: {e}")
                };
                let bad_int =
                    |e: std::num::ParseIntError| format!("config key {key}: bad value {value:?}: {e}");
                match key {
                    "outer_tol" => cfg.outer_tol = Some(value.parse().map_err(bad)?),
                    "max_outer_iters" => {
                        cfg.max_outer_iters = Some(value.parse().map_err(bad_int)?)
                    }
                    "simplex_scale" => cfg.simplex_scale = Some(value.parse().map_err(bad)?),
                    "restarts" => cfg.restarts = Some(value.parse().map_err(bad_int)?),
                    "seed" => cfg.seed = Some(value.parse().map_err(bad_int)?),
                    "threads" => cfg.threads = Some(value.parse().map_err(bad_int)?),
                    other => return Err(format!("unknown config key {other:?}")),
                }
            }
        }
        Ok(cfg)
    }

    /// Fold the file settings into an optimizer configuration.
    pub fn apply(&self, oc: &mut OptimizerConfig) {
        if let Some(v) = self.outer_tol {
            oc.outer_tol = v;
        }
        if let Some(v) = self.max_outer_iters {
            oc.max_outer_iters = v;
        }
        if let Some(v) = self.simplex_scale {
            oc.simplex_scale = v;
        }
        if let Some(v) = self.restarts {
            oc.restarts = v;
        }
        if let Some(v) = self.seed {
            oc.seed = v;
        }
    }

    /// Thread count: flag, then HELIKE_THREADS, then config file, then 1.
    pub fn threads(&self, flag: Option<usize>) -> usize {
        flag.or_else(|| {
            std::env::var("HELIKE_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .or(self.threads)
        .unwrap_or(1)
    }
}
