use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Everything that determines a command's output. Persisted next to
/// catalogue output so an interrupted build can be resumed or checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub tiles: Option<String>,
    pub mode: Option<String>,
    pub f: Option<f64>,
    pub f_grid: Option<(f64, f64, f64)>,
    pub n_max: Option<u64>,
    pub reps: Option<usize>,
    pub stride: Option<u64>,
    pub tol: Option<f64>,
    pub master_seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: String,
    pub version: String,
}

impl RunConfig {
    pub fn new(command: &str, master_seed: u64, workers: usize) -> Self {
        RunConfig {
            command: command.to_string(),
            tiles: None,
            mode: None,
            f: None,
            f_grid: None,
            n_max: None,
            reps: None,
            stride: None,
            tol: None,
            master_seed,
            workers,
            out: None,
            format: "json".into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Whether two configs produce the same records. Worker count and output
    /// path do not affect results.
    pub fn compatible(&self, other: &RunConfig) -> bool {
        let strip = |c: &RunConfig| RunConfig { workers: 0, out: None, format: String::new(), ..c.clone() };
        strip(self) == strip(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_and_ignores_workers() {
        let mut a = RunConfig::new("catalogue", 7, 1);
        a.reps = Some(50);
        let text = serde_json::to_string(&a).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);
        let b = RunConfig { workers: 8, ..a.clone() };
        assert!(a.compatible(&b));
        let c = RunConfig { reps: Some(10), ..a.clone() };
        assert!(!a.compatible(&c));
    }
}
