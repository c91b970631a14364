//! Library backing the `normquot` binary: run configuration, file
//! ingestion, and the reproducible verification suites.

pub mod io;
pub mod report;
pub mod suites;

/// Knobs shared by every randomized command. Suites derive their streams
/// from `seed`, so identical configurations produce identical reports.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub refine_iters: usize,
    pub tol: f64,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            samples: 10_000,
            refine_iters: 64,
            tol: 1e-9,
            threads: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(format!("tol must be positive, got {}", self.tol));
        }
        if self.threads == 0 {
            return Err("threads must be at least 1".into());
        }
        Ok(())
    }
}
