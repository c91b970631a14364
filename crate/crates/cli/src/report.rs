//! Suite outcomes and the aggregate verification report.

use serde::Serialize;
use std::time::Duration;

/// Result of one verification suite. Wall time is diagnostic only and is
/// kept out of the serialized report so that identical configurations
/// produce byte-identical output.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub wall: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Aggregate over the suites selected by one `verify` invocation.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub refine_iters: usize,
    pub tol: f64,
    pub suites: Vec<SuiteResult>,
    pub total_cases: usize,
    pub total_failures: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.total_failures == 0
    }
}
