//! Report schema and suite configuration. Reports are deterministic for a
//! fixed (suite, seed, config); wall-clock timings are written to a
//! separate sidecar so reruns stay byte-identical.

use mslice_core::Tolerances;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// What mathematical statement the check verifies.
    pub claim: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Check {
    pub fn bound(name: &str, claim: &str, lhs: f64, rhs: f64) -> Check {
        Check {
            name: name.into(),
            claim: claim.into(),
            lhs,
            rhs,
            pass: lhs <= rhs,
        }
    }

    pub fn flag(name: &str, claim: &str, pass: bool) -> Check {
        Check {
            name: name.into(),
            claim: claim.into(),
            lhs: if pass { 1.0 } else { 0.0 },
            rhs: 1.0,
            pass,
        }
    }

    pub fn close(name: &str, claim: &str, lhs: f64, rhs: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            claim: claim.into(),
            lhs,
            rhs,
            pass: (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, seed: u64, checks: Vec<Check>) -> Report {
        Report {
            schema: "1".into(),
            suite: suite.into(),
            seed,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Configuration shared by every suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub exact_cap: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "Tolerances::default")]
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            exact_cap: 200_000,
            out: None,
            tolerances: Tolerances::default(),
        }
    }
}

/// A CSV table destined for the output directory.
#[derive(Debug, Clone)]
pub struct Csv {
    pub name: String,
    pub header: String,
    pub rows: Vec<String>,
}

impl Csv {
    pub fn contents(&self) -> String {
        let mut out = self.header.clone();
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}
