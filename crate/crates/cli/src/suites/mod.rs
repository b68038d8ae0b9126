//! Suite registry: each suite produces a list of checks and optional CSV
//! curves, deterministically for a fixed seed.

pub mod couplings;
pub mod decompositions;
pub mod domains;
pub mod influence;
pub mod lowdeg_invariance;
pub mod multilinear;
pub mod pcp;
pub mod projection_survival;
pub mod spectra;
pub mod truncation;

use crate::report::{Check, Csv, SuiteConfig};
use anyhow::{bail, Result};

pub const SUITES: &[&str] = &[
    "domains",
    "decompositions",
    "couplings",
    "spectra",
    "lowdeg-invariance",
    "truncation",
    "multilinear",
    "influence",
    "projection-survival",
    "pcp",
    "all",
];

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<(Vec<Check>, Vec<Csv>)> {
    match name {
        "domains" => domains::run(cfg),
        "decompositions" => decompositions::run(cfg),
        "couplings" => couplings::run(cfg),
        "spectra" => spectra::run(cfg),
        "lowdeg-invariance" => lowdeg_invariance::run(cfg),
        "truncation" => truncation::run(cfg),
        "multilinear" => multilinear::run(cfg),
        "influence" => influence::run(cfg),
        "projection-survival" => projection_survival::run(cfg),
        "pcp" => pcp::run(cfg),
        "all" => {
            let mut checks = Vec::new();
            let mut csvs = Vec::new();
            for s in SUITES.iter().filter(|&&s| s != "all") {
                let (mut c, mut v) = run_suite(s, cfg)?;
                for check in &mut c {
                    check.name = format!("{s}/{}", check.name);
                }
                for csv in &mut v {
                    csv.name = format!("{s}-{}", csv.name);
                }
                checks.append(&mut c);
                csvs.append(&mut v);
            }
            Ok((checks, csvs))
        }
        other => bail!("unknown suite: {other}"),
    }
}
