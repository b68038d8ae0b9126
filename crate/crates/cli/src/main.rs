use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mslice_cli::report::{Report, SuiteConfig};
use mslice_cli::suites::{run_suite, SUITES};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "mslice",
    about = "Verification suites for multi-slice analysis at exact scale"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its report.
    Run {
        /// Suite name (see `mslice list`).
        #[arg(long)]
        suite: String,
        /// Master seed for every sampled check.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Largest domain enumerated in exact mode.
        #[arg(long, default_value_t = 200_000)]
        exact_cap: usize,
        /// Output directory for report.json and CSV curves.
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        /// JSON config file; its fields override the flags.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List available suites.
    List,
}

fn main() -> ExitCode {
    match entry() {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn entry() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for s in SUITES {
                println!("{s}");
            }
            Ok(true)
        }
        Command::Run {
            suite,
            seed,
            exact_cap,
            out,
            config,
        } => {
            let mut cfg = SuiteConfig {
                seed,
                exact_cap,
                out: Some(out.clone()),
                ..SuiteConfig::default()
            };
            let mut suite_name = suite;
            if let Some(path) = config {
                let raw = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                let overrides: serde_json::Value =
                    serde_json::from_str(&raw).context("parsing config JSON")?;
                if let Some(s) = overrides.get("seed").and_then(|v| v.as_u64()) {
                    cfg.seed = s;
                }
                if let Some(c) = overrides.get("exact_cap").and_then(|v| v.as_u64()) {
                    cfg.exact_cap = c as usize;
                }
                if let Some(o) = overrides.get("out").and_then(|v| v.as_str()) {
                    cfg.out = Some(PathBuf::from(o));
                }
                if let Some(s) = overrides.get("suite").and_then(|v| v.as_str()) {
                    suite_name = s.to_string();
                }
                if let Some(t) = overrides.get("tolerances") {
                    cfg.tolerances =
                        serde_json::from_value(t.clone()).context("parsing tolerances")?;
                }
            }
            if !SUITES.contains(&suite_name.as_str()) {
                anyhow::bail!(
                    "unknown suite \"{suite_name}\"; available: {}",
                    SUITES.join(", ")
                );
            }
            let started = Instant::now();
            let (checks, csvs) = run_suite(&suite_name, &cfg)?;
            let elapsed = started.elapsed();
            let report = Report::new(&suite_name, cfg.seed, checks);

            let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("reports"));
            let suite_dir = out_dir.join(&suite_name);
            std::fs::create_dir_all(&suite_dir)
                .with_context(|| format!("creating {}", suite_dir.display()))?;
            std::fs::write(suite_dir.join("report.json"), report.to_json())?;
            for csv in &csvs {
                std::fs::write(suite_dir.join(format!("{}.csv", csv.name)), csv.contents())?;
            }
            // wall clock lives outside report.json so reruns stay
            // byte-identical
            std::fs::write(
                suite_dir.join("timings.json"),
                serde_json::json!({
                    "suite": suite_name,
                    "millis": elapsed.as_millis() as u64,
                    "checks": report.checks.len(),
                })
                .to_string(),
            )?;

            for c in &report.checks {
                println!(
                    "{} {}: lhs={} rhs={}",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name,
                    c.lhs,
                    c.rhs
                );
            }
            println!(
                "{}: {}/{} checks passed ({} ms)",
                suite_name,
                report.checks.iter().filter(|c| c.pass).count(),
                report.checks.len(),
                elapsed.as_millis()
            );
            Ok(report.all_pass())
        }
    }
}
