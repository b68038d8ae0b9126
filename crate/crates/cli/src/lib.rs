//! Verification suites over the core laboratory, exposed as a library so
//! the binary and the integration tests share one implementation.

pub mod report;
pub mod suites;

pub use report::{Check, Report, SuiteConfig};
