//! Exact-scale laboratory for harmonic analysis on multi-slices.
//!
//! A multi-slice is the set of words in `[m]^n` with a prescribed count of
//! every symbol. This crate builds the objects needed to compare such a
//! slice with its product analogue — couplings, lifting operators, Markov
//! and noise operators, degree and partition decompositions, influence
//! functionals — and exposes numeric checks for the quantitative claims
//! that relate them. Everything runs at desk scale: domains are enumerated
//! exactly, probabilities are kept rational where equality is asserted,
//! and Monte Carlo is used only where enumeration is impossible.
//!
//! The companion CLI crate wires these checks into reproducible suites.

pub mod config;
pub mod coupling;
pub mod domain;
pub mod error;
pub mod func;
pub mod influence;
pub mod linalg;
pub mod operators;
pub mod pcp;
pub mod rngutil;
pub mod stats;

pub use config::Tolerances;
pub use domain::{Domain, MultiSlice, Partition, ProductSpace, Word};
pub use error::Error;
pub use func::RealFunction;
pub use linalg::LinearMap;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
