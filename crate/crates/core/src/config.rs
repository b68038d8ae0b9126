//! Central numeric configuration. Every tolerance asserted anywhere in the
//! crate is named here once, so tests and the CLI reference one source of
//! truth.

use serde::{Deserialize, Serialize};

/// Numeric tolerances and exact-mode size caps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max deviation allowed when asserting orthogonality, idempotence,
    /// Parseval and reconstruction identities.
    pub orthogonality: f64,
    /// Relative residual below which a dictionary vector is treated as
    /// dependent during Gram-Schmidt.
    pub rank_cutoff: f64,
    /// Slack added to eigenvalue / singular-value upper bounds.
    pub eigen_slack: f64,
    /// Max deviation for the product-space noise eigenvalue identity.
    pub noise_eigen: f64,
    /// Max deviation between the two influence formulas on product spaces.
    pub influence_identity: f64,
    /// Max deviation of a probability table from summing to one (float mode).
    pub prob_sum: f64,
    /// Largest domain enumerated for degree projections.
    pub degree_cap: usize,
    /// Largest slice enumerated for partition-coset projections.
    pub partition_cap: usize,
    /// Largest `slice_size * n` handled by exact influence computation.
    pub influence_cap: usize,
    /// Largest word length for exact coupling tables.
    pub coupling_n_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orthogonality: 1e-9,
            rank_cutoff: 1e-8,
            eigen_slack: 1e-9,
            noise_eigen: 1e-10,
            influence_identity: 1e-10,
            prob_sum: 1e-12,
            degree_cap: 200_000,
            partition_cap: 10_000,
            influence_cap: 10_000_000,
            coupling_n_cap: 8,
        }
    }
}

/// Thresholds used by the decoding pipeline. The checks treat them as
/// configuration, not as derived constants.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DecodeThresholds {
    /// Low-degree influence threshold on the product side.
    pub tau: f64,
    /// Noisy-influence threshold on full slices (left vertices).
    pub tau_prime: f64,
    /// Noisy-influence threshold on half slices (right vertices).
    pub tau_double_prime: f64,
}

impl Default for DecodeThresholds {
    fn default() -> Self {
        DecodeThresholds {
            tau: 0.1,
            tau_prime: 0.01,
            tau_double_prime: 1e-5,
        }
    }
}
