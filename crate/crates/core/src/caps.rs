//! Size caps for the exponential-time oracles.
//!
//! Every cap bounds an operation whose cost is exponential in the arity.
//! Operations refuse inputs over their cap rather than silently sampling or
//! approximating; callers that want to push further use the `_capped`
//! variants.

use std::sync::OnceLock;

/// Default bound on the arity of any materialized truth table or vertex set.
pub const MAX_ARITY_DEFAULT: u32 = 24;

/// Cap for the exact block-sensitivity search (per-input search over
/// disjoint block families).
pub const BS_CAP: u32 = 12;

/// Cap for the subcube-enumeration degree oracle (3^n subcubes).
pub const SUBCUBE_CAP: u32 = 14;

/// Cap for the exact deterministic query complexity solver (3^n restrictions).
pub const D_CAP: u32 = 12;

/// Default cap for the exhaustive minimum-max-degree subgraph search.
pub const LAMBDA_EXACT_CAP: u32 = 4;

/// Hard ceiling for the exhaustive subgraph search even with symmetry
/// pruning; beyond this the subset space is out of desk-scale reach.
pub const LAMBDA_EXACT_MAX: u32 = 5;

/// Environment variable that overrides [`max_arity`].
pub const MAX_ARITY_ENV: &str = "WEAKPAR_MAX_ARITY";

static MAX_ARITY: OnceLock<u32> = OnceLock::new();

/// Maximum arity accepted by table and vertex-set constructors.
///
/// Reads `WEAKPAR_MAX_ARITY` once per process; defaults to
/// [`MAX_ARITY_DEFAULT`]. Values above 30 are clamped (a 2^30-bit table is
/// already 128 MiB).
pub fn max_arity() -> u32 {
    *MAX_ARITY.get_or_init(|| {
        std::env::var(MAX_ARITY_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map(|v| v.min(30))
            .unwrap_or(MAX_ARITY_DEFAULT)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_max_arity_without_env() {
        // The test process does not set the env var.
        assert_eq!(max_arity(), MAX_ARITY_DEFAULT);
    }
}
