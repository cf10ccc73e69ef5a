//! Exact, desk-scale laboratory for the weak parity problem: guessing the
//! parity of an n-bit string on strictly more than half of all inputs with
//! fewer than n queries.
//!
//! Everything here is built around exhaustive enumeration and exact
//! arithmetic. Truth tables, acceptance profiles, query counts and success
//! fractions are integers or rationals, never floats, so the identities the
//! crate verifies (agreement counts, correlation zeroes, composition laws,
//! worst-case expectations) hold bit-for-bit. Floating point appears only in
//! the quantum statevector simulator and in convergence-ratio reports.
//!
//! Module map:
//! - [`boolfn`] — truth tables and exact complexity measures (degree two
//!   ways, sensitivity, block sensitivity, agreement, parity correlation).
//! - [`dtree`] — decision trees, randomized mixtures, exact acceptance
//!   profiles, exact deterministic query complexity.
//! - [`andor`] — the complete binary AND/OR tree, its randomized evaluator
//!   and the exact worst-case expectation recurrence.
//! - [`weakparity`] — weak parity guessers, block composition, schedules,
//!   random self-reduction and majority amplification.
//! - [`hypercube`] — induced subgraphs of the hypercube, exact and heuristic
//!   minimum-max-degree searches.
//! - [`qsim`] — a minimal phase-oracle statevector simulator: search for OR,
//!   pairwise-XOR kickback, exact parity in ceil(n/2) queries.

pub mod andor;
pub mod boolfn;
pub mod caps;
pub mod dtree;
pub mod error;
pub mod hypercube;
pub mod qsim;
pub mod weakparity;

mod bits;

pub use error::{Error, Result};
