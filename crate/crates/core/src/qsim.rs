//! Minimal statevector simulator for the quantum query model, phase-oracle
//! form: one query maps amplitude i to (-1)^(x_i) times itself. Keeping the
//! register over oracle positions (dimension n, not 2^n) is the smallest
//! faithful way to count queries for search and pairwise-XOR kickback.
//!
//! Claims are verified by exact probability enumeration over the full
//! statevector; sampling exists only for demonstration runs.

use num_complex::Complex64;
use rand::Rng;

use crate::boolfn::InputWord;
use crate::error::{Error, Result};

/// Squared-norm drift tolerated before a state is considered corrupted.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Complex amplitude vector with unit norm.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Uniform superposition over `dim` basis states.
    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0, "state needs at least one basis vector");
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector {
            amps: vec![amp; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Measurement distribution over basis states.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Inversion about the mean amplitude (the search diffusion step).
    pub fn diffuse(&mut self) {
        let mean = self.amps.iter().sum::<Complex64>() / self.amps.len() as f64;
        for a in &mut self.amps {
            *a = 2.0 * mean - *a;
        }
        debug_assert!((self.norm_sq() - 1.0).abs() < NORM_TOLERANCE);
    }

    /// Sample a basis state index from the measurement distribution.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if draw < acc {
                return i;
            }
        }
        self.amps.len() - 1
    }
}

/// Phase oracle over a hidden input; every application counts one query.
#[derive(Debug, Clone)]
pub struct QueryOracle {
    input: InputWord,
    query_count: u64,
}

impl QueryOracle {
    pub fn new(input: InputWord) -> Self {
        QueryOracle {
            input,
            query_count: 0,
        }
    }

    pub fn arity(&self) -> u32 {
        self.input.arity()
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    pub fn reset(&mut self) {
        self.query_count = 0;
    }

    /// Phase query on a state over all n positions: amplitude i picks up
    /// (-1)^(x_i).
    pub fn apply_phase(&mut self, state: &mut StateVector) -> Result<()> {
        if state.dim() != self.arity() as usize {
            return Err(Error::ArityMismatch {
                left: state.dim() as u32,
                right: self.arity(),
            });
        }
        self.query_count += 1;
        for (i, a) in state.amps.iter_mut().enumerate() {
            if self.input.bit(i as u32) {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// Phase query restricted to a superposition over two positions.
    pub fn apply_phase_pair(
        &mut self,
        state: &mut StateVector,
        i: u32,
        j: u32,
    ) -> Result<()> {
        if state.dim() != 2 {
            return Err(Error::InvalidParameter(
                "pair query needs a 2-dimensional state".into(),
            ));
        }
        if i == j {
            return Err(Error::SameIndex(i as u64));
        }
        if i >= self.arity() || j >= self.arity() {
            return Err(Error::VariableOutOfRange {
                var: i.max(j),
                arity: self.arity(),
            });
        }
        self.query_count += 1;
        if self.input.bit(i) {
            state.amps[0] = -state.amps[0];
        }
        if self.input.bit(j) {
            state.amps[1] = -state.amps[1];
        }
        Ok(())
    }

    /// Classical read of one bit, charged as one query.
    pub fn read_bit(&mut self, i: u32) -> Result<bool> {
        if i >= self.arity() {
            return Err(Error::VariableOutOfRange {
                var: i,
                arity: self.arity(),
            });
        }
        self.query_count += 1;
        Ok(self.input.bit(i))
    }
}

/// Iterations drawn per search trial: r uniform in [0, grover_rounds(n)).
pub fn grover_rounds(n: u32) -> u64 {
    (n as f64).sqrt().ceil() as u64
}

/// Number of independent search trials.
pub const GROVER_TRIALS: u64 = 4;

/// Query budget the search must respect: 4 * (ceil(sqrt(n)) + 1), covering
/// the iterations plus one classical verification read per trial.
pub fn grover_query_budget(n: u32) -> u64 {
    GROVER_TRIALS * (grover_rounds(n) + 1)
}

/// Exact per-trial probability that `r` search iterations followed by a
/// measurement land on a verified one-bit of x.
fn trial_success_probability(n: u32, x: u64, r: u64) -> f64 {
    let mut state = StateVector::uniform(n as usize);
    for _ in 0..r {
        for (i, a) in state.amps.iter_mut().enumerate() {
            if (x >> i) & 1 == 1 {
                *a = -*a;
            }
        }
        state.diffuse();
        debug_assert!((state.norm_sq() - 1.0).abs() < NORM_TOLERANCE);
    }
    state
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(i, _)| (x >> i) & 1 == 1)
        .map(|(_, p)| p)
        .sum()
}

/// Exact probability that the randomized-iteration search procedure outputs
/// 1 on input x: the per-trial success averaged over the iteration draw,
/// amplified over the independent trials. Inputs without ones can never
/// verify, so the output there is 0 with certainty.
pub fn grover_or_accept_probability(n: u32, x: u64) -> f64 {
    if x == 0 {
        return 0.0;
    }
    let rounds = grover_rounds(n);
    let per_trial = (0..rounds)
        .map(|r| trial_success_probability(n, x, r))
        .sum::<f64>()
        / rounds as f64;
    1.0 - (1.0 - per_trial).powi(GROVER_TRIALS as i32)
}

/// Exact probability that the search procedure outputs OR(x).
pub fn grover_or_success_probability(n: u32, x: u64) -> f64 {
    if x == 0 {
        1.0
    } else {
        grover_or_accept_probability(n, x)
    }
}

/// Sampled search for OR: per trial, draw an iteration count, run the
/// statevector, measure, and classically verify the measured index. Any
/// verified index ends the run with output 1.
pub fn grover_or<R: Rng + ?Sized>(n: u32, oracle: &mut QueryOracle, rng: &mut R) -> Result<bool> {
    if n == 0 || oracle.arity() != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: oracle.arity(),
        });
    }
    let rounds = grover_rounds(n);
    for _ in 0..GROVER_TRIALS {
        let r = rng.gen_range(0..rounds);
        let mut state = StateVector::uniform(n as usize);
        for _ in 0..r {
            oracle.apply_phase(&mut state)?;
            state.diffuse();
        }
        let measured = state.measure(rng) as u32;
        if oracle.read_bit(measured)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One-query pairwise XOR via phase kickback: prepare (|i> + |j>)/sqrt(2),
/// query once, and read the sign in the Hadamard basis. The outcome is
/// deterministic.
pub fn dj_pair(oracle: &mut QueryOracle, i: u32, j: u32) -> Result<bool> {
    if i == j {
        return Err(Error::SameIndex(i as u64));
    }
    let mut state = StateVector::uniform(2);
    oracle.apply_phase_pair(&mut state, i, j)?;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let plus = (state.amps[0] + state.amps[1]) * inv_sqrt2;
    let minus = (state.amps[0] - state.amps[1]) * inv_sqrt2;
    let p_equal = plus.norm_sqr();
    let p_differ = minus.norm_sqr();
    debug_assert!((p_equal + p_differ - 1.0).abs() < NORM_TOLERANCE);
    Ok(p_differ > p_equal)
}

/// Exact parity in ceil(n/2) queries: one pair query per coordinate pair,
/// plus a classical read of the last bit when n is odd.
pub fn exact_parity_quantum(n: u32, oracle: &mut QueryOracle) -> Result<bool> {
    if n == 0 || oracle.arity() != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: oracle.arity(),
        });
    }
    let mut parity = false;
    let mut i = 0;
    while i + 1 < n {
        parity ^= dj_pair(oracle, i, i + 1)?;
        i += 2;
    }
    if n % 2 == 1 {
        parity ^= oracle.read_bit(n - 1)?;
    }
    Ok(parity)
}
