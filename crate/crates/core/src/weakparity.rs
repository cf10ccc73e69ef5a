//! Guessing parity on more than half of all inputs.
//!
//! A guesser is a total Boolean function used as the output rule of a
//! weak-parity algorithm; its agreement count with parity is the whole
//! story, so every verdict here is an exact counting statement. The module
//! provides the two minimal-bias guessers (OR and the alternating AND/OR
//! tree, negated at odd depth), block composition that trades bias for
//! arity at exactly k input queries per inner query, schedules targeting a
//! requested bias, random self-reduction that spreads a global agreement
//! fraction uniformly over every input, and exact majority amplification.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::andor;
use crate::boolfn::{InputWord, TruthTable};
use crate::caps;
use crate::error::{Error, Result};

/// Which minimal guesser family backs an algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Or,
    AndOr,
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flavor::Or => write!(f, "or"),
            Flavor::AndOr => write!(f, "andor"),
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Constant(bool),
    Or,
    Parity,
    AndOr { depth: u32 },
    Table(TruthTable),
    Composed { inner: Box<Guesser>, block_size: u32 },
}

/// A total function with query accounting, used as a parity-guessing rule.
#[derive(Debug, Clone)]
pub struct Guesser {
    arity: u32,
    kind: Kind,
    negate: bool,
    label: String,
    worst_case_queries: u64,
    expected_queries_worst_input: Option<BigRational>,
}

impl Guesser {
    pub fn constant(arity: u32, value: bool) -> Result<Self> {
        check_eval_arity(arity)?;
        Ok(Guesser {
            arity,
            kind: Kind::Constant(value),
            negate: false,
            label: format!("const{}", value as u8),
            worst_case_queries: 0,
            expected_queries_worst_input: Some(BigRational::zero()),
        })
    }

    pub fn or_rule(arity: u32) -> Result<Self> {
        check_eval_arity(arity)?;
        if arity == 0 {
            return Err(Error::InvalidParameter("OR needs at least one bit".into()));
        }
        Ok(Guesser {
            arity,
            kind: Kind::Or,
            negate: false,
            label: "or".into(),
            worst_case_queries: arity as u64,
            expected_queries_worst_input: None,
        })
    }

    /// Exact parity itself; the zero-bias reference guesser.
    pub fn parity_rule(arity: u32) -> Result<Self> {
        check_eval_arity(arity)?;
        Ok(Guesser {
            arity,
            kind: Kind::Parity,
            negate: false,
            label: "parity".into(),
            worst_case_queries: arity as u64,
            expected_queries_worst_input: Some(BigRational::from_integer(BigInt::from(arity))),
        })
    }

    /// Arbitrary total function as a guesser; reads every bit in the worst
    /// case.
    pub fn from_table(table: TruthTable, label: impl Into<String>) -> Self {
        let arity = table.arity();
        Guesser {
            arity,
            kind: Kind::Table(table),
            negate: false,
            label: label.into(),
            worst_case_queries: arity as u64,
            expected_queries_worst_input: None,
        }
    }

    /// Pointwise negation of the same rule at the same query cost.
    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self.label = if let Some(inner) = self.label.strip_prefix("not(") {
            inner.trim_end_matches(')').to_string()
        } else {
            format!("not({})", self.label)
        };
        self
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Queries of the deterministic evaluation, maximized over inputs.
    pub fn worst_case_queries(&self) -> u64 {
        self.worst_case_queries
    }

    /// For rules with a randomized zero-error evaluator: its exact expected
    /// query count on the worst input.
    pub fn expected_queries_worst_input(&self) -> Option<&BigRational> {
        self.expected_queries_worst_input.as_ref()
    }

    /// Evaluate on an input word (bit i of x is the (i+1)-th variable).
    pub fn eval(&self, x: u64) -> bool {
        debug_assert!(self.arity == 64 || x >> self.arity == 0);
        let raw = match &self.kind {
            Kind::Constant(b) => *b,
            Kind::Or => x != 0,
            Kind::Parity => x.count_ones() % 2 == 1,
            Kind::AndOr { depth } => andor::value_of_word(*depth, x),
            Kind::Table(t) => t.get(x),
            Kind::Composed { inner, block_size } => {
                let k = *block_size as u64;
                let m = inner.arity() as u64;
                let mut z = 0u64;
                for j in 0..m {
                    let start = j * k;
                    let end = if j == m - 1 { self.arity as u64 } else { start + k };
                    let width = end - start;
                    let chunk = if width == 64 {
                        x
                    } else {
                        (x >> start) & ((1u64 << width) - 1)
                    };
                    if chunk.count_ones() % 2 == 1 {
                        z |= 1u64 << j;
                    }
                }
                inner.eval(z)
            }
        };
        raw ^ self.negate
    }

    /// Materialize as a truth table; requires the arity to be within the
    /// table cap.
    pub fn truth_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.arity, |x| self.eval(x))
    }

    /// Exact number of inputs where the guess equals the parity.
    pub fn parity_agreement(&self) -> Result<u64> {
        let max = caps::max_arity();
        if self.arity > max {
            return Err(Error::ArityTooLarge {
                arity: self.arity,
                max,
            });
        }
        let mut count = 0u64;
        for x in 0..(1u64 << self.arity) {
            if self.eval(x) == (x.count_ones() % 2 == 1) {
                count += 1;
            }
        }
        Ok(count)
    }
}

fn check_eval_arity(arity: u32) -> Result<()> {
    if arity > 64 {
        return Err(Error::ArityTooLarge { arity, max: 64 });
    }
    Ok(())
}

/// The minimal-bias guesser of the requested flavor: OR as-is, or the
/// depth-d AND/OR tree, negated when d is odd so that the agreement with
/// parity always lands at 2^(n-1)+1.
pub fn weak_guesser_minimal_eps(n: u32, flavor: Flavor) -> Result<Guesser> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "weak guessers need at least one bit".into(),
        ));
    }
    match flavor {
        Flavor::Or => Guesser::or_rule(n),
        Flavor::AndOr => {
            if !n.is_power_of_two() {
                return Err(Error::NotPowerOfTwo { arity: n });
            }
            check_eval_arity(n)?;
            let depth = n.trailing_zeros();
            let table = andor::worst_case_table(depth)?;
            let g = Guesser {
                arity: n,
                kind: Kind::AndOr { depth },
                negate: false,
                label: format!("andor(d={depth})"),
                worst_case_queries: n as u64,
                expected_queries_worst_input: Some(table.row(depth).worst().clone()),
            };
            Ok(if depth % 2 == 1 { g.negated() } else { g })
        }
    }
}

/// Composition over uniform blocks: the new guesser on k*m bits feeds the
/// parity of each k-bit block to the inner rule. Every inner query costs
/// exactly k input queries.
pub fn compose_blocks(inner: Guesser, block_size: u32) -> Result<Guesser> {
    if block_size == 0 {
        return Err(Error::InvalidParameter("block size must be positive".into()));
    }
    let outer = inner
        .arity()
        .checked_mul(block_size)
        .filter(|&n| n <= 64)
        .ok_or(Error::ArityTooLarge {
            arity: u32::MAX,
            max: 64,
        })?;
    compose_onto(inner, block_size, outer)
}

/// Composition onto an explicit outer arity: the first m-1 blocks have
/// exactly `block_size` bits and the last block absorbs the remainder.
pub fn compose_onto(inner: Guesser, block_size: u32, outer_arity: u32) -> Result<Guesser> {
    check_eval_arity(outer_arity)?;
    let m = inner.arity();
    let k = block_size;
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter(
            "composition needs positive inner arity and block size".into(),
        ));
    }
    // Last block spans [(m-1)k, outer); it must hold at least k bits.
    if (m - 1) * k + k > outer_arity {
        return Err(Error::InvalidParameter(format!(
            "outer arity {outer_arity} too small for {m} blocks of {k}"
        )));
    }
    let remainder = (outer_arity - m * k) as u64;
    let worst = if inner.worst_case_queries == 0 {
        0
    } else {
        inner.worst_case_queries * k as u64 + remainder
    };
    let expected = if remainder == 0 {
        inner
            .expected_queries_worst_input
            .as_ref()
            .map(|e| e * BigRational::from_integer(BigInt::from(k)))
    } else {
        None
    };
    let label = format!("compose(k={k}, inner={})", inner.label);
    Ok(Guesser {
        arity: outer_arity,
        kind: Kind::Composed {
            inner: Box::new(inner),
            block_size: k,
        },
        negate: false,
        label,
        worst_case_queries: worst,
        expected_queries_worst_input: expected,
    })
}

/// How to reach a requested bias on N bits with one of the minimal guessers.
#[derive(Debug, Clone)]
pub struct CompositionSchedule {
    pub outer_arity: u32,
    pub inner_arity: u32,
    pub block_size: u32,
    pub flavor: Flavor,
    pub requested_eps: BigRational,
    /// The bias the schedule certifiably achieves, 2^(-inner_arity).
    pub achieved_eps: BigRational,
}

/// Pick the inner arity m as the smallest with 2^(-m) <= eps (rounded up to
/// a power of two for the AND/OR flavor) and split the N bits into m blocks
/// of floor(N/m), the last absorbing any remainder.
pub fn schedule_for(n: u32, eps: &BigRational, flavor: Flavor) -> Result<CompositionSchedule> {
    if n == 0 {
        return Err(Error::InvalidParameter("schedule needs n >= 1".into()));
    }
    let floor = pow2_eps(n);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if eps < &floor || eps > &half {
        return Err(Error::EpsOutOfRange {
            eps: eps.to_string(),
            lo: floor.to_string(),
            hi: half.to_string(),
        });
    }
    let mut m = ceil_log2_inverse(eps).max(1);
    if flavor == Flavor::AndOr {
        m = m.next_power_of_two();
    }
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "inner arity {m} exceeds n={n} after rounding for flavor {flavor}"
        )));
    }
    let k = n / m;
    Ok(CompositionSchedule {
        outer_arity: n,
        inner_arity: m,
        block_size: k,
        flavor,
        requested_eps: eps.clone(),
        achieved_eps: pow2_eps(m),
    })
}

/// Build the composed guesser a schedule describes.
pub fn scheduled_guesser(schedule: &CompositionSchedule) -> Result<Guesser> {
    let inner = weak_guesser_minimal_eps(schedule.inner_arity, schedule.flavor)?;
    if schedule.inner_arity == schedule.outer_arity {
        return Ok(inner);
    }
    compose_onto(inner, schedule.block_size, schedule.outer_arity)
}

/// 2^(-m) as an exact rational.
fn pow2_eps(m: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1u8) << m as usize)
}

/// Smallest m with 2^m >= 1/eps, exactly.
fn ceil_log2_inverse(eps: &BigRational) -> u32 {
    let mut m = 0u32;
    let mut scaled = eps.numer().clone();
    while &scaled < eps.denom() {
        scaled <<= 1;
        m += 1;
    }
    m
}

/// Exhaustive verification report for one guesser at one bias target.
#[derive(Debug, Clone)]
pub struct WeakParityReport {
    pub arity: u32,
    pub epsilon: BigRational,
    pub success_count: u64,
    pub success_fraction: BigRational,
    pub worst_case_queries: u64,
    pub expected_queries_worst_input: Option<BigRational>,
    pub pass: bool,
    /// Exhaustive enumeration (true) versus seeded sampling (false).
    pub exact: bool,
    pub trials: Option<u64>,
}

/// Exact verdict by full enumeration: pass iff the agreement count reaches
/// (1/2 + eps) * 2^n.
pub fn verify_weak(g: &Guesser, eps: &BigRational) -> Result<WeakParityReport> {
    validate_eps(eps)?;
    let n = g.arity();
    let success_count = g.parity_agreement()?;
    let total = BigInt::from(1u8) << n as usize;
    let success_fraction =
        BigRational::new(BigInt::from(success_count), total.clone());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let threshold = (&half + eps) * BigRational::from_integer(total);
    let pass = BigRational::from_integer(BigInt::from(success_count)) >= threshold;
    Ok(WeakParityReport {
        arity: n,
        epsilon: eps.clone(),
        success_count,
        success_fraction,
        worst_case_queries: g.worst_case_queries(),
        expected_queries_worst_input: g.expected_queries_worst_input().cloned(),
        pass,
        exact: true,
        trials: None,
    })
}

/// Sampled estimate for guessers too wide to enumerate; the report is
/// flagged non-exact and carries the trial count.
pub fn verify_weak_sampled<R: Rng + ?Sized>(
    g: &Guesser,
    eps: &BigRational,
    trials: u64,
    rng: &mut R,
) -> Result<WeakParityReport> {
    validate_eps(eps)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let n = g.arity();
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut successes = 0u64;
    for _ in 0..trials {
        let x = rng.gen::<u64>() & mask;
        if g.eval(x) == (x.count_ones() % 2 == 1) {
            successes += 1;
        }
    }
    let success_fraction =
        BigRational::new(BigInt::from(successes), BigInt::from(trials));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let pass = success_fraction >= &half + eps;
    Ok(WeakParityReport {
        arity: n,
        epsilon: eps.clone(),
        success_count: successes,
        success_fraction,
        worst_case_queries: g.worst_case_queries(),
        expected_queries_worst_input: g.expected_queries_worst_input().cloned(),
        pass,
        exact: false,
        trials: Some(trials),
    })
}

fn validate_eps(eps: &BigRational) -> Result<()> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if eps.is_negative() || eps > &half {
        return Err(Error::EpsOutOfRange {
            eps: eps.to_string(),
            lo: "0".into(),
            hi: half.to_string(),
        });
    }
    Ok(())
}

/// One run of the self-reduction: mask the input with a uniform word,
/// ask the guesser about the masked word, and unmask the answer.
pub fn random_self_reduce<R: Rng + ?Sized>(g: &Guesser, x: InputWord, rng: &mut R) -> Result<bool> {
    if x.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: x.arity(),
            right: g.arity(),
        });
    }
    let n = g.arity();
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let y = rng.gen::<u64>() & mask;
    let b = g.eval(x.word() ^ y);
    Ok((y.count_ones() % 2 == 1) ^ b)
}

/// Exact per-input success probability of the self-reduction, by averaging
/// over every mask. The masked word is uniform whatever X is, so this equals
/// the guesser's global agreement fraction for every input.
pub fn rsr_success_probability(g: &Guesser, x: InputWord) -> Result<BigRational> {
    if x.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: x.arity(),
            right: g.arity(),
        });
    }
    let n = g.arity();
    let max = caps::max_arity();
    if n > max {
        return Err(Error::ArityTooLarge { arity: n, max });
    }
    let target = x.parity();
    let mut good = 0u64;
    for y in 0..(1u64 << n) {
        let guess = (y.count_ones() % 2 == 1) ^ g.eval(x.word() ^ y);
        if guess == target {
            good += 1;
        }
    }
    Ok(BigRational::new(
        BigInt::from(good),
        BigInt::from(1u8) << n as usize,
    ))
}

/// Exact success probability of an odd-r majority vote over independent
/// runs, each succeeding with probability p.
pub fn amplified_success_probability(p: &BigRational, r: u64) -> Result<BigRational> {
    if r % 2 == 0 {
        return Err(Error::EvenRepetition(r));
    }
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for successes in (r / 2 + 1)..=r {
        let ways = binomial(BigInt::from(r), BigInt::from(successes));
        let term = BigRational::from_integer(ways)
            * pow_rational(p, successes)
            * pow_rational(&q, r - successes);
        total += term;
    }
    Ok(total)
}

fn pow_rational(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Majority vote over r (odd) runs of a randomized bit procedure.
pub fn amplify_majority<R: Rng + ?Sized>(
    mut procedure: impl FnMut(&mut R) -> bool,
    r: u64,
    rng: &mut R,
) -> Result<bool> {
    if r % 2 == 0 {
        return Err(Error::EvenRepetition(r));
    }
    let mut ones = 0u64;
    for _ in 0..r {
        if procedure(rng) {
            ones += 1;
        }
    }
    Ok(ones > r / 2)
}

/// Default multiplier for the amplification round count.
pub const AMPLIFY_FACTOR_DEFAULT: u64 = 18;

/// Smallest odd r with r >= factor * log2(1/eps), computed exactly:
/// r >= q where q is minimal with 2^q >= (1/eps)^factor.
pub fn amplification_rounds(eps: &BigRational, factor: u64) -> Result<u64> {
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::EpsOutOfRange {
            eps: eps.to_string(),
            lo: "0 (exclusive)".into(),
            hi: "1 (exclusive)".into(),
        });
    }
    let num = pow_bigint(eps.numer(), factor);
    let den = pow_bigint(eps.denom(), factor);
    let mut q = 0u64;
    let mut scaled = num;
    while scaled < den {
        scaled <<= 1;
        q += 1;
    }
    Ok(if q % 2 == 1 { q } else { q + 1 })
}

fn pow_bigint(base: &BigInt, exp: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// The trivial everywhere-slightly-biased procedure: with probability
/// 2*eps read the whole input and answer its parity, otherwise answer a
/// fresh coin flip without reading anything.
#[derive(Debug, Clone)]
pub struct CoinOrReadAll {
    arity: u32,
    eps: BigRational,
}

impl CoinOrReadAll {
    pub fn new(arity: u32, eps: BigRational) -> Result<Self> {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        if !eps.is_positive() || eps > half {
            return Err(Error::EpsOutOfRange {
                eps: eps.to_string(),
                lo: "0 (exclusive)".into(),
                hi: half.to_string(),
            });
        }
        check_eval_arity(arity)?;
        Ok(CoinOrReadAll { arity, eps })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Exact per-input success probability: the read branch is always right,
    /// the coin branch half the time, so 2e + (1-2e)/2 for every input.
    pub fn success_probability(&self) -> BigRational {
        let two_eps = BigRational::from_integer(BigInt::from(2)) * &self.eps;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        &two_eps + (BigRational::one() - &two_eps) * half
    }

    /// Exact expected queries: 2*eps*n.
    pub fn expected_queries(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(2) * BigInt::from(self.arity)) * &self.eps
    }

    /// One sampled run; returns the guess and the queries spent.
    pub fn run<R: Rng + ?Sized>(&self, x: InputWord, rng: &mut R) -> Result<(bool, u64)> {
        if x.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: x.arity(),
                right: self.arity,
            });
        }
        let two_eps = BigRational::from_integer(BigInt::from(2)) * &self.eps;
        // Exact Bernoulli(2*eps) from an integer draw on the denominator.
        let denom: u64 = two_eps
            .denom()
            .try_into()
            .map_err(|_| Error::InvalidParameter("eps denominator too large to sample".into()))?;
        let numer: u64 = two_eps
            .numer()
            .try_into()
            .map_err(|_| Error::InvalidParameter("eps numerator too large to sample".into()))?;
        let read_all = rng.gen_range(0..denom) < numer;
        if read_all {
            Ok((x.parity(), self.arity as u64))
        } else {
            Ok((rng.gen::<bool>(), 0))
        }
    }
}

/// Any total function can be guessed on 2^(n-1)+1 inputs: unbalanced
/// functions by their majority constant, balanced ones by OR or the AND/OR
/// tree (or their negations), whose agreement with any balanced function is
/// odd and therefore never exactly half.
pub fn weak_any(f: &TruthTable, flavor: Flavor) -> Result<Guesser> {
    let n = f.arity();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "weak guessing needs at least one bit".into(),
        ));
    }
    let half = 1u64 << (n - 1);
    let ones = f.count_ones();
    if ones != half {
        return Guesser::constant(n, ones > half);
    }
    let base = match flavor {
        Flavor::Or => Guesser::or_rule(n)?,
        Flavor::AndOr => {
            if !n.is_power_of_two() || n < 4 {
                return Err(Error::InvalidParameter(format!(
                    "andor flavor needs arity a power of two >= 4, got {n}"
                )));
            }
            let depth = n.trailing_zeros();
            let table = andor::worst_case_table(depth)?;
            Guesser {
                arity: n,
                kind: Kind::AndOr { depth },
                negate: false,
                label: format!("andor(d={depth})"),
                worst_case_queries: n as u64,
                expected_queries_worst_input: Some(table.row(depth).worst().clone()),
            }
        }
    };
    let agreement = agreement_with(f, &base)?;
    if agreement >= half + 1 {
        Ok(base)
    } else {
        Ok(base.negated())
    }
}

/// Agreement of a guesser with an arbitrary target table.
pub fn agreement_with(target: &TruthTable, g: &Guesser) -> Result<u64> {
    if target.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: target.arity(),
            right: g.arity(),
        });
    }
    let mut count = 0;
    for x in 0..target.len() {
        if g.eval(x) == target.get(x) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn minimal_guessers_hit_half_plus_one() {
        let g = weak_guesser_minimal_eps(4, Flavor::Or).unwrap();
        assert_eq!(g.parity_agreement().unwrap(), 9);
        assert_eq!(g.worst_case_queries(), 4);

        let t2 = weak_guesser_minimal_eps(4, Flavor::AndOr).unwrap();
        assert_eq!(t2.parity_agreement().unwrap(), 9);
        assert_eq!(
            t2.expected_queries_worst_input().unwrap(),
            &rational(3, 1)
        );

        // depth 1 is odd, so the rule is the negated AND = NAND
        let nand = weak_guesser_minimal_eps(2, Flavor::AndOr).unwrap();
        assert_eq!(nand.parity_agreement().unwrap(), 3);
        assert!(nand.eval(0b00) && nand.eval(0b01) && nand.eval(0b10));
        assert!(!nand.eval(0b11));

        assert!(weak_guesser_minimal_eps(6, Flavor::AndOr).is_err());
        assert!(weak_guesser_minimal_eps(0, Flavor::Or).is_err());
    }

    #[test]
    fn or_guessers_agree_for_all_small_n() {
        for n in 1..=16 {
            let g = weak_guesser_minimal_eps(n, Flavor::Or).unwrap();
            assert_eq!(
                g.parity_agreement().unwrap(),
                (1u64 << (n - 1)) + 1,
                "n={n}"
            );
        }
    }

    #[test]
    fn composition_preserves_success_fraction() {
        // inner OR2 agrees on 3/4; composed over 2-bit blocks on 4 bits
        // must agree on 12/16.
        let inner = weak_guesser_minimal_eps(2, Flavor::Or).unwrap();
        let composed = compose_blocks(inner, 2).unwrap();
        assert_eq!(composed.arity(), 4);
        assert_eq!(composed.parity_agreement().unwrap(), 12);
        assert_eq!(composed.worst_case_queries(), 4);

        let inner4 = weak_guesser_minimal_eps(4, Flavor::Or).unwrap();
        let composed8 = compose_blocks(inner4, 2).unwrap();
        assert_eq!(composed8.arity(), 8);
        // success fraction 9/16 of 256 = 144
        assert_eq!(composed8.parity_agreement().unwrap(), 144);
    }

    #[test]
    fn composition_with_parity_inner_is_exact() {
        let inner = Guesser::parity_rule(3).unwrap();
        let composed = compose_blocks(inner, 4).unwrap();
        assert_eq!(composed.arity(), 12);
        assert_eq!(composed.parity_agreement().unwrap(), 1 << 12);
    }

    #[test]
    fn composition_absorbs_remainder() {
        // 2 blocks on 5 bits: blocks [0,2) and [2,5)
        let inner = weak_guesser_minimal_eps(2, Flavor::Or).unwrap();
        let composed = compose_onto(inner, 2, 5).unwrap();
        assert_eq!(composed.arity(), 5);
        // fraction preserved: 3/4 of 32 = 24
        assert_eq!(composed.parity_agreement().unwrap(), 24);
    }

    #[test]
    fn schedule_examples() {
        let s = schedule_for(16, &rational(1, 16), Flavor::Or).unwrap();
        assert_eq!((s.inner_arity, s.block_size), (4, 4));
        assert_eq!(s.achieved_eps, rational(1, 16));

        let s = schedule_for(16, &rational(1, 65536), Flavor::Or).unwrap();
        assert_eq!((s.inner_arity, s.block_size), (16, 1));

        let s = schedule_for(12, &rational(1, 4), Flavor::Or).unwrap();
        assert_eq!((s.inner_arity, s.block_size), (2, 6));

        assert!(schedule_for(4, &rational(1, 32), Flavor::Or).is_err());
        assert!(schedule_for(8, &rational(2, 3), Flavor::Or).is_err());
    }

    #[test]
    fn schedule_andor_rounds_to_power_of_two() {
        let s = schedule_for(16, &rational(1, 8), Flavor::AndOr).unwrap();
        assert_eq!(s.inner_arity, 4); // ceil(log2 8) = 3, rounded up to 4
        assert_eq!(s.block_size, 4);
        assert_eq!(s.achieved_eps, rational(1, 16));
        // rounding may push m past n
        assert!(schedule_for(12, &rational(1, 512), Flavor::AndOr).is_err());
    }

    #[test]
    fn verify_weak_verdicts() {
        let g = weak_guesser_minimal_eps(8, Flavor::Or).unwrap();
        let report = verify_weak(&g, &rational(1, 256)).unwrap();
        assert!(report.pass);
        assert_eq!(report.success_count, 129);
        assert!(report.exact);

        let zero = Guesser::constant(6, false).unwrap();
        let at_zero = verify_weak(&zero, &BigRational::zero()).unwrap();
        assert!(at_zero.pass);
        assert_eq!(at_zero.success_count, 32);
        let above = verify_weak(&zero, &rational(1, 64)).unwrap();
        assert!(!above.pass);
    }

    #[test]
    fn sampled_verify_flags_itself() {
        let g = weak_guesser_minimal_eps(8, Flavor::Or).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let report = verify_weak_sampled(&g, &rational(1, 256), 4096, &mut rng).unwrap();
        assert!(!report.exact);
        assert_eq!(report.trials, Some(4096));
    }

    #[test]
    fn rsr_flattens_success() {
        let nand = weak_guesser_minimal_eps(2, Flavor::Or).unwrap();
        for x in 0..4u64 {
            let p = rsr_success_probability(&nand, InputWord::new(x, 2).unwrap()).unwrap();
            assert_eq!(p, rational(3, 4));
        }
        let t2 = weak_guesser_minimal_eps(4, Flavor::AndOr).unwrap();
        for x in 0..16u64 {
            let p = rsr_success_probability(&t2, InputWord::new(x, 4).unwrap()).unwrap();
            assert_eq!(p, rational(9, 16));
        }
        let par = Guesser::parity_rule(3).unwrap();
        for x in 0..8u64 {
            let p = rsr_success_probability(&par, InputWord::new(x, 3).unwrap()).unwrap();
            assert!(p.is_one());
        }
    }

    #[test]
    fn rsr_sampled_run_matches_guess_structure() {
        let g = weak_guesser_minimal_eps(4, Flavor::Or).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = InputWord::new(0b0110, 4).unwrap();
        let mut hits = 0u32;
        for _ in 0..4096 {
            if random_self_reduce(&g, x, &mut rng).unwrap() == x.parity() {
                hits += 1;
            }
        }
        // exact probability is 9/16 = 0.5625; 3 sigma of 4096 trials ~ 0.023
        let freq = hits as f64 / 4096.0;
        assert!((freq - 0.5625).abs() < 0.03, "freq={freq}");
    }

    #[test]
    fn amplification_exact_values() {
        let p = rational(9, 16);
        assert_eq!(
            amplified_success_probability(&p, 3).unwrap(),
            rational(1215, 2048)
        );
        assert!(amplified_success_probability(&p, 2).is_err());
        assert!(amplified_success_probability(&BigRational::one(), 7)
            .unwrap()
            .is_one());
        assert_eq!(
            amplified_success_probability(&rational(1, 2), 3).unwrap(),
            rational(1, 2)
        );
    }

    #[test]
    fn amplification_matches_outcome_enumeration() {
        // Independent oracle: walk all 2^r outcome vectors and add up the
        // probability of the majority-1 ones.
        fn enumerate(p: &BigRational, r: u64) -> BigRational {
            let q = BigRational::one() - p;
            let mut total = BigRational::zero();
            for outcome in 0u64..(1 << r) {
                let ones = outcome.count_ones() as u64;
                if ones > r / 2 {
                    let mut prob = BigRational::one();
                    for bit in 0..r {
                        prob *= if (outcome >> bit) & 1 == 1 { p } else { &q };
                    }
                    total += prob;
                }
            }
            total
        }
        for r in [1u64, 3, 5, 7] {
            for p in [rational(9, 16), rational(1, 3), rational(7, 8)] {
                assert_eq!(
                    amplified_success_probability(&p, r).unwrap(),
                    enumerate(&p, r),
                    "r={r}"
                );
            }
        }
    }

    #[test]
    fn amplification_monotone_for_biased_p() {
        let p = rational(9, 16);
        let mut last = BigRational::zero();
        for r in [1u64, 3, 5, 7] {
            let amped = amplified_success_probability(&p, r).unwrap();
            assert!(amped > last, "r={r}");
            last = amped;
        }
    }

    #[test]
    fn amplification_round_counts() {
        // eps = 1/16: log2(1/eps) = 4, factor 18 -> 72 -> odd 73
        assert_eq!(amplification_rounds(&rational(1, 16), 18).unwrap(), 73);
        assert_eq!(amplification_rounds(&rational(1, 2), 1).unwrap(), 1);
        // eps = 1/3: ceil(log2 3) = 2 per factor... 3^18 needs 29 doublings
        let r = amplification_rounds(&rational(1, 3), 18).unwrap();
        assert!(r % 2 == 1 && r >= 28);
    }

    #[test]
    fn majority_vote_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let always = amplify_majority(|_| true, 5, &mut rng).unwrap();
        assert!(always);
        assert!(amplify_majority(|_| true, 4, &mut rng).is_err());
    }

    #[test]
    fn coin_or_read_all_exact_values() {
        for n in 1..=10u32 {
            for eps in [rational(1, 4), rational(1, 8)] {
                let proc = CoinOrReadAll::new(n, eps.clone()).unwrap();
                let half = rational(1, 2);
                assert_eq!(proc.success_probability(), &half + &eps);
                assert!(proc.success_probability() >= half);
                assert_eq!(
                    proc.expected_queries(),
                    BigRational::from_integer(BigInt::from(2 * n)) * &eps
                );
            }
        }
    }

    #[test]
    fn coin_or_read_all_sampled_run() {
        let proc = CoinOrReadAll::new(6, rational(1, 4)).unwrap();
        let x = InputWord::new(0b101010, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut queries = 0u64;
        let runs = 8192;
        for _ in 0..runs {
            let (_, q) = proc.run(x, &mut rng).unwrap();
            queries += q;
        }
        // expected queries per run = 2*(1/4)*6 = 3
        let mean = queries as f64 / runs as f64;
        assert!((mean - 3.0).abs() < 0.2, "mean={mean}");
    }

    #[test]
    fn weak_any_cases() {
        // unbalanced: constant majority guesser
        let f = TruthTable::or(3).unwrap(); // 7 ones of 8
        let g = weak_any(&f, Flavor::Or).unwrap();
        assert!(g.eval(0) && g.eval(5));
        assert_eq!(agreement_with(&f, &g).unwrap(), 7);

        // balanced: parity itself
        let par = TruthTable::parity(3).unwrap();
        let g = weak_any(&par, Flavor::Or).unwrap();
        assert_eq!(agreement_with(&par, &g).unwrap(), 5);

        // andor flavor needs n = 2^d >= 4
        assert!(weak_any(&par, Flavor::AndOr).is_err());
        let par4 = TruthTable::parity(4).unwrap();
        let g = weak_any(&par4, Flavor::AndOr).unwrap();
        assert!(agreement_with(&par4, &g).unwrap() >= 9);
    }

    #[test]
    fn negation_label_roundtrip() {
        let g = Guesser::or_rule(3).unwrap();
        let ng = g.clone().negated();
        assert_eq!(ng.label(), "not(or)");
        let back = ng.negated();
        assert_eq!(back.label(), "or");
        for x in 0..8u64 {
            assert_eq!(g.eval(x), back.eval(x));
        }
    }
}
