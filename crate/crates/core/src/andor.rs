//! The complete binary AND/OR tree on n = 2^d leaves.
//!
//! The gate alternates by level: a subtree of depth d > 0 has an AND root
//! when d is odd and an OR root when d is even, so the depth-1 tree is AND
//! of two bits and the depth-2 tree is the OR of two ANDs.
//!
//! Evaluation comes in three exact flavors: deterministic left-to-right
//! short-circuiting, the classic zero-error randomized rule (evaluate a
//! uniformly random child first, short-circuit when it decides the gate),
//! and a per-input recursion for the exact expected query count of that
//! randomized rule. A rational dynamic program gives the worst-case expected
//! counts per depth; its two-step growth ratio converges to
//! ((1+sqrt(33))/4)^2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::boolfn::{self, InputWord, TruthTable};
use crate::caps;
use crate::dtree::{InputSource, InstrumentedOracle};
use crate::error::{Error, Result};

/// Gate kind at the root of a subtree of given depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    And,
    Or,
}

/// AND when the subtree depth is odd, OR when it is even and positive.
pub fn gate_at(depth: u32) -> Gate {
    debug_assert!(depth > 0);
    if depth % 2 == 1 {
        Gate::And
    } else {
        Gate::Or
    }
}

/// Number of leaves of the depth-d tree.
pub fn arity(depth: u32) -> u64 {
    1u64 << depth
}

/// Materialized truth table of the depth-d tree; needs 2^d within the
/// table arity cap.
pub fn truth_table(depth: u32) -> Result<TruthTable> {
    let n = arity(depth);
    let max = caps::max_arity();
    if n > max as u64 {
        return Err(Error::CapExceeded {
            op: "andor::truth_table",
            arity: n.min(u32::MAX as u64) as u32,
            cap: max,
        });
    }
    TruthTable::from_fn(n as u32, |x| value_of_word(depth, x))
}

/// Tree value on a word of 2^d bits (d <= 6), no instrumentation.
pub fn value_of_word(depth: u32, x: u64) -> bool {
    fn rec(depth: u32, offset: u64, x: u64) -> bool {
        if depth == 0 {
            return (x >> offset) & 1 == 1;
        }
        let half = 1u64 << (depth - 1);
        let left = rec(depth - 1, offset, x);
        let right = rec(depth - 1, offset + half, x);
        match gate_at(depth) {
            Gate::And => left && right,
            Gate::Or => left || right,
        }
    }
    debug_assert!(depth <= 6);
    rec(depth, 0, x)
}

/// Deterministic left-to-right evaluation with short-circuiting.
pub fn eval_deterministic<S: InputSource>(
    depth: u32,
    oracle: &mut InstrumentedOracle<S>,
) -> bool {
    fn rec<S: InputSource>(depth: u32, offset: u64, oracle: &mut InstrumentedOracle<S>) -> bool {
        if depth == 0 {
            return oracle.query(offset);
        }
        let half = 1u64 << (depth - 1);
        let left = rec(depth - 1, offset, oracle);
        match gate_at(depth) {
            Gate::And if !left => false,
            Gate::Or if left => true,
            _ => rec(depth - 1, offset + half, oracle),
        }
    }
    debug_assert_eq!(oracle.arity(), arity(depth));
    rec(depth, 0, oracle)
}

/// Zero-error randomized evaluation: a uniformly random child goes first and
/// the sibling is skipped whenever the first child decides the gate. The
/// output always equals the tree value; only the query count is random.
pub fn randomized_eval<S: InputSource, R: Rng + ?Sized>(
    depth: u32,
    oracle: &mut InstrumentedOracle<S>,
    rng: &mut R,
) -> bool {
    fn rec<S: InputSource, R: Rng + ?Sized>(
        depth: u32,
        offset: u64,
        oracle: &mut InstrumentedOracle<S>,
        rng: &mut R,
    ) -> bool {
        if depth == 0 {
            return oracle.query(offset);
        }
        let half = 1u64 << (depth - 1);
        let right_first: bool = rng.gen();
        let (first_off, second_off) = if right_first {
            (offset + half, offset)
        } else {
            (offset, offset + half)
        };
        let first = rec(depth - 1, first_off, oracle, rng);
        match gate_at(depth) {
            Gate::And if !first => false,
            Gate::Or if first => true,
            _ => rec(depth - 1, second_off, oracle, rng),
        }
    }
    debug_assert_eq!(oracle.arity(), arity(depth));
    rec(depth, 0, oracle, rng)
}

/// Exact expected query count of [`randomized_eval`] on one input,
/// by recursion over subtree values.
pub fn expected_queries_exact(depth: u32, x: InputWord) -> Result<BigRational> {
    if x.arity() as u64 != arity(depth) {
        return Err(Error::ArityMismatch {
            left: x.arity(),
            right: arity(depth).min(u32::MAX as u64) as u32,
        });
    }
    fn rec(depth: u32, offset: u64, x: &InputWord) -> (bool, BigRational) {
        if depth == 0 {
            return (x.bit(offset as u32), BigRational::one());
        }
        let half = 1u64 << (depth - 1);
        let (lv, le) = rec(depth - 1, offset, x);
        let (rv, re) = rec(depth - 1, offset + half, x);
        let two = BigRational::from_integer(BigInt::from(2));
        match gate_at(depth) {
            Gate::And => {
                if lv && rv {
                    (true, le + re)
                } else if !lv && !rv {
                    (false, (le + re) / &two)
                } else {
                    // the zero child short-circuits when evaluated first
                    let (decider, other) = if !lv { (le, re) } else { (re, le) };
                    (false, decider + other / &two)
                }
            }
            Gate::Or => {
                if !lv && !rv {
                    (false, le + re)
                } else if lv && rv {
                    (true, (le + re) / &two)
                } else {
                    let (decider, other) = if lv { (le, re) } else { (re, le) };
                    (true, decider + other / &two)
                }
            }
        }
    }
    Ok(rec(depth, 0, &x).1)
}

/// Worst-case expected query counts of the randomized evaluator, split by
/// forced subtree value.
#[derive(Debug, Clone)]
pub struct WorstCaseTable {
    rows: Vec<WorstCaseRow>,
}

#[derive(Debug, Clone)]
pub struct WorstCaseRow {
    pub depth: u32,
    /// Worst expected queries over inputs forcing the subtree to 0.
    pub zero: BigRational,
    /// Worst expected queries over inputs forcing the subtree to 1.
    pub one: BigRational,
}

impl WorstCaseRow {
    /// Worst expected queries over all inputs at this depth.
    pub fn worst(&self) -> &BigRational {
        if self.zero >= self.one {
            &self.zero
        } else {
            &self.one
        }
    }
}

impl WorstCaseTable {
    pub fn rows(&self) -> &[WorstCaseRow] {
        &self.rows
    }

    pub fn row(&self, depth: u32) -> &WorstCaseRow {
        &self.rows[depth as usize]
    }

    pub fn max_depth(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// Two-step growth ratio worst(d+2)/worst(d) as a float.
    pub fn ratio(&self, depth: u32) -> f64 {
        let num = self.row(depth + 2).worst();
        let den = self.row(depth).worst();
        (num / den).to_f64().expect("desk-scale ratios fit in f64")
    }
}

/// Two-step growth constant (1+sqrt(33))/4 of the worst-case recurrence,
/// squared.
pub fn growth_ratio_squared() -> f64 {
    let c = (1.0 + 33f64.sqrt()) / 4.0;
    c * c
}

/// Exact dynamic program for the worst-case expected query counts:
/// an AND level doubles the 1-cost and adds half the 1-cost to the 0-cost,
/// an OR level does the dual.
pub fn worst_case_table(d_max: u32) -> Result<WorstCaseTable> {
    if d_max > 64 {
        return Err(Error::CapExceeded {
            op: "worst_case_table",
            arity: d_max,
            cap: 64,
        });
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut rows = vec![WorstCaseRow {
        depth: 0,
        zero: BigRational::one(),
        one: BigRational::one(),
    }];
    for d in 1..=d_max {
        let prev = &rows[(d - 1) as usize];
        let (zero, one) = match gate_at(d) {
            Gate::And => (
                &prev.zero + &prev.one / &two,
                &prev.one * &two,
            ),
            Gate::Or => (
                &prev.zero * &two,
                &prev.one + &prev.zero / &two,
            ),
        };
        rows.push(WorstCaseRow { depth: d, zero, one });
    }
    Ok(WorstCaseTable { rows })
}

/// Number of inputs where the depth-d tree equals the parity of its leaves.
pub fn parity_agreement(depth: u32) -> Result<u64> {
    let t = truth_table(depth)?;
    let par = TruthTable::parity(t.arity())?;
    boolfn::agreement_count(&t, &par)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(x: u64, depth: u32) -> InputWord {
        InputWord::new(x, arity(depth) as u32).unwrap()
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn truth_tables_of_small_depths() {
        let t0 = truth_table(0).unwrap();
        assert_eq!((t0.get(0), t0.get(1)), (false, true)); // identity

        let t1 = truth_table(1).unwrap();
        for x in 0..4u64 {
            assert_eq!(t1.get(x), x == 3); // AND of 2 bits
        }

        let t2 = truth_table(2).unwrap();
        for x in 0..16u64 {
            let left = x & 1 == 1 && (x >> 1) & 1 == 1;
            let right = (x >> 2) & 1 == 1 && (x >> 3) & 1 == 1;
            assert_eq!(t2.get(x), left || right);
        }
    }

    #[test]
    fn deterministic_short_circuits() {
        let mut o = InstrumentedOracle::new(word(0b10, 1));
        assert!(!eval_deterministic(1, &mut o));
        assert_eq!(o.query_count(), 1); // x1 = 0 kills the AND

        let mut o = InstrumentedOracle::new(word(0b1111, 2));
        assert!(eval_deterministic(2, &mut o));
        assert_eq!(o.query_count(), 2); // first AND decides the OR

        let mut o = InstrumentedOracle::new(word(0b0000, 2));
        assert!(!eval_deterministic(2, &mut o));
        assert_eq!(o.query_count(), 2); // one leaf per AND
    }

    #[test]
    fn randomized_eval_is_zero_error_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for depth in 0..=3u32 {
            let n = arity(depth);
            for x in 0..(1u64 << n) {
                let expect = value_of_word(depth, x);
                for _ in 0..20 {
                    let mut o = InstrumentedOracle::new(word(x, depth));
                    assert_eq!(randomized_eval(depth, &mut o, &mut rng), expect);
                    assert!(o.query_count() <= n);
                }
            }
        }
    }

    #[test]
    fn expected_queries_fixed_points() {
        assert_eq!(
            expected_queries_exact(0, word(1, 0)).unwrap(),
            BigRational::one()
        );
        assert_eq!(expected_queries_exact(1, word(0b11, 1)).unwrap(), rational(2, 1));
        assert_eq!(expected_queries_exact(1, word(0b00, 1)).unwrap(), rational(1, 1));
        assert_eq!(expected_queries_exact(1, word(0b10, 1)).unwrap(), rational(3, 2));
        assert_eq!(
            expected_queries_exact(2, word(0b1111, 2)).unwrap(),
            rational(2, 1)
        );
        // left AND forced 0 (E=3/2), right AND forced 1 (E=2), OR mixes:
        // 2 + (3/2)/2 = 11/4
        assert_eq!(
            expected_queries_exact(2, word(0b1110, 2)).unwrap(),
            rational(11, 4)
        );
    }

    #[test]
    fn expectations_match_coin_enumeration() {
        // Independent oracle: give every internal node its own coin, run the
        // operational procedure for each of the 2^(2^d - 1) coin vectors, and
        // average the query counts.
        fn run_with_coins(depth: u32, offset: u64, node: u32, x: u64, coins: u32) -> (bool, u32) {
            if depth == 0 {
                return ((x >> offset) & 1 == 1, 1);
            }
            let half = 1u64 << (depth - 1);
            let right_first = (coins >> node) & 1 == 1;
            let (fo, so, fnode, snode) = if right_first {
                (offset + half, offset, 2 * node + 1, 2 * node)
            } else {
                (offset, offset + half, 2 * node, 2 * node + 1)
            };
            let (fv, fq) = run_with_coins(depth - 1, fo, fnode, x, coins);
            let decided = match gate_at(depth) {
                Gate::And => !fv,
                Gate::Or => fv,
            };
            if decided {
                (fv, fq)
            } else {
                let (sv, sq) = run_with_coins(depth - 1, so, snode, x, coins);
                let v = match gate_at(depth) {
                    Gate::And => fv && sv,
                    Gate::Or => fv || sv,
                };
                (v, fq + sq)
            }
        }
        for depth in 0..=3u32 {
            let internal = (1u32 << depth) - 1;
            let n = arity(depth);
            for x in 0..(1u64 << n) {
                let mut total = 0u64;
                for coins in 0..(1u32 << internal) {
                    let (v, q) = run_with_coins(depth, 0, 1, x, coins << 1);
                    assert_eq!(v, value_of_word(depth, x));
                    total += q as u64;
                }
                let mean = rational(total as i64, 1i64 << internal);
                assert_eq!(
                    expected_queries_exact(depth, word(x, depth)).unwrap(),
                    mean,
                    "depth={depth} x={x:#b}"
                );
            }
        }
    }

    #[test]
    fn worst_case_table_small_rows() {
        let t = worst_case_table(4).unwrap();
        assert_eq!(*t.row(0).worst(), rational(1, 1));
        assert_eq!(t.row(1).zero, rational(3, 2));
        assert_eq!(t.row(1).one, rational(2, 1));
        assert_eq!(*t.row(1).worst(), rational(2, 1));
        assert_eq!(t.row(2).zero, rational(3, 1));
        assert_eq!(t.row(2).one, rational(11, 4));
        assert_eq!(*t.row(2).worst(), rational(3, 1));
        assert_eq!(*t.row(3).worst(), rational(11, 2));
        assert_eq!(*t.row(4).worst(), rational(35, 4));
    }

    #[test]
    fn worst_case_dominates_every_input_small() {
        for depth in 0..=3u32 {
            let table = worst_case_table(depth).unwrap();
            let row = table.row(depth);
            let n = arity(depth);
            for x in 0..(1u64 << n) {
                let e = expected_queries_exact(depth, word(x, depth)).unwrap();
                if value_of_word(depth, x) {
                    assert!(e <= row.one, "depth={depth} x={x:#b}");
                } else {
                    assert!(e <= row.zero, "depth={depth} x={x:#b}");
                }
            }
        }
    }

    #[test]
    fn parity_agreement_counts() {
        assert_eq!(parity_agreement(0).unwrap(), 2);
        assert_eq!(parity_agreement(1).unwrap(), 1);
        assert_eq!(parity_agreement(2).unwrap(), 9);
    }

    #[test]
    fn growth_ratio_constant() {
        assert!((growth_ratio_squared() - 2.843070).abs() < 1e-5);
    }
}
