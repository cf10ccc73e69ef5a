//! Exact deterministic query complexity by minimax over restrictions.
//!
//! A restriction fixes a subset of the variables; the solver recurses on the
//! two extensions of the best next query and memoizes on the restriction
//! itself, so each of the at most 3^n restrictions is solved once. Ties among
//! optimal queries break toward the lowest variable index, which makes the
//! returned witness tree deterministic.

use std::collections::HashMap;

use crate::boolfn::TruthTable;
use crate::caps;
use crate::error::{Error, Result};

use super::DecisionTree;

/// Minimum depth of any decision tree computing `f`, with a witness tree
/// attaining it.
pub fn exact_d(f: &TruthTable) -> Result<(u32, DecisionTree)> {
    exact_d_capped(f, caps::D_CAP)
}

pub fn exact_d_capped(f: &TruthTable, cap: u32) -> Result<(u32, DecisionTree)> {
    let n = f.arity();
    if n > cap {
        return Err(Error::CapExceeded {
            op: "exact_d",
            arity: n,
            cap,
        });
    }
    let mut solver = Solver {
        f,
        n,
        full: (f.len() - 1) as u32,
        memo: HashMap::new(),
    };
    let depth = solver.depth(0, 0);
    let tree = solver.witness(0, 0);
    debug_assert_eq!(tree.depth(), depth);
    Ok((depth, tree))
}

struct Solver<'a> {
    f: &'a TruthTable,
    n: u32,
    full: u32,
    memo: HashMap<u64, u8>,
}

impl Solver<'_> {
    /// Value of f at the all-zero extension, or None if the restriction is
    /// not constant.
    fn constant_value(&self, fixed: u32, vals: u32) -> Option<bool> {
        let free = self.full & !fixed;
        let first = self.f.get(vals as u64);
        let mut s = free;
        while s != 0 {
            if self.f.get((vals | s) as u64) != first {
                return None;
            }
            s = (s - 1) & free;
        }
        Some(first)
    }

    fn depth(&mut self, fixed: u32, vals: u32) -> u32 {
        let key = ((fixed as u64) << 32) | vals as u64;
        if let Some(&d) = self.memo.get(&key) {
            return d as u32;
        }
        let d = if self.constant_value(fixed, vals).is_some() {
            0
        } else {
            let mut best = u32::MAX;
            for i in 0..self.n {
                let bit = 1u32 << i;
                if fixed & bit != 0 {
                    continue;
                }
                let d0 = self.depth(fixed | bit, vals);
                let d1 = self.depth(fixed | bit, vals | bit);
                best = best.min(1 + d0.max(d1));
            }
            best
        };
        self.memo.insert(key, d as u8);
        d
    }

    /// Rebuild an optimal tree from the memoized depths, lowest optimal
    /// variable first.
    fn witness(&mut self, fixed: u32, vals: u32) -> DecisionTree {
        if let Some(v) = self.constant_value(fixed, vals) {
            return DecisionTree::leaf(v);
        }
        let target = self.depth(fixed, vals);
        for i in 0..self.n {
            let bit = 1u32 << i;
            if fixed & bit != 0 {
                continue;
            }
            let d0 = self.depth(fixed | bit, vals);
            let d1 = self.depth(fixed | bit, vals | bit);
            if 1 + d0.max(d1) == target {
                let zero = self.witness(fixed | bit, vals);
                let one = self.witness(fixed | bit, vals | bit);
                return DecisionTree::query(i, zero, one)
                    .expect("restriction paths never repeat a variable");
            }
        }
        unreachable!("some free variable attains the memoized depth");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_need_no_queries() {
        for v in [false, true] {
            let f = TruthTable::constant(4, v).unwrap();
            let (d, t) = exact_d(&f).unwrap();
            assert_eq!(d, 0);
            assert_eq!(t.depth(), 0);
            assert_eq!(t.value(7), v);
        }
    }

    #[test]
    fn parity_needs_every_bit() {
        for n in 1..=6 {
            let f = TruthTable::parity(n).unwrap();
            let (d, t) = exact_d(&f).unwrap();
            assert_eq!(d, n);
            for x in 0..f.len() {
                assert_eq!(t.value(x), f.get(x));
            }
        }
    }

    #[test]
    fn or_needs_every_bit() {
        let f = TruthTable::or(5).unwrap();
        assert_eq!(exact_d(&f).unwrap().0, 5);
    }

    #[test]
    fn witness_computes_the_function() {
        let f = TruthTable::from_fn(4, |x| (x & 1 == 1) && (x >> 3) & 1 == 1).unwrap();
        let (d, t) = exact_d(&f).unwrap();
        assert_eq!(d, 2);
        for x in 0..16 {
            assert_eq!(t.value(x), f.get(x));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f = TruthTable::zeros(13).unwrap();
        assert!(matches!(
            exact_d(&f),
            Err(Error::CapExceeded { op: "exact_d", .. })
        ));
    }

    #[test]
    fn restriction_monotone() {
        // fixing one variable never increases depth
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let f = TruthTable::random(5, &mut rng).unwrap();
            let (d, _) = exact_d(&f).unwrap();
            for var in 0..5 {
                for b in [false, true] {
                    let g = f.restrict(var, b).unwrap();
                    assert!(exact_d(&g).unwrap().0 <= d);
                }
            }
        }
    }
}
