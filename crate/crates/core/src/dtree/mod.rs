//! Deterministic decision trees and finite randomized mixtures of them.
//!
//! Trees are opaque values: the constructors reject any tree that queries a
//! variable twice on one root-to-leaf path, so every tree in circulation
//! satisfies the invariant. Mixtures carry exact rational weights summing to
//! one, which makes acceptance profiles and correlation identities exact
//! counting statements rather than estimates.

use std::collections::BTreeSet;

use crate::boolfn::InputWord;
use crate::error::{Error, Result};

mod distribution;
mod exact_d;
mod format;

pub use distribution::{
    acceptance_profile, success_set, variable_usage, AcceptanceProfile, TreeDistribution,
};
pub use exact_d::{exact_d, exact_d_capped};
pub use format::{
    distribution_from_text, distribution_to_text, tree_from_text, tree_to_text,
};

/// Anything a query algorithm can read one bit at a time.
pub trait InputSource {
    fn arity(&self) -> u64;
    fn bit(&self, index: u64) -> bool;
}

impl InputSource for InputWord {
    fn arity(&self) -> u64 {
        InputWord::arity(self) as u64
    }

    fn bit(&self, index: u64) -> bool {
        InputWord::bit(self, index as u32)
    }
}

/// Input presented as a callback; lets query counting scale past the sizes
/// where materializing a word is possible.
pub struct FnSource<F: Fn(u64) -> bool> {
    arity: u64,
    f: F,
}

impl<F: Fn(u64) -> bool> FnSource<F> {
    pub fn new(arity: u64, f: F) -> Self {
        FnSource { arity, f }
    }
}

impl<F: Fn(u64) -> bool> InputSource for FnSource<F> {
    fn arity(&self) -> u64 {
        self.arity
    }

    fn bit(&self, index: u64) -> bool {
        (self.f)(index)
    }
}

/// Wraps an input and meters every bit read.
pub struct InstrumentedOracle<S: InputSource> {
    source: S,
    query_count: u64,
    queried: BTreeSet<u64>,
}

impl<S: InputSource> InstrumentedOracle<S> {
    pub fn new(source: S) -> Self {
        InstrumentedOracle {
            source,
            query_count: 0,
            queried: BTreeSet::new(),
        }
    }

    pub fn arity(&self) -> u64 {
        self.source.arity()
    }

    /// Read one bit; counted even if the index was read before.
    pub fn query(&mut self, index: u64) -> bool {
        debug_assert!(index < self.arity());
        self.query_count += 1;
        self.queried.insert(index);
        self.source.bit(index)
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    pub fn queried(&self) -> &BTreeSet<u64> {
        &self.queried
    }

    pub fn reset(&mut self) {
        self.query_count = 0;
        self.queried.clear();
    }

    pub fn into_source(self) -> S {
        self.source
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    Leaf(bool),
    Query {
        var: u32,
        zero: Box<Node>,
        one: Box<Node>,
    },
}

/// A deterministic query algorithm; no variable repeats on any path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DecisionTree {
    node: Node,
    vars: u64,
    depth: u32,
}

impl DecisionTree {
    pub fn leaf(value: bool) -> Self {
        DecisionTree {
            node: Node::Leaf(value),
            vars: 0,
            depth: 0,
        }
    }

    /// Internal query node; `zero` handles x_{var+1} = 0. Rejects repeats of
    /// `var` in either child, which pins the path invariant at construction.
    pub fn query(var: u32, zero: DecisionTree, one: DecisionTree) -> Result<Self> {
        if var >= 64 {
            return Err(Error::VariableOutOfRange { var, arity: 64 });
        }
        let bit = 1u64 << var;
        if (zero.vars | one.vars) & bit != 0 {
            return Err(Error::RepeatedVariable { var });
        }
        Ok(DecisionTree {
            vars: zero.vars | one.vars | bit,
            depth: 1 + zero.depth.max(one.depth),
            node: Node::Query {
                var,
                zero: Box::new(zero.node),
                one: Box::new(one.node),
            },
        })
    }

    /// The full-depth tree computing the parity of the first `arity` bits.
    pub fn parity_tree(arity: u32) -> Result<Self> {
        fn build(var: u32, arity: u32, acc: bool) -> Result<DecisionTree> {
            if var == arity {
                return Ok(DecisionTree::leaf(acc));
            }
            let zero = build(var + 1, arity, acc)?;
            let one = build(var + 1, arity, !acc)?;
            DecisionTree::query(var, zero, one)
        }
        build(0, arity, false)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Mask of variables appearing anywhere in the tree.
    pub fn vars(&self) -> u64 {
        self.vars
    }

    /// Smallest arity this tree is compatible with.
    pub fn min_arity(&self) -> u32 {
        64 - self.vars.leading_zeros()
    }

    /// Output on an input word, without instrumentation.
    pub fn value(&self, x: u64) -> bool {
        let mut node = &self.node;
        loop {
            match node {
                Node::Leaf(b) => return *b,
                Node::Query { var, zero, one } => {
                    node = if (x >> var) & 1 == 1 { one } else { zero };
                }
            }
        }
    }

    /// Output through an instrumented oracle; the query count grows by the
    /// length of the root-to-leaf path taken.
    pub fn eval<S: InputSource>(&self, oracle: &mut InstrumentedOracle<S>) -> bool {
        let mut node = &self.node;
        loop {
            match node {
                Node::Leaf(b) => return *b,
                Node::Query { var, zero, one } => {
                    node = if oracle.query(*var as u64) { one } else { zero };
                }
            }
        }
    }

}

impl std::fmt::Debug for DecisionTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DecisionTree({})", tree_to_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_eval_counts_nothing() {
        let t = DecisionTree::leaf(true);
        let mut o = InstrumentedOracle::new(InputWord::new(0b01, 2).unwrap());
        assert!(t.eval(&mut o));
        assert_eq!(o.query_count(), 0);
    }

    #[test]
    fn single_query_counts_one() {
        let t = DecisionTree::query(0, DecisionTree::leaf(false), DecisionTree::leaf(true))
            .unwrap();
        let mut o = InstrumentedOracle::new(InputWord::new(1, 1).unwrap());
        assert!(t.eval(&mut o));
        assert_eq!(o.query_count(), 1);
        assert!(o.queried().contains(&0));
    }

    #[test]
    fn parity_tree_full_depth() {
        let t = DecisionTree::parity_tree(3).unwrap();
        assert_eq!(t.depth(), 3);
        let mut o = InstrumentedOracle::new(InputWord::new(0b101, 3).unwrap());
        assert!(!t.eval(&mut o)); // weight 2, even
        assert_eq!(o.query_count(), 3);
        for x in 0..8u64 {
            assert_eq!(t.value(x), x.count_ones() % 2 == 1);
        }
    }

    #[test]
    fn repeated_variable_rejected() {
        let inner =
            DecisionTree::query(1, DecisionTree::leaf(false), DecisionTree::leaf(true)).unwrap();
        let err = DecisionTree::query(1, inner, DecisionTree::leaf(false)).unwrap_err();
        assert!(matches!(err, Error::RepeatedVariable { var: 1 }));
    }

    #[test]
    fn oracle_counts_repeat_reads() {
        let mut o = InstrumentedOracle::new(InputWord::new(0b10, 2).unwrap());
        o.query(1);
        o.query(1);
        o.query(0);
        assert_eq!(o.query_count(), 3);
        assert_eq!(o.queried().len(), 2);
    }

    #[test]
    fn fn_source_reads_through() {
        let src = FnSource::new(100, |i| i % 3 == 0);
        let mut o = InstrumentedOracle::new(src);
        assert!(o.query(99));
        assert!(!o.query(98));
        assert_eq!(o.query_count(), 2);
    }
}
