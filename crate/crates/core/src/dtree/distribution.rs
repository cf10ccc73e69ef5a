//! Randomized query algorithms as explicit weighted tree lists, and their
//! exact acceptance profiles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::boolfn::TruthTable;
use crate::caps;
use crate::error::{Error, Result};
use crate::hypercube::VertexSet;

use super::DecisionTree;

/// Finite mixture of decision trees; weights are positive rationals that sum
/// to exactly one.
#[derive(Debug, Clone)]
pub struct TreeDistribution {
    arity: u32,
    items: Vec<(BigRational, DecisionTree)>,
}

impl TreeDistribution {
    pub fn new(arity: u32, items: Vec<(BigRational, DecisionTree)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidDistribution("no trees".into()));
        }
        let mut sum = BigRational::zero();
        for (w, t) in &items {
            if !w.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "non-positive weight {w}"
                )));
            }
            if t.min_arity() > arity {
                return Err(Error::InvalidDistribution(format!(
                    "tree uses variable {} beyond arity {arity}",
                    t.min_arity() - 1
                )));
            }
            sum += w;
        }
        if !sum.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(TreeDistribution { arity, items })
    }

    /// A single deterministic tree as a degenerate mixture.
    pub fn deterministic(arity: u32, tree: DecisionTree) -> Result<Self> {
        Self::new(arity, vec![(BigRational::one(), tree)])
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn items(&self) -> &[(BigRational, DecisionTree)] {
        &self.items
    }

    /// Largest depth in the support.
    pub fn max_depth(&self) -> u32 {
        self.items.iter().map(|(_, t)| t.depth()).max().unwrap_or(0)
    }
}

/// Per-input acceptance probabilities p(X), each an exact rational in [0,1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptanceProfile {
    arity: u32,
    entries: Vec<BigRational>,
}

impl AcceptanceProfile {
    pub fn new(arity: u32, entries: Vec<BigRational>) -> Result<Self> {
        let max = caps::max_arity();
        if arity > max {
            return Err(Error::ArityTooLarge { arity, max });
        }
        if entries.len() as u64 != 1u64 << arity {
            return Err(Error::Parse(format!(
                "profile needs {} entries, got {}",
                1u64 << arity,
                entries.len()
            )));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.is_negative() || e > &BigRational::one() {
                return Err(Error::ProfileEntryOutOfRange { index: i as u64 });
            }
        }
        Ok(AcceptanceProfile { arity, entries })
    }

    /// 0/1 profile of a deterministic total function.
    pub fn from_truth_table(f: &TruthTable) -> Self {
        AcceptanceProfile {
            arity: f.arity(),
            entries: (0..f.len())
                .map(|x| {
                    if f.get(x) {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, x: u64) -> &BigRational {
        &self.entries[x as usize]
    }
}

/// Exact acceptance profile of a mixture: p(X) is the total weight of the
/// trees that output 1 on X.
pub fn acceptance_profile(dist: &TreeDistribution) -> Result<AcceptanceProfile> {
    let arity = dist.arity();
    let max = caps::max_arity();
    if arity > max {
        return Err(Error::ArityTooLarge { arity, max });
    }
    let mut entries = vec![BigRational::zero(); 1usize << arity];
    for (w, t) in dist.items() {
        for (x, e) in entries.iter_mut().enumerate() {
            if t.value(x as u64) {
                *e += w;
            }
        }
    }
    AcceptanceProfile::new(arity, entries)
}

/// For each variable, the probability that a tree drawn from the mixture
/// mentions it anywhere.
pub fn variable_usage(dist: &TreeDistribution) -> Vec<BigRational> {
    (0..dist.arity())
        .map(|i| {
            let mut p = BigRational::zero();
            for (w, t) in dist.items() {
                if (t.vars() >> i) & 1 == 1 {
                    p += w;
                }
            }
            p
        })
        .collect()
}

/// The set of inputs where the profile lands within 1/3 of the target bit,
/// compared in exact rational arithmetic.
pub fn success_set(p: &AcceptanceProfile, target: &TruthTable) -> Result<VertexSet> {
    if p.arity() != target.arity() {
        return Err(Error::ArityMismatch {
            left: p.arity(),
            right: target.arity(),
        });
    }
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let mut members = VertexSet::empty(p.arity())?;
    for x in 0..target.len() {
        let t = if target.get(x) {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        if (p.get(x) - t).abs() <= third {
            members.insert(x);
        }
    }
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn half() -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(2))
    }

    #[test]
    fn constant_tree_profile_is_all_ones() {
        let d = TreeDistribution::deterministic(3, DecisionTree::leaf(true)).unwrap();
        let p = acceptance_profile(&d).unwrap();
        assert!(p.entries().iter().all(|e| e.is_one()));
    }

    #[test]
    fn fair_coin_profile_is_all_halves() {
        let d = TreeDistribution::new(
            2,
            vec![
                (half(), DecisionTree::leaf(false)),
                (half(), DecisionTree::leaf(true)),
            ],
        )
        .unwrap();
        let p = acceptance_profile(&d).unwrap();
        assert!(p.entries().iter().all(|e| e == &half()));
    }

    #[test]
    fn parity_and_antiparity_mix_to_half() {
        let par = DecisionTree::parity_tree(2).unwrap();
        let anti = {
            // negate by swapping leaves: build the complement tree directly
            fn build(var: u32, arity: u32, acc: bool) -> DecisionTree {
                if var == arity {
                    return DecisionTree::leaf(!acc);
                }
                DecisionTree::query(
                    var,
                    build(var + 1, arity, acc),
                    build(var + 1, arity, !acc),
                )
                .unwrap()
            }
            build(0, 2, false)
        };
        let d = TreeDistribution::new(2, vec![(half(), par), (half(), anti)]).unwrap();
        let p = acceptance_profile(&d).unwrap();
        assert!(p.entries().iter().all(|e| e == &half()));
    }

    #[test]
    fn weights_must_sum_to_one() {
        let bad = TreeDistribution::new(
            1,
            vec![
                (half(), DecisionTree::leaf(true)),
                (BigRational::from_f64(0.25).unwrap(), DecisionTree::leaf(false)),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn usage_of_single_variable_tree() {
        let t = DecisionTree::query(0, DecisionTree::leaf(false), DecisionTree::leaf(true))
            .unwrap();
        let d = TreeDistribution::deterministic(4, t).unwrap();
        let usage = variable_usage(&d);
        assert!(usage[0].is_one());
        assert!(usage[1..].iter().all(|u| u.is_zero()));
    }

    #[test]
    fn usage_uniform_over_singletons() {
        let n = 5u32;
        let w = BigRational::new(BigInt::from(1), BigInt::from(n));
        let items = (0..n)
            .map(|i| {
                (
                    w.clone(),
                    DecisionTree::query(i, DecisionTree::leaf(false), DecisionTree::leaf(true))
                        .unwrap(),
                )
            })
            .collect();
        let d = TreeDistribution::new(n, items).unwrap();
        for u in variable_usage(&d) {
            assert_eq!(u, w);
        }
    }

    #[test]
    fn success_set_boundaries() {
        let par = TruthTable::parity(3).unwrap();
        let full = success_set(&AcceptanceProfile::from_truth_table(&par), &par).unwrap();
        assert_eq!(full.size(), 8);

        let halves = AcceptanceProfile::new(3, vec![half(); 8]).unwrap();
        let empty = success_set(&halves, &par).unwrap();
        assert_eq!(empty.size(), 0);

        let or = TruthTable::or(4).unwrap();
        let par4 = TruthTable::parity(4).unwrap();
        let a = success_set(&AcceptanceProfile::from_truth_table(&or), &par4).unwrap();
        assert_eq!(a.size(), 9);
    }

    #[test]
    fn profile_entries_validated() {
        let two = BigRational::from_integer(BigInt::from(2));
        assert!(AcceptanceProfile::new(0, vec![two]).is_err());
        assert!(AcceptanceProfile::new(0, vec![BigRational::one()]).is_ok());
    }
}
