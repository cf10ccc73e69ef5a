//! Exact complexity measures on truth tables.
//!
//! Degree is computed twice, by deliberately different routes: once from the
//! multilinear coefficients (Möbius inversion over the subset lattice, pure
//! integer arithmetic) and once by exhaustive search for the largest
//! parity-correlated subcube. The two must agree on every function; the
//! test suites lean on that redundancy.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::caps;
use crate::dtree::AcceptanceProfile;
use crate::error::{Error, Result};

use super::TruthTable;

/// Exact measures of one function, bundled for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureReport {
    pub degree: u32,
    pub sensitivity: u32,
    pub block_sensitivity: u32,
    pub balanced: bool,
}

/// Compute the full measure bundle; block sensitivity keeps its cap.
pub fn measure(f: &TruthTable) -> Result<MeasureReport> {
    Ok(MeasureReport {
        degree: degree_mobius(f),
        sensitivity: sensitivity(f),
        block_sensitivity: block_sensitivity(f)?,
        balanced: f.is_balanced(),
    })
}

/// Integer coefficients of the unique multilinear polynomial agreeing with f
/// on {0,1}^n, indexed by monomial mask. Coefficient magnitudes stay below
/// 2^n, so i64 is exact for every admissible arity.
pub fn mobius_coefficients(f: &TruthTable) -> Vec<i64> {
    let n = f.arity();
    let len = f.len() as usize;
    let mut c: Vec<i64> = (0..len as u64).map(|x| f.get(x) as i64).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for x in 0..len {
            if x & bit != 0 {
                c[x] -= c[x ^ bit];
            }
        }
    }
    c
}

/// Degree of the multilinear polynomial: max |S| over nonzero coefficients.
pub fn degree_mobius(f: &TruthTable) -> u32 {
    mobius_coefficients(f)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(s, _)| (s as u64).count_ones())
        .max()
        .unwrap_or(0)
}

/// Degree via the combinatorial characterization: the maximum dimension of a
/// subcube whose even- and odd-weight halves carry different numbers of
/// 1-inputs. Exhaustive over all 3^n subcubes, so capped.
pub fn degree_subcube(f: &TruthTable) -> Result<u32> {
    degree_subcube_capped(f, caps::SUBCUBE_CAP)
}

pub fn degree_subcube_capped(f: &TruthTable, cap: u32) -> Result<u32> {
    let n = f.arity();
    if n > cap {
        return Err(Error::CapExceeded {
            op: "degree_subcube",
            arity: n,
            cap,
        });
    }
    let full = (f.len() - 1) as usize;
    // Largest dimension first; the first correlated subcube wins.
    for d in (0..=n).rev() {
        for free in 0..=full {
            if (free as u64).count_ones() != d {
                continue;
            }
            let fixed_positions = full & !free;
            // Enumerate assignments to the fixed coordinates as submasks.
            let mut assign = fixed_positions;
            loop {
                // Signed sum over the subcube; the fixed part contributes a
                // global sign that cannot affect the != 0 test.
                let mut sum: i64 = 0;
                let mut s = free;
                loop {
                    let x = (assign | s) as u64;
                    if f.get(x) {
                        sum += if (s as u64).count_ones() % 2 == 0 { 1 } else { -1 };
                    }
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & free;
                }
                if sum != 0 {
                    return Ok(d);
                }
                if assign == 0 {
                    break;
                }
                assign = (assign - 1) & fixed_positions;
            }
        }
    }
    Ok(0)
}

/// Max over inputs of the number of single-bit flips that change the value.
pub fn sensitivity(f: &TruthTable) -> u32 {
    let n = f.arity();
    let mut best = 0;
    for x in 0..f.len() {
        let v = f.get(x);
        let mut s = 0;
        for i in 0..n {
            if f.get(x ^ (1u64 << i)) != v {
                s += 1;
            }
        }
        best = best.max(s);
        if best == n {
            break;
        }
    }
    best
}

/// Max over inputs of the largest family of pairwise-disjoint blocks whose
/// flips change the value. Exact search; capped because the per-input block
/// lattice has 2^n entries.
pub fn block_sensitivity(f: &TruthTable) -> Result<u32> {
    block_sensitivity_capped(f, caps::BS_CAP)
}

pub fn block_sensitivity_capped(f: &TruthTable, cap: u32) -> Result<u32> {
    let n = f.arity();
    if n > cap {
        return Err(Error::CapExceeded {
            op: "block_sensitivity",
            arity: n,
            cap,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let len = f.len() as usize;
    let words = len.div_ceil(64);
    let mut best = 0u32;
    let mut sensitive = vec![0u64; words];
    let mut reachable = vec![0u64; words];
    let mut proper = vec![0u64; words];
    for x in 0..f.len() {
        let v = f.get(x);
        for w in sensitive.iter_mut() {
            *w = 0;
        }
        for b in 1..f.len() {
            if f.get(x ^ b) != v {
                sensitive[(b >> 6) as usize] |= 1u64 << (b & 63);
            }
        }
        // reachable[B] = some subset of B (including B) is sensitive.
        reachable.copy_from_slice(&sensitive);
        for i in 0..n {
            or_shift_up(&mut reachable, i, len);
        }
        // proper[B] = some proper subset of B is sensitive.
        for w in proper.iter_mut() {
            *w = 0;
        }
        for i in 0..n {
            or_shift_up_from(&reachable, &mut proper, i, len);
        }
        let mut minimal: Vec<u32> = Vec::new();
        for b in 1..len {
            let bit = 1u64 << (b & 63);
            if sensitive[b >> 6] & bit != 0 && proper[b >> 6] & bit == 0 {
                minimal.push(b as u32);
            }
        }
        let avail_full = (len - 1) as u32;
        let mut memo = vec![u8::MAX; len];
        let bs_x = pack_disjoint(avail_full, &minimal, &mut memo);
        best = best.max(bs_x);
        if best == n {
            break;
        }
    }
    Ok(best)
}

/// In-place monotone step of the subset OR-transform along one axis:
/// positions with bit `axis` set absorb the value at the position without it.
fn or_shift_up(bits: &mut [u64], axis: u32, len: usize) {
    if axis < 6 {
        let d = 1u32 << axis;
        let mask = lower_lane_mask(d);
        for w in bits.iter_mut() {
            *w |= (*w & mask) << d;
        }
    } else {
        let delta = 1usize << (axis - 6);
        let nwords = len.div_ceil(64);
        for j in 0..nwords {
            if j & delta != 0 {
                bits[j] |= bits[j ^ delta];
            }
        }
    }
}

/// Like [`or_shift_up`] but ORs the shifted source into a separate target.
fn or_shift_up_from(src: &[u64], dst: &mut [u64], axis: u32, len: usize) {
    if axis < 6 {
        let d = 1u32 << axis;
        let mask = lower_lane_mask(d);
        for (s, t) in src.iter().zip(dst.iter_mut()) {
            *t |= (*s & mask) << d;
        }
    } else {
        let delta = 1usize << (axis - 6);
        let nwords = len.div_ceil(64);
        for j in 0..nwords {
            if j & delta != 0 {
                dst[j] |= src[j ^ delta];
            }
        }
    }
}

/// Bits whose `d`-lane is zero, d a power of two below 64.
#[inline]
fn lower_lane_mask(d: u32) -> u64 {
    let mut m = (1u64 << d) - 1;
    let mut span = 2 * d;
    while span < 64 {
        m |= m << span;
        span *= 2;
    }
    m
}

/// Largest pairwise-disjoint subfamily of `blocks` inside `avail`, memoized
/// on the set of still-available coordinates.
fn pack_disjoint(avail: u32, blocks: &[u32], memo: &mut [u8]) -> u32 {
    if avail == 0 {
        return 0;
    }
    let cached = memo[avail as usize];
    if cached != u8::MAX {
        return cached as u32;
    }
    // Branch on the lowest available coordinate that some fitting block uses:
    // either no chosen block contains it, or exactly one does.
    let mut pivot = 0u32;
    let mut fitting_any = false;
    for &b in blocks {
        if b & !avail == 0 {
            let low = b & avail;
            let c = low.trailing_zeros();
            if !fitting_any || c < pivot {
                pivot = c;
                fitting_any = true;
            }
            if pivot == avail.trailing_zeros() {
                break;
            }
        }
    }
    let result = if !fitting_any {
        0
    } else {
        let pivot_bit = 1u32 << pivot;
        let mut best = pack_disjoint(avail & !pivot_bit, blocks, memo);
        for &b in blocks {
            if b & pivot_bit != 0 && b & !avail == 0 {
                best = best.max(1 + pack_disjoint(avail & !b, blocks, memo));
            }
        }
        best
    };
    memo[avail as usize] = result as u8;
    result
}

/// Number of inputs where two functions of equal arity agree.
pub fn agreement_count(f: &TruthTable, g: &TruthTable) -> Result<u64> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: g.arity(),
        });
    }
    Ok(f.block().agree_count(g.block()))
}

/// Exact centered correlation of an acceptance profile with parity:
/// the sum over all X of (p(X) - 1/2)(Par(X) - 1/2).
pub fn correlation_with_parity(p: &AcceptanceProfile) -> BigRational {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for (x, value) in p.entries().iter().enumerate() {
        let par = if (x as u64).count_ones() % 2 == 1 {
            &half
        } else {
            &-&half
        };
        sum += (value - &half) * par;
    }
    sum
}

/// Subfunction on deg(f) variables obtained by fixing every variable outside
/// one maximal-degree monomial to 0. Preserves the degree exactly.
pub fn restrict_to_max_monomial(f: &TruthTable) -> Result<TruthTable> {
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let coeffs = mobius_coefficients(f);
    let mut monomial: Option<u64> = None;
    let mut best_size = 0;
    for (s, &c) in coeffs.iter().enumerate() {
        let size = (s as u64).count_ones();
        if c != 0 && (monomial.is_none() || size > best_size) {
            monomial = Some(s as u64);
            best_size = size;
        }
    }
    let kept = monomial.expect("non-constant function has a nonzero coefficient");
    let m = best_size;
    // Map the j-th new variable onto the j-th set bit of the kept monomial.
    let positions: Vec<u32> = (0..f.arity()).filter(|i| (kept >> i) & 1 == 1).collect();
    TruthTable::from_fn(m, |y| {
        let mut x = 0u64;
        for (j, &pos) in positions.iter().enumerate() {
            if (y >> j) & 1 == 1 {
                x |= 1u64 << pos;
            }
        }
        f.get(x)
    })
}
