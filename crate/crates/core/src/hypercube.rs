//! Induced subgraphs of the hypercube {0,1}^n and the minimum-max-degree
//! quantity over subgraphs of size 2^(n-1)+1.
//!
//! The exact search is exhaustive (branch-and-bound with light symmetry
//! breaking) and returns a certificate whose witness re-verifies; the
//! annealing search is an explicitly labeled heuristic that only ever
//! produces upper-bound witnesses.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitBlock;
use crate::boolfn::{InputWord, TruthTable};
use crate::caps;
use crate::error::{Error, Result};

/// An induced subgraph of {0,1}^n given by a membership bit per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct VertexSet {
    arity: u32,
    bits: BitBlock,
    size: u64,
}

impl VertexSet {
    pub fn empty(arity: u32) -> Result<Self> {
        let max = caps::max_arity();
        if arity > max {
            return Err(Error::ArityTooLarge { arity, max });
        }
        Ok(VertexSet {
            arity,
            bits: BitBlock::zeros(1u64 << arity),
            size: 0,
        })
    }

    pub fn from_fn(arity: u32, member: impl Fn(u64) -> bool) -> Result<Self> {
        let mut s = Self::empty(arity)?;
        for v in 0..s.len() {
            if member(v) {
                s.insert(v);
            }
        }
        Ok(s)
    }

    /// Vertices where the function outputs 1.
    pub fn from_truth_table(f: &TruthTable) -> Self {
        VertexSet {
            arity: f.arity(),
            bits: f.block().clone(),
            size: f.count_ones(),
        }
    }

    /// All vertices of odd Hamming weight: an independent set of exactly
    /// half the cube.
    pub fn odd_weight(arity: u32) -> Result<Self> {
        Self::from_fn(arity, |v| v.count_ones() % 2 == 1)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Number of cube vertices, 2^arity.
    pub fn len(&self) -> u64 {
        1u64 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn contains(&self, v: u64) -> bool {
        self.bits.get(v)
    }

    pub fn insert(&mut self, v: u64) {
        if !self.bits.get(v) {
            self.bits.set(v, true);
            self.size += 1;
        }
    }

    pub fn remove(&mut self, v: u64) {
        if self.bits.get(v) {
            self.bits.set(v, false);
            self.size -= 1;
        }
    }

    pub fn complement(&self) -> Self {
        VertexSet {
            arity: self.arity,
            bits: self.bits.complement(),
            size: self.len() - self.size,
        }
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len()).filter(|&v| self.contains(v))
    }

    /// Membership column in the same hex layout as a truth table.
    pub fn to_hex(&self) -> String {
        self.bits.to_hex()
    }

    pub fn from_hex(arity: u32, hex: &str) -> Result<Self> {
        let max = caps::max_arity();
        if arity > max {
            return Err(Error::ArityTooLarge { arity, max });
        }
        let bits = BitBlock::from_hex(1u64 << arity, hex).map_err(Error::Parse)?;
        let size = bits.count_ones();
        Ok(VertexSet { arity, bits, size })
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "VertexSet(arity={}, size={}, hex={})",
            self.arity,
            self.size,
            self.to_hex()
        )
    }
}

/// Maximum induced degree, by per-vertex neighbor membership tests.
pub fn max_degree(g: &VertexSet) -> u32 {
    let n = g.arity();
    let mut best = 0;
    for v in g.members() {
        let mut d = 0;
        for i in 0..n {
            if g.contains(v ^ (1u64 << i)) {
                d += 1;
            }
        }
        best = best.max(d);
        if best == n {
            break;
        }
    }
    best
}

/// Maximum induced degree, by word-parallel direction masks; an independent
/// route used to cross-check [`max_degree`].
pub fn max_degree_bitparallel(g: &VertexSet) -> u32 {
    let n = g.arity();
    if n == 0 || g.size() == 0 {
        return 0;
    }
    let mut counts = vec![0u8; g.len() as usize];
    for i in 0..n {
        let shifted = g.bits.xor_shift_axis(i);
        for (w, chunk) in g.bits.words().iter().enumerate() {
            let mut both = chunk & shifted.words()[w];
            while both != 0 {
                let b = both.trailing_zeros() as usize;
                counts[w * 64 + b] += 1;
                both &= both - 1;
            }
        }
    }
    counts.iter().copied().max().unwrap_or(0) as u32
}

/// A member of largest induced degree, lowest vertex first on ties.
pub fn hardest_vertex(a: &VertexSet) -> Result<(InputWord, u32)> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.arity();
    let mut best_v = 0;
    let mut best_d = 0;
    let mut found = false;
    for v in a.members() {
        let mut d = 0;
        for i in 0..n {
            if a.contains(v ^ (1u64 << i)) {
                d += 1;
            }
        }
        if !found || d > best_d {
            best_v = v;
            best_d = d;
            found = true;
        }
    }
    Ok((InputWord::new(best_v, n)?, best_d))
}

/// Result of a minimum-max-degree search; `exact` distinguishes exhaustive
/// proofs from heuristic upper bounds.
#[derive(Debug, Clone)]
pub struct LambdaCertificate {
    pub arity: u32,
    pub value: u32,
    pub witness: VertexSet,
    pub exact: bool,
}

impl LambdaCertificate {
    /// Re-check the certificate against its own witness.
    pub fn verify(&self) -> bool {
        self.witness.arity() == self.arity
            && self.witness.size() == witness_size(self.arity)
            && max_degree(&self.witness) == self.value
    }
}

/// Required witness size, one more than half the cube.
pub fn witness_size(arity: u32) -> u64 {
    (1u64 << (arity - 1)) + 1
}

/// Closed-form lower bound on the minimum max degree:
/// (log2 n)/2 - (log2 log2 n)/2 + 1/2. Needs n >= 2.
pub fn lambda_lower_bound(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::CapExceeded {
            op: "lambda_lower_bound",
            arity: n,
            cap: 2,
        });
    }
    let ln = (n as f64).log2();
    Ok(0.5 * ln - 0.5 * ln.log2() + 0.5)
}

/// Exhaustive minimum over all subgraphs of size 2^(n-1)+1, with witness.
pub fn lambda_exact(n: u32) -> Result<LambdaCertificate> {
    lambda_exact_capped(n, caps::LAMBDA_EXACT_CAP)
}

/// Exhaustive search with an explicit cap; refuses n beyond
/// [`caps::LAMBDA_EXACT_MAX`] no matter the cap.
pub fn lambda_exact_capped(n: u32, cap: u32) -> Result<LambdaCertificate> {
    let cap = cap.min(caps::LAMBDA_EXACT_MAX);
    if n == 0 || n > cap {
        return Err(Error::CapExceeded {
            op: "lambda_exact",
            arity: n,
            cap,
        });
    }
    let len = 1usize << n;
    let target = witness_size(n);

    // Incumbent: the odd-weight independent set plus the origin, max degree n.
    let mut best_set = VertexSet::odd_weight(n)?;
    best_set.insert(0);
    debug_assert_eq!(best_set.size(), target);
    let mut best_value = max_degree(&best_set);

    // Any candidate can be XOR-translated to contain the origin, and its
    // weight-one members can be permuted onto a coordinate prefix, so the
    // search fixes the origin in and branches only on the prefix length at
    // weight one. Deeper levels are enumerated in full.
    let heavier: Vec<u64> = (0..len as u64).filter(|v| v.count_ones() >= 2).collect();
    let mut state = SearchState {
        n,
        target,
        degrees: vec![0u8; len],
        members: Vec::with_capacity(target as usize),
        in_set: vec![false; len],
        current_max: 0,
        best_value: &mut best_value,
        best_members: None,
    };
    for prefix in 0..=n {
        state.reset();
        state.push(0);
        for i in 0..prefix {
            state.push(1u64 << i);
        }
        if state.current_max < *state.best_value {
            state.descend(&heavier, 0);
        }
    }
    let witness = match state.best_members {
        Some(members) => {
            let mut w = VertexSet::empty(n)?;
            for v in members {
                w.insert(v);
            }
            w
        }
        None => best_set,
    };
    let cert = LambdaCertificate {
        arity: n,
        value: best_value,
        witness,
        exact: true,
    };
    debug_assert!(cert.verify());
    Ok(cert)
}

struct SearchState<'a> {
    n: u32,
    target: u64,
    degrees: Vec<u8>,
    members: Vec<u64>,
    in_set: Vec<bool>,
    current_max: u32,
    best_value: &'a mut u32,
    best_members: Option<Vec<u64>>,
}

impl SearchState<'_> {
    fn reset(&mut self) {
        self.degrees.iter_mut().for_each(|d| *d = 0);
        self.in_set.iter_mut().for_each(|m| *m = false);
        self.members.clear();
        self.current_max = 0;
    }

    fn push(&mut self, v: u64) {
        let mut dv = 0u8;
        for i in 0..self.n {
            let u = (v ^ (1u64 << i)) as usize;
            if self.in_set[u] {
                dv += 1;
                self.degrees[u] += 1;
                self.current_max = self.current_max.max(self.degrees[u] as u32);
            }
        }
        self.degrees[v as usize] = dv;
        self.current_max = self.current_max.max(dv as u32);
        self.in_set[v as usize] = true;
        self.members.push(v);
    }

    fn pop(&mut self) {
        let v = self.members.pop().expect("pop matches a push");
        self.in_set[v as usize] = false;
        self.degrees[v as usize] = 0;
        for i in 0..self.n {
            let u = (v ^ (1u64 << i)) as usize;
            if self.in_set[u] {
                self.degrees[u] -= 1;
            }
        }
        // current_max may be stale (too high) after a pop; recompute lazily.
        self.current_max = self
            .members
            .iter()
            .map(|&m| self.degrees[m as usize] as u32)
            .max()
            .unwrap_or(0);
    }

    fn descend(&mut self, candidates: &[u64], next: usize) {
        let chosen = self.members.len() as u64;
        if chosen == self.target {
            if self.current_max < *self.best_value {
                *self.best_value = self.current_max;
                self.best_members = Some(self.members.clone());
            }
            return;
        }
        // Infeasible if the remaining candidates cannot fill the set.
        let remaining = (candidates.len() - next) as u64;
        if chosen + remaining < self.target {
            return;
        }
        let v = candidates[next];
        // Include v, unless that already matches the incumbent.
        self.push(v);
        if self.current_max < *self.best_value {
            self.descend(candidates, next + 1);
        }
        self.pop();
        // Exclude v.
        self.descend(candidates, next + 1);
    }
}

/// Simulated-annealing upper-bound search: swap one member for one
/// non-member, always reporting `exact = false`.
pub fn lambda_upper_search(n: u32, iterations: u64, seed: u64) -> Result<LambdaCertificate> {
    if n == 0 {
        return Err(Error::CapExceeded {
            op: "lambda_upper_search",
            arity: n,
            cap: caps::max_arity(),
        });
    }
    let len = 1u64 << n;
    let target = witness_size(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut vertices: Vec<u64> = (0..len).collect();
    vertices.shuffle(&mut rng);
    let (members, outside) = vertices.split_at(target as usize);
    let mut members = members.to_vec();
    let mut outside = outside.to_vec();

    let mut in_set = vec![false; len as usize];
    let mut degrees = vec![0u8; len as usize];
    for &v in &members {
        in_set[v as usize] = true;
    }
    for &v in &members {
        degrees[v as usize] = (0..n)
            .filter(|i| in_set[(v ^ (1u64 << i)) as usize])
            .count() as u8;
    }
    let max_deg = |members: &[u64], degrees: &[u8]| -> u32 {
        members
            .iter()
            .map(|&v| degrees[v as usize] as u32)
            .max()
            .unwrap_or(0)
    };
    let mut current = max_deg(&members, &degrees);
    let mut best_members = members.clone();
    let mut best = current;

    if !outside.is_empty() {
        for step in 0..iterations {
            let mi = rng.gen_range(0..members.len());
            let oi = rng.gen_range(0..outside.len());
            let out_v = members[mi];
            let in_v = outside[oi];

            remove_vertex(out_v, n, &mut in_set, &mut degrees);
            add_vertex(in_v, n, &mut in_set, &mut degrees);
            members[mi] = in_v;
            outside[oi] = out_v;
            let candidate = max_deg(&members, &degrees);

            let temperature = 1.5 * (1.0 - step as f64 / iterations as f64) + 1e-3;
            let accept = candidate <= current
                || rng.gen::<f64>() < (-((candidate - current) as f64) / temperature).exp();
            if accept {
                current = candidate;
                if current < best {
                    best = current;
                    best_members = members.clone();
                }
            } else {
                // undo
                remove_vertex(in_v, n, &mut in_set, &mut degrees);
                add_vertex(out_v, n, &mut in_set, &mut degrees);
                members[mi] = out_v;
                outside[oi] = in_v;
            }
        }
    }

    let mut witness = VertexSet::empty(n)?;
    for v in best_members {
        witness.insert(v);
    }
    let value = max_degree(&witness);
    debug_assert_eq!(value, best);
    Ok(LambdaCertificate {
        arity: n,
        value,
        witness,
        exact: false,
    })
}

fn add_vertex(v: u64, n: u32, in_set: &mut [bool], degrees: &mut [u8]) {
    let mut dv = 0u8;
    for i in 0..n {
        let u = (v ^ (1u64 << i)) as usize;
        if in_set[u] {
            dv += 1;
            degrees[u] += 1;
        }
    }
    degrees[v as usize] = dv;
    in_set[v as usize] = true;
}

fn remove_vertex(v: u64, n: u32, in_set: &mut [bool], degrees: &mut [u8]) {
    in_set[v as usize] = false;
    degrees[v as usize] = 0;
    for i in 0..n {
        let u = (v ^ (1u64 << i)) as usize;
        if in_set[u] {
            degrees[u] -= 1;
        }
    }
}

/// Max degrees of a set and of its complement; rejects sets of size exactly
/// half the cube, where the bound being checked does not apply.
pub fn gotsman_linial_check(g: &VertexSet) -> Result<(u32, u32)> {
    let n = g.arity();
    if n > 0 && g.size() == 1u64 << (n - 1) {
        return Err(Error::BalancedSet { size: g.size() });
    }
    Ok((max_degree(g), max_degree(&g.complement())))
}
