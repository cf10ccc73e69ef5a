//! Total Boolean functions as explicit truth tables.
//!
//! A function f on n bits is stored as 2^n bits where position X (an n-bit
//! input word) holds f(X). Bit i of the word (least significant = i = 0)
//! carries the (i+1)-th input variable, which fixes a bit-exact file format
//! and reproducible indices everywhere else in the crate.

use rand::Rng;

use crate::bits::BitBlock;
use crate::caps;
use crate::error::{Error, Result};

mod measures;

pub use measures::{
    agreement_count, block_sensitivity, block_sensitivity_capped, correlation_with_parity,
    degree_mobius, degree_subcube, degree_subcube_capped, measure, mobius_coefficients,
    restrict_to_max_monomial, sensitivity, MeasureReport,
};

/// An n-bit input word X with bit i holding the (i+1)-th variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputWord {
    word: u64,
    arity: u32,
}

impl InputWord {
    pub fn new(word: u64, arity: u32) -> Result<Self> {
        if arity < 64 && word >> arity != 0 {
            return Err(Error::WordOutOfRange { word, arity });
        }
        Ok(InputWord { word, arity })
    }

    pub fn word(&self) -> u64 {
        self.word
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn bit(&self, i: u32) -> bool {
        debug_assert!(i < self.arity);
        (self.word >> i) & 1 == 1
    }

    /// XOR of all bits.
    pub fn parity(&self) -> bool {
        self.word.count_ones() % 2 == 1
    }
}

/// Truth table of a total Boolean function on `arity` bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: u32,
    bits: BitBlock,
}

impl TruthTable {
    fn check_arity(arity: u32) -> Result<()> {
        let max = caps::max_arity();
        if arity > max {
            return Err(Error::ArityTooLarge { arity, max });
        }
        Ok(())
    }

    /// All-zero function.
    pub fn zeros(arity: u32) -> Result<Self> {
        Self::check_arity(arity)?;
        Ok(TruthTable {
            arity,
            bits: BitBlock::zeros(1u64 << arity),
        })
    }

    /// Constant function with the given output bit.
    pub fn constant(arity: u32, value: bool) -> Result<Self> {
        let mut t = Self::zeros(arity)?;
        if value {
            for x in 0..t.len() {
                t.bits.set(x, true);
            }
        }
        Ok(t)
    }

    /// Table filled from a predicate on input words.
    pub fn from_fn(arity: u32, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut t = Self::zeros(arity)?;
        for x in 0..t.len() {
            t.bits.set(x, f(x));
        }
        Ok(t)
    }

    /// Parity of all input bits.
    pub fn parity(arity: u32) -> Result<Self> {
        Self::from_fn(arity, |x| x.count_ones() % 2 == 1)
    }

    /// OR of all input bits (0 on the empty word).
    pub fn or(arity: u32) -> Result<Self> {
        Self::from_fn(arity, |x| x != 0)
    }

    /// Uniformly random table from a seeded stream.
    pub fn random<R: Rng + ?Sized>(arity: u32, rng: &mut R) -> Result<Self> {
        Self::from_fn(arity, |_| rng.gen::<bool>())
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Number of table entries, 2^arity.
    pub fn len(&self) -> u64 {
        1u64 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: u64) -> bool {
        self.bits.get(x)
    }

    pub fn set(&mut self, x: u64, value: bool) {
        self.bits.set(x, value);
    }

    pub fn value_at(&self, x: InputWord) -> Result<bool> {
        if x.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: x.arity(),
                right: self.arity,
            });
        }
        Ok(self.get(x.word()))
    }

    /// Number of inputs mapped to 1.
    pub fn count_ones(&self) -> u64 {
        self.bits.count_ones()
    }

    /// True when exactly half of all inputs map to 1.
    pub fn is_balanced(&self) -> bool {
        self.arity > 0 && self.count_ones() == 1u64 << (self.arity - 1)
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.len()
    }

    /// Pointwise negation.
    pub fn not(&self) -> Self {
        TruthTable {
            arity: self.arity,
            bits: self.bits.complement(),
        }
    }

    /// Subfunction with variable `var` fixed to `value` (arity drops by one).
    pub fn restrict(&self, var: u32, value: bool) -> Result<Self> {
        if var >= self.arity {
            return Err(Error::VariableOutOfRange {
                var,
                arity: self.arity,
            });
        }
        let low_mask = (1u64 << var) - 1;
        let fixed = (value as u64) << var;
        let mut t = TruthTable {
            arity: self.arity - 1,
            bits: BitBlock::zeros(1u64 << (self.arity - 1)),
        };
        for y in 0..t.len() {
            let x = (y & low_mask) | fixed | ((y & !low_mask) << 1);
            t.bits.set(y, self.get(x));
        }
        Ok(t)
    }

    pub(crate) fn block(&self) -> &BitBlock {
        &self.bits
    }

    pub(crate) fn from_block(arity: u32, bits: BitBlock) -> Self {
        debug_assert_eq!(bits.len(), 1u64 << arity);
        TruthTable { arity, bits }
    }

    /// Hex rendering of the value column, most significant digit first.
    pub fn to_hex(&self) -> String {
        self.bits.to_hex()
    }

    pub fn from_hex(arity: u32, hex: &str) -> Result<Self> {
        Self::check_arity(arity)?;
        let bits = BitBlock::from_hex(1u64 << arity, hex).map_err(Error::Parse)?;
        Ok(TruthTable { arity, bits })
    }

    /// Two-line text form: `arity=<n>` then the hex value column.
    pub fn to_text(&self) -> String {
        format!("arity={}\n{}\n", self.arity, self.to_hex())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty truth-table text".into()))?;
        let arity: u32 = header
            .strip_prefix("arity=")
            .ok_or_else(|| Error::Parse(format!("expected `arity=<n>`, got {header:?}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad arity: {e}")))?;
        let hex = lines
            .next()
            .ok_or_else(|| Error::Parse("missing hex line".into()))?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after hex line".into()));
        }
        Self::from_hex(arity, hex)
    }
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruthTable(arity={}, hex={})", self.arity, self.to_hex())
    }
}
