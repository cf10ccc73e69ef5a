//! Packed bit storage shared by truth tables and vertex sets.
//!
//! Bit `x` of a `BitBlock` holds the value attached to the input word `x`.
//! The canonical text form is a hex string of ceil(len/4) digits, most
//! significant digit first, so bit `x` of the string's value is bit `x` of
//! the block.

/// Fixed-length packed bit sequence indexed by input words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitBlock {
    len: u64,
    words: Vec<u64>,
}

impl BitBlock {
    pub fn zeros(len: u64) -> Self {
        let nwords = len.div_ceil(64) as usize;
        BitBlock {
            len,
            words: vec![0; nwords.max(1)],
        }
    }

    #[inline]
    pub fn get(&self, x: u64) -> bool {
        debug_assert!(x < self.len);
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: u64, value: bool) {
        debug_assert!(x < self.len);
        let w = &mut self.words[(x >> 6) as usize];
        if value {
            *w |= 1u64 << (x & 63);
        } else {
            *w &= !(1u64 << (x & 63));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Zero any storage bits beyond `len`; needed after whole-word writes.
    pub fn mask_tail(&mut self) {
        let tail = (self.len & 63) as u32;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    /// Bitwise complement of the whole block.
    pub fn complement(&self) -> Self {
        let mut b = BitBlock {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        b.mask_tail();
        b
    }

    /// Number of positions where both blocks hold a one.
    pub fn and_count(&self, other: &Self) -> u64 {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    /// Number of positions where the blocks agree (XNOR popcount).
    pub fn agree_count(&self, other: &Self) -> u64 {
        debug_assert_eq!(self.len, other.len);
        let full: u64 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (!(a ^ b)).count_ones() as u64)
            .sum();
        // Tail bits agree trivially in the XNOR; subtract them.
        full - (self.words.len() as u64 * 64 - self.len)
    }

    /// The block re-indexed along one cube direction: bit x of the result is
    /// bit x^(1<<axis) of self. Requires `1 << axis < len`.
    pub fn xor_shift_axis(&self, axis: u32) -> Self {
        debug_assert!((1u64 << axis) < self.len);
        if axis < 6 {
            let d = 1u32 << axis;
            let mask = intra_mask(d);
            let words = self
                .words
                .iter()
                .map(|w| ((w & mask) << d) | ((w & !mask) >> d))
                .collect();
            BitBlock {
                len: self.len,
                words,
            }
        } else {
            let word_delta = 1usize << (axis - 6);
            let words = (0..self.words.len())
                .map(|i| self.words[i ^ word_delta])
                .collect();
            BitBlock {
                len: self.len,
                words,
            }
        }
    }

    /// Hex rendering: ceil(len/4) digits, most significant first.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits as usize);
        for j in (0..digits).rev() {
            let bit = j * 4;
            let word = (bit >> 6) as usize;
            let shift = (bit & 63) as u32;
            let nibble = (self.words.get(word).copied().unwrap_or(0) >> shift) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    /// Parse the hex rendering produced by [`BitBlock::to_hex`].
    pub fn from_hex(len: u64, hex: &str) -> Result<Self, String> {
        let digits = len.div_ceil(4).max(1);
        let chars: Vec<char> = hex.trim().chars().collect();
        if chars.len() as u64 != digits {
            return Err(format!(
                "expected {} hex digits for {} bits, got {}",
                digits,
                len,
                chars.len()
            ));
        }
        let mut block = BitBlock::zeros(len);
        for (pos, c) in chars.iter().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| format!("invalid hex digit {c:?}"))? as u64;
            let j = digits - 1 - pos as u64;
            let bit = j * 4;
            let word = (bit >> 6) as usize;
            let shift = (bit & 63) as u32;
            block.words[word] |= nibble << shift;
        }
        // Reject set bits beyond len.
        let mut check = block.clone();
        check.mask_tail();
        if check.words != block.words {
            return Err("hex string sets bits beyond the table length".into());
        }
        Ok(block)
    }
}

/// Mask of the positions whose `d`-bit is clear (d a power of two < 64);
/// those bits move upward under an XOR shift by d.
#[inline]
fn intra_mask(d: u32) -> u64 {
    debug_assert!(d > 0 && d < 64 && d.is_power_of_two());
    let mut m = (1u64 << d) - 1;
    let mut span = 2 * d;
    while span < 64 {
        m |= m << span;
        span *= 2;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn get_set_roundtrip() {
        let mut b = BitBlock::zeros(130);
        b.set(0, true);
        b.set(64, true);
        b.set(129, true);
        assert!(b.get(0) && b.get(64) && b.get(129));
        assert!(!b.get(1) && !b.get(128));
        assert_eq!(b.count_ones(), 3);
        b.set(64, false);
        assert_eq!(b.count_ones(), 2);
    }

    #[test]
    fn hex_roundtrip_short() {
        let mut b = BitBlock::zeros(4);
        b.set(1, true);
        b.set(2, true);
        b.set(3, true);
        assert_eq!(b.to_hex(), "e");
        let back = BitBlock::from_hex(4, "e").unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn hex_single_bit_lengths() {
        let mut b = BitBlock::zeros(1);
        assert_eq!(b.to_hex(), "0");
        b.set(0, true);
        assert_eq!(b.to_hex(), "1");
        assert!(BitBlock::from_hex(1, "2").is_err());
    }

    #[test]
    fn xor_shift_matches_pointwise() {
        let len = 256u64;
        let mut b = BitBlock::zeros(len);
        for x in 0..len {
            // arbitrary deterministic pattern
            b.set(x, (x * 2654435761) % 7 < 3);
        }
        for axis in 0..8u32 {
            let shifted = b.xor_shift_axis(axis);
            for x in 0..len {
                assert_eq!(shifted.get(x), b.get(x ^ (1 << axis)), "axis={axis} x={x}");
            }
        }
    }

    #[test]
    fn agree_count_tail_correct() {
        let mut a = BitBlock::zeros(5);
        let b = BitBlock::zeros(5);
        assert_eq!(a.agree_count(&b), 5);
        a.set(3, true);
        assert_eq!(a.agree_count(&b), 4);
    }
}
