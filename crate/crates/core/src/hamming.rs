//! Perfect single-error-correcting Hamming codes of length `n0 = 2^k - 1`.
//!
//! Positions are numbered `1..=n0` and position `j` lives in bit `j - 1`.
//! The parity-check column of position `j` is `j` itself, so the syndrome of a
//! word is the XOR of the positions of its set bits and a nonzero syndrome
//! names the single position to flip.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HammingCode {
    k: u32,
    n0: u32,
}

impl HammingCode {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 || k > 5 {
            return Err(Error::InvalidParams(format!("Hamming parameter k={k} outside 1..=5")));
        }
        Ok(HammingCode { k, n0: (1 << k) - 1 })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Code length `2^k - 1`.
    pub fn len(&self) -> u32 {
        self.n0
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn syndrome(&self, v: u64) -> u32 {
        let mut s = 0;
        let mut rest = v;
        while rest != 0 {
            s ^= rest.trailing_zeros() + 1;
            rest &= rest - 1;
        }
        s
    }

    pub fn is_codeword(&self, v: u64) -> bool {
        self.syndrome(v) == 0
    }

    /// Nearest codeword `h` and, if `v != h`, the position `i` with `v = h<i>`.
    #[inline]
    pub fn decode(&self, v: u64) -> (u64, Option<u32>) {
        debug_assert!(v >> self.n0 == 0);
        match self.syndrome(v) {
            0 => (v, None),
            s => (v ^ (1 << (s - 1)), Some(s)),
        }
    }

    /// All `2^(n0-k)` codewords, ascending.
    pub fn codewords(&self) -> impl Iterator<Item = u64> + '_ {
        (0..(1u64 << self.n0)).filter(move |&v| self.is_codeword(v))
    }

    /// For codeword `h` and position `i`, `f[j-1]` is the position `l` with
    /// `h<i,j> = h'<l>` for some codeword `h'`. `f(i) = i`.
    pub fn lemma_permutation(&self, h: u64, i: u32) -> Result<Vec<u32>> {
        if !self.is_codeword(h) {
            return Err(Error::NotCodeword(h));
        }
        if i == 0 || i > self.n0 {
            return Err(Error::CoordinateOutOfRange { coord: i, n: self.n0 });
        }
        let hi = h ^ (1 << (i - 1));
        let f = (1..=self.n0)
            .map(|j| {
                if j == i {
                    i
                } else {
                    let (_, pos) = self.decode(hi ^ (1 << (j - 1)));
                    pos.expect("h<i,j> with j != i lies outside the code")
                }
            })
            .collect();
        Ok(f)
    }
}
