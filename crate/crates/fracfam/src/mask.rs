//! Subsets of [n] as single-word bit vectors, n <= 64.

use std::fmt;

use thiserror::Error;

/// Largest supported ground set; keeps every intersection one AND.
pub const MAX_GROUND_SET: u32 = 64;

/// A subset of {1, ..., n} stored as an n-bit mask. Bit l (0-based)
/// is set iff element l+1 is in the set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SubsetMask {
    n: u32,
    bits: u64,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MaskError {
    #[error("ground set size {0} exceeds the supported maximum of 64")]
    GroundSetTooLarge(u32),
    #[error("ground set size must be positive")]
    GroundSetEmpty,
    #[error("bit pattern {bits:#x} has bits above position {n}")]
    BitsOutOfRange { n: u32, bits: u64 },
    #[error("element {element} is outside [1, {n}]")]
    ElementOutOfRange { element: u32, n: u32 },
    #[error("ground set sizes differ: {0} vs {1}")]
    MixedGroundSets(u32, u32),
}

fn valid_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl SubsetMask {
    pub fn new(n: u32, bits: u64) -> Result<Self, MaskError> {
        if n == 0 {
            return Err(MaskError::GroundSetEmpty);
        }
        if n > MAX_GROUND_SET {
            return Err(MaskError::GroundSetTooLarge(n));
        }
        if bits & !valid_bits(n) != 0 {
            return Err(MaskError::BitsOutOfRange { n, bits });
        }
        Ok(SubsetMask { n, bits })
    }

    pub fn empty(n: u32) -> Result<Self, MaskError> {
        SubsetMask::new(n, 0)
    }

    pub fn full(n: u32) -> Result<Self, MaskError> {
        if n == 0 {
            return Err(MaskError::GroundSetEmpty);
        }
        if n > MAX_GROUND_SET {
            return Err(MaskError::GroundSetTooLarge(n));
        }
        Ok(SubsetMask { n, bits: valid_bits(n) })
    }

    /// Builds from 1-based elements; rejects anything outside [1, n].
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self, MaskError> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return Err(MaskError::ElementOutOfRange { element: e, n });
            }
            bits |= 1u64 << (e - 1);
        }
        SubsetMask::new(n, bits)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn cardinality(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, element: u32) -> bool {
        element >= 1 && element <= self.n && self.bits & (1u64 << (element - 1)) != 0
    }

    pub fn intersect(&self, other: &SubsetMask) -> Result<SubsetMask, MaskError> {
        if self.n != other.n {
            return Err(MaskError::MixedGroundSets(self.n, other.n));
        }
        Ok(SubsetMask { n: self.n, bits: self.bits & other.bits })
    }

    /// 1-based elements in ascending order.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cardinality() as usize);
        let mut bits = self.bits;
        while bits != 0 {
            let l = bits.trailing_zeros();
            out.push(l + 1);
            bits &= bits - 1;
        }
        out
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let elems = self.elements();
        write!(f, "{{")?;
        for (i, e) in elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// All masks of the given cardinality in increasing numeric (mask-value)
/// order, via Gosper's hack.
pub fn masks_of_cardinality(n: u32, k: u32) -> Vec<u64> {
    assert!(n >= 1 && n <= MAX_GROUND_SET);
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let limit = valid_bits(n);
    let mut out = Vec::new();
    let mut v = valid_bits(k);
    loop {
        out.push(v);
        // Gosper's hack: next larger integer with the same popcount.
        let t = v | (v.wrapping_sub(1));
        let shift = v.trailing_zeros() + 1;
        let low = if shift >= 64 {
            0
        } else {
            ((!t) & (!t).wrapping_neg()).wrapping_sub(1) >> shift
        };
        let next = t.wrapping_add(1) | low;
        // next < v signals wraparound past the top of the word
        if next > limit || next < v {
            break;
        }
        v = next;
    }
    out
}
