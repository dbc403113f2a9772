//! Irreducible fractions in [0,1) and the fraction sets L they form.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An irreducible fraction a/b with 0 <= a < b.
///
/// Zero is representable only as 0/1; every other value has a unique
/// (numerator, denominator) pair, so equality on the fields is equality
/// of rationals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Fraction {
    a: u64,
    b: u64,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FractionError {
    #[error("malformed fraction literal {0:?}: expected \"<uint>/<uint>\"")]
    Malformed(String),
    #[error("fraction {a}/0 has zero denominator")]
    ZeroDenominator { a: u64 },
    #[error("fraction {a}/{b} is not in [0,1): numerator must be smaller than denominator")]
    NotProper { a: u64, b: u64 },
    #[error("fraction {a}/{b} is not irreducible (gcd {gcd})")]
    NotIrreducible { a: u64, b: u64, gcd: u64 },
}

impl Fraction {
    /// Accepts only literals that already satisfy the invariants; no
    /// normalization happens here so that L round-trips bit-exactly.
    pub fn new(a: u64, b: u64) -> Result<Self, FractionError> {
        if b == 0 {
            return Err(FractionError::ZeroDenominator { a });
        }
        if a >= b {
            return Err(FractionError::NotProper { a, b });
        }
        let g = gcd(a, b);
        if g != 1 {
            return Err(FractionError::NotIrreducible { a, b, gcd: g });
        }
        Ok(Fraction { a, b })
    }

    /// Reduces a/b to lowest terms first. Used by generators that start
    /// from the unreduced 0/s, ..., (s-1)/s forms.
    pub fn reduced(a: u64, b: u64) -> Result<Self, FractionError> {
        if b == 0 {
            return Err(FractionError::ZeroDenominator { a });
        }
        let g = if a == 0 { b } else { gcd(a, b) };
        Fraction::new(a / g, b / g)
    }

    pub fn numerator(&self) -> u64 {
        self.a
    }

    pub fn denominator(&self) -> u64 {
        self.b
    }

    /// True iff intersection_size = (a/b) * set_size exactly over the
    /// rationals, by integer cross-multiplication.
    pub fn matches(&self, intersection_size: u64, set_size: u64) -> bool {
        (self.b as u128) * (intersection_size as u128) == (self.a as u128) * (set_size as u128)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

/// Strict parse of "<uint>/<uint>". The literal must already be
/// irreducible and in [0,1); "2/4" is an error, not 1/2.
pub fn parse_fraction(text: &str) -> Result<Fraction, FractionError> {
    let (num, den) = text
        .split_once('/')
        .ok_or_else(|| FractionError::Malformed(text.to_string()))?;
    let a: u64 = num
        .parse()
        .map_err(|_| FractionError::Malformed(text.to_string()))?;
    let b: u64 = den
        .parse()
        .map_err(|_| FractionError::Malformed(text.to_string()))?;
    Fraction::new(a, b)
}

/// Convenience wrapper around [`Fraction::matches`] mirroring the
/// operation's free-function form.
pub fn matches_fraction(intersection_size: u64, set_size: u64, frac: Fraction) -> bool {
    frac.matches(intersection_size, set_size)
}

/// The fraction set L: nonempty, pairwise distinct, order preserved.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LSpec {
    fractions: Vec<Fraction>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LSpecError {
    #[error("L must contain at least one fraction")]
    Empty,
    #[error("L contains duplicate fraction {0}")]
    Duplicate(Fraction),
    #[error(transparent)]
    Fraction(#[from] FractionError),
}

impl LSpec {
    pub fn new(fractions: Vec<Fraction>) -> Result<Self, LSpecError> {
        if fractions.is_empty() {
            return Err(LSpecError::Empty);
        }
        // Members are irreducible, so field equality is rational equality.
        for (i, f) in fractions.iter().enumerate() {
            if fractions[..i].contains(f) {
                return Err(LSpecError::Duplicate(*f));
            }
        }
        Ok(LSpec { fractions })
    }

    /// Parses a comma-separated list of strict fraction literals,
    /// e.g. "0/1,1/2".
    pub fn parse(text: &str) -> Result<Self, LSpecError> {
        let fractions = text
            .split(',')
            .map(|tok| parse_fraction(tok.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        LSpec::new(fractions)
    }

    pub fn fractions(&self) -> &[Fraction] {
        &self.fractions
    }

    /// s = |L|.
    pub fn s(&self) -> usize {
        self.fractions.len()
    }

    pub fn contains(&self, frac: &Fraction) -> bool {
        self.fractions.contains(frac)
    }

    /// True iff some fraction in L matches the intersection size against
    /// the given set size.
    pub fn any_matches(&self, intersection_size: u64, set_size: u64) -> bool {
        self.fractions
            .iter()
            .any(|f| f.matches(intersection_size, set_size))
    }
}

impl fmt::Display for LSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, frac) in self.fractions.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{frac}")?;
        }
        Ok(())
    }
}
