//! Ordered families of distinct subsets and their text file format.
//!
//! Family files are UTF-8 text: a `n=<N>` header line, then one set per
//! line as a comma-separated ascending list of 1-based elements. The
//! literal `{}` denotes the empty set. Lines starting with `#` are
//! comments; blank lines are skipped. File order is preserved and is the
//! order witness indices refer to.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::mask::{MaskError, SubsetMask, MAX_GROUND_SET};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Family {
    n: u32,
    sets: Vec<SubsetMask>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Mask(#[from] MaskError),
    #[error("member {index} has ground set size {got}, family has {expected}")]
    MixedGroundSets { index: usize, got: u32, expected: u32 },
    #[error("member {second} duplicates member {first}")]
    DuplicateMember { first: usize, second: usize },
}

impl Family {
    pub fn new(n: u32, sets: Vec<SubsetMask>) -> Result<Self, FamilyError> {
        if n == 0 {
            return Err(MaskError::GroundSetEmpty.into());
        }
        if n > MAX_GROUND_SET {
            return Err(MaskError::GroundSetTooLarge(n).into());
        }
        let mut seen: HashSet<u64> = HashSet::with_capacity(sets.len());
        for (i, s) in sets.iter().enumerate() {
            if s.n() != n {
                return Err(FamilyError::MixedGroundSets { index: i, got: s.n(), expected: n });
            }
            if !seen.insert(s.bits()) {
                let first = sets.iter().position(|t| t.bits() == s.bits()).unwrap();
                return Err(FamilyError::DuplicateMember { first, second: i });
            }
        }
        Ok(Family { n, sets })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.sets
    }

    pub fn member(&self, index: usize) -> &SubsetMask {
        &self.sets[index]
    }

    pub fn contains(&self, mask: &SubsetMask) -> bool {
        mask.n() == self.n && self.sets.iter().any(|s| s.bits() == mask.bits())
    }

    /// Subfamily picking the given member indices, order preserved.
    pub fn subfamily(&self, indices: &[usize]) -> Family {
        let sets = indices.iter().map(|&i| self.sets[i]).collect();
        Family { n: self.n, sets }
    }

    /// Intersection of the members at `indices`; full ground set when empty.
    pub fn intersection_of(&self, indices: &[usize]) -> SubsetMask {
        let mut bits = if self.n >= 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        for &i in indices {
            bits &= self.sets[i].bits();
        }
        SubsetMask::new(self.n, bits).unwrap()
    }

    /// Canonical text form: header plus one line per member, ascending
    /// elements, `{}` for the empty set. Parsing this output reproduces
    /// it byte for byte.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for s in &self.sets {
            if s.is_empty() {
                out.push_str("{}\n");
            } else {
                let elems: Vec<String> = s.elements().iter().map(|e| e.to_string()).collect();
                out.push_str(&elems.join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn parse_str(text: &str) -> Result<Self, FamilyParseError> {
        parse_family(text)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_file_string())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("line {line}, col {col}: {kind}")]
pub struct FamilyParseError {
    pub line: usize,
    pub col: usize,
    pub kind: FamilyParseErrorKind,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FamilyParseErrorKind {
    #[error("missing `n=<N>` header")]
    MissingHeader,
    #[error("malformed header {0:?}: expected `n=<N>`")]
    MalformedHeader(String),
    #[error("ground set size {0} exceeds the supported maximum of 64")]
    GroundSetTooLarge(u64),
    #[error("ground set size must be positive")]
    GroundSetEmpty,
    #[error("malformed element {0:?}")]
    MalformedElement(String),
    #[error("element {element} is outside [1, {n}]")]
    ElementOutOfRange { element: u64, n: u32 },
    #[error("elements must be strictly ascending: {prev} then {next}")]
    NotAscending { prev: u32, next: u32 },
    #[error("duplicate set, first seen on line {first_line}")]
    DuplicateSet { first_line: usize },
}

fn err(line: usize, col: usize, kind: FamilyParseErrorKind) -> FamilyParseError {
    FamilyParseError { line, col, kind }
}

fn is_significant(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty() && !t.starts_with('#')
}

fn parse_header(raw: &str, lineno: usize) -> Result<u32, FamilyParseError> {
    let t = raw.trim();
    let value = t
        .strip_prefix("n=")
        .ok_or_else(|| err(lineno, 1, FamilyParseErrorKind::MalformedHeader(t.to_string())))?;
    let n: u64 = value
        .trim()
        .parse()
        .map_err(|_| err(lineno, 3, FamilyParseErrorKind::MalformedHeader(t.to_string())))?;
    if n == 0 {
        return Err(err(lineno, 3, FamilyParseErrorKind::GroundSetEmpty));
    }
    if n > MAX_GROUND_SET as u64 {
        return Err(err(lineno, 3, FamilyParseErrorKind::GroundSetTooLarge(n)));
    }
    Ok(n as u32)
}

fn parse_set_line(raw: &str, lineno: usize, n: u32) -> Result<SubsetMask, FamilyParseError> {
    let t = raw.trim();
    if t == "{}" {
        return Ok(SubsetMask::empty(n).unwrap());
    }
    let mut bits = 0u64;
    let mut prev: Option<u32> = None;
    let mut offset = 0usize; // byte offset of the current token within raw
    for token in raw.split(',') {
        let trimmed = token.trim();
        let col = offset + (token.len() - token.trim_start().len()) + 1;
        let value: u64 = trimmed
            .parse()
            .map_err(|_| err(lineno, col, FamilyParseErrorKind::MalformedElement(trimmed.to_string())))?;
        if value == 0 || value > n as u64 {
            return Err(err(lineno, col, FamilyParseErrorKind::ElementOutOfRange { element: value, n }));
        }
        let element = value as u32;
        if let Some(p) = prev {
            if element <= p {
                return Err(err(lineno, col, FamilyParseErrorKind::NotAscending { prev: p, next: element }));
            }
        }
        prev = Some(element);
        bits |= 1u64 << (element - 1);
        offset += token.len() + 1;
    }
    Ok(SubsetMask::new(n, bits).unwrap())
}

fn parse_family(text: &str) -> Result<Family, FamilyParseError> {
    let mut n: Option<u32> = None;
    let mut sets: Vec<SubsetMask> = Vec::new();
    let mut first_line_of: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    let mut saw_any_line = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        saw_any_line = true;
        if !is_significant(raw) {
            continue;
        }
        match n {
            None => {
                n = Some(parse_header(raw, lineno)?);
            }
            Some(n) => {
                let mask = parse_set_line(raw, lineno, n)?;
                if let Some(&first_line) = first_line_of.get(&mask.bits()) {
                    return Err(err(lineno, 1, FamilyParseErrorKind::DuplicateSet { first_line }));
                }
                first_line_of.insert(mask.bits(), lineno);
                sets.push(mask);
            }
        }
    }

    match n {
        Some(n) => Ok(Family { n, sets }),
        None => {
            let line = if saw_any_line { 1 } else { 0 };
            Err(err(line.max(1), 1, FamilyParseErrorKind::MissingHeader))
        }
    }
}
