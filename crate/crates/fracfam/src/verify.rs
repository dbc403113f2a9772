//! The r-wise fractional L-intersecting property and its exact verifier.
//!
//! A family passes iff for every r distinct members the size of their
//! common intersection equals (a/b)*|A| for some fraction a/b in L and
//! some member A of the tuple. All comparisons are integer
//! cross-multiplications; nothing here touches floating point.

use serde::Serialize;
use thiserror::Error;

use crate::family::Family;
use crate::fraction::LSpec;

/// Instance parameters: the wise-ness r and the fraction set L.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InstanceParams {
    r: u32,
    l: LSpec,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParamsError {
    #[error("r must be at least 2, got {0}")]
    RTooSmall(u32),
}

impl InstanceParams {
    pub fn new(r: u32, l: LSpec) -> Result<Self, ParamsError> {
        if r < 2 {
            return Err(ParamsError::RTooSmall(r));
        }
        Ok(InstanceParams { r, l })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn l(&self) -> &LSpec {
        &self.l
    }
}

/// A failing r-tuple: sorted member indices in family file order plus
/// the size of their common intersection.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ViolationWitness {
    pub indices: Vec<usize>,
    pub intersection_size: u32,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TupleError {
    #[error("member index {index} out of range for family of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate member index {index}")]
    DuplicateIndex { index: usize },
}

/// Outcome of [`verify_family`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Valid,
    Invalid(ViolationWitness),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&ViolationWitness> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(w) => Some(w),
        }
    }
}

/// Does the tuple at `indices` satisfy the fractional condition? True iff
/// some fraction in L matches the intersection size against the size of
/// some member of the tuple.
pub fn check_tuple(
    family: &Family,
    indices: &[usize],
    params: &InstanceParams,
) -> Result<bool, TupleError> {
    for (i, &idx) in indices.iter().enumerate() {
        if idx >= family.len() {
            return Err(TupleError::IndexOutOfRange { index: idx, len: family.len() });
        }
        if indices[..i].contains(&idx) {
            return Err(TupleError::DuplicateIndex { index: idx });
        }
    }
    let inter = family.intersection_of(indices).cardinality() as u64;
    Ok(indices.iter().any(|&idx| {
        params
            .l()
            .any_matches(inter, family.member(idx).cardinality() as u64)
    }))
}

/// Checks every r-subset of member indices in lexicographic order and
/// stops at the first failure, so a returned witness is the
/// lexicographically smallest failing tuple. Families with fewer than r
/// members are vacuously valid.
pub fn verify_family(family: &Family, params: &InstanceParams) -> Verdict {
    let m = family.len();
    let r = params.r() as usize;
    if m < r {
        return Verdict::Valid;
    }

    let mut indices: Vec<usize> = (0..r).collect();
    loop {
        let passes = check_tuple(family, &indices, params).expect("indices are in range");
        if !passes {
            let intersection_size = family.intersection_of(&indices).cardinality();
            return Verdict::Invalid(ViolationWitness {
                indices: indices.clone(),
                intersection_size,
            });
        }
        // advance to the next r-combination of 0..m in lex order
        let mut i = r;
        loop {
            if i == 0 {
                return Verdict::Valid;
            }
            i -= 1;
            if indices[i] != i + m - r {
                break;
            }
        }
        indices[i] += 1;
        for k in i + 1..r {
            indices[k] = indices[k - 1] + 1;
        }
    }
}

/// Incremental validity for growing families one member at a time.
///
/// After `push(S)` succeeds the tracked family is exactly the set of
/// pushed members and is r-wise valid: extending a valid family by S only
/// creates tuples containing S, so it suffices to check S against every
/// (r-1)-subset of the current members. Pair intersections are cached for
/// r = 4; for r = 3 the members themselves serve as the cache.
pub struct IncrementalChecker {
    r: usize,
    members: Vec<u64>,
    sizes: Vec<u64>,
    // upper-triangular pairwise intersections in (i, j) lex order, r = 4 only
    pair_cache: Vec<u64>,
    fractions: Vec<(u64, u64)>,
}

impl IncrementalChecker {
    pub fn new(params: &InstanceParams) -> Self {
        IncrementalChecker {
            r: params.r() as usize,
            members: Vec::new(),
            sizes: Vec::new(),
            pair_cache: Vec::new(),
            fractions: params
                .l()
                .fractions()
                .iter()
                .map(|f| (f.numerator(), f.denominator()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn tuple_ok(&self, inter: u64, candidate_size: u64, member_sizes: &[u64]) -> bool {
        self.fractions.iter().any(|&(a, b)| {
            let target = |size: u64| (b as u128) * (inter as u128) == (a as u128) * (size as u128);
            target(candidate_size) || member_sizes.iter().copied().any(target)
        })
    }

    /// Would adding `bits` keep the family valid?
    pub fn admits(&self, bits: u64) -> bool {
        let d = self.members.len();
        if d + 1 < self.r {
            return true;
        }
        let cand_size = bits.count_ones() as u64;
        match self.r {
            2 => (0..d).all(|i| {
                let inter = (self.members[i] & bits).count_ones() as u64;
                self.tuple_ok(inter, cand_size, &[self.sizes[i]])
            }),
            3 => {
                for i in 0..d {
                    for j in i + 1..d {
                        let inter =
                            (self.members[i] & self.members[j] & bits).count_ones() as u64;
                        if !self.tuple_ok(inter, cand_size, &[self.sizes[i], self.sizes[j]]) {
                            return false;
                        }
                    }
                }
                true
            }
            4 => {
                // cache layout: pairs (0,j),...,(j-1,j) appended when member j arrived
                let mut pair_idx = 0;
                for j in 1..d {
                    for i in 0..j {
                        let pair = self.pair_cache[pair_idx];
                        pair_idx += 1;
                        for k in j + 1..d {
                            let inter = (pair & self.members[k] & bits).count_ones() as u64;
                            if !self.tuple_ok(
                                inter,
                                cand_size,
                                &[self.sizes[i], self.sizes[j], self.sizes[k]],
                            ) {
                                return false;
                            }
                        }
                    }
                }
                true
            }
            r => self.admits_general(bits, cand_size, r),
        }
    }

    fn admits_general(&self, bits: u64, cand_size: u64, r: usize) -> bool {
        // every (r-1)-combination of current members, recomputed
        let d = self.members.len();
        let k = r - 1;
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let mut inter = bits;
            for &i in &combo {
                inter &= self.members[i];
            }
            let sizes: Vec<u64> = combo.iter().map(|&i| self.sizes[i]).collect();
            if !self.tuple_ok(inter.count_ones() as u64, cand_size, &sizes) {
                return false;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if combo[i] != i + d - k {
                    break;
                }
            }
            combo[i] += 1;
            for t in i + 1..k {
                combo[t] = combo[t - 1] + 1;
            }
        }
    }

    /// Adds without checking; pair with [`admits`].
    pub fn push(&mut self, bits: u64) {
        if self.r == 4 {
            for &m in &self.members {
                self.pair_cache.push(m & bits);
            }
        }
        self.sizes.push(bits.count_ones() as u64);
        self.members.push(bits);
    }

    pub fn pop(&mut self) {
        self.members.pop();
        self.sizes.pop();
        if self.r == 4 {
            self.pair_cache.truncate(self.pair_cache.len() - self.members.len());
        }
    }
}
