//! Family generators: the all-s-subsets extremal construction,
//! sunflowers, and random valid families for experiments.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::family::Family;
use crate::fraction::{Fraction, LSpec};
use crate::mask::{masks_of_cardinality, SubsetMask, MAX_GROUND_SET};
use crate::verify::{IncrementalChecker, InstanceParams};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("s = {s} out of range: need 1 <= s <= n = {n}")]
    SOutOfRange { s: u32, n: u32 },
    #[error("ground set size {0} exceeds the supported maximum of 64")]
    GroundSetTooLarge(u32),
    #[error("ground set size must be positive")]
    GroundSetEmpty,
    #[error("need {needed} fresh elements for the petals but only {available} remain")]
    InsufficientRoom { needed: u32, available: u32 },
    #[error("petal size 0 with {0} petals would duplicate the core")]
    DuplicatePetals(usize),
}

/// All C(n,s) subsets of size s in mask-value order, paired with
/// L = {i/s : 0 <= i < s} reduced to lowest terms. Any r distinct
/// s-sets intersect in 0..s-1 common elements, each of which is
/// (i/s) * s, so the pair passes verification for every r >= 2.
pub fn all_s_subsets(n: u32, s: u32) -> Result<(Family, LSpec), ConstructError> {
    if n == 0 {
        return Err(ConstructError::GroundSetEmpty);
    }
    if n > MAX_GROUND_SET {
        return Err(ConstructError::GroundSetTooLarge(n));
    }
    if s < 1 || s > n {
        return Err(ConstructError::SOutOfRange { s, n });
    }
    let sets: Vec<SubsetMask> = masks_of_cardinality(n, s)
        .into_iter()
        .map(|bits| SubsetMask::new(n, bits).expect("gosper stays in range"))
        .collect();
    let family = Family::new(n, sets).expect("gosper emits distinct masks");

    let mut fractions: Vec<Fraction> = Vec::new();
    for i in 0..s as u64 {
        let f = Fraction::reduced(i, s as u64).expect("i < s");
        if !fractions.contains(&f) {
            fractions.push(f);
        }
    }
    let l = LSpec::new(fractions).expect("s >= 1 gives at least 0/1");
    Ok((family, l))
}

/// `petal_count` copies of `core`, each extended by a private block of
/// `petal_size` fresh elements taken in ascending order from outside the
/// core. Every r-wise intersection of the result equals the core.
pub fn sunflower_family(
    core: &SubsetMask,
    petal_count: usize,
    petal_size: u32,
) -> Result<Family, ConstructError> {
    if petal_size == 0 && petal_count > 1 {
        return Err(ConstructError::DuplicatePetals(petal_count));
    }
    let n = core.n();
    let fresh: Vec<u32> = (1..=n).filter(|&e| !core.contains(e)).collect();
    let needed = petal_count as u32 * petal_size;
    if needed > fresh.len() as u32 {
        return Err(ConstructError::InsufficientRoom {
            needed,
            available: fresh.len() as u32,
        });
    }
    let mut sets = Vec::with_capacity(petal_count);
    for i in 0..petal_count {
        let mut bits = core.bits();
        for k in 0..petal_size as usize {
            let element = fresh[i * petal_size as usize + k];
            bits |= 1u64 << (element - 1);
        }
        sets.push(SubsetMask::new(n, bits).expect("elements are in range"));
    }
    Ok(Family::new(n, sets).expect("petals are pairwise distinct"))
}

/// A random valid family built by shuffling the nonempty subsets of [n]
/// and greedily keeping every candidate that preserves validity. The
/// result is always r-wise fractional L-intersecting; the empty set is
/// never included. `pool_cap` limits how many shuffled candidates are
/// tried, which bounds the work without biasing validity.
pub fn random_greedy_family(
    n: u32,
    params: &InstanceParams,
    pool_cap: usize,
    rng: &mut impl Rng,
) -> Family {
    assert!(n >= 1 && n <= 20, "generator is for desk-scale ground sets");
    let mut universe: Vec<u64> = (1..(1u64 << n)).collect();
    universe.shuffle(rng);
    universe.truncate(pool_cap);

    let mut checker = IncrementalChecker::new(params);
    let mut chosen: Vec<SubsetMask> = Vec::new();
    for bits in universe {
        if checker.admits(bits) {
            checker.push(bits);
            chosen.push(SubsetMask::new(n, bits).expect("bits below 2^n"));
        }
    }
    Family::new(n, chosen).expect("shuffled universe has no duplicates")
}
