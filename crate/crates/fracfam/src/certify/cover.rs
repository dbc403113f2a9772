//! Prime cover: each nonempty member gets a selected prime not dividing
//! its cardinality, which is what routes it into a nonzero residue class.

use thiserror::Error;

use crate::bounds::{select_primes, PrimeSelection};
use crate::family::Family;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("member {index} is the empty set; every prime divides 0, so no prime covers it")]
    EmptySetMember { index: usize },
}

/// Smallest prime in the selection not dividing `size`; None for 0.
pub fn covering_prime(selection: &PrimeSelection, size: u64) -> Option<u64> {
    if size == 0 {
        return None;
    }
    selection.primes.iter().copied().find(|&p| size % p != 0)
}

/// Maps each member index to its covering prime from select_primes(n).
/// Always succeeds on families without the empty set: if every selected
/// prime divided |F| then their product would too, but the product
/// exceeds n >= |F|.
pub fn cover_assignment(family: &Family) -> Result<Vec<u64>, CoverError> {
    let selection = select_primes(family.n() as u64);
    family
        .members()
        .iter()
        .enumerate()
        .map(|(index, member)| {
            covering_prime(&selection, member.cardinality() as u64)
                .ok_or(CoverError::EmptySetMember { index })
        })
        .collect()
}
