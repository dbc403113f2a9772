//! Partition of a family by cardinality residue mod a prime.

use thiserror::Error;

use crate::bounds::is_prime;
use crate::family::Family;
use crate::mask::SubsetMask;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Classes indexed by residue: `classes[j]` holds the family indices of
/// members A with |A| = j (mod p), in file order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResiduePartition {
    pub p: u64,
    pub classes: Vec<Vec<usize>>,
}

impl ResiduePartition {
    /// Member masks of class j, file order preserved.
    pub fn class_members(&self, family: &Family, j: u64) -> Vec<SubsetMask> {
        self.classes[j as usize]
            .iter()
            .map(|&i| *family.member(i))
            .collect()
    }

    /// Class j as a family in its own right.
    pub fn class_family(&self, family: &Family, j: u64) -> Family {
        family.subfamily(&self.classes[j as usize])
    }
}

pub fn partition_by_residue(family: &Family, p: u64) -> Result<ResiduePartition, PartitionError> {
    if !is_prime(p) {
        return Err(PartitionError::NotPrime(p));
    }
    let mut classes = vec![Vec::new(); p as usize];
    for (i, member) in family.members().iter().enumerate() {
        let j = (member.cardinality() as u64 % p) as usize;
        classes[j].push(i);
    }
    Ok(ResiduePartition { p, classes })
}
