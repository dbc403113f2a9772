//! Shared helpers for the integration suites.

use fracfam::{Fraction, InstanceParams, LSpec};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every irreducible a/b in [0,1) with denominator at most 6.
pub fn fraction_pool() -> Vec<Fraction> {
    let mut pool = Vec::new();
    for b in 1u64..=6 {
        for a in 0..b {
            if let Ok(f) = Fraction::new(a, b) {
                pool.push(f);
            }
        }
    }
    pool
}

pub fn random_lspec(rng: &mut impl Rng, max_s: usize) -> LSpec {
    let mut pool = fraction_pool();
    pool.shuffle(rng);
    let s = rng.random_range(1..=max_s);
    pool.truncate(s);
    LSpec::new(pool).expect("pool entries are distinct")
}

pub fn random_params(rng: &mut impl Rng, r: u32, max_s: usize) -> InstanceParams {
    InstanceParams::new(r, random_lspec(rng, max_s)).expect("r >= 2")
}
