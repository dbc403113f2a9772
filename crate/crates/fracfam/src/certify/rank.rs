//! Rank of polynomial sets over F_p by sparse Gaussian elimination.
//!
//! Columns are the square-free monomials of degree at most s, ordered by
//! (degree, numeric mask value); a row's pivot is its smallest monomial
//! in that order.

use std::collections::BTreeMap;

use thiserror::Error;

use super::poly::{Fp, MultilinearPoly};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("mixed moduli: {0} and {1}")]
    MixedModuli(u64, u64),
    #[error("mixed variable counts: {0} and {1}")]
    MixedWidths(u32, u32),
    #[error("monomial of degree {degree} exceeds the degree bound {bound}")]
    DegreeExceeded { degree: u32, bound: u32 },
}

type MonoKey = (u32, u64); // (degree, mask): canonical column order

fn row_of(poly: &MultilinearPoly) -> BTreeMap<MonoKey, u64> {
    poly.terms().map(|(m, c)| ((m.count_ones(), m), c)).collect()
}

/// Rank of the coefficient matrix with rows the given polynomials and
/// columns the monomials of degree <= s.
pub fn rank_over_fp(polys: &[MultilinearPoly], s: u32) -> Result<usize, RankError> {
    let Some(first) = polys.first() else {
        return Ok(0);
    };
    let p = first.modulus();
    let n = first.n();
    for poly in polys {
        if poly.modulus() != p {
            return Err(RankError::MixedModuli(p, poly.modulus()));
        }
        if poly.n() != n {
            return Err(RankError::MixedWidths(n, poly.n()));
        }
        let degree = poly.degree();
        if degree > s {
            return Err(RankError::DegreeExceeded { degree, bound: s });
        }
    }

    let fp = Fp::new(p);
    // pivot monomial -> reduced row with leading coefficient 1
    let mut pivots: BTreeMap<MonoKey, BTreeMap<MonoKey, u64>> = BTreeMap::new();
    let mut rank = 0usize;

    for poly in polys {
        let mut row = row_of(poly);
        loop {
            let Some((&lead, &coeff)) = row.iter().next() else {
                break; // fully reduced to zero
            };
            match pivots.get(&lead) {
                Some(pivot_row) => {
                    // row -= coeff * pivot_row
                    for (&k, &v) in pivot_row {
                        let delta = fp.mul(coeff, v);
                        let entry = row.entry(k).or_insert(0);
                        *entry = fp.sub(*entry, delta);
                        if *entry == 0 {
                            row.remove(&k);
                        }
                    }
                }
                None => {
                    let inv = fp.inv(coeff);
                    let normalized: BTreeMap<MonoKey, u64> =
                        row.iter().map(|(&k, &v)| (k, fp.mul(v, inv))).collect();
                    pivots.insert(lead, normalized);
                    rank += 1;
                    break;
                }
            }
        }
    }
    Ok(rank)
}
