//! Replays the partition / refine / polynomial-rank pipeline on a
//! concrete family and reports, cell by (prime, residue) cell, where the
//! linear-algebra argument holds on that instance.
//!
//! Failures found along the way (a diagonal value hitting 0 mod p, a
//! swallowing set that fails to stay independent) are report data, never
//! program errors: the small primes p make mod-p collisions possible even
//! though the family is exactly fractional over the rationals.

mod cover;
mod partition;
mod poly;
mod rank;
mod refine;

pub use cover::{cover_assignment, covering_prime, CoverError};
pub use partition::{partition_by_residue, PartitionError, ResiduePartition};
pub use poly::{
    build_polynomial, evaluate_factored, swallowing_functions, Fp, MultilinearPoly, PolyError,
};
pub use rank::{rank_over_fp, RankError};
pub use refine::{greedy_refine, RefineError, RefinementGroup, RefinementTranscript};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    binomial, exact_bound, select_primes, serialize_biguint, sum_binomials, PrimeSelection,
};
use crate::family::Family;
use crate::fraction::LSpec;
use crate::mask::SubsetMask;
use crate::verify::{verify_family, InstanceParams, Verdict, ViolationWitness};

/// How the forbidden intersection sizes are read during refinement; the
/// source text mixes member symbols, so the transcript pins this down.
pub const FORBIDDEN_SET_INTERPRETATION: &str =
    "forbidden intersection sizes are the union of (a/b)*|A| over every fraction a/b in L and \
     every member A of the collection under construction";

/// Per-group diagonal/off-diagonal outcomes for one refined class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriangularityOutcome {
    /// g_i(x_i) != 0, per group i.
    pub diagonal: Vec<bool>,
    /// (i, i') with i < i' where g_i(x_{i'}) != 0.
    pub off_diagonal_failures: Vec<(usize, usize)>,
}

impl TriangularityOutcome {
    pub fn full_pass(&self) -> bool {
        self.diagonal.iter().all(|&d| d) && self.off_diagonal_failures.is_empty()
    }
}

/// Builds g_i from each group's y and the transcript residue, then checks
/// g_i(x_i) != 0 and g_i(x_{i'}) = 0 for i < i'. Failures are data.
pub fn check_triangularity(
    transcript: &RefinementTranscript,
    l: &LSpec,
    p: u64,
) -> Result<TriangularityOutcome, PolyError> {
    let polys: Vec<MultilinearPoly> = transcript
        .groups
        .iter()
        .map(|g| build_polynomial(&g.y, transcript.residue, l, p))
        .collect::<Result<_, _>>()?;
    let mut diagonal = Vec::with_capacity(polys.len());
    let mut off = Vec::new();
    for (i, poly) in polys.iter().enumerate() {
        diagonal.push(poly.evaluate(&transcript.groups[i].x)? != 0);
        for (i_prime, later) in transcript.groups.iter().enumerate().skip(i + 1) {
            if poly.evaluate(&later.x)? != 0 {
                off.push((i, i_prime));
            }
        }
    }
    Ok(TriangularityOutcome { diagonal, off_diagonal_failures: off })
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Refuse when sum_{l<=s} C(n,l) exceeds this.
    pub dimension_cap: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { dimension_cap: 1 << 22 }
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CertifyError {
    #[error("family is not r-wise fractional L-intersecting: witness {0:?}")]
    InvalidFamily(ViolationWitness),
    #[error("monomial basis dimension {dimension} exceeds the cap {cap}")]
    DimensionTooLarge { dimension: String, cap: u64 },
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Rank(#[from] RankError),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SkippedPrime {
    pub p: u64,
    pub reason: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GroupReport {
    /// Member sets as sorted 1-based element arrays, collection order.
    pub members: Vec<Vec<u32>>,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub k: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TriangularityReport {
    /// Groups i with g_i(x_i) = 0.
    pub diagonal_failures: Vec<usize>,
    /// Pairs (i, i'), i < i', with g_i(x_{i'}) != 0.
    pub off_diagonal_failures: Vec<(usize, usize)>,
    pub full_pass: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SwallowReport {
    /// Number of swallowing functions, sum_{l<=s-1} C(n,l).
    pub size: usize,
    pub rank: usize,
    pub expected_rank: u64,
    pub combined_rank: usize,
    pub expected_combined_rank: u64,
    /// combined_rank reached group_count + expected_rank.
    pub independent: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CellReport {
    pub p: u64,
    pub residue: u64,
    pub class_size: usize,
    /// Original family indices of the class, file order.
    pub class_indices: Vec<usize>,
    pub groups: Vec<GroupReport>,
    pub group_count: usize,
    /// ceil(class_size / (r-1)); the refinement must emit at least this many.
    pub eq1_min_groups: usize,
    pub eq1_holds: bool,
    pub triangularity: TriangularityReport,
    pub rank: usize,
    pub rank_within_dimension: bool,
    pub swallow: Option<SwallowReport>,
    /// (r-1) * sum_{l<=s} C(n,l) as a decimal string.
    pub class_bound_sum: String,
    pub within_sum: bool,
    /// (r-1) * C(n,s), present when the swallowing preconditions held.
    pub class_bound_binom: Option<String>,
    pub within_binom: Option<bool>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CoverReport {
    /// Covering prime per member index; None marks the empty set, which
    /// the prime-covering argument cannot count.
    pub assignments: Vec<Option<u64>>,
    pub empty_set_index: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OverallReport {
    pub family_size: usize,
    /// t*(p_t-1)*(r-1)*sum_{l<=s} C(n,l); only defined for r >= 3.
    pub exact_bound: Option<String>,
    /// The family contains the empty set, so the comparison allows m <= bound + 1.
    pub empty_set_adjustment: bool,
    pub within_bound: Option<bool>,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CertificationReport {
    pub n: u32,
    pub family_size: usize,
    pub r: u32,
    pub l: String,
    pub s: u64,
    pub interpretation: String,
    /// sum_{l<=s} C(n,l), the full monomial-basis dimension.
    pub dimension: u64,
    /// sum_{l<=s-1} C(n,l), the dimension the swallowing set spans.
    pub dimension_reduced: u64,
    pub prime_selection: PrimeSelection,
    pub skipped_primes: Vec<SkippedPrime>,
    pub cells: Vec<CellReport>,
    pub cover: CoverReport,
    pub overall: OverallReport,
    #[serde(serialize_with = "serialize_biguint")]
    pub binom_n_s: BigUint,
}

fn elements_of(mask: &SubsetMask) -> Vec<u32> {
    mask.elements()
}

pub fn certify(
    family: &Family,
    params: &InstanceParams,
) -> Result<CertificationReport, CertifyError> {
    certify_with(family, params, &CertifyOptions::default())
}

pub fn certify_with(
    family: &Family,
    params: &InstanceParams,
    options: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    if let Verdict::Invalid(witness) = verify_family(family, params) {
        return Err(CertifyError::InvalidFamily(witness));
    }

    let n = family.n();
    let r = params.r();
    let l = params.l();
    let s = l.s() as u64;
    let dimension_big = sum_binomials(n as u64, s);
    if dimension_big > BigUint::from(options.dimension_cap) {
        return Err(CertifyError::DimensionTooLarge {
            dimension: dimension_big.to_string(),
            cap: options.dimension_cap,
        });
    }
    let dimension = dimension_big.to_u64().expect("within cap");
    let dimension_reduced_big = sum_binomials(n as u64, s - 1);
    let dimension_reduced = dimension_reduced_big.to_u64().expect("within cap");
    let binom_n_s = binomial(n as u64, s);

    let selection = select_primes(n as u64);
    let mut skipped = Vec::new();
    let mut cells = Vec::new();

    let r_minus_1 = BigUint::from((r - 1) as u64);
    let bound_sum = &r_minus_1 * &dimension_big;
    let bound_binom = &r_minus_1 * &binom_n_s;

    for &p in &selection.primes {
        if let Some(frac) = l.fractions().iter().find(|f| f.denominator() % p == 0) {
            skipped.push(SkippedPrime {
                p,
                reason: format!("p divides the denominator of {frac}"),
            });
            continue;
        }
        let part = partition_by_residue(family, p).expect("selected primes are prime");
        for j in 1..p {
            let class_indices = part.classes[j as usize].clone();
            if class_indices.is_empty() {
                continue;
            }
            let class_family = part.class_family(family, j);
            let class_size = class_family.len();
            let transcript = greedy_refine(&class_family, params, j)?;
            let polys: Vec<MultilinearPoly> = transcript
                .groups
                .iter()
                .map(|g| build_polynomial(&g.y, j, l, p))
                .collect::<Result<_, _>>()?;
            let outcome = check_triangularity(&transcript, l, p)?;
            let rank = rank_over_fp(&polys, s as u32)?;
            let group_count = transcript.group_count();

            let swallow = if s <= p - 1 && s + j <= n as u64 {
                let fns = swallowing_functions(n, j, s, p)?;
                let swallow_rank = rank_over_fp(&fns, s as u32)?;
                let combined: Vec<MultilinearPoly> =
                    polys.iter().chain(fns.iter()).cloned().collect();
                let combined_rank = rank_over_fp(&combined, s as u32)?;
                let expected_combined = group_count as u64 + dimension_reduced;
                Some(SwallowReport {
                    size: fns.len(),
                    rank: swallow_rank,
                    expected_rank: dimension_reduced,
                    combined_rank,
                    expected_combined_rank: expected_combined,
                    independent: combined_rank as u64 == expected_combined,
                })
            } else {
                None
            };

            let eq1_min_groups = class_size.div_ceil(r as usize - 1);
            let class_size_big = BigUint::from(class_size as u64);
            let within_binom = swallow.as_ref().map(|_| class_size_big <= bound_binom);
            let class_bound_binom = swallow.as_ref().map(|_| bound_binom.to_string());
            let groups = transcript
                .groups
                .iter()
                .map(|g| GroupReport {
                    members: g.members.iter().map(elements_of).collect(),
                    x: elements_of(&g.x),
                    y: elements_of(&g.y),
                    k: g.k(),
                })
                .collect();
            cells.push(CellReport {
                p,
                residue: j,
                class_size,
                class_indices,
                groups,
                group_count,
                eq1_min_groups,
                eq1_holds: group_count >= eq1_min_groups,
                triangularity: TriangularityReport {
                    diagonal_failures: outcome
                        .diagonal
                        .iter()
                        .enumerate()
                        .filter(|(_, &ok)| !ok)
                        .map(|(i, _)| i)
                        .collect(),
                    off_diagonal_failures: outcome.off_diagonal_failures.clone(),
                    full_pass: outcome.full_pass(),
                },
                rank,
                rank_within_dimension: rank as u64 <= dimension,
                swallow,
                class_bound_sum: bound_sum.to_string(),
                within_sum: class_size_big <= bound_sum,
                class_bound_binom,
                within_binom,
            });
        }
    }

    let empty_set_index = family.members().iter().position(SubsetMask::is_empty);
    let cover_selection = &selection;
    let assignments: Vec<Option<u64>> = family
        .members()
        .iter()
        .map(|m| covering_prime(cover_selection, m.cardinality() as u64))
        .collect();

    let m = family.len();
    let overall = if r >= 3 {
        let bound = exact_bound(n as u64, r, s).expect("r >= 3 and 1 <= s <= n");
        let adjustment = if empty_set_index.is_some() { 1u64 } else { 0 };
        let within = BigUint::from(m as u64) <= &bound.exact_bound + BigUint::from(adjustment);
        OverallReport {
            family_size: m,
            exact_bound: Some(bound.exact_bound.to_string()),
            empty_set_adjustment: empty_set_index.is_some(),
            within_bound: Some(within),
        }
    } else {
        OverallReport {
            family_size: m,
            exact_bound: None,
            empty_set_adjustment: empty_set_index.is_some(),
            within_bound: None,
        }
    };

    Ok(CertificationReport {
        n,
        family_size: m,
        r,
        l: l.to_string(),
        s,
        interpretation: FORBIDDEN_SET_INTERPRETATION.to_string(),
        dimension,
        dimension_reduced,
        prime_selection: selection,
        skipped_primes: skipped,
        cells,
        cover: CoverReport { assignments, empty_set_index },
        overall,
        binom_n_s,
    })
}
