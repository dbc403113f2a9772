//! Exact maximum-family search at desk scale.
//!
//! `naive_max` enumerates every subfamily of the candidate universe and
//! is the oracle; `branch_and_bound_max` is the workhorse: depth-first
//! over candidates in (cardinality, mask-value) order with incremental
//! tuple checking, suffix-count pruning, and a root symmetry reduction
//! that fixes the first chosen set to a prefix set {1..k} (sound because
//! relabeling [n] preserves validity and maps the canonically-first
//! member of any family to the prefix set of its cardinality).

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::exact_bound;
use crate::family::Family;
use crate::mask::{masks_of_cardinality, SubsetMask, MAX_GROUND_SET};
use crate::verify::{IncrementalChecker, InstanceParams};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: u32,
    pub params: InstanceParams,
    pub include_empty: bool,
    pub time_limit: Duration,
    pub deterministic: bool,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(n: u32, params: InstanceParams) -> Self {
        SearchConfig {
            n,
            params,
            include_empty: false,
            time_limit: Duration::from_secs(30),
            deterministic: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum SearchStatus {
    ProvenOptimal,
    TimeLimitedLowerBound,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchStatus::ProvenOptimal => write!(f, "proven-optimal"),
            SearchStatus::TimeLimitedLowerBound => write!(f, "time-limited-lower-bound"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub max_size: usize,
    pub witness: Family,
    pub status: SearchStatus,
    pub nodes_explored: u64,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("naive enumeration supports n <= 4, got {0}")]
    NaiveTooLarge(u32),
    #[error("ground set size {0} exceeds the supported maximum of 64")]
    GroundSetTooLarge(u32),
    #[error("ground set size must be positive")]
    GroundSetEmpty,
    #[error("time limit must be positive")]
    NonPositiveTimeLimit,
}

fn validate(config: &SearchConfig) -> Result<(), SearchError> {
    if config.n == 0 {
        return Err(SearchError::GroundSetEmpty);
    }
    if config.n > MAX_GROUND_SET {
        return Err(SearchError::GroundSetTooLarge(config.n));
    }
    if config.time_limit.is_zero() {
        return Err(SearchError::NonPositiveTimeLimit);
    }
    Ok(())
}

/// All candidate sets in (cardinality, mask-value) order; the empty set,
/// when included, comes first.
fn candidate_universe(n: u32, include_empty: bool) -> Vec<u64> {
    let mut out = Vec::new();
    if include_empty {
        out.push(0);
    }
    for k in 1..=n {
        out.extend(masks_of_cardinality(n, k));
    }
    out
}

fn family_from_indices(n: u32, candidates: &[u64], indices: &[usize]) -> Family {
    let masks: Vec<SubsetMask> = indices
        .iter()
        .map(|&i| SubsetMask::new(n, candidates[i]).expect("candidates are in range"))
        .collect();
    Family::new(n, masks).expect("chosen candidates are distinct")
}

/// Exhaustive oracle: every subfamily of the candidate universe, keeping
/// the lexicographically smallest witness of maximum size. Only for
/// n <= 4, where the universe has at most 16 candidates.
pub fn naive_max(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    validate(config)?;
    if config.n > 4 {
        return Err(SearchError::NaiveTooLarge(config.n));
    }
    let candidates = candidate_universe(config.n, config.include_empty);
    let u = candidates.len();
    let r = config.params.r() as usize;
    let l = config.params.l();

    // subfamily masks of the failing r-tuples
    let mut failing: Vec<u32> = Vec::new();
    if r <= u {
        let mut combo: Vec<usize> = (0..r).collect();
        loop {
            let inter = combo.iter().fold(u64::MAX, |acc, &i| acc & candidates[i]);
            let isize = inter.count_ones() as u64;
            let passes = combo
                .iter()
                .any(|&i| l.any_matches(isize, candidates[i].count_ones() as u64));
            if !passes {
                failing.push(combo.iter().fold(0u32, |acc, &i| acc | (1 << i)));
            }
            let mut i = r;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                if combo[i] != i + u - r {
                    break;
                }
            }
            if done {
                break;
            }
            combo[i] += 1;
            for k in i + 1..r {
                combo[k] = combo[k - 1] + 1;
            }
        }
    }

    let mut best_size = 0usize;
    let mut best_indices: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    for sub in 0u32..(1u32 << u) {
        nodes += 1;
        if failing.iter().any(|&t| sub & t == t) {
            continue;
        }
        let size = sub.count_ones() as usize;
        if size < best_size {
            continue;
        }
        let indices: Vec<usize> = (0..u).filter(|i| sub & (1 << i) != 0).collect();
        if size > best_size || indices < best_indices {
            best_size = size;
            best_indices = indices;
        }
    }

    Ok(SearchResult {
        max_size: best_size,
        witness: family_from_indices(config.n, &candidates, &best_indices),
        status: SearchStatus::ProvenOptimal,
        nodes_explored: nodes,
    })
}

struct Dfs<'a> {
    candidates: &'a [u64],
    checker: IncrementalChecker,
    chosen: Vec<usize>,
    best_size: usize,
    best_indices: Vec<usize>,
    nodes: u64,
    deadline: Instant,
    timed_out: bool,
}

impl Dfs<'_> {
    fn run(&mut self, start: usize) {
        self.nodes += 1;
        if self.chosen.len() > self.best_size {
            self.best_size = self.chosen.len();
            self.best_indices = self.chosen.clone();
        }
        if Instant::now() >= self.deadline {
            self.timed_out = true;
            return;
        }
        let u = self.candidates.len();
        for idx in start..u {
            // candidates after idx only shrink the reachable size
            if self.chosen.len() + (u - idx) <= self.best_size {
                break;
            }
            if self.checker.admits(self.candidates[idx]) {
                self.checker.push(self.candidates[idx]);
                self.chosen.push(idx);
                self.run(idx + 1);
                self.chosen.pop();
                self.checker.pop();
                if self.timed_out {
                    return;
                }
            }
        }
    }
}

/// Exact search by depth-first branch and bound. On timeout the best
/// family found so far is returned with a lower-bound status.
pub fn branch_and_bound_max(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    validate(config)?;
    let candidates = candidate_universe(config.n, config.include_empty);

    // symmetry-reduced roots: the prefix set of each cardinality
    let mut roots: Vec<usize> = Vec::new();
    for k in 0..=config.n {
        if k == 0 && !config.include_empty {
            continue;
        }
        let prefix = if k == 0 { 0u64 } else if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
        let idx = candidates
            .iter()
            .position(|&c| c == prefix)
            .expect("prefix sets are candidates");
        roots.push(idx);
    }
    if !config.deterministic {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        roots.shuffle(&mut rng);
    }

    let mut dfs = Dfs {
        candidates: &candidates,
        checker: IncrementalChecker::new(&config.params),
        chosen: Vec::new(),
        best_size: 0,
        best_indices: Vec::new(),
        nodes: 0,
        deadline: Instant::now() + config.time_limit,
        timed_out: false,
    };

    for &root in &roots {
        if dfs.timed_out {
            break;
        }
        dfs.checker.push(candidates[root]);
        dfs.chosen.push(root);
        dfs.run(root + 1);
        dfs.chosen.pop();
        dfs.checker.pop();
    }

    dfs.best_indices.sort_unstable();
    Ok(SearchResult {
        max_size: dfs.best_size,
        witness: family_from_indices(config.n, &candidates, &dfs.best_indices),
        status: if dfs.timed_out {
            SearchStatus::TimeLimitedLowerBound
        } else {
            SearchStatus::ProvenOptimal
        },
        nodes_explored: dfs.nodes,
    })
}

/// One row of the conjecture experiment.
#[derive(Clone, Debug)]
pub struct HarnessRow {
    pub n: u32,
    pub max_size: usize,
    pub status: SearchStatus,
    /// Theorem bound at s = |L|; absent for r = 2, which the theorem
    /// does not cover.
    pub exact_bound: Option<BigUint>,
    /// max_size / ((r-1) * n), the conjectured-linear normalization.
    pub ratio: f64,
}

pub const HARNESS_CSV_HEADER: &str = "n,max_size,status,exact_bound,ratio";

impl HarnessRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6}",
            self.n,
            self.max_size,
            self.status,
            self.exact_bound.as_ref().map(|b| b.to_string()).unwrap_or_default(),
            self.ratio
        )
    }
}

/// Runs the exact search for each n in the range and tabulates max_size
/// against the theorem bound and the conjectured (r-1)*n scale.
pub fn conjecture_harness(
    params: &InstanceParams,
    n_range: std::ops::RangeInclusive<u32>,
    template: &SearchConfig,
) -> Result<Vec<HarnessRow>, SearchError> {
    let mut rows = Vec::new();
    for n in n_range {
        let config = SearchConfig { n, params: params.clone(), ..template.clone() };
        let result = branch_and_bound_max(&config)?;
        let r = params.r();
        let s = params.l().s() as u64;
        let bound = if r >= 3 {
            Some(exact_bound(n as u64, r, s.min(n as u64)).map(|b| b.exact_bound).unwrap_or_default())
        } else {
            None
        };
        rows.push(HarnessRow {
            n,
            max_size: result.max_size,
            status: result.status,
            exact_bound: bound,
            ratio: result.max_size as f64 / (((r - 1) as u64 * n as u64) as f64),
        });
    }
    Ok(rows)
}
