//! Greedy refinement of a residue class into groups of at most r-1 sets.
//!
//! Each round either peels off the largest remaining set (when every
//! remaining pair satisfies the pairwise fractional condition) or grows a
//! maximal collection whose running intersection size avoids every value
//! (a/b)*|member| over fractions in L and members of the collection. On
//! an r-wise valid input no collection can reach r sets; reaching r is
//! reported as a violation witness.

use thiserror::Error;

use crate::family::Family;
use crate::fraction::LSpec;
use crate::mask::SubsetMask;
use crate::verify::InstanceParams;

/// One refinement group: `members` in the order collected, `x` the first
/// member, `y` the intersection of all members.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RefinementGroup {
    pub members: Vec<SubsetMask>,
    pub x: SubsetMask,
    pub y: SubsetMask,
}

impl RefinementGroup {
    pub fn k(&self) -> usize {
        self.members.len()
    }
}

/// The per-class record of the refinement: groups in emission order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RefinementTranscript {
    pub residue: u64,
    pub groups: Vec<RefinementGroup>,
}

impl RefinementTranscript {
    /// Number of groups, the m of the dimension comparison.
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RefineError {
    #[error(
        "collection of {r} sets with intersection size {intersection_size} violates the r-wise \
         property (class positions {positions:?})"
    )]
    NotRWise { r: u32, positions: Vec<usize>, intersection_size: u32 },
}

/// Intersection size avoids (a/b)*|member| for every fraction and member?
fn violates(l: &LSpec, intersection_size: u64, member_sizes: &[u64]) -> bool {
    !member_sizes
        .iter()
        .any(|&size| l.any_matches(intersection_size, size))
}

fn pair_violates(l: &LSpec, a: &SubsetMask, b: &SubsetMask) -> bool {
    let inter = (a.bits() & b.bits()).count_ones() as u64;
    violates(l, inter, &[a.cardinality() as u64, b.cardinality() as u64])
}

/// Runs the refinement loop on one residue class. `residue` is carried
/// into the transcript for the later polynomial construction.
pub fn greedy_refine(
    class_family: &Family,
    params: &InstanceParams,
    residue: u64,
) -> Result<RefinementTranscript, RefineError> {
    let l = params.l();
    let r = params.r() as usize;
    // (original class position, mask); file order
    let mut remaining: Vec<(usize, SubsetMask)> =
        class_family.members().iter().copied().enumerate().collect();
    let mut groups = Vec::new();

    while !remaining.is_empty() {
        // first violating pair in file order
        let mut seed: Option<(usize, usize)> = None;
        'scan: for i in 0..remaining.len() {
            for j in i + 1..remaining.len() {
                if pair_violates(l, &remaining[i].1, &remaining[j].1) {
                    seed = Some((i, j));
                    break 'scan;
                }
            }
        }

        match seed {
            None => {
                // all pairs fractional: peel the largest set, ties by file order
                let best = remaining
                    .iter()
                    .enumerate()
                    .max_by_key(|(pos, (_, m))| (m.cardinality(), std::cmp::Reverse(*pos)))
                    .map(|(pos, _)| pos)
                    .expect("remaining is nonempty");
                let (_, mask) = remaining.remove(best);
                groups.push(RefinementGroup { members: vec![mask], x: mask, y: mask });
            }
            Some((i, j)) => {
                let mut picked = vec![remaining[i].0, remaining[j].0];
                let mut members = vec![remaining[i].1, remaining[j].1];
                let mut y_bits = remaining[i].1.bits() & remaining[j].1.bits();
                remaining.remove(j);
                remaining.remove(i);

                // grow until maximal: rescan from the start after every
                // addition because the shrinking intersection can make
                // previously rejected sets addable
                loop {
                    if members.len() >= r {
                        return Err(RefineError::NotRWise {
                            r: r as u32,
                            positions: picked,
                            intersection_size: y_bits.count_ones(),
                        });
                    }
                    let mut added = None;
                    for (pos, (orig, cand)) in remaining.iter().enumerate() {
                        let trial = y_bits & cand.bits();
                        let mut sizes: Vec<u64> =
                            members.iter().map(|m| m.cardinality() as u64).collect();
                        sizes.push(cand.cardinality() as u64);
                        if violates(l, trial.count_ones() as u64, &sizes) {
                            added = Some((pos, *orig, *cand, trial));
                            break;
                        }
                    }
                    match added {
                        Some((pos, orig, cand, trial)) => {
                            remaining.remove(pos);
                            picked.push(orig);
                            members.push(cand);
                            y_bits = trial;
                        }
                        None => break,
                    }
                }

                let x = members[0];
                let y = SubsetMask::new(x.n(), y_bits).expect("intersection stays in range");
                groups.push(RefinementGroup { members, x, y });
            }
        }
    }

    Ok(RefinementTranscript { residue, groups })
}
