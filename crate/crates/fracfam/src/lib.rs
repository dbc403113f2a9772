//! fracfam: a workbench for r-wise fractional L-intersecting set families.
//!
//! A family F of distinct subsets of [n] is r-wise fractional
//! L-intersecting when every r distinct members A_{i_1}, ..., A_{i_r}
//! satisfy |A_{i_1} ∩ ... ∩ A_{i_r}| = (a/b) |A_{i_j}| for some
//! irreducible fraction a/b in L and some member of the tuple.
//!
//! The crate provides:
//! - exact verification of the property ([`verify`]),
//! - the prime-based size bound t (p_t - 1)(r - 1) Σ_{l≤s} C(n,l) and
//!   its asymptotic companion ([`bounds`]),
//! - an instance-level certificate that replays the partition /
//!   refinement / polynomial-rank argument over F_p ([`certify`]),
//! - generators for the extremal construction ([`construct`]),
//! - exact maximum-family search with a naive oracle ([`search`]).

pub mod bounds;
pub mod certify;
pub mod construct;
pub mod family;
pub mod fraction;
pub mod mask;
pub mod search;
pub mod verify;

pub use family::{Family, FamilyError, FamilyParseError};
pub use fraction::{matches_fraction, parse_fraction, Fraction, LSpec};
pub use mask::SubsetMask;
pub use verify::{check_tuple, verify_family, InstanceParams, Verdict, ViolationWitness};
