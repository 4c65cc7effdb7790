//! satlab-core: an exact laboratory for saturated and cross-saturated set
//! families over the subset lattice of `[n] = {1, ..., n}`.
//!
//! Everything here is exact: subsets are bitmasks, families are
//! characteristic bitvectors over all `2^n` masks, counting and bound checks
//! use integer arithmetic only, and the linear-algebra certificate runs
//! fraction-free elimination over the integers. There are no tolerances
//! anywhere.
//!
//! The main pieces:
//!
//! * [`family`] — subsets, set families, duals, up-closures.
//! * [`saturation`] — pairwise-disjoint tuples, s-saturation, greedy closure.
//! * [`boxop`] — cylinders and the disjoint-occurrence operator, with the
//!   Talagrand and van den Berg–Kesten–Reimer inequality checkers.
//! * [`cross`] — cross-dependant/cross-saturated sequences and the disjoint
//!   bounding families that drive the sum lower bound.
//! * [`algebra`] — evaluation vectors on `{0,1}^n` and the exact-rank
//!   independence certificate.
//! * [`constructions`] — dictator, partition and cross-extremal families and
//!   the saturation-preserving lift.
//! * [`search`] — exhaustive minimum-size searches (raw and antichain modes).
//! * [`random`] / [`fuzz`] — seeded generators and reproducible campaigns.
//! * [`textio`] / [`report`] — the family text format and JSON run reports.

pub mod algebra;
pub mod boxop;
pub mod constructions;
pub mod cross;
mod error;
pub mod family;
pub mod fuzz;
pub mod random;
pub mod report;
pub mod saturation;
pub mod search;
pub mod textio;

pub use error::{Error, Result};
pub use family::{CandidateOrder, FamilySequence, GroundSet, SetFamily, Subset, N_MAX_CORE};
