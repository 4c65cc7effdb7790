//! Cylinder sets and the disjoint-occurrence operator, with the Talagrand
//! and van den Berg–Kesten–Reimer inequality checkers.
//!
//! A mask `S` lies in the disjoint occurrence of `A` and `B` when two
//! disjoint index sets `I`, `J` certify it: every set agreeing with `S` on
//! `I` lies in `A`, and every set agreeing with `S` on `J` lies in `B`.
//! Witness index sets are upward closed, so the general operator only needs
//! the inclusion-minimal witnesses of each side. For increasing families the
//! operator collapses to "contains a disjoint union of one member from each
//! family", which is what the fast path computes.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{GroundSet, SetFamily, Subset};

/// Cap for the general (witness-enumerating) operator; the scan over index
/// sets costs roughly 3^n per evaluated mask.
pub const N_MAX_BOX_GENERAL: u32 = 14;

/// All sets agreeing with `a` on the index set `i`; has exactly
/// `2^(n - |i|)` members.
pub fn cylinder(i: Subset, a: Subset, ground: GroundSet) -> SetFamily {
    let fixed = a.intersection(i);
    let mut out = SetFamily::new_empty(ground);
    for t in i.complement(ground).submasks() {
        out.insert(fixed.union(t));
    }
    out
}

/// The index sets `I` with `cylinder(I, base) ⊆ target`, as an upward-closed
/// family.
#[derive(Debug, Clone)]
pub struct CylinderWitnessSet {
    base: Subset,
    witnesses: SetFamily,
}

impl CylinderWitnessSet {
    pub fn compute(target: &SetFamily, base: Subset) -> Self {
        let ground = target.ground();
        let minimal = minimal_witnesses(target, base);
        let witnesses = SetFamily::from_subsets(ground, &minimal)
            .expect("witness masks fit the ground set")
            .up_closure();
        CylinderWitnessSet { base, witnesses }
    }

    pub fn base(&self) -> Subset {
        self.base
    }

    pub fn witnesses(&self) -> &SetFamily {
        &self.witnesses
    }
}

/// True iff every point of `cylinder(i, base)` belongs to `target`.
fn is_witness(target: &SetFamily, base: Subset, i: Subset) -> bool {
    let ground = target.ground();
    let fixed = base.intersection(i);
    // The first probe is the cylinder's bottom point; it fails fastest.
    i.complement(ground)
        .submasks()
        .all(|t| target.contains(fixed.union(t)))
}

/// Inclusion-minimal witness index sets for `base`, in ascending popcount
/// order. Index sets are scanned by ascending popcount and supersets of
/// recorded witnesses are skipped, which suffices because witnesses are
/// upward closed.
fn minimal_witnesses_ordered(target: &SetFamily, base: Subset, by_popcount: &[Subset]) -> Vec<Subset> {
    let mut minimal: Vec<Subset> = Vec::new();
    for &i in by_popcount {
        if minimal.iter().any(|w| w.is_subset_of(i)) {
            continue;
        }
        if is_witness(target, base, i) {
            minimal.push(i);
        }
    }
    minimal
}

pub(crate) fn minimal_witnesses(target: &SetFamily, base: Subset) -> Vec<Subset> {
    let order = masks_by_popcount(target.ground());
    minimal_witnesses_ordered(target, base, &order)
}

fn masks_by_popcount(ground: GroundSet) -> Vec<Subset> {
    let mut all: Vec<Subset> = ground.subsets().collect();
    all.sort_by_key(|s| (s.len(), s.mask()));
    all
}

/// Disjoint occurrence for arbitrary families, via minimal witnesses.
///
/// A mask is a member iff some minimal witness for `a` is disjoint from some
/// minimal witness for `b`.
pub fn box_general(a: &SetFamily, b: &SetFamily) -> Result<SetFamily> {
    let ground = same_ground(a, b)?;
    if ground.n() > N_MAX_BOX_GENERAL {
        return Err(Error::CapExceeded {
            what: "box_general ground set size",
            actual: ground.n().into(),
            limit: N_MAX_BOX_GENERAL.into(),
            overridable: false,
        });
    }
    let order = masks_by_popcount(ground);
    // Per-mask work is independent; the collected flags do not depend on
    // how masks are partitioned across workers.
    let member_flags: Vec<bool> = (0..ground.num_subsets() as u32)
        .into_par_iter()
        .map(|mask| {
            let s = Subset::from_raw(mask);
            let wa = minimal_witnesses_ordered(a, s, &order);
            if wa.is_empty() {
                return false;
            }
            let wb = minimal_witnesses_ordered(b, s, &order);
            wa.iter().any(|i| wb.iter().any(|j| i.is_disjoint(*j)))
        })
        .collect();
    let mut out = SetFamily::new_empty(ground);
    for (mask, &member) in member_flags.iter().enumerate() {
        if member {
            out.insert(Subset::from_raw(mask as u32));
        }
    }
    Ok(out)
}

/// Disjoint occurrence for increasing families: the up-closure of all
/// disjoint unions of one member from each side. Agrees with
/// [`box_general`] on increasing inputs.
pub fn box_increasing(a: &SetFamily, b: &SetFamily) -> Result<SetFamily> {
    let ground = same_ground(a, b)?;
    if !a.is_increasing() || !b.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    let min_a = a.minimal_members();
    let min_b = b.minimal_members();
    let mut generators = SetFamily::new_empty(ground);
    for &x in &min_a {
        for &y in &min_b {
            if x.is_disjoint(y) {
                generators.insert(x.union(y));
            }
        }
    }
    Ok(generators.up_closure())
}

/// Chooses the increasing fast path when both inputs are increasing, the
/// general operator otherwise.
fn box_auto(a: &SetFamily, b: &SetFamily) -> Result<SetFamily> {
    if a.is_increasing() && b.is_increasing() {
        box_increasing(a, b)
    } else {
        box_general(a, b)
    }
}

/// Left fold of the disjoint-occurrence operator; a single-element list is
/// returned unchanged. The fold order is part of the contract.
pub fn box_fold(families: &[SetFamily]) -> Result<SetFamily> {
    let (first, rest) = families
        .split_first()
        .expect("box_fold requires a nonempty list");
    let mut acc = first.clone();
    for f in rest {
        acc = box_auto(&acc, f)?;
    }
    Ok(acc)
}

/// Sizes on both sides of a correlation inequality, plus the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// Talagrand's inequality: `|A □ B| <= |pwcomp(A) ∩ B|`. Stated for
/// increasing families; it holds for arbitrary ones, checked through the
/// general operator.
pub fn talagrand_check(a: &SetFamily, b: &SetFamily) -> Result<InequalityReport> {
    let boxed = box_auto(a, b)?;
    let rhs = a.pointwise_complement().intersection(b)?.size() as u64;
    let lhs = boxed.size() as u64;
    Ok(InequalityReport {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// The van den Berg–Kesten–Reimer inequality in cleared-denominator form:
/// `2^n * |A □ B| <= |A| * |B|`, exact integer arithmetic.
pub fn bkr_check(a: &SetFamily, b: &SetFamily) -> Result<InequalityReport> {
    let ground = same_ground(a, b)?;
    let boxed = box_auto(a, b)?;
    let lhs = ground.num_subsets() as u64 * boxed.size() as u64;
    let rhs = a.size() as u64 * b.size() as u64;
    Ok(InequalityReport {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

fn same_ground(a: &SetFamily, b: &SetFamily) -> Result<GroundSet> {
    if a.ground() != b.ground() {
        return Err(Error::GroundSetMismatch {
            left: a.ground().n(),
            right: b.ground().n(),
        });
    }
    Ok(a.ground())
}
