//! Cross-dependant and cross-saturated sequences, the dual/box identity,
//! the disjoint bounding families, and the exact bound checkers.
//!
//! A sequence (F_1, ..., F_s) is cross dependant when no transversal — one
//! member from each family, the same set allowed in different slots — is
//! pairwise disjoint; cross saturated additionally means no set can be added
//! to any family without creating such a transversal.
//!
//! The incremental engine below keeps, for every subset X of slots, a table
//! over masks M answering "do the slots outside X admit a pairwise disjoint
//! partial transversal inside M?". Inserting a member updates the tables in
//! O(2^(s-1) * 2^(n-|B|)), and both the dependence test and every
//! addability test become table lookups.

use std::collections::HashMap;

use serde::Serialize;

use crate::boxop::box_fold;
use crate::error::{Error, Result};
use crate::family::{CandidateOrder, FamilySequence, GroundSet, SetFamily, Subset};
use crate::saturation::validate_s;

/// Memory guard for the engine tables: 2^s bitvectors of 2^n bits each.
const ENGINE_MAX_BITS: u64 = 1 << 28;

#[derive(Clone)]
pub(crate) struct CrossEngine {
    ground: GroundSet,
    s: usize,
    /// tables[X * stride + word]: bit M set iff slots outside X admit a
    /// pairwise disjoint partial transversal with union inside mask M.
    tables: Vec<u64>,
    stride: usize,
}

impl CrossEngine {
    pub fn capacity_ok(ground: GroundSet, s: usize) -> bool {
        s <= 20 && (1u64 << s) * ground.num_subsets() as u64 <= ENGINE_MAX_BITS
    }

    pub fn new(ground: GroundSet, s: usize) -> Self {
        debug_assert!(Self::capacity_ok(ground, s));
        let stride = ground.num_subsets().div_ceil(64);
        let mut tables = vec![0u64; (1usize << s) * stride];
        // With every slot excluded the empty transversal fits any mask.
        let all = (1usize << s) - 1;
        for w in 0..stride {
            let lo = w * 64;
            let in_range = ground.num_subsets().saturating_sub(lo).min(64);
            tables[all * stride + w] = if in_range == 64 {
                !0
            } else {
                (1u64 << in_range) - 1
            };
        }
        CrossEngine {
            ground,
            s,
            tables,
            stride,
        }
    }

    pub fn from_sequence(seq: &FamilySequence) -> Self {
        let mut e = Self::new(seq.ground(), seq.s());
        for (j, f) in seq.families().iter().enumerate() {
            for b in f.members() {
                e.insert(j, b);
            }
        }
        e
    }

    fn get(&self, x: usize, mask: u32) -> bool {
        let i = mask as usize;
        self.tables[x * self.stride + i / 64] >> (i % 64) & 1 != 0
    }

    fn set(&mut self, x: usize, mask: u32) {
        let i = mask as usize;
        self.tables[x * self.stride + i / 64] |= 1 << (i % 64);
    }

    /// Registers `b` as a member of family `j`.
    pub fn insert(&mut self, j: usize, b: Subset) {
        let jbit = 1usize << j;
        let rest = b.complement(self.ground);
        for x in 0..1usize << self.s {
            if x & jbit != 0 {
                continue;
            }
            for sub in rest.submasks() {
                let m = b.mask() | sub.mask();
                if !self.get(x, m) && self.get(x | jbit, sub.mask()) {
                    self.set(x, m);
                }
            }
        }
    }

    /// A full pairwise disjoint transversal exists.
    pub fn has_disjoint_transversal(&self) -> bool {
        self.get(0, self.ground.full_mask())
    }

    /// Adding `a` to family `i` would create a disjoint transversal.
    pub fn addition_breaks(&self, i: usize, a: Subset) -> bool {
        self.get(1 << i, a.complement(self.ground).mask())
    }
}

/// Searches for a pairwise disjoint transversal (one member per family) and
/// returns it, or `None` if the sequence is cross dependant.
pub fn find_disjoint_transversal(seq: &FamilySequence) -> Option<Vec<Subset>> {
    let full = seq.ground().full_subset();
    let mut memo: HashMap<(usize, u32), bool> = HashMap::new();
    if !transversal_exists(seq, 0, full, &mut memo) {
        return None;
    }
    let mut picks = Vec::with_capacity(seq.s());
    let mut free = full;
    for slot in 0..seq.s() {
        let chosen = seq
            .family(slot)
            .members_within(free)
            .find(|&b| transversal_exists(seq, slot + 1, free.difference(b), &mut memo))
            .expect("memoized existence guarantees a choice");
        picks.push(chosen);
        free = free.difference(chosen);
    }
    Some(picks)
}

fn transversal_exists(
    seq: &FamilySequence,
    slot: usize,
    free: Subset,
    memo: &mut HashMap<(usize, u32), bool>,
) -> bool {
    if slot == seq.s() {
        return true;
    }
    if let Some(&hit) = memo.get(&(slot, free.mask())) {
        return hit;
    }
    let found = seq
        .family(slot)
        .members_within(free)
        .any(|b| transversal_exists(seq, slot + 1, free.difference(b), memo));
    memo.insert((slot, free.mask()), found);
    found
}

/// No pairwise disjoint transversal exists.
pub fn is_cross_dependant(seq: &FamilySequence) -> bool {
    if CrossEngine::capacity_ok(seq.ground(), seq.s()) {
        !CrossEngine::from_sequence(seq).has_disjoint_transversal()
    } else {
        find_disjoint_transversal(seq).is_none()
    }
}

/// Outcome of the cross-saturation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossStatus {
    Saturated,
    NotDependant { transversal: Vec<Subset> },
    NotMaximal { family_index: usize, addable: Subset },
}

pub fn cross_status(seq: &FamilySequence) -> CrossStatus {
    if let Some(transversal) = find_disjoint_transversal(seq) {
        return CrossStatus::NotDependant { transversal };
    }
    let ground = seq.ground();
    if CrossEngine::capacity_ok(ground, seq.s()) {
        let engine = CrossEngine::from_sequence(seq);
        for i in 0..seq.s() {
            for a in ground.subsets() {
                if !seq.family(i).contains(a) && !engine.addition_breaks(i, a) {
                    return CrossStatus::NotMaximal {
                        family_index: i,
                        addable: a,
                    };
                }
            }
        }
    } else {
        for i in 0..seq.s() {
            for a in ground.subsets() {
                if seq.family(i).contains(a) {
                    continue;
                }
                let mut grown = seq.clone();
                grown.families_mut()[i].insert(a);
                if find_disjoint_transversal(&grown).is_none() {
                    return CrossStatus::NotMaximal {
                        family_index: i,
                        addable: a,
                    };
                }
            }
        }
    }
    CrossStatus::Saturated
}

pub fn is_cross_saturated(seq: &FamilySequence) -> bool {
    matches!(cross_status(seq), CrossStatus::Saturated)
}

/// Greedy completion to cross-saturation: scans candidates `A` in `order`
/// and, round-robin over the family index, adds every pair `(i, A)` whose
/// addition keeps the sequence cross dependant.
///
/// Rejects sequences that are not cross dependant.
pub fn cross_saturate(seq: &FamilySequence, order: CandidateOrder) -> Result<FamilySequence> {
    let ground = seq.ground();
    let mut out = seq.clone();
    if CrossEngine::capacity_ok(ground, seq.s()) {
        let mut engine = CrossEngine::from_sequence(seq);
        if engine.has_disjoint_transversal() {
            return Err(Error::NotCrossDependant);
        }
        for a in order.subsets(ground) {
            for i in 0..out.s() {
                if !out.family(i).contains(a) && !engine.addition_breaks(i, a) {
                    out.families_mut()[i].insert(a);
                    engine.insert(i, a);
                }
            }
        }
    } else {
        if find_disjoint_transversal(seq).is_some() {
            return Err(Error::NotCrossDependant);
        }
        for a in order.subsets(ground) {
            for i in 0..out.s() {
                if out.family(i).contains(a) {
                    continue;
                }
                let mut grown = out.clone();
                grown.families_mut()[i].insert(a);
                if find_disjoint_transversal(&grown).is_none() {
                    out = grown;
                }
            }
        }
    }
    debug_assert!(is_cross_saturated(&out));
    Ok(out)
}

fn require_cross_saturated(seq: &FamilySequence) -> Result<()> {
    if !is_cross_saturated(seq) {
        return Err(Error::NotCrossSaturated);
    }
    Ok(())
}

/// Per-index outcome of the dual/box identity: for each `i`, the dual of
/// `F_i` must equal the disjoint-occurrence fold of the other families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualBoxIdentityReport {
    pub per_index: Vec<bool>,
    pub all_hold: bool,
    /// First differing subset on failure, with its family index.
    pub first_difference: Option<(usize, String)>,
}

/// Checks `family_dual(F_i) = F_1 □ ... □ F_{i-1} □ F_{i+1} □ ... □ F_s`
/// for every index of a cross-saturated sequence.
pub fn check_dual_box_identity(seq: &FamilySequence) -> Result<DualBoxIdentityReport> {
    require_cross_saturated(seq)?;
    let ground = seq.ground();
    let mut per_index = Vec::with_capacity(seq.s());
    let mut first_difference = None;
    for i in 0..seq.s() {
        let others: Vec<SetFamily> = seq
            .families()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, f)| f.clone())
            .collect();
        let folded = box_fold(&others)?;
        let dual = seq.family(i).family_dual();
        let equal = folded == dual;
        if !equal && first_difference.is_none() {
            let diff = ground
                .subsets()
                .find(|&m| folded.contains(m) != dual.contains(m))
                .expect("unequal families differ somewhere");
            first_difference = Some((i, diff.to_string()));
        }
        per_index.push(equal);
    }
    let all_hold = per_index.iter().all(|&b| b);
    Ok(DualBoxIdentityReport {
        per_index,
        all_hold,
        first_difference,
    })
}

/// The pairwise disjoint families that bound the complement sizes: the first
/// is the complement of `F_1`; for `i >= 2` it is the fold of the prefix
/// intersected with the pointwise complement of the fold of the suffix
/// (the suffix factor for `i = s` is the full power set).
#[derive(Debug, Clone)]
pub struct DisjointBound {
    families: Vec<SetFamily>,
}

impl DisjointBound {
    pub fn families(&self) -> &[SetFamily] {
        &self.families
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.families.iter().map(|f| f.size() as u64).collect()
    }

    pub fn total(&self) -> u64 {
        self.families.iter().map(|f| f.size() as u64).sum()
    }
}

/// Builds the bounding families for a cross-saturated sequence and checks
/// their contract: pairwise disjoint, `|comp(F_i)| <= |G_i|` for every `i`,
/// hence the total is at most `2^n`. A violation would falsify the sum
/// bound machinery and aborts with the offending pair.
pub fn disjoint_bound_families(seq: &FamilySequence) -> Result<DisjointBound> {
    require_cross_saturated(seq)?;
    let ground = seq.ground();
    let s = seq.s();
    let mut families = Vec::with_capacity(s);
    families.push(seq.family(0).family_complement());
    for i in 1..s {
        let prefix: Vec<SetFamily> = seq.families()[..i].to_vec();
        let left = box_fold(&prefix)?;
        let g_i = if i + 1 == s {
            // Empty suffix: the pointwise-complement factor degenerates to
            // the full power set, the intersection identity.
            left
        } else {
            let suffix: Vec<SetFamily> = seq.families()[i + 1..].to_vec();
            let right = box_fold(&suffix)?.pointwise_complement();
            left.intersection(&right)?
        };
        families.push(g_i);
    }

    for i in 0..s {
        for j in i + 1..s {
            let common = families[i].intersection(&families[j])?;
            if !common.is_empty_family() {
                return Err(Error::PostconditionViolated(format!(
                    "bounding families {i} and {j} share {}",
                    common.members().next().expect("nonempty intersection")
                )));
            }
        }
    }
    for (i, g_i) in families.iter().enumerate() {
        let comp = seq.family(i).family_complement().size();
        if comp > g_i.size() {
            return Err(Error::PostconditionViolated(format!(
                "complement of family {i} has {comp} sets but its bounding family only {}",
                g_i.size()
            )));
        }
    }
    let total: u64 = families.iter().map(|f| f.size() as u64).sum();
    if total > ground.num_subsets() as u64 {
        return Err(Error::PostconditionViolated(format!(
            "bounding families total {total} exceeds 2^n"
        )));
    }
    Ok(DisjointBound { families })
}

/// Sum of sizes against the `(s-1) * 2^n` lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossSumReport {
    pub sum: u64,
    pub bound: u64,
    pub holds: bool,
}

pub fn check_cross_sum_bound(seq: &FamilySequence) -> Result<CrossSumReport> {
    require_cross_saturated(seq)?;
    let sum = seq.sum_of_sizes();
    let bound = (seq.s() as u64 - 1) * seq.ground().num_subsets() as u64;
    Ok(CrossSumReport {
        sum,
        bound,
        holds: sum >= bound,
    })
}

/// Size of an s-saturated family against both lower bounds, in
/// cleared-denominator integer form:
/// the ratio bound `s * size >= (s-1) * 2^n`, and the conjectured
/// Erdős–Kleitman bound `2^(s-1) * size >= (2^(s-1) - 1) * 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SaturatedBoundsReport {
    pub size: u64,
    pub ratio_lhs: u64,
    pub ratio_rhs: u64,
    pub meets_ratio_bound: bool,
    pub conjecture_lhs: u64,
    pub conjecture_rhs: u64,
    pub meets_conjecture_bound: bool,
}

pub fn check_saturated_size_bounds(family: &SetFamily, s: usize) -> Result<SaturatedBoundsReport> {
    validate_s(s)?;
    if !crate::saturation::is_s_saturated(family, s)? {
        return Err(Error::NotSaturated { s });
    }
    let size = family.size() as u64;
    let pow = family.ground().num_subsets() as u64;
    let ratio_lhs = s as u64 * size;
    let ratio_rhs = (s as u64 - 1) * pow;
    let half_pow = 1u64 << (s - 1);
    let conjecture_lhs = half_pow * size;
    let conjecture_rhs = (half_pow - 1) * pow;
    Ok(SaturatedBoundsReport {
        size,
        ratio_lhs,
        ratio_rhs,
        meets_ratio_bound: ratio_lhs >= ratio_rhs,
        conjecture_lhs,
        conjecture_rhs,
        meets_conjecture_bound: conjecture_lhs >= conjecture_rhs,
    })
}
