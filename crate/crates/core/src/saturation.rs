//! Pairwise-disjoint tuples, s-saturation, and the greedy saturation closure.
//!
//! Disjointness tuples allow repeated member sets, so the empty set alone
//! already yields arbitrarily long pairwise disjoint tuples. Consequently no
//! s-disjoint-free family contains the empty set, and the empty set is never
//! addable during saturation.
//!
//! Two engines back the predicates and cross-validate each other in tests:
//! a memoized recursive tuple search (which also produces witnesses), and a
//! packing table `md[M]` = capped maximum number of pairwise disjoint
//! members inside the mask `M`, updated incrementally as members arrive.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::family::{submasks_of, CandidateOrder, GroundSet, SetFamily, Subset};

/// Capped maximum-packing table over all masks.
///
/// Inserting a nonempty member `B` updates all supersets of `B` in
/// O(2^(n-|B|)); queries are O(1). Values saturate at `cap`.
#[derive(Clone)]
pub(crate) struct PackingTable {
    ground: GroundSet,
    cap: u8,
    md: Vec<u8>,
}

impl PackingTable {
    pub fn new(ground: GroundSet, cap: usize) -> Self {
        PackingTable {
            ground,
            cap: cap.min(u8::MAX as usize) as u8,
            md: vec![0; ground.num_subsets()],
        }
    }

    pub fn with_members(family: &SetFamily, cap: usize) -> Self {
        let mut t = Self::new(family.ground(), cap);
        for m in family.members() {
            t.insert(m);
        }
        t
    }

    /// Inserts a nonempty member set. Callers reject the empty set first.
    pub fn insert(&mut self, member: Subset) {
        debug_assert!(!member.is_empty());
        let rest = member.complement(self.ground).mask();
        let b = member.mask() as usize;
        for sub in submasks_of(rest) {
            let m = b | sub as usize;
            let grown = (self.md[sub as usize] + 1).min(self.cap);
            if grown > self.md[m] {
                self.md[m] = grown;
            }
        }
    }

    /// Capped maximum number of pairwise disjoint members within `within`.
    pub fn packing_within(&self, within: Subset) -> usize {
        self.md[within.mask() as usize] as usize
    }

    pub fn packing_full(&self) -> usize {
        self.md[self.ground.full_mask() as usize] as usize
    }
}

/// Searches for `k` pairwise disjoint member sets (repetition allowed) and
/// returns one such tuple, or `None`.
///
/// The empty set is special-cased: if it is a member, any `k >= 2` succeeds
/// by repeating it. Otherwise a recursive search walks members contained in
/// the remaining free mask in ascending mask order, memoizing on
/// `(free mask, k)`.
pub fn find_disjoint_tuple(family: &SetFamily, k: usize) -> Option<Vec<Subset>> {
    assert!(k >= 1, "k must be at least 1");
    if k == 1 {
        return family.members().next().map(|m| vec![m]);
    }
    if family.contains(Subset::EMPTY) {
        return Some(vec![Subset::EMPTY; k]);
    }

    let full = family.ground().full_subset();
    let mut memo: HashMap<(u32, usize), bool> = HashMap::new();
    if !tuple_exists(family, full, k, &mut memo) {
        return None;
    }

    // Reconstruct the lexicographically first tuple from the memo.
    let mut tuple = Vec::with_capacity(k);
    let mut free = full;
    for remaining in (1..=k).rev() {
        let chosen = family
            .members_within(free)
            .find(|&b| {
                !b.is_empty() && tuple_exists(family, free.difference(b), remaining - 1, &mut memo)
            })
            .expect("memoized existence guarantees a choice");
        tuple.push(chosen);
        free = free.difference(chosen);
    }
    Some(tuple)
}

fn tuple_exists(
    family: &SetFamily,
    free: Subset,
    k: usize,
    memo: &mut HashMap<(u32, usize), bool>,
) -> bool {
    if k == 0 {
        return true;
    }
    if let Some(&hit) = memo.get(&(free.mask(), k)) {
        return hit;
    }
    let mut found = false;
    for b in family.members_within(free) {
        if b.is_empty() {
            continue; // excluded by the caller's special case
        }
        if tuple_exists(family, free.difference(b), k - 1, memo) {
            found = true;
            break;
        }
    }
    memo.insert((free.mask(), k), found);
    found
}

/// True iff the family contains `k` pairwise disjoint member sets,
/// repetition allowed.
pub fn contains_k_pairwise_disjoint(family: &SetFamily, k: usize) -> bool {
    find_disjoint_tuple(family, k).is_some()
}

/// Outcome of the s-saturation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaturationStatus {
    Saturated,
    /// The family itself contains `s` pairwise disjoint sets.
    ContainsDisjointTuple { witness: Vec<Subset> },
    /// Some missing set could be added without creating `s` disjoint sets.
    NotMaximal { addable: Subset },
}

pub(crate) fn validate_s(s: usize) -> Result<()> {
    if s < 2 {
        return Err(Error::STooSmall(s));
    }
    Ok(())
}

/// Full s-saturation check with a violation report.
///
/// Saturated means: no `s` pairwise disjoint member sets, and adding any
/// missing subset creates such a tuple.
pub fn saturation_status(family: &SetFamily, s: usize) -> Result<SaturationStatus> {
    validate_s(s)?;
    if family.contains(Subset::EMPTY) {
        return Ok(SaturationStatus::ContainsDisjointTuple {
            witness: vec![Subset::EMPTY; s],
        });
    }
    let ground = family.ground();
    let table = PackingTable::with_members(family, s);
    if table.packing_full() >= s {
        let witness = find_disjoint_tuple(family, s).expect("packing table found a tuple");
        return Ok(SaturationStatus::ContainsDisjointTuple { witness });
    }
    // A missing set A != ∅ is addable iff the family has no s-1 pairwise
    // disjoint members avoiding A. Adding ∅ always creates (∅,...,∅).
    for a in ground.subsets() {
        if a.is_empty() || family.contains(a) {
            continue;
        }
        if table.packing_within(a.complement(ground)) < s - 1 {
            return Ok(SaturationStatus::NotMaximal { addable: a });
        }
    }
    Ok(SaturationStatus::Saturated)
}

pub fn is_s_saturated(family: &SetFamily, s: usize) -> Result<bool> {
    Ok(matches!(
        saturation_status(family, s)?,
        SaturationStatus::Saturated
    ))
}

/// Greedy saturation closure: scans candidate subsets in `order` and adds
/// each one that keeps the family free of `s` pairwise disjoint sets.
///
/// Rejects inputs that already contain `s` pairwise disjoint sets.
pub fn saturate(family: &SetFamily, s: usize, order: CandidateOrder) -> Result<SetFamily> {
    validate_s(s)?;
    if family.contains(Subset::EMPTY) {
        return Err(Error::ContainsDisjointTuple { k: s });
    }
    let ground = family.ground();
    let mut table = PackingTable::with_members(family, s);
    if table.packing_full() >= s {
        return Err(Error::ContainsDisjointTuple { k: s });
    }
    let mut out = family.clone();
    for a in order.subsets(ground) {
        if a.is_empty() || out.contains(a) {
            continue;
        }
        if table.packing_within(a.complement(ground)) < s - 1 {
            out.insert(a);
            table.insert(a);
        }
    }
    debug_assert!(matches!(
        saturation_status(&out, s),
        Ok(SaturationStatus::Saturated)
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySequence;

    fn fam(n: u32, masks: &[u32]) -> SetFamily {
        let g = GroundSet::new(n).unwrap();
        let subsets: Vec<Subset> = masks
            .iter()
            .map(|&m| Subset::from_mask(m, g).unwrap())
            .collect();
        SetFamily::from_subsets(g, &subsets).unwrap()
    }

    fn assert_valid_tuple(family: &SetFamily, k: usize, tuple: &[Subset]) {
        assert_eq!(tuple.len(), k);
        for s in tuple {
            assert!(family.contains(*s));
        }
        for (i, a) in tuple.iter().enumerate() {
            for b in &tuple[i + 1..] {
                assert!(a.is_disjoint(*b), "{a} and {b} intersect");
            }
        }
    }

    #[test]
    fn disjoint_tuple_examples() {
        let f = fam(2, &[0b01, 0b10, 0b11]);
        let t = find_disjoint_tuple(&f, 2).unwrap();
        assert_valid_tuple(&f, 2, &t);
        assert_eq!(t, vec![Subset::from_mask(0b01, f.ground()).unwrap(), Subset::from_mask(0b10, f.ground()).unwrap()]);
        assert!(find_disjoint_tuple(&f, 3).is_none());

        // Repetition convention: {∅,{1}} has (∅,∅,∅)-style triples.
        let g = fam(2, &[0b00, 0b01]);
        let t = find_disjoint_tuple(&g, 3).unwrap();
        assert_valid_tuple(&g, 3, &t);

        // k = 1 is satisfied by any member.
        assert!(find_disjoint_tuple(&fam(2, &[]), 1).is_none());
        assert!(find_disjoint_tuple(&fam(2, &[0b11]), 1).is_some());
    }

    #[test]
    fn saturation_status_examples() {
        // {{1},{1,2}} is 2-saturated on n=2.
        assert_eq!(
            saturation_status(&fam(2, &[0b01, 0b11]), 2).unwrap(),
            SaturationStatus::Saturated
        );
        // {{1,2}} is not maximal; {1} is addable.
        assert_eq!(
            saturation_status(&fam(2, &[0b11]), 2).unwrap(),
            SaturationStatus::NotMaximal {
                addable: Subset::from_mask(0b01, GroundSet::new(2).unwrap()).unwrap()
            }
        );
        // All nonempty subsets of [3] are 4-saturated.
        let all_nonempty = fam(3, &[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(
            saturation_status(&all_nonempty, 4).unwrap(),
            SaturationStatus::Saturated
        );
        // A family with a disjoint pair reports a witness.
        match saturation_status(&fam(2, &[0b01, 0b10]), 2).unwrap() {
            SaturationStatus::ContainsDisjointTuple { witness } => {
                assert_valid_tuple(&fam(2, &[0b01, 0b10]), 2, &witness)
            }
            other => panic!("expected disjoint tuple, got {other:?}"),
        }
        assert!(saturation_status(&fam(2, &[]), 1).is_err());
    }

    #[test]
    fn saturate_default_order_trace() {
        // From the empty family on n=2 with the default order the greedy
        // closure visits {1,2},{1},{2},∅ and keeps {{1,2},{1}}.
        let g = GroundSet::new(2).unwrap();
        let out = saturate(&SetFamily::new_empty(g), 2, CandidateOrder::Default).unwrap();
        assert_eq!(out, fam(2, &[0b11, 0b01]));
        assert_eq!(out.size(), 2);
    }

    #[test]
    fn saturate_two_always_hits_half() {
        for n in 1..=6 {
            let g = GroundSet::new(n).unwrap();
            let empty = SetFamily::new_empty(g);
            for seed in 0..20 {
                let order = if seed == 0 {
                    CandidateOrder::Default
                } else {
                    CandidateOrder::Random { seed }
                };
                let out = saturate(&empty, 2, order).unwrap();
                assert_eq!(out.size(), 1usize << (n - 1));
            }
        }
    }

    #[test]
    fn saturate_rejects_disjoint_input() {
        let f = fam(2, &[0b01, 0b10]);
        assert!(matches!(
            saturate(&f, 2, CandidateOrder::Default),
            Err(Error::ContainsDisjointTuple { k: 2 })
        ));
        let with_empty = fam(2, &[0b00]);
        assert!(saturate(&with_empty, 2, CandidateOrder::Default).is_err());
    }

    #[test]
    fn saturate_keeps_singleton_on_tiny_ground() {
        // On n=1 with s=3 only ∅ is missing, and ∅ is never addable.
        let f = fam(1, &[0b1]);
        let out = saturate(&f, 3, CandidateOrder::Default).unwrap();
        assert_eq!(out, f);
    }

    #[test]
    fn packing_table_agrees_with_recursive_search() {
        // Cross-validate the two engines on deterministic pseudo-random
        // families.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 1..=5u32 {
            let g = GroundSet::new(n).unwrap();
            for _ in 0..60 {
                let bits = next() & ((1u64 << g.num_subsets()) - 1) & !1; // no ∅
                let mut f = SetFamily::new_empty(g);
                for m in 0..g.num_subsets() {
                    if bits >> m & 1 == 1 {
                        f.insert(Subset::from_mask(m as u32, g).unwrap());
                    }
                }
                let table = PackingTable::with_members(&f, 8);
                for k in 1..=5 {
                    let by_search = find_disjoint_tuple(&f, k).is_some();
                    let by_table = table.packing_full() >= k;
                    assert_eq!(by_search, by_table, "n={n} k={k} family={f:?}");
                }
            }
        }
    }

    #[test]
    fn saturated_families_are_increasing_with_intersecting_dual() {
        for n in 1..=5u32 {
            let g = GroundSet::new(n).unwrap();
            for s in 2..=4usize {
                for seed in 0..10 {
                    let out = saturate(
                        &SetFamily::new_empty(g),
                        s,
                        CandidateOrder::Random { seed },
                    )
                    .unwrap();
                    assert!(out.is_increasing());
                    assert!(out.family_dual().is_intersecting());
                }
            }
        }
    }

    #[test]
    fn diagonal_embedding_matches_cross_saturation() {
        // s-saturation of F coincides with cross-saturation of s copies of
        // F whenever n >= s-1; exhaustive over all families for small n.
        for n in 1..=3u32 {
            let g = GroundSet::new(n).unwrap();
            for s in 2..=(n as usize + 1).min(4) {
                for bits in 0..1u32 << g.num_subsets() {
                    let mut f = SetFamily::new_empty(g);
                    for m in 0..g.num_subsets() {
                        if bits >> m & 1 == 1 {
                            f.insert(Subset::from_mask(m as u32, g).unwrap());
                        }
                    }
                    let single = is_s_saturated(&f, s).unwrap();
                    let seq = FamilySequence::diagonal(&f, s).unwrap();
                    let cross = crate::cross::is_cross_saturated(&seq);
                    assert_eq!(single, cross, "n={n} s={s} family bits={bits:b}");
                }
            }
        }
    }
}
