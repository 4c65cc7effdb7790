//! Subsets of `[n]` as bitmasks and set families as characteristic
//! bitvectors over all `2^n` masks.
//!
//! Element `i` (1-based) lives at bit `i - 1` of a mask; a family stores one
//! membership bit per mask, indexed by the mask value. This gives O(1)
//! membership, machine-word disjointness tests and population-count sizes.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the ground-set size; a family bitvector is at most 2^20 bits.
pub const N_MAX_CORE: u32 = 20;

/// The ground set `[n] = {1, ..., n}`.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > N_MAX_CORE {
            return Err(Error::GroundSetSize(n));
        }
        Ok(GroundSet { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of subsets, `2^n`.
    pub fn num_subsets(&self) -> usize {
        1usize << self.n
    }

    /// Mask of the full set `[n]`.
    pub fn full_mask(&self) -> u32 {
        (self.num_subsets() - 1) as u32
    }

    pub fn full_subset(&self) -> Subset {
        Subset(self.full_mask())
    }

    /// All subsets in ascending mask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        (0..self.num_subsets() as u32).map(Subset)
    }

    pub fn contains_element(&self, element: u32) -> bool {
        element >= 1 && element <= self.n
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.n)
    }
}

/// A subset of the ground set, stored as a bitmask.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u32, ground: GroundSet) -> Result<Self> {
        if u64::from(mask) >= ground.num_subsets() as u64 {
            return Err(Error::MaskOutOfRange {
                mask: mask.into(),
                n: ground.n(),
            });
        }
        Ok(Subset(mask))
    }

    pub fn from_elements(elements: &[u32], ground: GroundSet) -> Result<Self> {
        let mut mask = 0u32;
        for &e in elements {
            if !ground.contains_element(e) {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    n: ground.n(),
                });
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset(mask))
    }

    /// Unchecked constructor for masks already known to fit the ground set.
    pub(crate) fn from_raw(mask: u32) -> Subset {
        Subset(mask)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    /// Number of elements.
    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains_element(&self, element: u32) -> bool {
        element >= 1 && self.0 & (1 << (element - 1)) != 0
    }

    pub fn is_disjoint(&self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(&self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(&self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(&self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement within the ground set.
    pub fn complement(&self, ground: GroundSet) -> Subset {
        Subset(!self.0 & ground.full_mask())
    }

    /// Elements in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let e = rest.trailing_zeros() + 1;
                rest &= rest - 1;
                Some(e)
            }
        })
    }

    /// All submasks of `self`, ascending by mask value.
    pub fn submasks(&self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some(cur.wrapping_sub(full) & full)
            };
            Some(Subset(cur))
        })
    }
}

impl fmt::Display for Subset {
    /// Comma-separated ascending element labels; `{}` for the empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for e in self.elements() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

// Submask iteration for raw masks, used by the hot inner loops.
pub(crate) fn submasks_of(full: u32) -> impl Iterator<Item = u32> {
    Subset(full).submasks().map(|s| s.0)
}

const WORD_BITS: usize = 64;

/// A family of subsets of a common ground set: one membership bit per mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSet,
    words: Vec<u64>,
    len: usize,
}

impl SetFamily {
    pub fn new_empty(ground: GroundSet) -> Self {
        let nwords = ground.num_subsets().div_ceil(WORD_BITS);
        SetFamily {
            ground,
            words: vec![0; nwords],
            len: 0,
        }
    }

    /// The full power set.
    pub fn full(ground: GroundSet) -> Self {
        let mut f = Self::new_empty(ground);
        let total = ground.num_subsets();
        for (i, w) in f.words.iter_mut().enumerate() {
            let lo = i * WORD_BITS;
            let in_range = total.saturating_sub(lo).min(WORD_BITS);
            *w = if in_range == WORD_BITS {
                !0
            } else {
                (1u64 << in_range) - 1
            };
        }
        f.len = total;
        f
    }

    pub fn from_subsets(ground: GroundSet, subsets: &[Subset]) -> Result<Self> {
        let mut f = Self::new_empty(ground);
        for &s in subsets {
            Subset::from_mask(s.mask(), ground)?;
            f.insert(s);
        }
        Ok(f)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Number of member sets; equals the population count of the bitvector.
    pub fn size(&self) -> usize {
        self.len
    }

    pub fn is_empty_family(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, s: Subset) -> bool {
        let i = s.mask() as usize;
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 != 0
    }

    /// Inserts a member; returns true if it was new.
    pub fn insert(&mut self, s: Subset) -> bool {
        debug_assert!(u64::from(s.mask()) < self.ground.num_subsets() as u64);
        let i = s.mask() as usize;
        let bit = 1u64 << (i % WORD_BITS);
        let w = &mut self.words[i / WORD_BITS];
        if *w & bit == 0 {
            *w |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, s: Subset) -> bool {
        let i = s.mask() as usize;
        let bit = 1u64 << (i % WORD_BITS);
        let w = &mut self.words[i / WORD_BITS];
        if *w & bit != 0 {
            *w &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Members in ascending mask order.
    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i * WORD_BITS) as u32;
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros();
                    rest &= rest - 1;
                    Some(Subset(base + b))
                }
            })
        })
    }

    /// Members that are subsets of `within`, ascending by mask.
    pub fn members_within<'a>(&'a self, within: Subset) -> impl Iterator<Item = Subset> + 'a {
        within.submasks().filter(move |&s| self.contains(s))
    }

    fn check_same_ground(&self, other: &SetFamily) -> Result<()> {
        if self.ground != other.ground {
            return Err(Error::GroundSetMismatch {
                left: self.ground.n(),
                right: other.ground.n(),
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        self.check_same_ground(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        out.len = out.words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(out)
    }

    pub fn intersection(&self, other: &SetFamily) -> Result<SetFamily> {
        self.check_same_ground(other)?;
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        out.len = out.words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(out)
    }

    /// Set complement within the power set: all subsets not in the family.
    pub fn family_complement(&self) -> SetFamily {
        let full = Self::full(self.ground);
        let mut out = self.clone();
        for (w, f) in out.words.iter_mut().zip(&full.words) {
            *w = !*w & f;
        }
        out.len = self.ground.num_subsets() - self.len;
        out
    }

    /// Member-wise complement within `[n]`: `{A^c : A in F}`.
    pub fn pointwise_complement(&self) -> SetFamily {
        let mut out = Self::new_empty(self.ground);
        for m in self.members() {
            out.insert(m.complement(self.ground));
        }
        out
    }

    /// The composition of the two complements (in either order).
    pub fn family_dual(&self) -> SetFamily {
        self.family_complement().pointwise_complement()
    }

    /// Smallest superfamily closed under taking supersets.
    pub fn up_closure(&self) -> SetFamily {
        let mut out = self.clone();
        let total = self.ground.num_subsets();
        for bit in 0..self.ground.n() {
            let step = 1usize << bit;
            for m in 0..total {
                if m & step != 0 && out.word_bit(m - step) {
                    out.set_bit(m);
                }
            }
        }
        out.len = out.words.iter().map(|w| w.count_ones() as usize).sum();
        out
    }

    /// True iff the family is closed under taking supersets.
    pub fn is_increasing(&self) -> bool {
        let total = self.ground.num_subsets();
        for bit in 0..self.ground.n() {
            let step = 1usize << bit;
            for m in 0..total {
                if m & step != 0 && self.word_bit(m - step) && !self.word_bit(m) {
                    return false;
                }
            }
        }
        true
    }

    /// Inclusion-minimal members (the antichain generating the up-closure).
    pub fn minimal_members(&self) -> Vec<Subset> {
        let has_sub = self.has_member_subset_table();
        self.members()
            .filter(|m| {
                m.elements().all(|e| {
                    let below = m.mask() & !(1 << (e - 1));
                    !has_sub[below as usize]
                })
            })
            .collect()
    }

    /// `table[m]` is true iff some member is a subset of the mask `m`.
    pub(crate) fn has_member_subset_table(&self) -> Vec<bool> {
        let total = self.ground.num_subsets();
        let mut table = vec![false; total];
        for m in self.members() {
            table[m.mask() as usize] = true;
        }
        for bit in 0..self.ground.n() {
            let step = 1usize << bit;
            for m in 0..total {
                if m & step != 0 && table[m - step] {
                    table[m] = true;
                }
            }
        }
        table
    }

    /// No two members (a member paired with itself included) are disjoint.
    /// Equivalently: no empty set, and no two disjoint members.
    pub fn is_intersecting(&self) -> bool {
        if self.is_empty_family() {
            return true;
        }
        let has_sub = self.has_member_subset_table();
        self.members()
            .all(|m| !has_sub[m.complement(self.ground).mask() as usize])
    }

    /// Lexicographic order on the membership sequence indexed by ascending
    /// mask, with absent < present.
    pub fn lex_cmp(&self, other: &SetFamily) -> Ordering {
        debug_assert_eq!(self.ground, other.ground);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if a >> bit & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }

    fn word_bit(&self, i: usize) -> bool {
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 != 0
    }

    fn set_bit(&mut self, i: usize) {
        self.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
    }
}

/// An ordered sequence of `s >= 2` families over a shared ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySequence {
    families: Vec<SetFamily>,
}

impl FamilySequence {
    pub fn new(families: Vec<SetFamily>) -> Result<Self> {
        if families.len() < 2 {
            return Err(Error::STooSmall(families.len()));
        }
        let ground = families[0].ground();
        for f in &families[1..] {
            if f.ground() != ground {
                return Err(Error::GroundSetMismatch {
                    left: ground.n(),
                    right: f.ground().n(),
                });
            }
        }
        Ok(FamilySequence { families })
    }

    /// `s` copies of one family.
    pub fn diagonal(family: &SetFamily, s: usize) -> Result<Self> {
        Self::new(vec![family.clone(); s])
    }

    pub fn ground(&self) -> GroundSet {
        self.families[0].ground()
    }

    pub fn s(&self) -> usize {
        self.families.len()
    }

    pub fn family(&self, i: usize) -> &SetFamily {
        &self.families[i]
    }

    pub fn families(&self) -> &[SetFamily] {
        &self.families
    }

    pub fn families_mut(&mut self) -> &mut [SetFamily] {
        &mut self.families
    }

    pub fn sum_of_sizes(&self) -> u64 {
        self.families.iter().map(|f| f.size() as u64).sum()
    }

    /// Lexicographic order on the concatenated membership bitvectors.
    pub fn lex_cmp(&self, other: &FamilySequence) -> Ordering {
        for (a, b) in self.families.iter().zip(&other.families) {
            match a.lex_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// Order in which candidate subsets are scanned by the greedy closures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateOrder {
    /// Descending cardinality, ties broken by ascending mask.
    Default,
    /// A seeded random permutation of all subsets.
    Random { seed: u64 },
}

impl CandidateOrder {
    /// All `2^n` subsets in this order.
    pub fn subsets(&self, ground: GroundSet) -> Vec<Subset> {
        let mut all: Vec<Subset> = ground.subsets().collect();
        match *self {
            CandidateOrder::Default => {
                all.sort_by_key(|s| (std::cmp::Reverse(s.len()), s.mask()));
            }
            CandidateOrder::Random { seed } => {
                crate::random::shuffle_subsets(&mut all, seed);
            }
        }
        all
    }
}
