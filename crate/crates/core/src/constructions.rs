//! Extremal constructions: dictator families, the partition construction
//! hitting the conjectured minimum, the cross-extremal sequences meeting the
//! sum bound with equality, and the saturation-preserving lift to a larger
//! ground set.

use crate::error::{Error, Result};
use crate::family::{FamilySequence, GroundSet, SetFamily, Subset};
use crate::saturation::{is_s_saturated, validate_s};

/// All subsets containing one fixed element: the canonical maximal
/// intersecting family, of size `2^(n-1)`.
pub fn dictator_family(ground: GroundSet, element: u32) -> Result<SetFamily> {
    if !ground.contains_element(element) {
        return Err(Error::ElementOutOfRange {
            element,
            n: ground.n(),
        });
    }
    let mut f = SetFamily::new_empty(ground);
    for s in ground.subsets() {
        if s.contains_element(element) {
            f.insert(s);
        }
    }
    Ok(f)
}

/// Per-block choice of a maximal intersecting family.
#[derive(Debug, Clone)]
pub enum BlockFamily {
    /// All subsets of the block containing this element.
    Dictator(u32),
    /// An explicit family of subsets of the block, maximal intersecting
    /// within it (members are masks on the full ground set, contained in
    /// the block).
    Explicit(SetFamily),
}

/// A partition of `[n]` into `s - 1` nonempty blocks together with a
/// maximal intersecting family inside each block.
#[derive(Debug, Clone)]
pub struct PartitionSpec {
    ground: GroundSet,
    blocks: Vec<Subset>,
    block_families: Vec<SetFamily>,
}

impl PartitionSpec {
    pub fn new(ground: GroundSet, blocks: Vec<Subset>, choices: Vec<BlockFamily>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        if blocks.len() != choices.len() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks but {} family choices",
                blocks.len(),
                choices.len()
            )));
        }
        let mut seen = Subset::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !seen.is_disjoint(b) {
                return Err(Error::InvalidPartition(format!("block {b} overlaps another")));
            }
            seen = seen.union(b);
        }
        if seen != ground.full_subset() {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {seen}, not the whole ground set"
            )));
        }

        let mut block_families = Vec::with_capacity(blocks.len());
        for (&block, choice) in blocks.iter().zip(choices) {
            let family = match choice {
                BlockFamily::Dictator(e) => {
                    if !block.contains_element(e) {
                        return Err(Error::InvalidBlockFamily {
                            block,
                            reason: format!("dictator element {e} is outside the block"),
                        });
                    }
                    let mut f = SetFamily::new_empty(ground);
                    for s in block.submasks() {
                        if s.contains_element(e) {
                            f.insert(s);
                        }
                    }
                    f
                }
                BlockFamily::Explicit(f) => {
                    if f.ground() != ground {
                        return Err(Error::GroundSetMismatch {
                            left: ground.n(),
                            right: f.ground().n(),
                        });
                    }
                    if let Some(outside) = f.members().find(|m| !m.is_subset_of(block)) {
                        return Err(Error::InvalidBlockFamily {
                            block,
                            reason: format!("member {outside} leaves the block"),
                        });
                    }
                    if !f.is_intersecting() {
                        return Err(Error::InvalidBlockFamily {
                            block,
                            reason: "family is not intersecting".into(),
                        });
                    }
                    // Intersecting of half the block's power set is maximal.
                    if f.size() != 1usize << (block.len() - 1) {
                        return Err(Error::InvalidBlockFamily {
                            block,
                            reason: format!(
                                "size {} is not 2^({} - 1); not maximal within the block",
                                f.size(),
                                block.len()
                            ),
                        });
                    }
                    f
                }
            };
            block_families.push(family);
        }
        Ok(PartitionSpec {
            ground,
            blocks,
            block_families,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn s(&self) -> usize {
        self.blocks.len() + 1
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }
}

/// The family of all `A` whose trace on some block belongs to that block's
/// family. The result is s-saturated of size exactly
/// `(1 - 2^-(s-1)) * 2^n`; both facts are verified before returning.
pub fn partition_construction(spec: &PartitionSpec) -> Result<SetFamily> {
    let ground = spec.ground;
    let s = spec.s();
    let mut out = SetFamily::new_empty(ground);
    for a in ground.subsets() {
        let hit = spec
            .blocks
            .iter()
            .zip(&spec.block_families)
            .any(|(&block, f)| f.contains(a.intersection(block)));
        if hit {
            out.insert(a);
        }
    }

    let expected = ground.num_subsets() as u64 - (1u64 << (ground.n() as usize + 1 - s));
    if out.size() as u64 != expected {
        return Err(Error::PostconditionViolated(format!(
            "partition construction has size {}, expected {expected}",
            out.size()
        )));
    }
    if !is_s_saturated(&out, s)? {
        return Err(Error::PostconditionViolated(format!(
            "partition construction is not {s}-saturated"
        )));
    }
    Ok(out)
}

/// The cross-extremal sequence `(F1, dual(F1), P, ..., P)` for an
/// increasing seed family: cross saturated with sum of sizes exactly
/// `(s-1) * 2^n`; both facts are verified before returning.
pub fn cross_extremal(seed: &SetFamily, s: usize) -> Result<FamilySequence> {
    validate_s(s)?;
    if !seed.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    let ground = seed.ground();
    let mut families = Vec::with_capacity(s);
    families.push(seed.clone());
    families.push(seed.family_dual());
    for _ in 2..s {
        families.push(SetFamily::full(ground));
    }
    let seq = FamilySequence::new(families)?;

    let expected = (s as u64 - 1) * ground.num_subsets() as u64;
    if seq.sum_of_sizes() != expected {
        return Err(Error::PostconditionViolated(format!(
            "cross-extremal sum {} differs from {expected}",
            seq.sum_of_sizes()
        )));
    }
    if !crate::cross::is_cross_saturated(&seq) {
        return Err(Error::PostconditionViolated(
            "cross-extremal sequence is not cross saturated".into(),
        ));
    }
    Ok(seq)
}

/// Lifts an s-saturated family on `[n]` to an (s+1)-saturated family on
/// `[n+1]` by adjoining every set containing the new element; the size grows
/// by exactly `2^n`. Both postconditions are verified before returning.
pub fn lift(family: &SetFamily, s: usize) -> Result<SetFamily> {
    validate_s(s)?;
    if !is_s_saturated(family, s)? {
        return Err(Error::NotSaturated { s });
    }
    let ground = family.ground();
    let lifted_ground = GroundSet::new(ground.n() + 1)?;
    let new_bit = 1u32 << ground.n();
    let mut out = SetFamily::new_empty(lifted_ground);
    for m in family.members() {
        out.insert(Subset::from_mask(m.mask(), lifted_ground)?);
    }
    for m in 0..ground.num_subsets() as u32 {
        out.insert(Subset::from_mask(m | new_bit, lifted_ground)?);
    }

    let expected = family.size() + ground.num_subsets();
    if out.size() != expected {
        return Err(Error::PostconditionViolated(format!(
            "lift has size {}, expected {expected}",
            out.size()
        )));
    }
    if !is_s_saturated(&out, s + 1)? {
        return Err(Error::PostconditionViolated(format!(
            "lift is not {}-saturated",
            s + 1
        )));
    }
    Ok(out)
}
