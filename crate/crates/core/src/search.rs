//! Exhaustive minimum-size searches.
//!
//! Raw mode walks every one of the `2^(2^n)` families; antichain mode walks
//! increasing families through their antichains of inclusion-minimal sets,
//! which is exhaustive because every s-saturated family is increasing. Both
//! modes prune against a fixed construction-based upper bound (never
//! strictly, so ties survive) and tie-break witnesses by the
//! lexicographically smallest membership bitvector; minima, witnesses and
//! examined counters are therefore identical for any worker count.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{cross_extremal, partition_construction, BlockFamily, PartitionSpec};
use crate::cross::{is_cross_saturated, CrossEngine};
use crate::error::{Error, Result};
use crate::family::{FamilySequence, GroundSet, SetFamily, Subset};
use crate::saturation::{validate_s, PackingTable};

/// Enumeration strategy for the minimum-saturated-family search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Raw,
    Antichain,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchMode::Raw => write!(f, "raw"),
            SearchMode::Antichain => write!(f, "antichain"),
        }
    }
}

/// Resource caps for the searches. The defaults are desk-scale; the
/// `allow_long` override unlocks the configurable headroom below, but the
/// absolute caps stand regardless (beyond them runtimes stop being honest).
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub raw_max_n: u32,
    pub antichain_max_n: u32,
    pub cross_max_n: u32,
    pub cross_max_s: usize,
    pub allow_long: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            raw_max_n: 4,
            antichain_max_n: 6,
            cross_max_n: 3,
            cross_max_s: 3,
            allow_long: false,
        }
    }
}

impl SearchLimits {
    pub const RAW_ABSOLUTE_MAX_N: u32 = 5;
    pub const ANTICHAIN_ABSOLUTE_MAX_N: u32 = 6;
    pub const CROSS_ABSOLUTE_MAX_N: u32 = 4;
    pub const CROSS_ABSOLUTE_MAX_S: usize = 4;

    fn check(&self, what: &'static str, actual: u64, soft: u64, hard: u64) -> Result<()> {
        let limit = if self.allow_long { hard } else { soft };
        if actual > limit {
            return Err(Error::CapExceeded {
                what,
                actual,
                limit,
                overridable: !self.allow_long && actual <= hard,
            });
        }
        Ok(())
    }
}

/// Result of a minimum-saturated-family search: the exact minimum with one
/// witness (lexicographically smallest among the minima), plus audit
/// counters. The witness is re-checked on construction.
#[derive(Debug, Clone, Serialize)]
pub struct MinimumCertificate {
    pub n: u32,
    pub s: usize,
    pub mode: SearchMode,
    pub minimum_size: u64,
    /// Number of distinct s-saturated families attaining the minimum.
    pub minimum_count: u64,
    pub families_examined: u64,
    #[serde(skip)]
    pub witness: SetFamily,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// The size every search prunes against: an actual s-saturated family, so
/// the true minimum can never exceed it. For `n >= s - 1` this is the
/// partition construction at the conjectured value; below that the family
/// of all nonempty subsets is the unique s-saturated family.
fn seeded_upper_bound(ground: GroundSet, s: usize) -> Result<(SetFamily, u64)> {
    let n = ground.n();
    if n as usize >= s - 1 {
        // Split [n] into s-1 blocks: s-2 singletons and one tail block.
        let mut blocks = Vec::with_capacity(s - 1);
        let mut choices = Vec::with_capacity(s - 1);
        for e in 1..s as u32 - 1 {
            blocks.push(Subset::from_elements(&[e], ground)?);
            choices.push(BlockFamily::Dictator(e));
        }
        let tail: Vec<u32> = (s as u32 - 1..=n).collect();
        blocks.push(Subset::from_elements(&tail, ground)?);
        choices.push(BlockFamily::Dictator(s as u32 - 1));
        let spec = PartitionSpec::new(ground, blocks, choices)?;
        let family = partition_construction(&spec)?;
        let size = family.size() as u64;
        Ok((family, size))
    } else {
        let mut family = SetFamily::full(ground);
        family.remove(Subset::EMPTY);
        let size = family.size() as u64;
        if !crate::saturation::is_s_saturated(&family, s)? {
            return Err(Error::PostconditionViolated(
                "all-nonempty seed family is not saturated".into(),
            ));
        }
        Ok((family, size))
    }
}

/// One worker's running best: smallest size, then lexicographically
/// smallest witness, with the count of families attaining that size.
#[derive(Debug, Clone)]
struct BestTracker {
    best: Option<(u64, SetFamily)>,
    count_at_best: u64,
    examined: u64,
}

impl BestTracker {
    fn new() -> Self {
        BestTracker {
            best: None,
            count_at_best: 0,
            examined: 0,
        }
    }

    fn offer(&mut self, size: u64, family: &SetFamily) {
        match &mut self.best {
            None => {
                self.best = Some((size, family.clone()));
                self.count_at_best = 1;
            }
            Some((best_size, best_family)) => match size.cmp(best_size) {
                Ordering::Less => {
                    self.best = Some((size, family.clone()));
                    self.count_at_best = 1;
                }
                Ordering::Equal => {
                    self.count_at_best += 1;
                    if family.lex_cmp(best_family) == Ordering::Less {
                        *best_family = family.clone();
                    }
                }
                Ordering::Greater => {}
            },
        }
    }

    fn merge(mut self, other: BestTracker) -> BestTracker {
        self.examined += other.examined;
        match (&mut self.best, other.best) {
            (None, b) => {
                self.best = b;
                self.count_at_best = other.count_at_best;
            }
            (Some(_), None) => {}
            (Some((a_size, a_fam)), Some((b_size, b_fam))) => match b_size.cmp(a_size) {
                Ordering::Less => {
                    self.best = Some((b_size, b_fam));
                    self.count_at_best = other.count_at_best;
                }
                Ordering::Equal => {
                    self.count_at_best += other.count_at_best;
                    if b_fam.lex_cmp(a_fam) == Ordering::Less {
                        *a_fam = b_fam;
                    }
                }
                Ordering::Greater => {}
            },
        }
        self
    }
}

/// Exact minimum size of an s-saturated family on `[n]`, with witness.
pub fn min_saturated_search(
    ground: GroundSet,
    s: usize,
    mode: SearchMode,
    limits: &SearchLimits,
) -> Result<MinimumCertificate> {
    validate_s(s)?;
    let start = Instant::now();
    let (_, bound) = seeded_upper_bound(ground, s)?;
    let tracker = match mode {
        SearchMode::Raw => {
            limits.check(
                "raw search ground set size",
                ground.n().into(),
                limits.raw_max_n.into(),
                SearchLimits::RAW_ABSOLUTE_MAX_N.into(),
            )?;
            raw_scan(ground, s, bound)
        }
        SearchMode::Antichain => {
            limits.check(
                "antichain search ground set size",
                ground.n().into(),
                limits.antichain_max_n.into(),
                SearchLimits::ANTICHAIN_ABSOLUTE_MAX_N.into(),
            )?;
            antichain_scan(ground, s, bound)
        }
    };

    let (minimum_size, witness) = tracker
        .best
        .expect("the seeded construction guarantees at least one witness");
    debug_assert!(crate::saturation::is_s_saturated(&witness, s).unwrap());
    debug_assert_eq!(witness.size() as u64, minimum_size);
    Ok(MinimumCertificate {
        n: ground.n(),
        s,
        mode,
        minimum_size,
        minimum_count: tracker.count_at_best,
        families_examined: tracker.examined,
        witness,
        elapsed: start.elapsed(),
    })
}

/// Walks all `2^(2^n)` membership bitvectors in fixed chunks.
fn raw_scan(ground: GroundSet, s: usize, bound: u64) -> BestTracker {
    let total_families: u64 = 1u64 << ground.num_subsets().min(63);
    let chunks = 64u64;
    let chunk_len = total_families.div_ceil(chunks);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * chunk_len;
            let hi = (lo + chunk_len).min(total_families);
            let mut tracker = BestTracker::new();
            for bits in lo..hi {
                tracker.examined += 1;
                // ∅ as a member forbids s-disjoint-freeness outright.
                if bits & 1 != 0 {
                    continue;
                }
                let size = bits.count_ones() as u64;
                if size > bound {
                    continue;
                }
                let family = family_from_bits(ground, bits);
                if raw_is_saturated(&family, s) {
                    tracker.offer(size, &family);
                }
            }
            tracker
        })
        .reduce(BestTracker::new, BestTracker::merge)
}

fn family_from_bits(ground: GroundSet, bits: u64) -> SetFamily {
    let mut f = SetFamily::new_empty(ground);
    for m in 0..ground.num_subsets() {
        if bits >> m & 1 == 1 {
            f.insert(Subset::from_raw(m as u32));
        }
    }
    f
}

/// Saturation check specialised for the scan: the caller has already
/// excluded ∅ membership.
fn raw_is_saturated(family: &SetFamily, s: usize) -> bool {
    let ground = family.ground();
    let table = PackingTable::with_members(family, s);
    if table.packing_full() >= s {
        return false;
    }
    ground.subsets().all(|a| {
        a.is_empty()
            || family.contains(a)
            || table.packing_within(a.complement(ground)) >= s - 1
    })
}

/// Depth-first antichain enumeration with two prunes: a closure already
/// holding `s` pairwise disjoint sets cannot recover, and a closure larger
/// than the seeded bound cannot contain a minimum.
fn antichain_scan(ground: GroundSet, s: usize, bound: u64) -> BestTracker {
    // Candidate generators: nonempty subsets, large ones first.
    let mut candidates: Vec<Subset> = ground.subsets().filter(|c| !c.is_empty()).collect();
    candidates.sort_by_key(|c| (std::cmp::Reverse(c.len()), c.mask()));

    let shared_best = AtomicU64::new(bound);
    let empty_closure = SetFamily::new_empty(ground);
    let empty_table = PackingTable::new(ground, s);

    // Root: the empty antichain (the empty family). Never saturated for
    // n >= 1 but it is a visited node.
    let mut root = BestTracker::new();
    root.examined = 1;
    consider(&empty_closure, &empty_table, s, &shared_best, &mut root);

    let branch_results: Vec<BestTracker> = (0..candidates.len())
        .into_par_iter()
        .map(|first| {
            let mut tracker = BestTracker::new();
            if let Some((closure, table)) =
                extend_closure(&empty_closure, &empty_table, candidates[first], s, bound)
            {
                let mut chosen = vec![candidates[first]];
                dfs(
                    &candidates,
                    first + 1,
                    &mut chosen,
                    closure,
                    table,
                    s,
                    bound,
                    &shared_best,
                    &mut tracker,
                );
            }
            tracker
        })
        .collect();

    branch_results.into_iter().fold(root, BestTracker::merge)
}

/// Adds one generator to a closure; `None` when a prune fires.
fn extend_closure(
    closure: &SetFamily,
    table: &PackingTable,
    generator: Subset,
    s: usize,
    bound: u64,
) -> Option<(SetFamily, PackingTable)> {
    let ground = closure.ground();
    let mut new_closure = closure.clone();
    let mut new_table = table.clone();
    for t in generator.complement(ground).submasks() {
        let m = generator.union(t);
        if new_closure.insert(m) {
            new_table.insert(m);
        }
    }
    if new_table.packing_full() >= s {
        return None;
    }
    if new_closure.size() as u64 > bound {
        return None;
    }
    Some((new_closure, new_table))
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    candidates: &[Subset],
    start: usize,
    chosen: &mut Vec<Subset>,
    closure: SetFamily,
    table: PackingTable,
    s: usize,
    bound: u64,
    shared_best: &AtomicU64,
    tracker: &mut BestTracker,
) {
    tracker.examined += 1;
    consider(&closure, &table, s, shared_best, tracker);
    for next in start..candidates.len() {
        let c = candidates[next];
        if chosen
            .iter()
            .any(|&g| g.is_subset_of(c) || c.is_subset_of(g))
        {
            continue;
        }
        if let Some((new_closure, new_table)) = extend_closure(&closure, &table, c, s, bound) {
            chosen.push(c);
            dfs(
                candidates,
                next + 1,
                chosen,
                new_closure,
                new_table,
                s,
                bound,
                shared_best,
                tracker,
            );
            chosen.pop();
        }
    }
}

/// Runs the maximality scan when the closure could still matter for the
/// minimum. The gate only saves time; every family at the true minimum is
/// always scanned because the shared best never drops below it.
fn consider(
    closure: &SetFamily,
    table: &PackingTable,
    s: usize,
    shared_best: &AtomicU64,
    tracker: &mut BestTracker,
) {
    let size = closure.size() as u64;
    if size > shared_best.load(AtomicOrdering::Relaxed) {
        return;
    }
    let ground = closure.ground();
    let saturated = ground.subsets().all(|a| {
        a.is_empty()
            || closure.contains(a)
            || table.packing_within(a.complement(ground)) >= s - 1
    });
    if saturated {
        tracker.offer(size, closure);
        shared_best.fetch_min(size, AtomicOrdering::Relaxed);
    }
}

/// Result of the exhaustive minimum cross-saturated search.
#[derive(Debug, Clone, Serialize)]
pub struct CrossMinimumReport {
    pub n: u32,
    pub s: usize,
    pub minimum_sum: u64,
    pub sequences_examined: u64,
    #[serde(skip)]
    pub witness: FamilySequence,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Exact minimum of the sum of sizes over cross-saturated sequences.
///
/// Only increasing families are enumerated per slot; this is exhaustive
/// because every family of a cross-saturated sequence is increasing (a
/// missing superset of a member could otherwise be added: any transversal
/// it creates also works for the smaller member).
pub fn min_cross_search(
    ground: GroundSet,
    s: usize,
    limits: &SearchLimits,
) -> Result<CrossMinimumReport> {
    validate_s(s)?;
    limits.check(
        "cross search ground set size",
        ground.n().into(),
        limits.cross_max_n.into(),
        SearchLimits::CROSS_ABSOLUTE_MAX_N.into(),
    )?;
    limits.check(
        "cross search sequence length",
        s as u64,
        limits.cross_max_s as u64,
        SearchLimits::CROSS_ABSOLUTE_MAX_S as u64,
    )?;
    let start = Instant::now();

    let increasing: Vec<SetFamily> = (0..1u64 << ground.num_subsets())
        .map(|bits| family_from_bits(ground, bits))
        .filter(|f| f.is_increasing())
        .collect();
    let leaves = (increasing.len() as u64).checked_pow(s as u32);
    if leaves.is_none() || leaves.unwrap() > 1 << 26 {
        return Err(Error::CapExceeded {
            what: "cross search state space",
            actual: leaves.unwrap_or(u64::MAX),
            limit: 1 << 26,
            overridable: false,
        });
    }

    let bound = (s as u64 - 1) * ground.num_subsets() as u64;
    let seed = cross_extremal(&SetFamily::new_empty(ground), s)?;

    let mut best: Option<(u64, FamilySequence)> = Some((bound, seed));
    let mut examined = 0u64;
    let mut chosen: Vec<SetFamily> = Vec::with_capacity(s);
    cross_dfs(
        &increasing,
        ground,
        s,
        bound,
        &mut chosen,
        0,
        &CrossEngine::new(ground, s),
        &mut examined,
        &mut best,
    );

    let (minimum_sum, witness) = best.expect("the extremal seed is always a candidate");
    debug_assert!(is_cross_saturated(&witness));
    Ok(CrossMinimumReport {
        n: ground.n(),
        s,
        minimum_sum,
        sequences_examined: examined,
        witness,
        elapsed: start.elapsed(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cross_dfs(
    increasing: &[SetFamily],
    ground: GroundSet,
    s: usize,
    bound: u64,
    chosen: &mut Vec<SetFamily>,
    partial_sum: u64,
    engine: &CrossEngine,
    examined: &mut u64,
    best: &mut Option<(u64, FamilySequence)>,
) {
    if chosen.len() == s {
        *examined += 1;
        if !engine.has_disjoint_transversal() {
            let all_maximal = (0..s).all(|i| {
                ground
                    .subsets()
                    .all(|a| chosen[i].contains(a) || engine.addition_breaks(i, a))
            });
            if all_maximal {
                let seq = FamilySequence::new(chosen.clone()).expect("validated shape");
                let sum = partial_sum;
                match best {
                    Some((best_sum, best_seq)) => {
                        if sum < *best_sum
                            || (sum == *best_sum && seq.lex_cmp(best_seq) == Ordering::Less)
                        {
                            *best = Some((sum, seq));
                        }
                    }
                    None => *best = Some((sum, seq)),
                }
            }
        }
        return;
    }
    let slot = chosen.len();
    for f in increasing {
        let sum = partial_sum + f.size() as u64;
        if sum > bound {
            continue;
        }
        let mut next_engine = engine.clone();
        for b in f.members() {
            next_engine.insert(slot, b);
        }
        chosen.push(f.clone());
        cross_dfs(
            increasing,
            ground,
            s,
            bound,
            chosen,
            sum,
            &next_engine,
            examined,
            best,
        );
        chosen.pop();
    }
}
