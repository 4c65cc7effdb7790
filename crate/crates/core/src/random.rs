//! Seeded, reproducible random generation.
//!
//! All randomness flows through ChaCha8 streams: a campaign seed picks the
//! cipher key and the trial index picks the stream, so every trial is an
//! independent deterministic draw and campaigns can be replayed or
//! parallelized without changing a single bit of output.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::family::{GroundSet, SetFamily, Subset};

/// The deterministic RNG for trial `stream` of campaign `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn shuffle_subsets(subsets: &mut [Subset], seed: u64) {
    subsets.shuffle(&mut trial_rng(seed, 0));
}

pub fn random_subset<R: Rng>(ground: GroundSet, rng: &mut R) -> Subset {
    let mask = rng.gen_range(0..ground.num_subsets() as u32);
    Subset::from_mask(mask, ground).expect("sampled in range")
}

/// Uniform membership coin per subset: each of the `2^n` masks joins with
/// probability 1/2.
pub fn random_family<R: Rng>(ground: GroundSet, rng: &mut R) -> SetFamily {
    let mut f = SetFamily::new_empty(ground);
    for s in ground.subsets() {
        if rng.gen_bool(0.5) {
            f.insert(s);
        }
    }
    f
}

/// The documented increasing-family generator: draw uniform random subsets
/// one at a time, stopping after each with probability 1/2 (so the count is
/// geometric with mean 2), then take the up-closure of the draws.
pub fn random_increasing_family<R: Rng>(ground: GroundSet, rng: &mut R) -> SetFamily {
    let mut seeds = SetFamily::new_empty(ground);
    loop {
        seeds.insert(random_subset(ground, rng));
        if rng.gen_bool(0.5) {
            break;
        }
    }
    seeds.up_closure()
}

/// A random intersecting family: scan all subsets in a random order and
/// keep each one that intersects everything kept so far (the empty set
/// never qualifies).
pub fn random_intersecting_family<R: Rng>(ground: GroundSet, rng: &mut R) -> SetFamily {
    let mut order: Vec<Subset> = ground.subsets().collect();
    order.shuffle(rng);
    let mut f = SetFamily::new_empty(ground);
    let mut kept: Vec<Subset> = Vec::new();
    for c in order {
        if c.is_empty() {
            continue;
        }
        if kept.iter().all(|&k| !k.is_disjoint(c)) {
            f.insert(c);
            kept.push(c);
        }
    }
    f
}
