//! Reproducible fuzzing campaigns.
//!
//! Campaigns parallelize over trial indices with one deterministic RNG
//! stream per trial; results are folded by trial index, so a campaign
//! report is byte-identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::boxop::{bkr_check, talagrand_check};
use crate::cross::{check_cross_sum_bound, cross_saturate, is_cross_saturated};
use crate::error::Result;
use crate::family::{CandidateOrder, FamilySequence, GroundSet, SetFamily};
use crate::random::{random_family, random_increasing_family, trial_rng};
use crate::saturation::saturate;

/// How the random family pairs for the inequality campaigns are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMode {
    /// Seeded increasing families; the fast box path applies.
    Increasing,
    /// Uniform arbitrary families; forces the general box path.
    Arbitrary,
}

/// Outcome of checking both correlation inequalities on seeded random
/// pairs. `failures` count trials where an inequality did not hold (none
/// are expected, ever).
#[derive(Debug, Clone, Serialize)]
pub struct InequalityCampaign {
    pub n: u32,
    pub mode: PairMode,
    pub trials: u64,
    pub seed: u64,
    pub talagrand_failures: u64,
    pub bkr_failures: u64,
    pub first_failure_trial: Option<u64>,
    pub all_hold: bool,
}

pub fn run_inequality_campaign(
    ground: GroundSet,
    mode: PairMode,
    trials: u64,
    seed: u64,
) -> Result<InequalityCampaign> {
    let per_trial: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let (a, b) = match mode {
                PairMode::Increasing => (
                    random_increasing_family(ground, &mut rng),
                    random_increasing_family(ground, &mut rng),
                ),
                PairMode::Arbitrary => {
                    (random_family(ground, &mut rng), random_family(ground, &mut rng))
                }
            };
            let talagrand = talagrand_check(&a, &b)?.holds;
            let bkr = bkr_check(&a, &b)?.holds;
            Ok::<(bool, bool), crate::Error>((talagrand, bkr))
        })
        .collect::<Result<Vec<_>>>()?;

    let talagrand_failures = per_trial.iter().filter(|(t, _)| !t).count() as u64;
    let bkr_failures = per_trial.iter().filter(|(_, b)| !b).count() as u64;
    let first_failure_trial = per_trial
        .iter()
        .position(|&(t, b)| !t || !b)
        .map(|i| i as u64);
    Ok(InequalityCampaign {
        n: ground.n(),
        mode,
        trials,
        seed,
        talagrand_failures,
        bkr_failures,
        first_failure_trial,
        all_hold: talagrand_failures == 0 && bkr_failures == 0,
    })
}

/// The cross-saturated sequence produced by trial `trial` of a campaign:
/// the greedy closure of `s` empty families under a seeded random order.
pub fn cross_corpus_sequence(
    ground: GroundSet,
    s: usize,
    seed: u64,
    trial: u64,
) -> Result<FamilySequence> {
    let empty = FamilySequence::new(vec![SetFamily::new_empty(ground); s])?;
    // One stream per trial; the order seed is drawn from the stream.
    let order_seed = rand::Rng::gen::<u64>(&mut trial_rng(seed, trial));
    cross_saturate(&empty, CandidateOrder::Random { seed: order_seed })
}

/// Outcome of fuzzing the greedy cross-saturation closure: every output
/// must be cross saturated and meet the sum lower bound.
#[derive(Debug, Clone, Serialize)]
pub struct CrossSaturateCampaign {
    pub n: u32,
    pub s: usize,
    pub trials: u64,
    pub seed: u64,
    pub min_sum: u64,
    pub max_sum: u64,
    pub bound: u64,
    pub bound_failures: u64,
    pub saturation_failures: u64,
    pub all_hold: bool,
}

pub fn run_cross_saturate_campaign(
    ground: GroundSet,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<CrossSaturateCampaign> {
    let bound = (s as u64 - 1) * ground.num_subsets() as u64;
    let per_trial: Vec<(u64, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seq = cross_corpus_sequence(ground, s, seed, t)?;
            let saturated = is_cross_saturated(&seq);
            let report = check_cross_sum_bound(&seq)?;
            Ok::<_, crate::Error>((report.sum, report.holds, saturated))
        })
        .collect::<Result<Vec<_>>>()?;

    let min_sum = per_trial.iter().map(|&(s, _, _)| s).min().unwrap_or(0);
    let max_sum = per_trial.iter().map(|&(s, _, _)| s).max().unwrap_or(0);
    let bound_failures = per_trial.iter().filter(|&&(_, h, _)| !h).count() as u64;
    let saturation_failures = per_trial.iter().filter(|&&(_, _, s)| !s).count() as u64;
    Ok(CrossSaturateCampaign {
        n: ground.n(),
        s,
        trials,
        seed,
        min_sum,
        max_sum,
        bound,
        bound_failures,
        saturation_failures,
        all_hold: bound_failures == 0 && saturation_failures == 0,
    })
}

/// The s-saturated family produced by trial `trial`: the greedy closure of
/// the empty family under a seeded random order.
pub fn saturate_corpus_family(
    ground: GroundSet,
    s: usize,
    seed: u64,
    trial: u64,
) -> Result<SetFamily> {
    let order_seed = rand::Rng::gen::<u64>(&mut trial_rng(seed, trial));
    saturate(
        &SetFamily::new_empty(ground),
        s,
        CandidateOrder::Random { seed: order_seed },
    )
}

/// Outcome of fuzzing the greedy saturation closure against the ratio
/// lower bound `s * |F| >= (s-1) * 2^n`.
#[derive(Debug, Clone, Serialize)]
pub struct SaturateCampaign {
    pub n: u32,
    pub s: usize,
    pub trials: u64,
    pub seed: u64,
    pub min_size: u64,
    pub max_size: u64,
    pub ratio_bound_failures: u64,
    pub all_hold: bool,
}

pub fn run_saturate_campaign(
    ground: GroundSet,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<SaturateCampaign> {
    let rhs = (s as u64 - 1) * ground.num_subsets() as u64;
    let per_trial: Vec<(u64, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let family = saturate_corpus_family(ground, s, seed, t)?;
            let size = family.size() as u64;
            Ok::<_, crate::Error>((size, s as u64 * size >= rhs))
        })
        .collect::<Result<Vec<_>>>()?;

    let min_size = per_trial.iter().map(|&(z, _)| z).min().unwrap_or(0);
    let max_size = per_trial.iter().map(|&(z, _)| z).max().unwrap_or(0);
    let ratio_bound_failures = per_trial.iter().filter(|&&(_, h)| !h).count() as u64;
    Ok(SaturateCampaign {
        n: ground.n(),
        s,
        trials,
        seed,
        min_size,
        max_size,
        ratio_bound_failures,
        all_hold: ratio_bound_failures == 0,
    })
}
