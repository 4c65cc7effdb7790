//! Cross-module invariants: structural properties that must hold on every
//! family or sequence the generators can produce.

use proptest::prelude::*;

use satlab_core::algebra::{
    decomposition_polynomial, find_decomposition, independence_certificate, inner_product,
    integer_rank,
};
use satlab_core::boxop::{bkr_check, box_general, box_increasing, talagrand_check};
use satlab_core::constructions::cross_extremal;
use satlab_core::cross::{
    check_cross_sum_bound, check_dual_box_identity, disjoint_bound_families, is_cross_saturated,
};
use satlab_core::family::{CandidateOrder, FamilySequence, GroundSet, SetFamily, Subset};
use satlab_core::fuzz::cross_corpus_sequence;
use satlab_core::random::{random_increasing_family, random_intersecting_family, trial_rng};
use satlab_core::saturation::saturate;
use satlab_core::textio::{parse_family, serialize_family};

fn family_from_bits(ground: GroundSet, bits: u64) -> SetFamily {
    let mut f = SetFamily::new_empty(ground);
    for m in 0..ground.num_subsets() {
        if bits >> m & 1 == 1 {
            f.insert(Subset::from_mask(m as u32, ground).unwrap());
        }
    }
    f
}

fn all_increasing(ground: GroundSet) -> Vec<SetFamily> {
    (0..1u64 << ground.num_subsets())
        .map(|bits| family_from_bits(ground, bits))
        .filter(|f| f.is_increasing())
        .collect()
}

#[test]
fn intersecting_families_fill_at_most_half() {
    for n in 1..=12u32 {
        let ground = GroundSet::new(n).unwrap();
        for trial in 0..40 {
            let f = random_intersecting_family(ground, &mut trial_rng(100 + n as u64, trial));
            assert!(f.is_intersecting());
            assert!(f.size() <= ground.num_subsets() / 2, "n={n} trial={trial}");
        }
    }
}

#[test]
fn maximal_intersecting_families_are_self_dual() {
    for n in 1..=6u32 {
        let ground = GroundSet::new(n).unwrap();
        for seed in 0..25 {
            let f = saturate(
                &SetFamily::new_empty(ground),
                2,
                CandidateOrder::Random { seed },
            )
            .unwrap();
            assert_eq!(f.family_dual(), f, "n={n} seed={seed}");
        }
    }
}

#[test]
fn saturated_family_duals_are_intersecting() {
    for n in 1..=6u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=4usize {
            for seed in 0..15 {
                let f = saturate(
                    &SetFamily::new_empty(ground),
                    s,
                    CandidateOrder::Random { seed },
                )
                .unwrap();
                assert!(f.is_increasing(), "n={n} s={s} seed={seed}");
                assert!(f.family_dual().is_intersecting(), "n={n} s={s} seed={seed}");
            }
        }
    }
}

#[test]
fn box_paths_agree_exhaustively_up_to_n4() {
    for n in 1..=4u32 {
        let ground = GroundSet::new(n).unwrap();
        let increasing = all_increasing(ground);
        for a in &increasing {
            for b in &increasing {
                assert_eq!(
                    box_general(a, b).unwrap(),
                    box_increasing(a, b).unwrap(),
                    "n={n}"
                );
            }
        }
    }
}

#[test]
fn box_is_commutative_and_monotone() {
    for n in 1..=8u32 {
        let ground = GroundSet::new(n).unwrap();
        for trial in 0..60 {
            let mut rng = trial_rng(200 + n as u64, trial);
            let a = random_increasing_family(ground, &mut rng);
            let b = random_increasing_family(ground, &mut rng);
            let ab = box_increasing(&a, &b).unwrap();
            assert_eq!(ab, box_increasing(&b, &a).unwrap(), "n={n} trial={trial}");
            // Monotone: widen a by one more random increasing family.
            let wider = a.union(&random_increasing_family(ground, &mut rng)).unwrap();
            let wider_box = box_increasing(&wider, &b).unwrap();
            for s in ab.members() {
                assert!(wider_box.contains(s), "n={n} trial={trial} lost {s}");
            }
            // For increasing inputs the box sits inside the intersection.
            let common = a.intersection(&b).unwrap();
            for s in ab.members() {
                assert!(common.contains(s), "n={n} trial={trial} {s}");
            }
        }
    }
}

#[test]
fn general_box_matches_the_literal_definition() {
    // Definition-literal oracle: S is a member iff some pair of disjoint
    // index sets I, J has cylinder(I,S) inside a and cylinder(J,S) inside
    // b, checked by enumerating every pair without any pruning.
    fn cylinder_inside(target: &SetFamily, index: Subset, base: Subset) -> bool {
        satlab_core::boxop::cylinder(index, base, target.ground())
            .members()
            .all(|p| target.contains(p))
    }
    for n in 1..=4u32 {
        let ground = GroundSet::new(n).unwrap();
        for trial in 0..25 {
            let mut rng = trial_rng(240 + n as u64, trial);
            let a = satlab_core::random::random_family(ground, &mut rng);
            let b = satlab_core::random::random_family(ground, &mut rng);
            let fast = box_general(&a, &b).unwrap();
            for s in ground.subsets() {
                let literal = ground.subsets().any(|i| {
                    cylinder_inside(&a, i, s)
                        && i
                            .complement(ground)
                            .submasks()
                            .any(|j| cylinder_inside(&b, j, s))
                });
                assert_eq!(fast.contains(s), literal, "n={n} trial={trial} s={s}");
            }
        }
    }
}

#[test]
fn general_box_is_commutative_and_monotone_on_arbitrary_families() {
    for n in 1..=4u32 {
        let ground = GroundSet::new(n).unwrap();
        for trial in 0..40 {
            let mut rng = trial_rng(250 + n as u64, trial);
            let a = satlab_core::random::random_family(ground, &mut rng);
            let b = satlab_core::random::random_family(ground, &mut rng);
            let ab = box_general(&a, &b).unwrap();
            assert_eq!(ab, box_general(&b, &a).unwrap(), "n={n} trial={trial}");
            let wider = a
                .union(&satlab_core::random::random_family(ground, &mut rng))
                .unwrap();
            let wider_box = box_general(&wider, &b).unwrap();
            for s in ab.members() {
                assert!(wider_box.contains(s), "n={n} trial={trial} lost {s}");
            }
        }
    }
}

#[test]
fn diagonal_embedding_exhaustive_n4_and_fuzzed_n6() {
    // Exhaustive at n = 4 over every family and s in {2,3,4}.
    let ground = GroundSet::new(4).unwrap();
    for s in 2..=4usize {
        for bits in 0..1u64 << ground.num_subsets() {
            let f = family_from_bits(ground, bits);
            let single = satlab_core::saturation::is_s_saturated(&f, s).unwrap();
            let cross = is_cross_saturated(&FamilySequence::diagonal(&f, s).unwrap());
            assert_eq!(single, cross, "s={s} bits={bits:#x}");
        }
    }
    // Fuzzed saturate outputs up to n = 6 embed as cross-saturated copies.
    for n in 1..=6u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=(n as usize + 1).min(4) {
            for seed in 0..10 {
                let f = saturate(
                    &SetFamily::new_empty(ground),
                    s,
                    CandidateOrder::Random { seed },
                )
                .unwrap();
                assert!(
                    is_cross_saturated(&FamilySequence::diagonal(&f, s).unwrap()),
                    "n={n} s={s} seed={seed}"
                );
            }
        }
    }
}

#[test]
fn decomposition_polynomials_are_unitriangular_up_to_n4() {
    for n in 1..=4u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=3usize {
            for trial in 0..5 {
                let seq = cross_corpus_sequence(ground, s, 650, trial).unwrap();
                for i in 0..seq.s() {
                    for a in seq.family(i).family_dual().members() {
                        let d = find_decomposition(&seq, i, a).unwrap();
                        let coeffs =
                            decomposition_polynomial(ground, &d).monomial_coefficients();
                        assert_eq!(coeffs[a.mask() as usize], 1, "n={n} s={s} i={i} a={a}");
                        for m in ground.subsets() {
                            if !m.is_subset_of(a) {
                                assert_eq!(
                                    coeffs[m.mask() as usize], 0,
                                    "n={n} s={s} i={i} a={a} m={m}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn correlation_inequalities_hold_on_small_corpora() {
    // Fast increasing path.
    for n in 1..=8u32 {
        let ground = GroundSet::new(n).unwrap();
        for trial in 0..50 {
            let mut rng = trial_rng(300 + n as u64, trial);
            let a = random_increasing_family(ground, &mut rng);
            let b = random_increasing_family(ground, &mut rng);
            assert!(talagrand_check(&a, &b).unwrap().holds, "n={n} trial={trial}");
            assert!(bkr_check(&a, &b).unwrap().holds, "n={n} trial={trial}");
        }
    }
    // General path on arbitrary families.
    for n in 1..=5u32 {
        let ground = GroundSet::new(n).unwrap();
        for trial in 0..40 {
            let mut rng = trial_rng(400 + n as u64, trial);
            let a = satlab_core::random::random_family(ground, &mut rng);
            let b = satlab_core::random::random_family(ground, &mut rng);
            assert!(talagrand_check(&a, &b).unwrap().holds, "n={n} trial={trial}");
            assert!(bkr_check(&a, &b).unwrap().holds, "n={n} trial={trial}");
        }
    }
}

#[test]
fn general_fold_composes_left_to_right() {
    use satlab_core::boxop::box_fold;
    for n in 1..=4u32 {
        let ground = GroundSet::new(n).unwrap();
        for trial in 0..20 {
            let mut rng = trial_rng(260 + n as u64, trial);
            let a = satlab_core::random::random_family(ground, &mut rng);
            let b = satlab_core::random::random_family(ground, &mut rng);
            let c = satlab_core::random::random_family(ground, &mut rng);
            let folded = box_fold(&[a.clone(), b.clone(), c.clone()]).unwrap();
            let manual = box_general(&box_general(&a, &b).unwrap(), &c).unwrap();
            assert_eq!(folded, manual, "n={n} trial={trial}");
        }
    }
}

#[test]
fn exhaustive_inequalities_on_tiny_grounds() {
    // Every single pair of families for n <= 2.
    for n in 1..=2u32 {
        let ground = GroundSet::new(n).unwrap();
        let total = 1u64 << ground.num_subsets();
        for abits in 0..total {
            let a = family_from_bits(ground, abits);
            for bbits in 0..total {
                let b = family_from_bits(ground, bbits);
                assert!(talagrand_check(&a, &b).unwrap().holds, "{abits:#x} {bbits:#x}");
                assert!(bkr_check(&a, &b).unwrap().holds, "{abits:#x} {bbits:#x}");
            }
        }
    }
}

#[test]
fn cross_saturate_recovers_from_partial_sequences() {
    // Deleting members keeps a sequence cross dependant; the greedy
    // closure must re-saturate it and still meet the sum bound.
    use satlab_core::cross::cross_saturate;
    for n in 1..=4u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=3usize {
            for trial in 0..8 {
                let full = cross_corpus_sequence(ground, s, 950, trial).unwrap();
                let mut rng = trial_rng(960 + n as u64, trial);
                let mut partial = full.clone();
                for family in partial.families_mut() {
                    let members: Vec<Subset> = family.members().collect();
                    for m in members {
                        if rand::Rng::gen_bool(&mut rng, 0.4) {
                            family.remove(m);
                        }
                    }
                }
                let out = cross_saturate(&partial, CandidateOrder::Default).unwrap();
                assert!(is_cross_saturated(&out), "n={n} s={s} trial={trial}");
                assert!(
                    check_cross_sum_bound(&out).unwrap().holds,
                    "n={n} s={s} trial={trial}"
                );
                // Everything kept from the partial input survives.
                for (i, family) in partial.families().iter().enumerate() {
                    for m in family.members() {
                        assert!(out.family(i).contains(m), "n={n} s={s} trial={trial}");
                    }
                }
            }
        }
    }
}

#[test]
fn cross_saturated_pipeline_invariants() {
    // Dual/box identity, bounding families, and the sum bound on fuzzed
    // cross-saturated sequences.
    for n in 1..=5u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=4usize {
            for trial in 0..6 {
                let seq = cross_corpus_sequence(ground, s, 500, trial).unwrap();
                assert!(is_cross_saturated(&seq), "n={n} s={s} trial={trial}");
                for f in seq.families() {
                    assert!(f.is_increasing(), "n={n} s={s} trial={trial}");
                }
                let identity = check_dual_box_identity(&seq).unwrap();
                assert!(identity.all_hold, "n={n} s={s} trial={trial}");
                let bound = disjoint_bound_families(&seq).unwrap();
                assert!(
                    bound.total() <= ground.num_subsets() as u64,
                    "n={n} s={s} trial={trial}"
                );
                assert!(
                    check_cross_sum_bound(&seq).unwrap().holds,
                    "n={n} s={s} trial={trial}"
                );
            }
        }
    }
}

#[test]
fn per_block_rank_equals_complement_size() {
    for n in 1..=4u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=3usize {
            for trial in 0..4 {
                let seq = cross_corpus_sequence(ground, s, 600, trial).unwrap();
                for i in 0..s {
                    let dual = seq.family(i).family_dual();
                    let rows: Vec<Vec<i64>> = dual
                        .members()
                        .map(|a| {
                            let d = find_decomposition(&seq, i, a).unwrap();
                            decomposition_polynomial(ground, &d)
                                .values()
                                .iter()
                                .map(|&v| v as i64)
                                .collect()
                        })
                        .collect();
                    assert_eq!(
                        integer_rank(&rows),
                        seq.family(i).family_complement().size(),
                        "n={n} s={s} trial={trial} i={i}"
                    );
                }
            }
        }
    }
}

#[test]
fn certificate_rank_is_decomposition_independent() {
    // The total rank must equal the complement sum no matter which exact
    // decompositions are chosen; perturb the choice by reversing slot
    // preference through family order.
    for trial in 0..6 {
        let ground = GroundSet::new(4).unwrap();
        let seq = cross_corpus_sequence(ground, 3, 700, trial).unwrap();
        let report = independence_certificate(&seq).unwrap();
        assert!(report.cross_orthogonal && report.rank_matches, "trial={trial}");
        // Same sequence with families rotated: same totals.
        let rotated = FamilySequence::new(vec![
            seq.family(1).clone(),
            seq.family(2).clone(),
            seq.family(0).clone(),
        ])
        .unwrap();
        if is_cross_saturated(&rotated) {
            let r2 = independence_certificate(&rotated).unwrap();
            assert_eq!(report.total_rank, r2.total_rank, "trial={trial}");
        }
    }
}

#[test]
fn orthogonality_holds_pairwise_on_fuzzed_sequences() {
    for trial in 0..5 {
        let ground = GroundSet::new(4).unwrap();
        let seq = cross_corpus_sequence(ground, 3, 800, trial).unwrap();
        let mut blocks: Vec<Vec<satlab_core::algebra::EvalVector>> = Vec::new();
        for i in 0..seq.s() {
            let dual = seq.family(i).family_dual();
            blocks.push(
                dual.members()
                    .map(|a| {
                        decomposition_polynomial(
                            ground,
                            &find_decomposition(&seq, i, a).unwrap(),
                        )
                    })
                    .collect(),
            );
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                for va in &blocks[i] {
                    for vb in &blocks[j] {
                        assert_eq!(inner_product(va, vb).unwrap(), 0, "trial={trial}");
                    }
                }
            }
        }
    }
}

#[test]
fn lift_transfers_the_conjecture_bound_exactly() {
    // |G| = |F| + 2^n makes the conjectured bound for s+1 on the lift
    // equivalent to the conjectured bound for s on the original; verify the
    // equivalence with exact integers on fuzzed saturated families.
    use satlab_core::constructions::lift;
    use satlab_core::cross::check_saturated_size_bounds;
    for n in 1..=5u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=4usize {
            for seed in 0..10 {
                let f = saturate(
                    &SetFamily::new_empty(ground),
                    s,
                    CandidateOrder::Random { seed },
                )
                .unwrap();
                let lifted = lift(&f, s).unwrap();
                let before = check_saturated_size_bounds(&f, s).unwrap();
                let after = check_saturated_size_bounds(&lifted, s + 1).unwrap();
                assert_eq!(
                    before.meets_conjecture_bound, after.meets_conjecture_bound,
                    "n={n} s={s} seed={seed}"
                );
                assert_eq!(after.size, before.size + ground.num_subsets() as u64);
            }
        }
    }
}

#[test]
fn cross_extremal_is_tight_for_random_increasing_seeds() {
    for n in 1..=6u32 {
        let ground = GroundSet::new(n).unwrap();
        for s in 2..=4usize {
            for trial in 0..10 {
                let seed_family =
                    random_increasing_family(ground, &mut trial_rng(900 + n as u64, trial));
                let seq = cross_extremal(&seed_family, s).unwrap();
                let report = check_cross_sum_bound(&seq).unwrap();
                assert_eq!(report.sum, report.bound, "n={n} s={s} trial={trial}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complements_commute_and_involute(n in 1u32..=5, bits: u64) {
        let ground = GroundSet::new(n).unwrap();
        let f = family_from_bits(ground, bits);
        prop_assert_eq!(f.pointwise_complement().pointwise_complement(), f.clone());
        prop_assert_eq!(
            f.family_complement().pointwise_complement(),
            f.pointwise_complement().family_complement()
        );
        prop_assert_eq!(f.family_dual().family_dual(), f.clone());
    }

    #[test]
    fn up_closure_is_a_closure_operator(n in 1u32..=5, bits: u64) {
        let ground = GroundSet::new(n).unwrap();
        let f = family_from_bits(ground, bits);
        let up = f.up_closure();
        prop_assert!(up.is_increasing());
        for m in f.members() {
            prop_assert!(up.contains(m));
        }
        prop_assert_eq!(up.up_closure(), up.clone());
        // Minimal members regenerate the closure.
        let regen = SetFamily::from_subsets(ground, &up.minimal_members())
            .unwrap()
            .up_closure();
        prop_assert_eq!(regen, up);
    }

    #[test]
    fn family_text_round_trips(n in 1u32..=6, bits: u64) {
        let ground = GroundSet::new(n).unwrap();
        let f = family_from_bits(ground, bits);
        let text = serialize_family(&f);
        let (parsed, warnings) = parse_family(&text).unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(parsed, f);
        // Canonical form is a fixed point.
        prop_assert_eq!(serialize_family(&parse_family(&text).unwrap().0), text);
    }
}
