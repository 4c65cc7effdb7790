//! Evaluation vectors on `{0,1}^n` and the exact-rank independence
//! certificate for cross-saturated sequences.
//!
//! For every family index `i` and every set `A` in the dual of `F_i`, the
//! dual/box identity yields an exact decomposition of `A` into pairwise
//! disjoint member sets, one part from each other family. The signed product
//! polynomial built from that decomposition evaluates to -1/0/+1 on the
//! cube; stacking all of them gives a matrix whose exact rank equals the sum
//! of the complement sizes, which is the sum lower bound in disguise.
//!
//! Rank is computed by fraction-free (Bareiss) elimination over the
//! integers, with an i128 fast path and a big-integer fallback on overflow.
//! No tolerance parameter exists anywhere here.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{FamilySequence, GroundSet, Subset};

/// Cap for certificate work: elimination on a `2^n x 2^n` matrix.
pub const N_MAX_ALG: u32 = 8;

/// An integer-valued function on `{0,1}^n`, stored as `2^n` entries; entry
/// at mask `m` is the value at the point whose i-th coordinate is bit `i-1`
/// of `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalVector {
    ground: GroundSet,
    values: Vec<i32>,
}

impl EvalVector {
    pub fn new(ground: GroundSet, values: Vec<i32>) -> Self {
        assert_eq!(values.len(), ground.num_subsets());
        EvalVector { ground, values }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn value_at(&self, point: Subset) -> i32 {
        self.values[point.mask() as usize]
    }

    /// Coefficients in the monomial basis, recovered by Möbius inversion
    /// over the subset lattice.
    pub fn monomial_coefficients(&self) -> Vec<i64> {
        let mut coeffs: Vec<i64> = self.values.iter().map(|&v| v as i64).collect();
        let total = self.ground.num_subsets();
        for bit in 0..self.ground.n() {
            let step = 1usize << bit;
            for m in 0..total {
                if m & step != 0 {
                    coeffs[m] -= coeffs[m - step];
                }
            }
        }
        coeffs
    }
}

/// The monomial `prod_{i in s} x_i` as an evaluation vector: 1 exactly on
/// the points containing `s`.
pub fn subset_monomial(ground: GroundSet, s: Subset) -> EvalVector {
    let values = ground
        .subsets()
        .map(|m| if s.is_subset_of(m) { 1 } else { 0 })
        .collect();
    EvalVector::new(ground, values)
}

/// The standard inner product: sum over all points of the product of
/// values, exact.
pub fn inner_product(f: &EvalVector, g: &EvalVector) -> Result<i64> {
    if f.ground() != g.ground() {
        return Err(Error::GroundSetMismatch {
            left: f.ground().n(),
            right: g.ground().n(),
        });
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(&a, &b)| a as i64 * b as i64)
        .sum())
}

/// Exact rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    match bareiss_rank_i128(rows) {
        Some(rank) => rank,
        None => bareiss_rank_bigint(rows),
    }
}

fn bareiss_rank_i128(rows: &[Vec<i64>]) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let nrows = m.len();
    if nrows == 0 {
        return Some(0);
    }
    let ncols = m[0].len();
    let mut rank = 0usize;
    let mut prev_pivot: i128 = 1;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col];
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let a = pivot.checked_mul(m[r][c])?;
                let b = m[r][col].checked_mul(m[rank][c])?;
                m[r][c] = a.checked_sub(b)? / prev_pivot;
            }
            m[r][col] = 0;
        }
        prev_pivot = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Some(rank)
}

fn bareiss_rank_bigint(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let zero = BigInt::from(0);
    let mut rank = 0usize;
    let mut prev_pivot = BigInt::from(1);
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&r| m[r][col] != zero) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = (&pivot * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev_pivot;
                m[r][c] = v;
            }
            m[r][col] = zero.clone();
        }
        prev_pivot = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Exact rank of the full monomial matrix equals the space dimension 2^n.
pub fn monomial_basis_rank_selftest(ground: GroundSet) -> Result<bool> {
    check_alg_cap(ground)?;
    let rows: Vec<Vec<i64>> = ground
        .subsets()
        .map(|s| {
            subset_monomial(ground, s)
                .values()
                .iter()
                .map(|&v| v as i64)
                .collect()
        })
        .collect();
    Ok(integer_rank(&rows) == ground.num_subsets())
}

fn check_alg_cap(ground: GroundSet) -> Result<()> {
    if ground.n() > N_MAX_ALG {
        return Err(Error::CapExceeded {
            what: "certificate ground set size",
            actual: ground.n().into(),
            limit: N_MAX_ALG.into(),
            overridable: false,
        });
    }
    Ok(())
}

/// An exact decomposition of `target` into pairwise disjoint member sets:
/// parts drawn from families before index `i` and after it. Empty parts are
/// trimmed (they contribute empty products).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub index: usize,
    pub target: Subset,
    /// `(family index < index, member)` pairs.
    pub parts_before: Vec<(usize, Subset)>,
    /// `(family index > index, member)` pairs.
    pub parts_after: Vec<(usize, Subset)>,
}

impl Decomposition {
    /// Union of the parts before the distinguished index.
    pub fn before_union(&self) -> Subset {
        self.parts_before
            .iter()
            .fold(Subset::EMPTY, |acc, &(_, p)| acc.union(p))
    }

    pub fn after_union(&self) -> Subset {
        self.parts_after
            .iter()
            .fold(Subset::EMPTY, |acc, &(_, p)| acc.union(p))
    }
}

/// Finds the canonical exact decomposition of `target` for slot `i`:
/// family indices are visited in ascending order and each picks the
/// smallest-mask member that still allows an exact cover of the remainder,
/// with backtracking. Deterministic for fixed inputs; failure means the
/// preconditions were violated.
pub fn find_decomposition(
    seq: &FamilySequence,
    index: usize,
    target: Subset,
) -> Result<Decomposition> {
    assert!(index < seq.s());
    let slots: Vec<usize> = (0..seq.s()).filter(|&j| j != index).collect();
    let mut memo = vec![vec![None::<bool>; seq.ground().num_subsets()]; slots.len() + 1];
    if !exact_cover_exists(seq, &slots, 0, target, &mut memo) {
        return Err(Error::NoDecomposition { target });
    }
    let mut parts_before = Vec::new();
    let mut parts_after = Vec::new();
    let mut remaining = target;
    for (depth, &j) in slots.iter().enumerate() {
        let part = seq
            .family(j)
            .members_within(remaining)
            .find(|&b| exact_cover_exists(seq, &slots, depth + 1, remaining.difference(b), &mut memo))
            .expect("memoized existence guarantees a choice");
        remaining = remaining.difference(part);
        if !part.is_empty() {
            if j < index {
                parts_before.push((j, part));
            } else {
                parts_after.push((j, part));
            }
        }
    }
    debug_assert!(remaining.is_empty());
    Ok(Decomposition {
        index,
        target,
        parts_before,
        parts_after,
    })
}

fn exact_cover_exists(
    seq: &FamilySequence,
    slots: &[usize],
    depth: usize,
    remaining: Subset,
    memo: &mut [Vec<Option<bool>>],
) -> bool {
    if depth == slots.len() {
        return remaining.is_empty();
    }
    if let Some(hit) = memo[depth][remaining.mask() as usize] {
        return hit;
    }
    let found = seq
        .family(slots[depth])
        .members_within(remaining)
        .any(|b| exact_cover_exists(seq, slots, depth + 1, remaining.difference(b), memo));
    memo[depth][remaining.mask() as usize] = Some(found);
    found
}

/// The signed product polynomial of a decomposition, evaluated on the cube:
/// `prod_{j in B} x_j * prod_{j in C} (x_j - 1)` where `B` is the union of
/// the before-parts and `C` the union of the after-parts. Values lie in
/// {-1, 0, +1}.
pub fn decomposition_polynomial(ground: GroundSet, decomp: &Decomposition) -> EvalVector {
    let b = decomp.before_union();
    let c = decomp.after_union();
    let sign = if c.len().is_multiple_of(2) { 1 } else { -1 };
    let values = ground
        .subsets()
        .map(|m| {
            if b.is_subset_of(m) && c.is_disjoint(m) {
                sign
            } else {
                0
            }
        })
        .collect();
    EvalVector::new(ground, values)
}

/// Everything the independence certificate verifies, with exact numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    /// Vectors contributed per family index; equals the complement sizes.
    pub block_sizes: Vec<u64>,
    /// Every inner product across distinct blocks vanished.
    pub cross_orthogonal: bool,
    /// Exact rank of the stacked matrix.
    pub total_rank: u64,
    /// Rank equals the sum of complement sizes.
    pub rank_matches: bool,
    /// The implied sum bound, cross-checked against the actual sizes.
    pub sum_of_sizes: u64,
    pub sum_bound: u64,
    pub bound_confirmed: bool,
    /// First offending pair `(i, A, j, A')` if orthogonality ever failed.
    pub first_nonorthogonal: Option<(usize, String, usize, String)>,
}

/// Builds every decomposition polynomial of a cross-saturated sequence,
/// verifies cross-block orthogonality and the exact rank, and concludes the
/// sum bound.
pub fn independence_certificate(seq: &FamilySequence) -> Result<CertificateReport> {
    let ground = seq.ground();
    check_alg_cap(ground)?;
    if !crate::cross::is_cross_saturated(seq) {
        return Err(Error::NotCrossSaturated);
    }

    let mut blocks: Vec<Vec<(Subset, EvalVector)>> = Vec::with_capacity(seq.s());
    for i in 0..seq.s() {
        let dual = seq.family(i).family_dual();
        let mut block = Vec::with_capacity(dual.size());
        for a in dual.members() {
            let decomp = find_decomposition(seq, i, a)?;
            block.push((a, decomposition_polynomial(ground, &decomp)));
        }
        blocks.push(block);
    }

    let block_sizes: Vec<u64> = blocks.iter().map(|b| b.len() as u64).collect();
    for (i, block) in blocks.iter().enumerate() {
        let comp = seq.family(i).family_complement().size() as u64;
        debug_assert_eq!(block.len() as u64, comp);
    }

    let mut cross_orthogonal = true;
    let mut first_nonorthogonal = None;
    'outer: for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            for (a, va) in &blocks[i] {
                for (a2, vb) in &blocks[j] {
                    if inner_product(va, vb)? != 0 {
                        cross_orthogonal = false;
                        first_nonorthogonal =
                            Some((i, a.to_string(), j, a2.to_string()));
                        break 'outer;
                    }
                }
            }
        }
    }

    let rows: Vec<Vec<i64>> = blocks
        .iter()
        .flat_map(|block| {
            block
                .iter()
                .map(|(_, v)| v.values().iter().map(|&x| x as i64).collect())
        })
        .collect();
    let total_rank = integer_rank(&rows) as u64;
    let expected_rank: u64 = block_sizes.iter().sum();
    let rank_matches = total_rank == expected_rank;

    let sum_of_sizes = seq.sum_of_sizes();
    let sum_bound = (seq.s() as u64 - 1) * ground.num_subsets() as u64;
    // rank <= 2^n forces sum of complements <= 2^n, i.e. the sum bound.
    let bound_confirmed = cross_orthogonal && rank_matches && sum_of_sizes >= sum_bound;

    Ok(CertificateReport {
        block_sizes,
        cross_orthogonal,
        total_rank,
        rank_matches,
        sum_of_sizes,
        sum_bound,
        bound_confirmed,
        first_nonorthogonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SetFamily;

    fn fam(n: u32, masks: &[u32]) -> SetFamily {
        let g = GroundSet::new(n).unwrap();
        let subsets: Vec<Subset> = masks
            .iter()
            .map(|&m| Subset::from_mask(m, g).unwrap())
            .collect();
        SetFamily::from_subsets(g, &subsets).unwrap()
    }

    #[test]
    fn monomial_examples() {
        let g = GroundSet::new(2).unwrap();
        assert_eq!(subset_monomial(g, Subset::EMPTY).values(), &[1, 1, 1, 1]);
        assert_eq!(
            subset_monomial(g, g.full_subset()).values(),
            &[0, 0, 0, 1]
        );
        let g1 = GroundSet::new(1).unwrap();
        let s = Subset::from_mask(1, g1).unwrap();
        assert_eq!(subset_monomial(g1, s).values(), &[0, 1]);
    }

    #[test]
    fn inner_product_examples() {
        let g1 = GroundSet::new(1).unwrap();
        let qa = EvalVector::new(g1, vec![-1, 0]);
        let qb = EvalVector::new(g1, vec![0, 1]);
        assert_eq!(inner_product(&qa, &qb).unwrap(), 0);
        let g2 = GroundSet::new(2).unwrap();
        let ones = subset_monomial(g2, Subset::EMPTY);
        assert_eq!(inner_product(&ones, &ones).unwrap(), 4);
        let zero = EvalVector::new(g2, vec![0; 4]);
        assert_eq!(inner_product(&ones, &zero).unwrap(), 0);
        assert!(inner_product(&qa, &ones).is_err());
    }

    #[test]
    fn basis_rank_small() {
        for (n, dim) in [(1u32, 2usize), (2, 4), (3, 8)] {
            let g = GroundSet::new(n).unwrap();
            assert!(monomial_basis_rank_selftest(g).unwrap(), "n={n} dim={dim}");
        }
        assert!(monomial_basis_rank_selftest(GroundSet::new(N_MAX_ALG + 1).unwrap()).is_err());
    }

    #[test]
    fn integer_rank_basics() {
        assert_eq!(integer_rank(&[]), 0);
        assert_eq!(integer_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 5]]), 2);
        // Agreement between the i128 path and the big-integer path.
        let rows = vec![
            vec![3, -1, 4, 1],
            vec![-5, 9, -2, 6],
            vec![5, 3, 5, 8],
            vec![-2, 8, 2, 7],
        ];
        assert_eq!(bareiss_rank_i128(&rows).unwrap(), bareiss_rank_bigint(&rows));
    }

    #[test]
    fn decomposition_examples() {
        let g = GroundSet::new(1).unwrap();
        let one = Subset::from_mask(1, g).unwrap();
        let seq = FamilySequence::diagonal(&fam(1, &[0b1]), 2).unwrap();
        let d = find_decomposition(&seq, 0, one).unwrap();
        assert!(d.parts_before.is_empty());
        assert_eq!(d.parts_after, vec![(1, one)]);
        let d = find_decomposition(&seq, 1, one).unwrap();
        assert_eq!(d.parts_before, vec![(0, one)]);
        assert!(d.parts_after.is_empty());

        // (∅, P, P): ∅ decomposes into trimmed empty parts.
        let g2 = GroundSet::new(2).unwrap();
        let seq = FamilySequence::new(vec![
            SetFamily::new_empty(g2),
            SetFamily::full(g2),
            SetFamily::full(g2),
        ])
        .unwrap();
        let d = find_decomposition(&seq, 0, Subset::EMPTY).unwrap();
        assert!(d.parts_before.is_empty() && d.parts_after.is_empty());

        // Impossible target reports the precondition violation.
        let err = find_decomposition(&seq, 1, Subset::EMPTY);
        assert!(matches!(err, Err(Error::NoDecomposition { .. })));
    }

    #[test]
    fn polynomial_examples() {
        let g = GroundSet::new(1).unwrap();
        let one = Subset::from_mask(1, g).unwrap();
        let after = Decomposition {
            index: 0,
            target: one,
            parts_before: vec![],
            parts_after: vec![(1, one)],
        };
        assert_eq!(decomposition_polynomial(g, &after).values(), &[-1, 0]);
        let before = Decomposition {
            index: 1,
            target: one,
            parts_before: vec![(0, one)],
            parts_after: vec![],
        };
        assert_eq!(decomposition_polynomial(g, &before).values(), &[0, 1]);
        let trivial = Decomposition {
            index: 0,
            target: Subset::EMPTY,
            parts_before: vec![],
            parts_after: vec![],
        };
        assert_eq!(decomposition_polynomial(g, &trivial).values(), &[1, 1]);
        // The nonzero anchor sits at the before-union with sign (-1)^|C|.
        let g3 = GroundSet::new(3).unwrap();
        let b = Subset::from_mask(0b001, g3).unwrap();
        let c = Subset::from_mask(0b110, g3).unwrap();
        let d = Decomposition {
            index: 1,
            target: b.union(c),
            parts_before: vec![(0, b)],
            parts_after: vec![(2, c)],
        };
        let v = decomposition_polynomial(g3, &d);
        assert_eq!(v.value_at(b), 1); // (-1)^2
        assert!(v.values().iter().all(|x| (-1..=1).contains(x)));
    }

    #[test]
    fn certificate_tiny_pair() {
        let seq = FamilySequence::diagonal(&fam(1, &[0b1]), 2).unwrap();
        let report = independence_certificate(&seq).unwrap();
        assert_eq!(report.block_sizes, vec![1, 1]);
        assert!(report.cross_orthogonal);
        assert_eq!(report.total_rank, 2);
        assert!(report.rank_matches);
        assert_eq!((report.sum_of_sizes, report.sum_bound), (2, 2));
        assert!(report.bound_confirmed);
    }

    #[test]
    fn certificate_empty_full_full() {
        for n in 1..=4u32 {
            let g = GroundSet::new(n).unwrap();
            let seq = FamilySequence::new(vec![
                SetFamily::new_empty(g),
                SetFamily::full(g),
                SetFamily::full(g),
            ])
            .unwrap();
            let report = independence_certificate(&seq).unwrap();
            assert_eq!(report.block_sizes, vec![g.num_subsets() as u64, 0, 0]);
            assert_eq!(report.total_rank, g.num_subsets() as u64);
            assert!(report.bound_confirmed);
        }
    }

    #[test]
    fn certificate_rejects_unsaturated() {
        let seq = FamilySequence::diagonal(&fam(2, &[0b11]), 2).unwrap();
        assert!(matches!(
            independence_certificate(&seq),
            Err(Error::NotCrossSaturated)
        ));
    }

    #[test]
    fn monomial_coefficients_have_unit_leading_term() {
        // Expanded in the monomial basis, a decomposition polynomial has
        // coefficient 1 on its target and support only below it.
        let g = GroundSet::new(3).unwrap();
        let seq = FamilySequence::diagonal(
            &crate::saturation::saturate(
                &SetFamily::new_empty(g),
                3,
                crate::family::CandidateOrder::Default,
            )
            .unwrap(),
            3,
        )
        .unwrap();
        assert!(crate::cross::is_cross_saturated(&seq));
        for i in 0..seq.s() {
            let dual = seq.family(i).family_dual();
            for a in dual.members() {
                let d = find_decomposition(&seq, i, a).unwrap();
                let v = decomposition_polynomial(g, &d);
                let coeffs = v.monomial_coefficients();
                assert_eq!(coeffs[a.mask() as usize], 1, "i={i} a={a}");
                for m in g.subsets() {
                    if !m.is_subset_of(a) {
                        assert_eq!(coeffs[m.mask() as usize], 0, "i={i} a={a} m={m}");
                    }
                }
            }
        }
    }
}
