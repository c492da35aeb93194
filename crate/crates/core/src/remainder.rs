//! Remainders and costs.
//!
//! Fix a weight assignment `w'` and let `B` be the max-weight basis (or, for
//! intersections, the max-weight feasible set). For an accepted set `A`, the
//! remainder `R(A)` is the part of `B` a restricted optimum can still add on
//! top of `A`, and the cost `C(A) = B − R(A)` is what holding `A` displaced.
//! Expected remainder weights are the quantities inside every threshold.

use crate::matroid::{greedy_order_of, Matroid};
use crate::scalar::{set_weight, Scalar};
use crate::set::ElemSet;
use crate::{Error, Result};

/// Node budget for the exhaustive feasible-set search in intersections.
const INTERSECTION_SEARCH_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderResult {
    /// Elements of the base basis still addable on top of `A`.
    pub remainder: ElemSet,
    /// `base_basis − remainder`.
    pub cost: ElemSet,
    /// The max-weight basis the partition is taken from.
    pub base_basis: ElemSet,
}

/// Per-matroid remainder/cost partitions for an intersection, plus their
/// combined forms.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionRemainder {
    pub per_matroid: Vec<(ElemSet, ElemSet)>,
    /// Intersection of the per-matroid remainders.
    pub remainder: ElemSet,
    /// Union of the per-matroid costs.
    pub cost: ElemSet,
    pub base_set: ElemSet,
}

/// Remainder/cost partition for a single matroid: `R` is the greedy
/// max-weight basis of the contraction by `A` (computed directly against
/// the base oracle), `C = B − R`.
pub fn remainder<W: Scalar>(m: &Matroid, w_prime: &[W], a: ElemSet) -> Result<RemainderResult> {
    if !m.is_independent(a)? {
        return Err(Error::input(format!("accepted set {a} is not independent")));
    }
    let order = m.greedy_order(w_prime)?;
    Ok(remainder_in_order(m, &order, a))
}

/// As [`remainder`] but over a precomputed greedy order; used by the hot
/// estimator loops so the sort happens once per weight draw.
pub(crate) fn remainder_in_order(m: &Matroid, order: &[usize], a: ElemSet) -> RemainderResult {
    let base_basis = m.greedy_basis_in_order(order, ElemSet::empty());
    let remainder = m.greedy_basis_in_order(order, a);
    debug_assert!(remainder.is_subset(base_basis));
    RemainderResult { remainder, cost: base_basis.minus(remainder), base_basis }
}

/// Max-weight set feasible in every matroid. A single matroid uses the
/// greedy basis. Intersections use an exhaustive search over feasible sets
/// (downward-closure pruned, positive-weight elements only) with ties
/// broken lexicographically on the sorted identifier list.
pub fn max_weight_feasible_intersection<W: Scalar>(
    matroids: &[Matroid],
    weights: &[W],
) -> Result<ElemSet> {
    match matroids {
        [] => Err(Error::input("at least one matroid required")),
        [m] => m.max_weight_basis(weights),
        _ => {
            let order = matroids[0].greedy_order(weights)?;
            max_weight_feasible_in_order(matroids, &order, weights)
        }
    }
}

pub(crate) fn max_weight_feasible_in_order<W: Scalar>(
    matroids: &[Matroid],
    order: &[usize],
    weights: &[W],
) -> Result<ElemSet> {
    // Zero-weight elements never raise the weight and only make the sorted
    // identifier list lexicographically larger, so the canonical optimum
    // contains none of them.
    let positives: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&id| weights[id] > W::zero())
        .collect();
    let feasible = |s: ElemSet| matroids.iter().all(|m| m.indep_unchecked(s));
    let mut best_set = ElemSet::empty();
    let mut best_weight = W::zero();
    let mut nodes = 0usize;

    // suffix_sums[i] = total weight of positives[i..]
    let mut suffix_sums: Vec<W> = vec![W::zero(); positives.len() + 1];
    for i in (0..positives.len()).rev() {
        suffix_sums[i] = suffix_sums[i + 1].clone() + weights[positives[i]].clone();
    }

    fn dfs<W: Scalar>(
        positives: &[usize],
        suffix_sums: &[W],
        weights: &[W],
        feasible: &impl Fn(ElemSet) -> bool,
        idx: usize,
        cur: ElemSet,
        cur_weight: W,
        best_set: &mut ElemSet,
        best_weight: &mut W,
        nodes: &mut usize,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > INTERSECTION_SEARCH_BUDGET {
            return Err(Error::refused(
                "intersection optimum search exceeded its node budget",
            ));
        }
        if cur_weight > *best_weight
            || (cur_weight == *best_weight && cur.cmp_lex(*best_set).is_lt())
        {
            *best_weight = cur_weight.clone();
            *best_set = cur;
        }
        if idx == positives.len() {
            return Ok(());
        }
        // Even taking every remaining element cannot beat the incumbent.
        if cur_weight.clone() + suffix_sums[idx].clone() < *best_weight {
            return Ok(());
        }
        let id = positives[idx];
        let with = cur.with(id);
        if feasible(with) {
            dfs(
                positives,
                suffix_sums,
                weights,
                feasible,
                idx + 1,
                with,
                cur_weight.clone() + weights[id].clone(),
                best_set,
                best_weight,
                nodes,
            )?;
        }
        dfs(
            positives, suffix_sums, weights, feasible, idx + 1, cur, cur_weight, best_set,
            best_weight, nodes,
        )
    }

    dfs(
        &positives,
        &suffix_sums,
        weights,
        &feasible,
        0,
        ElemSet::empty(),
        W::zero(),
        &mut best_set,
        &mut best_weight,
        &mut nodes,
    )?;
    Ok(best_set)
}

/// Per-matroid remainder for an intersection: iterate the base set `B` in
/// descending weight (identifier tie-break) and add each element to `R_j`
/// unless doing so creates a dependency in matroid `j` given `A`.
pub fn remainder_j<W: Scalar>(
    matroids: &[Matroid],
    w_prime: &[W],
    a: ElemSet,
    j: usize,
) -> Result<(ElemSet, ElemSet)> {
    let feasible = matroids
        .iter()
        .map(|m| m.is_independent(a))
        .collect::<Result<Vec<_>>>()?;
    if feasible.iter().any(|ok| !ok) {
        return Err(Error::input(format!("accepted set {a} is not feasible")));
    }
    let base = max_weight_feasible_intersection(matroids, w_prime)?;
    let order = greedy_order_of(base, w_prime);
    Ok(remainder_j_in_order(&matroids[j], &order, a))
}

/// `(R_j, C_j)` given the base set already sorted into greedy order.
pub(crate) fn remainder_j_in_order(
    matroid_j: &Matroid,
    base_order: &[usize],
    a: ElemSet,
) -> (ElemSet, ElemSet) {
    let mut r = ElemSet::empty();
    let mut base = ElemSet::empty();
    for &id in base_order {
        base.insert(id);
        if matroid_j.indep_unchecked(a.union(r).with(id)) {
            r.insert(id);
        }
    }
    (r, base.minus(r))
}

/// The full intersection partition: `(R_j, C_j)` per matroid plus
/// `R = ∩ R_j` and `C = ∪ C_j`.
pub fn intersection_remainder<W: Scalar>(
    matroids: &[Matroid],
    w_prime: &[W],
    a: ElemSet,
) -> Result<IntersectionRemainder> {
    for m in matroids {
        if !m.is_independent(a)? {
            return Err(Error::input(format!("accepted set {a} is not feasible")));
        }
    }
    let base = max_weight_feasible_intersection(matroids, w_prime)?;
    let order = greedy_order_of(base, w_prime);
    let per_matroid: Vec<(ElemSet, ElemSet)> = matroids
        .iter()
        .map(|m| remainder_j_in_order(m, &order, a))
        .collect();
    let mut remainder = base;
    let mut cost = ElemSet::empty();
    for (r, c) in &per_matroid {
        remainder = remainder.intersect(*r);
        cost = cost.union(*c);
    }
    Ok(IntersectionRemainder { per_matroid, remainder, cost, base_set: base })
}

/// Verification oracles: exhaustive searches that re-derive remainders from
/// their defining maximization. Used by tests and the property suites, never
/// by production thresholds.
pub mod oracle {
    use super::*;

    /// Among all partitions of `basis` into `(C, R)` with `A ∪ R` a basis,
    /// returns the maximum attainable `w'(R)`.
    pub fn best_remainder_weight<W: Scalar>(
        m: &Matroid,
        w_prime: &[W],
        a: ElemSet,
        basis: ElemSet,
    ) -> Option<W> {
        let target = basis.len().checked_sub(a.len())?;
        let mut best: Option<W> = None;
        for r in basis.subsets() {
            if r.len() != target {
                continue;
            }
            let union = a.union(r);
            if union.len() == a.len() + r.len() && m.indep_unchecked(union) {
                let w = set_weight(w_prime, r);
                if best.as_ref().map_or(true, |b| w > *b) {
                    best = Some(w);
                }
            }
        }
        best
    }

    /// Among subsets of `base` whose union with `A` stays independent in
    /// matroid `j`, the maximum `w'`-weight. The greedy `R_j` must attain it.
    pub fn best_remainder_j_weight<W: Scalar>(
        matroid_j: &Matroid,
        w_prime: &[W],
        a: ElemSet,
        base: ElemSet,
    ) -> W {
        let mut best = W::zero();
        for r in base.subsets() {
            if matroid_j.indep_unchecked(a.union(r)) {
                let w = set_weight(w_prime, r);
                if w > best {
                    best = w;
                }
            }
        }
        best
    }

    /// Exhaustive max-weight feasible set (all subsets, no pruning), for
    /// cross-checking the DFS search on small instances.
    pub fn max_weight_feasible_exhaustive<W: Scalar>(
        matroids: &[Matroid],
        weights: &[W],
    ) -> (ElemSet, W) {
        let all = matroids[0].active();
        let mut best_set = ElemSet::empty();
        let mut best_weight = W::zero();
        for s in all.subsets() {
            if matroids.iter().all(|m| m.indep_unchecked(s)) {
                let w = set_weight(weights, s);
                if w > best_weight || (w == best_weight && s.cmp_lex(best_set).is_lt()) {
                    best_weight = w;
                    best_set = s;
                }
            }
        }
        (best_set, best_weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::triangle_matroid;
    use crate::scalar::{rat, Rat};

    fn set(ids: &[usize]) -> ElemSet {
        ids.iter().copied().collect()
    }

    fn w(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&v| rat(v, 1)).collect()
    }

    #[test]
    fn empty_accepted_set_remainder_is_whole_basis() {
        let m = Matroid::uniform(2, 3).unwrap();
        let res = remainder(&m, &w(&[3, 2, 1]), ElemSet::empty()).unwrap();
        assert_eq!(res.base_basis, set(&[0, 1]));
        assert_eq!(res.remainder, set(&[0, 1]));
        assert!(res.cost.is_empty());
    }

    #[test]
    fn accepted_element_displaces_matching_cost() {
        let m = Matroid::uniform(2, 3).unwrap();
        let res = remainder(&m, &w(&[3, 2, 1]), set(&[0])).unwrap();
        assert_eq!(res.remainder, set(&[1]));
        assert_eq!(res.cost, set(&[0]));
    }

    #[test]
    fn full_basis_accepted_leaves_empty_remainder() {
        let m = Matroid::uniform(2, 3).unwrap();
        let res = remainder(&m, &w(&[3, 2, 1]), set(&[0, 1])).unwrap();
        assert!(res.remainder.is_empty());
        assert_eq!(res.cost, set(&[0, 1]));
    }

    #[test]
    fn dependent_accepted_set_is_an_error() {
        let m = Matroid::uniform(1, 3).unwrap();
        assert!(remainder(&m, &w(&[1, 1, 1]), set(&[0, 1])).is_err());
    }

    #[test]
    fn remainder_weight_matches_exhaustive_partition_oracle() {
        let k3 = triangle_matroid();
        let weights = w(&[5, 3, 2]);
        for a in k3.ground().all().subsets() {
            if !k3.indep_unchecked(a) {
                continue;
            }
            let res = remainder(&k3, &weights, a).unwrap();
            let got = set_weight(&weights, res.remainder);
            let best =
                oracle::best_remainder_weight(&k3, &weights, a, res.base_basis).unwrap();
            assert_eq!(got, best, "a={a}");
            // conservation: the partition recomposes the basis weight
            assert_eq!(
                set_weight(&weights, res.remainder) + set_weight(&weights, res.cost),
                set_weight(&weights, res.base_basis)
            );
            assert!(k3.indep_unchecked(a.union(res.remainder)));
        }
    }

    #[test]
    fn single_matroid_intersection_degenerates_to_basis() {
        let m = Matroid::uniform(2, 4).unwrap();
        let weights = w(&[4, 1, 3, 2]);
        assert_eq!(
            max_weight_feasible_intersection(std::slice::from_ref(&m), &weights).unwrap(),
            m.max_weight_basis(&weights).unwrap()
        );
    }

    #[test]
    fn intersection_search_matches_exhaustive_oracle() {
        let m1 = Matroid::partition(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        let m2 = Matroid::partition(&[vec![0, 2], vec![1, 3]], &[1, 1]).unwrap();
        let ms = vec![m1, m2];
        let cases = [[3i64, 1, 1, 2], [1, 1, 1, 1], [0, 5, 5, 0], [2, 2, 2, 2]];
        for vals in cases {
            let weights = w(&vals);
            let got = max_weight_feasible_intersection(&ms, &weights).unwrap();
            let (oracle_set, oracle_weight) =
                oracle::max_weight_feasible_exhaustive(&ms, &weights);
            assert_eq!(set_weight(&weights, got), oracle_weight);
            assert_eq!(got, oracle_set, "weights {vals:?}");
        }
    }

    #[test]
    fn all_zero_weights_yield_empty_intersection_optimum() {
        let m1 = Matroid::uniform(1, 3).unwrap();
        let m2 = Matroid::uniform(2, 3).unwrap();
        let got = max_weight_feasible_intersection(&[m1, m2], &w(&[0, 0, 0])).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn remainder_j_with_empty_accepted_set_is_whole_base() {
        let m1 = Matroid::partition(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        let m2 = Matroid::partition(&[vec![0, 2], vec![1, 3]], &[1, 1]).unwrap();
        let ms = vec![m1, m2];
        let weights = w(&[3, 1, 1, 2]);
        let ir = intersection_remainder(&ms, &weights, ElemSet::empty()).unwrap();
        for (r, c) in &ir.per_matroid {
            assert_eq!(*r, ir.base_set);
            assert!(c.is_empty());
        }
        assert_eq!(ir.remainder, ir.base_set);
    }

    #[test]
    fn remainder_j_single_matroid_matches_plain_remainder() {
        let m = Matroid::uniform(2, 3).unwrap();
        let weights = w(&[3, 2, 1]);
        for a in m.ground().all().subsets() {
            if !m.indep_unchecked(a) {
                continue;
            }
            let (r_j, c_j) = remainder_j(std::slice::from_ref(&m), &weights, a, 0).unwrap();
            let plain = remainder(&m, &weights, a).unwrap();
            assert_eq!(r_j, plain.remainder);
            assert_eq!(c_j, plain.cost);
        }
    }

    #[test]
    fn remainder_j_is_greedy_optimal_within_base() {
        let m1 = Matroid::partition(&[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        let m2 = Matroid::partition(&[vec![0, 2], vec![1, 3]], &[1, 1]).unwrap();
        let ms = [m1, m2];
        let weights = w(&[3, 2, 2, 1]);
        for a in ms[0].ground().all().subsets() {
            if !ms.iter().all(|m| m.indep_unchecked(a)) {
                continue;
            }
            let ir = intersection_remainder(&ms, &weights, a).unwrap();
            for (j, (r, c)) in ir.per_matroid.iter().enumerate() {
                assert!(ms[j].indep_unchecked(a.union(*r)));
                assert_eq!(r.union(*c), ir.base_set);
                assert!(r.intersect(*c).is_empty());
                let best =
                    oracle::best_remainder_j_weight(&ms[j], &weights, a, ir.base_set);
                assert_eq!(set_weight(&weights, *r), best);
                // the base is spanned: every base element is in the closure
                // of A ∪ R_j within matroid j
                let span = ms[j].closure(a.union(*r)).unwrap();
                assert!(ir.base_set.is_subset(span));
            }
        }
    }
}
