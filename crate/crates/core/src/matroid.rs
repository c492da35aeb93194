//! Finite matroids with independence, rank, and closure oracles.
//!
//! Supported families: uniform, partition, graphic (multigraphs, so loops
//! and parallel edges are allowed), and explicit set systems for small test
//! fixtures. Contraction and deletion are lazy views over a base matroid.
//! All values are immutable after construction and safe to query
//! concurrently.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::scalar::Scalar;
use crate::set::{ElemSet, GroundSet};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum MatroidKind {
    /// Sets of size at most `k` are independent.
    Uniform { k: usize },
    /// At most `capacities[b]` elements from block `b`.
    Partition { block_of: Vec<usize>, capacities: Vec<usize> },
    /// Elements are edges of a multigraph; forests are independent. Loops
    /// are never independent.
    Graphic { endpoints: Vec<(usize, usize)>, vertices: usize },
    /// Explicit list of independent sets (small fixtures only).
    Explicit { independent: BTreeSet<ElemSet> },
    /// Contraction view: `t` independent iff `t ∪ anchor` independent in
    /// the base, where `anchor` is a fixed maximal independent subset of
    /// the contracted set (greedy in identifier order).
    Contraction { base: Arc<Matroid>, removed: ElemSet, anchor: ElemSet },
    /// Deletion view: independence inherited from the base.
    Deletion { base: Arc<Matroid>, removed: ElemSet },
}

#[derive(Debug, Clone)]
pub struct Matroid {
    ground: Arc<GroundSet>,
    /// Elements the matroid is defined over; a strict subset of the ground
    /// set for contraction/deletion views.
    active: ElemSet,
    kind: MatroidKind,
}

impl Matroid {
    pub fn uniform(k: usize, n: usize) -> Result<Matroid> {
        let ground = GroundSet::new(n)?;
        Ok(Matroid { active: ground.all(), ground, kind: MatroidKind::Uniform { k } })
    }

    /// `blocks` assigns every element to a block; every element must be
    /// covered exactly once.
    pub fn partition(blocks: &[Vec<usize>], capacities: &[usize]) -> Result<Matroid> {
        if blocks.len() != capacities.len() {
            return Err(Error::input("one capacity per block required"));
        }
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let ground = GroundSet::new(n)?;
        let mut block_of = vec![usize::MAX; n];
        for (b, members) in blocks.iter().enumerate() {
            for &id in members {
                ground.check_element(id)?;
                if block_of[id] != usize::MAX {
                    return Err(Error::input(format!("element {id} appears in two blocks")));
                }
                block_of[id] = b;
            }
        }
        Ok(Matroid {
            active: ground.all(),
            ground,
            kind: MatroidKind::Partition { block_of, capacities: capacities.to_vec() },
        })
    }

    /// Builds a partition matroid directly from a block-index map.
    pub fn partition_by_index(block_of: Vec<usize>, capacities: Vec<usize>) -> Result<Matroid> {
        let ground = GroundSet::new(block_of.len())?;
        if let Some(&b) = block_of.iter().find(|&&b| b >= capacities.len()) {
            return Err(Error::input(format!("block index {b} out of range")));
        }
        Ok(Matroid {
            active: ground.all(),
            ground,
            kind: MatroidKind::Partition { block_of, capacities },
        })
    }

    /// Edges of a multigraph on `vertices` vertices; element `i` is edge
    /// `endpoints[i]`.
    pub fn graphic(vertices: usize, endpoints: Vec<(usize, usize)>) -> Result<Matroid> {
        let ground = GroundSet::new(endpoints.len())?;
        for &(u, v) in &endpoints {
            if u >= vertices || v >= vertices {
                return Err(Error::input(format!("edge ({u},{v}) has endpoint out of range")));
            }
        }
        Ok(Matroid {
            active: ground.all(),
            ground,
            kind: MatroidKind::Graphic { endpoints, vertices },
        })
    }

    /// Explicit family over `n` elements. The family is stored as given;
    /// use [`Matroid::axiom_check`] to validate fixtures.
    pub fn explicit(n: usize, independent: impl IntoIterator<Item = ElemSet>) -> Result<Matroid> {
        let ground = GroundSet::new(n)?;
        let all = ground.all();
        let mut family = BTreeSet::new();
        for s in independent {
            ground.check_subset(s)?;
            family.insert(s);
        }
        let _ = all;
        Ok(Matroid { active: ground.all(), ground, kind: MatroidKind::Explicit { independent: family } })
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    /// Elements the matroid is currently defined over (shrinks under
    /// contraction/deletion views).
    pub fn active(&self) -> ElemSet {
        self.active
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    fn check_active_subset(&self, s: ElemSet) -> Result<()> {
        self.ground.check_subset(s)?;
        if !s.is_subset(self.active) {
            return Err(Error::input(format!(
                "set {s} contains elements outside the matroid's active universe {}",
                self.active
            )));
        }
        Ok(())
    }

    pub fn is_independent(&self, s: ElemSet) -> Result<bool> {
        self.check_active_subset(s)?;
        Ok(self.indep_unchecked(s))
    }

    pub(crate) fn indep_unchecked(&self, s: ElemSet) -> bool {
        match &self.kind {
            MatroidKind::Uniform { k } => s.len() <= *k,
            MatroidKind::Partition { block_of, capacities } => {
                let mut counts = vec![0usize; capacities.len()];
                for id in s.iter() {
                    let b = block_of[id];
                    counts[b] += 1;
                    if counts[b] > capacities[b] {
                        return false;
                    }
                }
                true
            }
            MatroidKind::Graphic { endpoints, vertices } => {
                let mut uf = UnionFind::new(*vertices);
                for id in s.iter() {
                    let (u, v) = endpoints[id];
                    if !uf.union(u, v) {
                        return false;
                    }
                }
                true
            }
            MatroidKind::Explicit { independent } => independent.contains(&s),
            MatroidKind::Contraction { base, anchor, .. } => {
                base.indep_unchecked(s.union(*anchor))
            }
            MatroidKind::Deletion { base, .. } => base.indep_unchecked(s),
        }
    }

    /// Rank of `s`: greedy insertion in identifier order, which is exact
    /// for matroids.
    pub fn rank(&self, s: ElemSet) -> Result<usize> {
        self.check_active_subset(s)?;
        Ok(self.rank_unchecked(s))
    }

    pub(crate) fn rank_unchecked(&self, s: ElemSet) -> usize {
        let mut picked = ElemSet::empty();
        for id in s.iter() {
            if self.indep_unchecked(picked.with(id)) {
                picked.insert(id);
            }
        }
        picked.len()
    }

    pub fn full_rank(&self) -> usize {
        self.rank_unchecked(self.active)
    }

    /// The closure (span) of `s`: all active elements whose addition does
    /// not raise the rank.
    pub fn closure(&self, s: ElemSet) -> Result<ElemSet> {
        self.check_active_subset(s)?;
        let r = self.rank_unchecked(s);
        let mut out = ElemSet::empty();
        for id in self.active.iter() {
            if s.contains(id) || self.rank_unchecked(s.with(id)) == r {
                out.insert(id);
            }
        }
        Ok(out)
    }

    /// A maximal independent subset of `s`, greedy in identifier order.
    pub fn max_independent_subset(&self, s: ElemSet) -> Result<ElemSet> {
        self.check_active_subset(s)?;
        let mut picked = ElemSet::empty();
        for id in s.iter() {
            if self.indep_unchecked(picked.with(id)) {
                picked.insert(id);
            }
        }
        Ok(picked)
    }

    /// Contraction view with ground set `active − s`. The fixed anchor is
    /// the greedy (identifier-order) maximal independent subset of `s`.
    pub fn contract(&self, s: ElemSet) -> Result<Matroid> {
        self.check_active_subset(s)?;
        if s.is_empty() {
            return Ok(self.clone());
        }
        let anchor = self.max_independent_subset(s)?;
        Ok(Matroid {
            ground: Arc::clone(&self.ground),
            active: self.active.minus(s),
            kind: MatroidKind::Contraction { base: Arc::new(self.clone()), removed: s, anchor },
        })
    }

    /// Deletion view with ground set `active − s`.
    pub fn delete(&self, s: ElemSet) -> Result<Matroid> {
        self.check_active_subset(s)?;
        if s.is_empty() {
            return Ok(self.clone());
        }
        Ok(Matroid {
            ground: Arc::clone(&self.ground),
            active: self.active.minus(s),
            kind: MatroidKind::Deletion { base: Arc::new(self.clone()), removed: s },
        })
    }

    /// Sorted active elements: descending weight, ascending identifier on
    /// ties. This is the single ordering rule used by every greedy routine.
    pub fn greedy_order<W: Scalar>(&self, weights: &[W]) -> Result<Vec<usize>> {
        if weights.len() != self.ground.size() {
            return Err(Error::input(format!(
                "weight assignment has {} entries for a ground set of {}",
                weights.len(),
                self.ground.size()
            )));
        }
        for id in self.active.iter() {
            if weights[id].is_negative() {
                return Err(Error::input(format!(
                    "negative weight {:?} for element {id}; weights must be non-negative",
                    weights[id]
                )));
            }
        }
        Ok(greedy_order_of(self.active, weights))
    }

    /// Maximum-weight basis via the greedy algorithm, ties broken by
    /// ascending identifier.
    pub fn max_weight_basis<W: Scalar>(&self, weights: &[W]) -> Result<ElemSet> {
        let order = self.greedy_order(weights)?;
        Ok(self.greedy_basis_in_order(&order, ElemSet::empty()))
    }

    /// Greedy basis over the given element order, extending the (assumed
    /// independent) seed set `fixed` without including it in the result.
    pub(crate) fn greedy_basis_in_order(&self, order: &[usize], fixed: ElemSet) -> ElemSet {
        let mut picked = ElemSet::empty();
        for &id in order {
            if fixed.contains(id) {
                continue;
            }
            if self.indep_unchecked(fixed.union(picked).with(id)) {
                picked.insert(id);
            }
        }
        picked
    }

    /// A bijection `phi: v -> r` such that `(r − phi(v)) ∪ {v}` is
    /// independent for every `v`, found as a perfect matching in the
    /// bipartite exchange graph via augmenting paths.
    pub fn exchange_bijection(&self, v: ElemSet, r: ElemSet) -> Result<Vec<(usize, usize)>> {
        self.check_active_subset(v)?;
        self.check_active_subset(r)?;
        if !self.indep_unchecked(v) || !self.indep_unchecked(r) {
            return Err(Error::input("exchange bijection requires independent sets"));
        }
        if v.len() != r.len() {
            return Err(Error::input("exchange bijection requires sets of equal cardinality"));
        }
        let vs = v.to_vec();
        let rs = r.to_vec();
        // adjacency[i] lists indices j with (r − rs[j]) ∪ {vs[i]} independent
        let adjacency: Vec<Vec<usize>> = vs
            .iter()
            .map(|&ve| {
                rs.iter()
                    .enumerate()
                    .filter(|&(_, &re)| self.indep_unchecked(r.without(re).with(ve)))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let mut match_of_r: Vec<Option<usize>> = vec![None; rs.len()];
        for i in 0..vs.len() {
            let mut visited = vec![false; rs.len()];
            if !augment(i, &adjacency, &mut visited, &mut match_of_r) {
                return Err(Error::internal(format!(
                    "no exchange bijection between {v} and {r}; independence oracle is inconsistent"
                )));
            }
        }
        let mut pairs = vec![(0usize, 0usize); vs.len()];
        for (j, m) in match_of_r.iter().enumerate() {
            let i = m.expect("perfect matching");
            pairs[i] = (vs[i], rs[j]);
        }
        Ok(pairs)
    }

    /// Validates an explicit family: nonempty with the empty set included,
    /// downward closed, and satisfying the exchange axiom. Exhaustive, so
    /// restricted to at most 12 elements.
    pub fn axiom_check(&self) -> Result<bool> {
        let MatroidKind::Explicit { independent } = &self.kind else {
            return Err(Error::input("axiom check applies to explicit families only"));
        };
        if self.ground.size() > 12 {
            return Err(Error::refused(
                "axiom check is exhaustive and limited to 12 elements",
            ));
        }
        if !independent.contains(&ElemSet::empty()) {
            return Ok(false);
        }
        for &s in independent {
            for id in s.iter() {
                if !independent.contains(&s.without(id)) {
                    return Ok(false);
                }
            }
        }
        for &small in independent {
            for &big in independent {
                if small.len() < big.len()
                    && !big
                        .minus(small)
                        .iter()
                        .any(|x| independent.contains(&small.with(x)))
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Enumerates every independent subset of the active universe by DFS
    /// with downward-closure pruning. Refuses above `budget` sets.
    pub fn independent_sets(&self, budget: usize) -> Result<Vec<ElemSet>> {
        let mut out = vec![ElemSet::empty()];
        let elems = self.active.to_vec();
        let mut stack = vec![(ElemSet::empty(), 0usize)];
        while let Some((cur, start)) = stack.pop() {
            for (offset, &id) in elems[start..].iter().enumerate() {
                let cand = cur.with(id);
                if self.indep_unchecked(cand) {
                    out.push(cand);
                    if out.len() > budget {
                        return Err(Error::refused(format!(
                            "more than {budget} independent sets"
                        )));
                    }
                    stack.push((cand, start + offset + 1));
                }
            }
        }
        Ok(out)
    }
}

/// Descending weight, ascending identifier on ties.
pub(crate) fn greedy_order_of<W: Scalar>(active: ElemSet, weights: &[W]) -> Vec<usize> {
    let mut order = active.to_vec();
    order.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .expect("weights are comparable")
            .then(a.cmp(&b))
    });
    order
}

fn augment(
    i: usize,
    adjacency: &[Vec<usize>],
    visited: &mut [bool],
    match_of_r: &mut [Option<usize>],
) -> bool {
    for &j in &adjacency[i] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        if match_of_r[j].is_none() || augment(match_of_r[j].unwrap(), adjacency, visited, match_of_r)
        {
            match_of_r[j] = Some(i);
            return true;
        }
    }
    false
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `u` and `v` were already connected (a cycle).
    fn union(&mut self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        self.parent[ru] = rv;
        true
    }
}

/// The triangle graph: three vertices, edges 0=(0,1), 1=(1,2), 2=(0,2).
pub fn triangle_matroid() -> Matroid {
    Matroid::graphic(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
}
