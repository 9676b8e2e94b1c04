//! Pairings between two independent sets and the votes they induce.
//!
//! For an ordered pair `(I, J)` of independent sets of a matroid split into
//! agent summands, a pairing matches elements of `I - J` to elements of
//! `J - I`. The numbered conditions checked here are:
//!
//! 1. every pair `(u, v)` is a valid exchange: `I - u + v` is independent;
//! 2. every `v ∈ J - I` with `I + v` dependent is covered;
//! 3. every `u ∈ I - J` with `J + u` dependent is covered;
//! 4. both ends of every pair lie in the same summand;
//! 5. each summand holds exactly `min(|S_j ∩ (I-J)|, |S_j ∩ (J-I)|)` pairs.
//!
//! A pairing is *feasible* when all five hold and *weakly feasible* when (1)
//! and (2) hold. The vote of a pairing counts `+1` for each pair with
//! `u ≻ v`, `-1` for each pair with `u ≺ v`, and adds `|I| - |J|`.

use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::matching_engine::{
    max_weight_perfect_matching, min_cost_cover_matching, min_weight_perfect_matching,
    BipartiteWeightedGraph, DualCertificate,
};
use crate::matroids::{DirectSumStructure, Matroid, OrderedMatroid};

/// Pairs beyond this total of differing elements are not enumerated.
pub const BRUTE_FORCE_DIFF_LIMIT: usize = 12;

/// One side of an instance: an ordered matroid together with its agent summands.
#[derive(Clone, Debug)]
pub struct Side {
    om: OrderedMatroid,
    split: DirectSumStructure,
}

impl Side {
    /// The matroid is assumed to be the direct sum of its restrictions to the
    /// blocks of `split`; [`DirectSumStructure::is_consistent_with`] checks it.
    pub fn new(om: OrderedMatroid, split: DirectSumStructure) -> Result<Self> {
        if split.universe() != om.len() {
            return Err(Error::input("summand split over a different ground set"));
        }
        Ok(Side { om, split })
    }

    /// A side with a single summand.
    pub fn single(om: OrderedMatroid) -> Self {
        let split = DirectSumStructure::single(om.len());
        Side { om, split }
    }

    pub fn ordered(&self) -> &OrderedMatroid {
        &self.om
    }

    pub fn matroid(&self) -> &Matroid {
        self.om.matroid()
    }

    pub fn split(&self) -> &DirectSumStructure {
        &self.split
    }

    pub fn len(&self) -> usize {
        self.om.len()
    }

    pub fn is_empty(&self) -> bool {
        self.om.is_empty()
    }

    fn independent(&self, x: &ElemSet) -> bool {
        self.om.is_independent(x)
    }

    fn require_independent(&self, x: &ElemSet, what: &str) -> Result<()> {
        if x.universe() != self.len() {
            return Err(Error::input(format!("{what} is over a different ground set")));
        }
        if !self.independent(x) {
            return Err(Error::input(format!("{what} is not independent")));
        }
        Ok(())
    }

    /// `+1` if `u ≻ v`, else `-1`.
    fn compare(&self, u: usize, v: usize) -> i64 {
        if self.om.prefers(u, v) {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingMode {
    Feasible,
    WeaklyFeasible,
}

/// Disjoint pairs `(u, v)` with `u ∈ I - J` and `v ∈ J - I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        Pairing { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub holds: bool,
    /// Numbers (1..=5) of the conditions that fail.
    pub violated: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteReport {
    pub value: i64,
    pub witness: Pairing,
    pub mode: PairingMode,
}

fn validate_pairing(i: &ElemSet, j: &ElemSet, n: &Pairing) -> Result<()> {
    let mut seen_u = ElemSet::empty(i.universe());
    let mut seen_v = ElemSet::empty(i.universe());
    for &(u, v) in &n.pairs {
        if u >= i.universe() || v >= i.universe() {
            return Err(Error::input(format!("pair ({u},{v}) outside the ground set")));
        }
        if !(i.contains(u) && !j.contains(u)) || !(j.contains(v) && !i.contains(v)) {
            return Err(Error::input(format!("pair ({u},{v}) is not drawn from (I-J) x (J-I)")));
        }
        if !seen_u.insert(u) || !seen_v.insert(v) {
            return Err(Error::input(format!("pair ({u},{v}) reuses an endpoint")));
        }
    }
    Ok(())
}

/// Checks the pairing conditions for the ordered pair `(i, j)`.
pub fn is_feasible_pairing(
    side: &Side,
    i: &ElemSet,
    j: &ElemSet,
    n: &Pairing,
    mode: PairingMode,
) -> Result<FeasibilityReport> {
    side.require_independent(i, "I")?;
    side.require_independent(j, "J")?;
    validate_pairing(i, j, n)?;
    let violated = violated_conditions(side, i, j, n, mode);
    Ok(FeasibilityReport {
        holds: violated.is_empty(),
        violated,
    })
}

fn violated_conditions(side: &Side, i: &ElemSet, j: &ElemSet, n: &Pairing, mode: PairingMode) -> Vec<u8> {
    let mut bad = Vec::new();
    let a = i.difference(j);
    let b = j.difference(i);
    let mut covered = ElemSet::empty(i.universe());
    for &(u, v) in &n.pairs {
        covered.insert(u);
        covered.insert(v);
    }
    if n.pairs.iter().any(|&(u, v)| !side.independent(&i.exchange(u, v))) {
        bad.push(1);
    }
    if b.iter().any(|v| !covered.contains(v) && !side.independent(&i.with(v))) {
        bad.push(2);
    }
    if mode == PairingMode::WeaklyFeasible {
        return bad;
    }
    if a.iter().any(|u| !covered.contains(u) && !side.independent(&j.with(u))) {
        bad.push(3);
    }
    let split = side.split();
    if n.pairs.iter().any(|&(u, v)| split.block_of(u) != split.block_of(v)) {
        bad.push(4);
    }
    let mut induced = vec![0usize; split.len()];
    for &(u, v) in &n.pairs {
        if split.block_of(u) == split.block_of(v) {
            induced[split.block_of(u)] += 1;
        }
    }
    let block_ok = split.blocks().iter().enumerate().all(|(k, blk)| {
        let want = a.intersection(blk).len().min(b.intersection(blk).len());
        induced[k] == want
    });
    if !block_ok {
        bad.push(5);
    }
    bad
}

/// `|{u ≻ v}| - |{u ≺ v}| + |I| - |J|` over the pairs of `n`.
pub fn vote_of_pairing(om: &OrderedMatroid, i: &ElemSet, j: &ElemSet, n: &Pairing) -> i64 {
    let pairs: i64 = n
        .pairs
        .iter()
        .map(|&(u, v)| if om.prefers(u, v) { 1 } else { -1 })
        .sum();
    pairs + i.len() as i64 - j.len() as i64
}

/// Minimum vote over all feasible pairings for `(i, j)`.
///
/// Each summand is solved as a minimum cost perfect assignment between its
/// share of `I - J` and `J - I`. The shorter list is padded with stand-ins;
/// an element matched to a stand-in is left uncovered, which is allowed only
/// if condition (2) or (3) permits it.
pub fn vote(side: &Side, i: &ElemSet, j: &ElemSet) -> Result<VoteReport> {
    side.require_independent(i, "I")?;
    side.require_independent(j, "J")?;
    let a = i.difference(j);
    let b = j.difference(i);
    let mut pairs = Vec::new();
    let mut total = 0i64;
    for block in side.split().blocks() {
        let us: Vec<usize> = a.intersection(block).to_vec();
        let vs: Vec<usize> = b.intersection(block).to_vec();
        let k = us.len().max(vs.len());
        if k == 0 {
            continue;
        }
        let mut g = BipartiteWeightedGraph::new(k, k);
        for (li, &u) in us.iter().enumerate() {
            for (ri, &v) in vs.iter().enumerate() {
                if side.independent(&i.exchange(u, v)) {
                    g.add_edge(li, ri, side.compare(u, v))?;
                }
            }
        }
        if us.len() < vs.len() {
            for (ri, &v) in vs.iter().enumerate() {
                if side.independent(&i.with(v)) {
                    for li in us.len()..k {
                        g.add_edge(li, ri, 0)?;
                    }
                }
            }
        } else if us.len() > vs.len() {
            for (li, &u) in us.iter().enumerate() {
                if side.independent(&j.with(u)) {
                    for ri in vs.len()..k {
                        g.add_edge(li, ri, 0)?;
                    }
                }
            }
        }
        let m = min_weight_perfect_matching(&g).ok_or(Error::NoFeasiblePairing)?;
        total += m.weight;
        pairs.extend(
            m.pairs
                .into_iter()
                .filter(|&(l, r)| l < us.len() && r < vs.len())
                .map(|(l, r)| (us[l], vs[r])),
        );
    }
    Ok(VoteReport {
        value: total + i.len() as i64 - j.len() as i64,
        witness: Pairing::new(pairs),
        mode: PairingMode::Feasible,
    })
}

/// Minimum vote over all weakly feasible pairings for `(i, j)`: a minimum
/// cost matching over all valid exchanges that covers every `v ∈ J - I`
/// which cannot simply be added to `I`.
pub fn vote_weak(side: &Side, i: &ElemSet, j: &ElemSet) -> Result<VoteReport> {
    side.require_independent(i, "I")?;
    side.require_independent(j, "J")?;
    let us = i.difference(j).to_vec();
    let vs = j.difference(i).to_vec();
    let mut g = BipartiteWeightedGraph::new(us.len(), vs.len());
    for (li, &u) in us.iter().enumerate() {
        for (ri, &v) in vs.iter().enumerate() {
            if side.independent(&i.exchange(u, v)) {
                g.add_edge(li, ri, side.compare(u, v))?;
            }
        }
    }
    let mandatory: Vec<usize> = vs
        .iter()
        .enumerate()
        .filter(|&(_, &v)| !side.independent(&i.with(v)))
        .map(|(ri, _)| ri)
        .collect();
    let m = min_cost_cover_matching(&g, &[], &mandatory)?.ok_or(Error::NoFeasiblePairing)?;
    Ok(VoteReport {
        value: m.weight + i.len() as i64 - j.len() as i64,
        witness: Pairing::new(m.pairs.into_iter().map(|(l, r)| (us[l], vs[r])).collect()),
        mode: PairingMode::WeaklyFeasible,
    })
}

pub fn vote_in_mode(side: &Side, i: &ElemSet, j: &ElemSet, mode: PairingMode) -> Result<VoteReport> {
    match mode {
        PairingMode::Feasible => vote(side, i, j),
        PairingMode::WeaklyFeasible => vote_weak(side, i, j),
    }
}

/// Reference minimum obtained by enumerating every pairing.
pub fn vote_bruteforce(side: &Side, i: &ElemSet, j: &ElemSet, mode: PairingMode) -> Result<VoteReport> {
    side.require_independent(i, "I")?;
    side.require_independent(j, "J")?;
    let us = i.difference(j).to_vec();
    let vs = j.difference(i).to_vec();
    let size = us.len() + vs.len();
    if size > BRUTE_FORCE_DIFF_LIMIT {
        return Err(Error::Scale {
            what: "symmetric difference",
            size,
            limit: BRUTE_FORCE_DIFF_LIMIT,
        });
    }
    let mut best: Option<VoteReport> = None;
    for_each_pairing(&us, &vs, &mut |pairs| {
        let n = Pairing::new(pairs.to_vec());
        if violated_conditions(side, i, j, &n, mode).is_empty() {
            let value = vote_of_pairing(side.ordered(), i, j, &n);
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(VoteReport { value, witness: n, mode });
            }
        }
    });
    best.ok_or(Error::NoFeasiblePairing)
}

/// Calls `f` on every pairing between `us` and `vs`.
pub fn for_each_pairing(us: &[usize], vs: &[usize], f: &mut dyn FnMut(&[(usize, usize)])) {
    fn rec(
        us: &[usize],
        vs: &[usize],
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        f: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        let Some((&u, rest)) = us.split_first() else {
            f(cur);
            return;
        };
        rec(rest, vs, used, cur, f);
        for (k, &v) in vs.iter().enumerate() {
            if !used[k] {
                used[k] = true;
                cur.push((u, v));
                rec(rest, vs, used, cur, f);
                cur.pop();
                used[k] = false;
            }
        }
    }
    rec(us, vs, &mut vec![false; vs.len()], &mut Vec::new(), f);
}

/// Both feasible and weakly feasible votes in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteChain {
    pub weak_ij: i64,
    pub ij: i64,
    pub ji: i64,
    pub weak_ji: i64,
}

impl VoteChain {
    /// `vote•(I,J) <= vote(I,J) <= -vote(J,I) <= -vote•(J,I)`.
    pub fn holds(&self) -> bool {
        self.weak_ij <= self.ij && self.ij <= -self.ji && -self.ji <= -self.weak_ji
    }
}

pub fn vote_chain(side: &Side, i: &ElemSet, j: &ElemSet) -> Result<VoteChain> {
    Ok(VoteChain {
        weak_ij: vote_weak(side, i, j)?.value,
        ij: vote(side, i, j)?.value,
        ji: vote(side, j, i)?.value,
        weak_ji: vote_weak(side, j, i)?.value,
    })
}

/// `(I, J)` reduced to a pair of disjoint bases `I'`, `J'` of a minor `M'`.
///
/// Per summand `S_j`, with `I_j = I ∩ S_j` and `J_j = J ∩ S_j`: when
/// `|I_j| <= |J_j|` an augmentation `A_j ⊆ J_j - I_j` with `I_j ∪ A_j`
/// independent and `|A_j| = |J_j| - |I_j|` is picked greedily in preference
/// order, and `M'_j` is `M_j` restricted to `I_j ∪ J_j`, contracted by
/// `(I_j ∩ J_j) ∪ A_j` and truncated to `|I'_j|`. The other case swaps the
/// roles of `I` and `J`.
#[derive(Clone, Debug)]
pub struct ReducedPair {
    pub matroid: Matroid,
    pub split: DirectSumStructure,
    pub i_prime: ElemSet,
    pub j_prime: ElemSet,
    /// `A_j` per summand, over the original ground set.
    pub augmentations: Vec<ElemSet>,
    /// Reduced element index to original element index.
    pub back_map: Vec<usize>,
    /// Preference rank (0 = best) of each reduced element, inherited from the original order.
    pub position: Vec<usize>,
}

impl ReducedPair {
    pub fn len(&self) -> usize {
        self.back_map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.back_map.is_empty()
    }

    fn prefers(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }
}

pub fn reduce_to_disjoint_bases(side: &Side, i: &ElemSet, j: &ElemSet) -> Result<ReducedPair> {
    side.require_independent(i, "I")?;
    side.require_independent(j, "J")?;
    let m = side.matroid();
    let n = m.len();
    let mut parts = Vec::new();
    let mut augmentations = Vec::new();
    for block in side.split().blocks() {
        let ib = i.intersection(block);
        let jb = j.intersection(block);
        let (small, large) = if ib.len() <= jb.len() { (&ib, &jb) } else { (&jb, &ib) };
        let need = large.len() - small.len();
        let mut aug = ElemSet::empty(n);
        for &e in side.ordered().order() {
            if aug.len() == need {
                break;
            }
            if large.contains(e) && !small.contains(e) {
                let grown = small.union(&aug).with(e);
                if m.is_independent(&grown) {
                    aug.insert(e);
                }
            }
        }
        if aug.len() != need {
            return Err(Error::invariant("could not augment the smaller set inside its summand"));
        }
        let (ip, jp) = if ib.len() <= jb.len() {
            (ib.difference(&jb), jb.difference(&ib.union(&aug)))
        } else {
            (ib.difference(&jb.union(&aug)), jb.difference(&ib))
        };
        debug_assert_eq!(ip.len(), jp.len());
        let contract = ib.intersection(&jb).union(&aug);
        parts.push(m.derive_minor(&ib.union(&jb), &contract, Some(ip.len()))?);
        augmentations.push(aug);
    }
    let (matroid, split) = Matroid::direct_sum(parts)?;
    let back_map: Vec<usize> = matroid
        .ground()
        .names()
        .iter()
        .map(|name| m.ground().index_of(name))
        .collect::<Result<_>>()?;
    let position = back_map.iter().map(|&e| side.ordered().position(e)).collect();
    let mut i_prime = ElemSet::empty(back_map.len());
    let mut j_prime = ElemSet::empty(back_map.len());
    for (k, &e) in back_map.iter().enumerate() {
        if i.contains(e) {
            i_prime.insert(k);
        } else {
            j_prime.insert(k);
        }
    }
    if !matroid.is_base(&i_prime) || !matroid.is_base(&j_prime) {
        return Err(Error::invariant("reduced sets are not bases of the reduced matroid"));
    }
    Ok(ReducedPair {
        matroid,
        split,
        i_prime,
        j_prime,
        augmentations,
        back_map,
        position,
    })
}

/// The two exchange graphs on `I' x J'` of a reduced pair, with weight 1 on
/// edges `uv` where `u ≺ v` and 0 otherwise.
#[derive(Clone, Debug)]
pub struct ExchangeGraphs {
    /// Reduced indices of the left (`I'`) and right (`J'`) vertices.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `uv` with `I' - u + v` independent.
    pub e_i: BipartiteWeightedGraph,
    /// `uv` with `J' + u - v` independent.
    pub e_j: BipartiteWeightedGraph,
}

impl ExchangeGraphs {
    /// Maps a matching on graph indices back to a pairing on original elements.
    pub fn to_pairing(&self, rp: &ReducedPair, pairs: &[(usize, usize)]) -> Pairing {
        Pairing::new(
            pairs
                .iter()
                .map(|&(l, r)| (rp.back_map[self.left[l]], rp.back_map[self.right[r]]))
                .collect(),
        )
    }
}

pub fn exchange_graphs(rp: &ReducedPair) -> Result<ExchangeGraphs> {
    let left = rp.i_prime.to_vec();
    let right = rp.j_prime.to_vec();
    let mut e_i = BipartiteWeightedGraph::new(left.len(), right.len());
    let mut e_j = BipartiteWeightedGraph::new(left.len(), right.len());
    for (l, &u) in left.iter().enumerate() {
        for (r, &v) in right.iter().enumerate() {
            let w = i64::from(rp.prefers(v, u));
            if rp.matroid.is_independent(&rp.i_prime.exchange(u, v)) {
                e_i.add_edge(l, r, w)?;
            }
            if rp.matroid.is_independent(&rp.j_prime.exchange(v, u)) {
                e_j.add_edge(l, r, w)?;
            }
        }
    }
    if max_weight_perfect_matching(&e_i).is_none() || max_weight_perfect_matching(&e_j).is_none() {
        return Err(Error::invariant("an exchange graph between two bases has no perfect matching"));
    }
    Ok(ExchangeGraphs { left, right, e_i, e_j })
}

/// Perfect matching inside the dual-filtered `E_J`.
#[derive(Clone, Debug)]
pub struct DualFilteredMatching {
    /// Maximum weight of a perfect matching in `E_I`.
    pub k: i64,
    pub certificate: DualCertificate,
    /// Edges `uv ∈ E_J` with `π(u) + π(v) >= w(uv)`.
    pub filtered: BipartiteWeightedGraph,
    /// Perfect matching of `filtered`, on graph indices.
    pub matching: Vec<(usize, usize)>,
}

/// Takes an optimal dual `π` for the maximum weight perfect matching of
/// `E_I`, keeps the edges of `E_J` that `π` covers, and returns a perfect
/// matching of what remains. Failing to find one is an invariant violation.
pub fn dual_filtered_witness(rp: &ReducedPair) -> Result<DualFilteredMatching> {
    let graphs = exchange_graphs(rp)?;
    let best = max_weight_perfect_matching(&graphs.e_i)
        .ok_or_else(|| Error::invariant("E_I has no perfect matching"))?;
    let pi = best.certificate;
    if !pi.certifies(&graphs.e_i, best.matching.weight) {
        return Err(Error::invariant("dual potentials do not certify the E_I optimum"));
    }
    let mut filtered = BipartiteWeightedGraph::new(graphs.left.len(), graphs.right.len());
    for &(l, r, w) in graphs.e_j.edges() {
        if pi.covers(l, r, w) {
            filtered.add_edge(l, r, w)?;
        }
    }
    let found = max_weight_perfect_matching(&filtered)
        .ok_or_else(|| Error::invariant("dual-filtered E_J has no perfect matching"))?;
    if found.matching.weight > best.matching.weight {
        return Err(Error::invariant("filtered matching outweighs the dual bound"));
    }
    Ok(DualFilteredMatching {
        k: best.matching.weight,
        certificate: pi,
        filtered,
        matching: found.matching.pairs,
    })
}

/// Optimal perfect matching weights in the two exchange graphs of a pair
/// of disjoint bases `A`, `B` (weight 1 where `a ≺ b`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxMinReport {
    pub max_e_a: i64,
    pub min_e_b: i64,
}

impl MaxMinReport {
    pub fn holds(&self) -> bool {
        self.max_e_a >= self.min_e_b
    }
}

/// The exchange graphs `E_A` (`A - a + b` independent) and `E_B`
/// (`B + a - b` independent) of disjoint bases, with `a` on the left.
pub fn base_exchange_graphs(
    om: &OrderedMatroid,
    a: &ElemSet,
    b: &ElemSet,
) -> Result<(BipartiteWeightedGraph, BipartiteWeightedGraph)> {
    let m = om.matroid();
    if !a.is_disjoint(b) || !m.is_base(a) || !m.is_base(b) {
        return Err(Error::input("A and B must be disjoint bases"));
    }
    let (av, bv) = (a.to_vec(), b.to_vec());
    let mut e_a = BipartiteWeightedGraph::new(av.len(), bv.len());
    let mut e_b = BipartiteWeightedGraph::new(av.len(), bv.len());
    for (l, &x) in av.iter().enumerate() {
        for (r, &y) in bv.iter().enumerate() {
            let w = i64::from(om.prefers(y, x));
            if m.is_independent(&a.exchange(x, y)) {
                e_a.add_edge(l, r, w)?;
            }
            if m.is_independent(&b.exchange(y, x)) {
                e_b.add_edge(l, r, w)?;
            }
        }
    }
    Ok((e_a, e_b))
}

pub fn max_min_exchange(om: &OrderedMatroid, a: &ElemSet, b: &ElemSet) -> Result<MaxMinReport> {
    let (e_a, e_b) = base_exchange_graphs(om, a, b)?;
    let max_e_a = max_weight_perfect_matching(&e_a)
        .ok_or_else(|| Error::invariant("E_A has no perfect matching"))?
        .matching
        .weight;
    let min_e_b = min_weight_perfect_matching(&e_b)
        .ok_or_else(|| Error::invariant("E_B has no perfect matching"))?
        .weight;
    Ok(MaxMinReport { max_e_a, min_e_b })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeInequalityReport {
    pub vote_ij: i64,
    pub vote_ji: i64,
    pub holds: bool,
    /// Present when `I` and `J` are disjoint bases.
    pub disjoint_bases: Option<MaxMinReport>,
}

/// Computes `vote(I,J)` and `vote(J,I)` and whether their sum is at most 0.
pub fn check_exchange_inequality(side: &Side, i: &ElemSet, j: &ElemSet) -> Result<ExchangeInequalityReport> {
    let vote_ij = vote(side, i, j)?.value;
    let vote_ji = vote(side, j, i)?.value;
    let m = side.matroid();
    let disjoint_bases = if i.is_disjoint(j) && m.is_base(i) && m.is_base(j) {
        Some(max_min_exchange(side.ordered(), i, j)?)
    } else {
        None
    };
    Ok(ExchangeInequalityReport {
        vote_ij,
        vote_ji,
        holds: vote_ij + vote_ji <= 0,
        disjoint_bases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroids::GroundSet;

    fn rank1_side() -> Side {
        let m = Matroid::uniform(GroundSet::new(["a", "b"]).unwrap(), 1);
        Side::single(OrderedMatroid::with_names(m, &["a", "b"]).unwrap())
    }

    fn set(side: &Side, names: &[&str]) -> ElemSet {
        side.matroid().ground().set(names).unwrap()
    }

    #[test]
    fn identical_sets_vote_zero() {
        let s = rank1_side();
        let i = set(&s, &["a"]);
        for mode in [PairingMode::Feasible, PairingMode::WeaklyFeasible] {
            let r = vote_in_mode(&s, &i, &i, mode).unwrap();
            assert_eq!(r.value, 0);
            assert!(r.witness.is_empty());
            assert!(is_feasible_pairing(&s, &i, &i, &Pairing::default(), mode).unwrap().holds);
        }
    }

    #[test]
    fn rank_one_feasibility() {
        let s = rank1_side();
        let (i, j) = (set(&s, &["a"]), set(&s, &["b"]));
        let r = is_feasible_pairing(&s, &i, &j, &Pairing::default(), PairingMode::Feasible).unwrap();
        assert!(!r.holds);
        assert!(r.violated.contains(&2) && r.violated.contains(&5));
        // a is not addable to J either
        assert_eq!(r.violated, vec![2, 3, 5]);
        let n = Pairing::new(vec![(0, 1)]);
        assert!(is_feasible_pairing(&s, &i, &j, &n, PairingMode::Feasible).unwrap().holds);
    }

    #[test]
    fn rank_one_votes() {
        let s = rank1_side();
        let (i, j) = (set(&s, &["a"]), set(&s, &["b"]));
        assert_eq!(vote_of_pairing(s.ordered(), &i, &j, &Pairing::new(vec![(0, 1)])), 1);
        assert_eq!(vote(&s, &i, &j).unwrap().value, 1);
        assert_eq!(vote(&s, &j, &i).unwrap().value, -1);
        assert_eq!(vote_bruteforce(&s, &i, &j, PairingMode::Feasible).unwrap().value, 1);
        let e = ElemSet::empty(2);
        assert_eq!(vote_of_pairing(s.ordered(), &i, &e, &Pairing::default()), 1);
    }

    #[test]
    fn bad_pairing_is_input_error() {
        let s = rank1_side();
        let i = set(&s, &["a"]);
        let n = Pairing::new(vec![(0, 0)]);
        assert!(matches!(
            is_feasible_pairing(&s, &i, &i, &n, PairingMode::Feasible),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn reduction_of_identical_sets_is_empty() {
        let s = rank1_side();
        let i = set(&s, &["a"]);
        let rp = reduce_to_disjoint_bases(&s, &i, &i).unwrap();
        assert!(rp.is_empty());
        let g = exchange_graphs(&rp).unwrap();
        assert_eq!(g.e_i.edges().len(), 0);
        assert!(dual_filtered_witness(&rp).unwrap().matching.is_empty());
    }

    #[test]
    fn rank_one_exchange_graphs() {
        let s = rank1_side();
        let (i, j) = (set(&s, &["a"]), set(&s, &["b"]));
        let rp = reduce_to_disjoint_bases(&s, &i, &j).unwrap();
        let g = exchange_graphs(&rp).unwrap();
        assert_eq!(g.e_i.edges(), &[(0, 0, 0)]);
        assert_eq!(g.e_j.edges(), &[(0, 0, 0)]);
        let w = dual_filtered_witness(&rp).unwrap();
        assert_eq!(g.to_pairing(&rp, &w.matching), Pairing::new(vec![(0, 1)]));
        let rep = check_exchange_inequality(&s, &i, &j).unwrap();
        assert_eq!((rep.vote_ij, rep.vote_ji, rep.holds), (1, -1, true));
        assert!(rep.disjoint_bases.unwrap().holds());
    }

    #[test]
    fn missing_feasible_pairing_is_reported() {
        // not a matroid: {a} cannot be augmented from {b, c}
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        let fam = [vec![], vec![0], vec![1], vec![2], vec![1, 2]]
            .into_iter()
            .map(|v| ElemSet::from_indices(3, v));
        let m = Matroid::explicit(g, fam).unwrap();
        let s = Side::single(OrderedMatroid::declaration_order(m));
        let (i, j) = (set(&s, &["a"]), set(&s, &["b", "c"]));
        assert_eq!(vote(&s, &i, &j), Err(Error::NoFeasiblePairing));
        assert_eq!(vote_weak(&s, &i, &j), Err(Error::NoFeasiblePairing));
        assert_eq!(vote_bruteforce(&s, &i, &j, PairingMode::Feasible), Err(Error::NoFeasiblePairing));
    }

    #[test]
    fn pairing_enumeration_counts() {
        let mut count = 0;
        for_each_pairing(&[0, 1], &[2, 3], &mut |_| count += 1);
        // empty + 4 singles + 2 perfect
        assert_eq!(count, 7);
    }
}
