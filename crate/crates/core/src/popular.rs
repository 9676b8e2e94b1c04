//! Maximum popular common independent sets.
//!
//! The solver doubles every element into an `x` and a `y` copy, computes a
//! kernel of the doubled instance and projects it back. Exhaustive
//! classifiers for the four popularity notions serve as its oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::kernel::{find_kernel, KernelInstance, KernelTrace};
use crate::matroids::{GroundSet, Matroid, OrderedMatroid};
use crate::voting::{vote_chain, vote_weak, Side, VoteChain};

/// Default ground-set bound for the exhaustive classifiers.
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 12;

/// One agent: a matroid over its own elements and a preference order on them.
#[derive(Clone, Debug)]
pub struct AgentSpec {
    pub name: String,
    pub matroid: Matroid,
    /// Agent's elements, best first.
    pub order: Vec<String>,
}

/// Two ordered matroids on a shared ground set, each a direct sum of agent matroids.
#[derive(Clone, Debug)]
pub struct PopularInstance {
    ground: GroundSet,
    sides: [Side; 2],
    agents: [Vec<String>; 2],
}

impl PopularInstance {
    pub fn new(side1: Side, side2: Side) -> Result<Self> {
        let agents = [
            (0..side1.split().len()).map(|k| format!("agent{k}")).collect(),
            (0..side2.split().len()).map(|k| format!("agent{k}")).collect(),
        ];
        Self::with_agent_names(side1, side2, agents)
    }

    pub fn with_agent_names(side1: Side, side2: Side, agents: [Vec<String>; 2]) -> Result<Self> {
        if side1.matroid().ground() != side2.matroid().ground() {
            return Err(Error::input("the two sides have different ground sets"));
        }
        for (k, side) in [&side1, &side2].into_iter().enumerate() {
            if let Some(e) = side.matroid().has_loop() {
                return Err(Error::input(format!(
                    "element {:?} is a loop on side {}",
                    side.matroid().ground().name(e),
                    k + 1
                )));
            }
            if agents[k].len() != side.split().len() {
                return Err(Error::input("agent names do not match the summand count"));
            }
        }
        Ok(PopularInstance {
            ground: side1.matroid().ground().clone(),
            sides: [side1, side2],
            agents,
        })
    }

    /// Builds both sides from per-agent matroids and orders.
    ///
    /// `interleavings[k]`, when given, is the global order of side `k+1`; it
    /// must agree with every agent's own order. The default concatenates the
    /// agent orders in declaration order.
    pub fn from_agents(
        ground: GroundSet,
        side1: Vec<AgentSpec>,
        side2: Vec<AgentSpec>,
        interleavings: [Option<Vec<String>>; 2],
    ) -> Result<Self> {
        let mut built = Vec::with_capacity(2);
        let mut names = Vec::with_capacity(2);
        for (k, (agents, inter)) in [side1, side2].into_iter().zip(interleavings).enumerate() {
            let side_no = k + 1;
            let concat: Vec<String> = agents.iter().flat_map(|a| a.order.iter().cloned()).collect();
            let order_names = inter.unwrap_or(concat);
            let order = order_names
                .iter()
                .map(|n| ground.index_of(n))
                .collect::<Result<Vec<_>>>()?;
            names.push(agents.iter().map(|a| a.name.clone()).collect::<Vec<_>>());
            let agent_orders: Vec<Vec<usize>> = agents
                .iter()
                .map(|a| a.order.iter().map(|n| ground.index_of(n)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            let (matroid, split) =
                Matroid::direct_sum_over(ground.clone(), agents.into_iter().map(|a| a.matroid).collect())
                    .map_err(|e| Error::input(format!("side {side_no}: {e}")))?;
            let om = OrderedMatroid::new(matroid, order)
                .map_err(|e| Error::input(format!("side {side_no} order: {e}")))?;
            for (k, agent_order) in agent_orders.iter().enumerate() {
                let restricted: Vec<usize> = om
                    .order()
                    .iter()
                    .copied()
                    .filter(|&e| split.block_of(e) == k)
                    .collect();
                if &restricted != agent_order {
                    return Err(Error::input(format!(
                        "side {side_no}: global order disagrees with agent {:?}'s order",
                        names[side_no - 1][k]
                    )));
                }
            }
            built.push(Side::new(om, split)?);
        }
        let side2 = built.pop().expect("two sides");
        let side1 = built.pop().expect("two sides");
        let agents = [names.remove(0), names.remove(0)];
        Self::with_agent_names(side1, side2, agents)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn side(&self, k: usize) -> &Side {
        &self.sides[k]
    }

    pub fn side1(&self) -> &Side {
        &self.sides[0]
    }

    pub fn side2(&self) -> &Side {
        &self.sides[1]
    }

    pub fn agent_names(&self, k: usize) -> &[String] {
        &self.agents[k]
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn is_common_independent(&self, x: &ElemSet) -> bool {
        self.sides.iter().all(|s| s.matroid().is_independent(x))
    }

    pub fn kernel_instance(&self) -> Result<KernelInstance> {
        KernelInstance::new(self.sides[0].ordered().clone(), self.sides[1].ordered().clone())
    }

    /// All common independent sets, largest first, lexicographic within a size.
    pub fn common_independent_sets(&self, bound: usize) -> Result<Vec<ElemSet>> {
        let n = self.len();
        if n > bound {
            return Err(Error::Scale {
                what: "ground set",
                size: n,
                limit: bound,
            });
        }
        let mut out = Vec::new();
        let mut cur = ElemSet::empty(n);
        self.collect_independent(0, &mut cur, &mut out);
        out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn collect_independent(&self, next: usize, cur: &mut ElemSet, out: &mut Vec<ElemSet>) {
        if next == self.len() {
            out.push(cur.clone());
            return;
        }
        self.collect_independent(next + 1, cur, out);
        cur.insert(next);
        if self.is_common_independent(cur) {
            self.collect_independent(next + 1, cur, out);
        }
        cur.remove(next);
    }
}

/// The doubled instance: element `u` becomes `x(u)` (index `u`) and `y(u)`
/// (index `u + n`). The first order ranks all `x` copies above all `y`
/// copies and the second does the opposite; both keep the original order
/// within a copy type.
#[derive(Clone, Debug)]
pub struct ExtendedInstance {
    pub m1: OrderedMatroid,
    pub m2: OrderedMatroid,
    base_len: usize,
}

impl ExtendedInstance {
    pub fn ground(&self) -> &GroundSet {
        self.m1.matroid().ground()
    }

    pub fn copy_of(&self, e: usize) -> usize {
        e % self.base_len
    }

    pub fn is_x_copy(&self, e: usize) -> bool {
        e < self.base_len
    }

    pub fn project(&self, x: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.base_len, x.iter().map(|e| self.copy_of(e)))
    }

    pub fn kernel_instance(&self) -> Result<KernelInstance> {
        KernelInstance::new(self.m1.clone(), self.m2.clone())
    }
}

pub fn extend_instance(pi: &PopularInstance) -> Result<ExtendedInstance> {
    let n = pi.len();
    let o1 = pi.side1().ordered().order();
    let o2 = pi.side2().ordered().order();
    let order1: Vec<usize> = o1.iter().copied().chain(o1.iter().map(|&e| e + n)).collect();
    let order2: Vec<usize> = o2.iter().map(|&e| e + n).chain(o2.iter().copied()).collect();
    Ok(ExtendedInstance {
        m1: OrderedMatroid::new(pi.side1().matroid().parallel_copies(), order1)?,
        m2: OrderedMatroid::new(pi.side2().matroid().parallel_copies(), order2)?,
        base_len: n,
    })
}

#[derive(Clone, Debug)]
pub struct PopularSolution {
    pub set: ElemSet,
    /// Kernel of the doubled instance that `set` projects from.
    pub extended_kernel: ElemSet,
    pub trace: KernelTrace,
}

pub fn solve(pi: &PopularInstance) -> Result<PopularSolution> {
    let ext = extend_instance(pi)?;
    let (kernel, trace) = find_kernel(&ext.kernel_instance()?)?;
    let set = ext.project(&kernel);
    if set.len() != kernel.len() {
        return Err(Error::invariant("kernel of the doubled instance holds both copies of an element"));
    }
    Ok(PopularSolution {
        set,
        extended_kernel: kernel,
        trace,
    })
}

/// A super popular common independent set that is largest among all weakly
/// defendable ones.
pub fn max_popular(pi: &PopularInstance) -> Result<ElemSet> {
    Ok(solve(pi)?.set)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counterexamples {
    pub super_popular: Option<Vec<usize>>,
    pub popular: Option<Vec<usize>>,
    pub defendable: Option<Vec<usize>>,
    pub weakly_defendable: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PopularityVerdict {
    pub super_popular: bool,
    pub popular: bool,
    pub defendable: bool,
    pub weakly_defendable: bool,
    /// Lexicographically smallest beating set per failed notion.
    pub counterexamples: Counterexamples,
    pub sets_compared: usize,
    /// Per-side vote chains checked along the way.
    pub chains_checked: usize,
}

impl PopularityVerdict {
    /// super ⇒ popular ⇒ defendable ⇒ weakly defendable.
    pub fn is_monotone(&self) -> bool {
        (!self.super_popular || self.popular)
            && (!self.popular || self.defendable)
            && (!self.defendable || self.weakly_defendable)
    }
}

/// The four per-side vote chains between `i` and `j`, summed over the sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVotes {
    pub sides: [VoteChain; 2],
}

impl PairVotes {
    pub fn weak_ij(&self) -> i64 {
        self.sides[0].weak_ij + self.sides[1].weak_ij
    }
    pub fn ij(&self) -> i64 {
        self.sides[0].ij + self.sides[1].ij
    }
    pub fn ji(&self) -> i64 {
        self.sides[0].ji + self.sides[1].ji
    }
    pub fn weak_ji(&self) -> i64 {
        self.sides[0].weak_ji + self.sides[1].weak_ji
    }
}

/// Votes of both sides between two common independent sets, with the chain
/// inequality asserted on each side.
pub fn pair_votes(pi: &PopularInstance, i: &ElemSet, j: &ElemSet) -> Result<PairVotes> {
    let mut chains = Vec::with_capacity(2);
    for (k, side) in pi.sides.iter().enumerate() {
        let chain = vote_chain(side, i, j).map_err(|e| match e {
            Error::NoFeasiblePairing => {
                Error::invariant("no feasible pairing between two common independent sets")
            }
            other => other,
        })?;
        if !chain.holds() {
            return Err(Error::invariant(format!(
                "vote chain fails on side {} for I={:?}, J={:?}: {chain:?}",
                k + 1,
                i,
                j
            )));
        }
        chains.push(chain);
    }
    let second = chains.pop().expect("two sides");
    let first = chains.pop().expect("two sides");
    Ok(PairVotes { sides: [first, second] })
}

/// Exhaustively decides the four popularity notions for `i`.
pub fn classify(pi: &PopularInstance, i: &ElemSet, bound: usize) -> Result<PopularityVerdict> {
    if i.universe() != pi.len() || !pi.is_common_independent(i) {
        return Err(Error::input("set to classify is not common independent"));
    }
    let candidates = pi.common_independent_sets(bound)?;
    let votes: Vec<(ElemSet, PairVotes)> = candidates
        .par_iter()
        .map(|j| pair_votes(pi, i, j).map(|v| (j.clone(), v)))
        .collect::<Result<_>>()?;
    let smallest = |pred: &dyn Fn(&PairVotes) -> bool| {
        votes
            .iter()
            .filter(|(_, v)| pred(v))
            .map(|(j, _)| j)
            .min()
            .map(ElemSet::to_vec)
    };
    let counterexamples = Counterexamples {
        super_popular: smallest(&|v| v.weak_ij() < 0),
        popular: smallest(&|v| v.ij() < 0),
        defendable: smallest(&|v| v.ji() > 0),
        weakly_defendable: smallest(&|v| v.weak_ji() > 0),
    };
    let verdict = PopularityVerdict {
        super_popular: counterexamples.super_popular.is_none(),
        popular: counterexamples.popular.is_none(),
        defendable: counterexamples.defendable.is_none(),
        weakly_defendable: counterexamples.weakly_defendable.is_none(),
        counterexamples,
        sets_compared: votes.len(),
        chains_checked: 2 * votes.len(),
    };
    if !verdict.is_monotone() {
        return Err(Error::invariant("popularity flags break the implication chain"));
    }
    Ok(verdict)
}

/// Whether no common independent set beats `x` on summed weak votes.
fn is_weakly_defendable(pi: &PopularInstance, x: &ElemSet, others: &[ElemSet]) -> Result<bool> {
    for j in others {
        let mut total = 0;
        for side in &pi.sides {
            total += vote_weak(side, j, x)
                .map_err(|_| Error::invariant("no weakly feasible pairing between common independent sets"))?
                .value;
        }
        if total > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest size of a weakly defendable common independent set, by exhaustive search.
pub fn max_weakly_defendable_size(pi: &PopularInstance, bound: usize) -> Result<usize> {
    let all = pi.common_independent_sets(bound)?;
    let mut start = 0;
    while start < all.len() {
        let size = all[start].len();
        let end = all[start..]
            .iter()
            .position(|s| s.len() != size)
            .map_or(all.len(), |p| start + p);
        let level = &all[start..end];
        let found = level
            .par_iter()
            .map(|x| is_weakly_defendable(pi, x, &all))
            .collect::<Result<Vec<bool>>>()?;
        if found.into_iter().any(|b| b) {
            return Ok(size);
        }
        start = end;
    }
    Err(Error::invariant("no weakly defendable common independent set"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1_pair() -> PopularInstance {
        let g = GroundSet::new(["a", "b"]).unwrap();
        let m = Matroid::uniform(g, 1);
        let s1 = Side::single(OrderedMatroid::with_names(m.clone(), &["a", "b"]).unwrap());
        let s2 = Side::single(OrderedMatroid::with_names(m, &["b", "a"]).unwrap());
        PopularInstance::new(s1, s2).unwrap()
    }

    #[test]
    fn extension_orders() {
        let pi = rank1_pair();
        let ext = extend_instance(&pi).unwrap();
        let g = ext.ground();
        let names = |o: &[usize]| o.iter().map(|&e| g.name(e).to_string()).collect::<Vec<_>>();
        assert_eq!(names(ext.m1.order()), ["x(a)", "x(b)", "y(a)", "y(b)"]);
        assert_eq!(names(ext.m2.order()), ["y(b)", "y(a)", "x(b)", "x(a)"]);
    }

    #[test]
    fn one_copy_rule() {
        let g = GroundSet::new(["a"]).unwrap();
        let m = OrderedMatroid::declaration_order(Matroid::free(g));
        let pi = PopularInstance::new(Side::single(m.clone()), Side::single(m)).unwrap();
        let ext = extend_instance(&pi).unwrap();
        assert_eq!(ext.ground().names(), &["x(a)", "y(a)"]);
        let both = ElemSet::full(2);
        assert!(!ext.m1.is_independent(&both));
        assert!(!ext.m2.is_independent(&both));
    }

    #[test]
    fn empty_instance() {
        let m = OrderedMatroid::declaration_order(Matroid::free(GroundSet::numbered(0)));
        let pi = PopularInstance::new(Side::single(m.clone()), Side::single(m)).unwrap();
        assert!(max_popular(&pi).unwrap().is_empty());
        assert_eq!(max_weakly_defendable_size(&pi, 12).unwrap(), 0);
    }

    #[test]
    fn rank1_pair_is_popular_at_size_one() {
        let pi = rank1_pair();
        let out = max_popular(&pi).unwrap();
        assert_eq!(out.len(), 1);
        let v = classify(&pi, &out, 12).unwrap();
        assert!(v.super_popular && v.popular && v.defendable && v.weakly_defendable);
        assert_eq!(max_weakly_defendable_size(&pi, 12).unwrap(), 1);
    }

    #[test]
    fn classify_rank1_examples() {
        let pi = rank1_pair();
        let a = pi.ground().set(&["a"]).unwrap();
        let v = classify(&pi, &a, 12).unwrap();
        assert!(v.popular);
        let empty = pi.ground().empty_set();
        let v = classify(&pi, &empty, 12).unwrap();
        assert!(!v.popular);
        assert_eq!(v.counterexamples.popular, Some(vec![0]));
    }

    #[test]
    fn classify_refuses_large() {
        let m = OrderedMatroid::declaration_order(Matroid::free(GroundSet::numbered(14)));
        let pi = PopularInstance::new(Side::single(m.clone()), Side::single(m)).unwrap();
        let r = classify(&pi, &ElemSet::empty(14), 12);
        assert!(matches!(r, Err(Error::Scale { .. })));
    }

    #[test]
    fn agents_and_interleaving() {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        let agent = |name: &str, elems: &[&str], order: &[&str]| AgentSpec {
            name: name.into(),
            matroid: Matroid::uniform(GroundSet::new(elems.iter().copied()).unwrap(), 1),
            order: order.iter().map(|s| s.to_string()).collect(),
        };
        let side1 = vec![agent("p", &["a", "b"], &["b", "a"]), agent("q", &["c"], &["c"])];
        let side2 = vec![agent("r", &["a", "b", "c"], &["a", "b", "c"])];
        let pi = PopularInstance::from_agents(g.clone(), side1.clone(), side2.clone(), [None, None]).unwrap();
        assert_eq!(pi.side1().ordered().order(), &[1, 0, 2]);
        let inter = Some(vec!["c".to_string(), "b".into(), "a".into()]);
        let pi2 = PopularInstance::from_agents(g.clone(), side1.clone(), side2.clone(), [inter, None]).unwrap();
        assert_eq!(pi2.side1().ordered().order(), &[2, 1, 0]);
        let bad = Some(vec!["a".to_string(), "b".into(), "c".into()]);
        assert!(PopularInstance::from_agents(g, side1, side2, [bad, None]).is_err());
    }
}
