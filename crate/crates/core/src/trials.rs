//! Randomized trials of the exchange inequalities and of the solver.
//!
//! Every trial is a pure function of its seed, so a failing seed can be
//! replayed on its own.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::gen::{generate_random_instance, rng_for, Family};
use crate::matching_engine::{brute, max_weight_perfect_matching, min_weight_perfect_matching};
use crate::matroids::{GroundSet, Matroid, OrderedMatroid};
use crate::popular::{classify, max_popular, max_weakly_defendable_size, PopularInstance};
use crate::voting::{
    base_exchange_graphs, dual_filtered_witness, reduce_to_disjoint_bases, vote, vote_bruteforce, vote_weak, PairingMode,
    VoteChain,
};

/// Random independent set of `m`: a random-order greedy run stopped at a random size.
pub fn random_independent<R: Rng>(rng: &mut R, m: &Matroid) -> ElemSet {
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.shuffle(rng);
    let target = rng.gen_range(0..=m.rank());
    let mut x = ElemSet::empty(m.len());
    for e in order {
        if x.len() == target {
            break;
        }
        if m.is_independent(&x.with(e)) {
            x.insert(e);
        }
    }
    x
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeTrial {
    pub seed: u64,
    pub family: Family,
    pub side: usize,
    pub size: usize,
    pub i: Vec<String>,
    pub j: Vec<String>,
    pub chain: VoteChainReport,
    /// Engine votes equal the exhaustive ones in both modes and directions.
    pub brute_agrees: bool,
    /// `vote(I,J) + vote(J,I) <= 0`.
    pub exchange_inequality: bool,
    /// A perfect matching survives in the dual-filtered exchange graph.
    pub filtered_matching: bool,
    /// Max weight in `E_I'` against min weight in `E_J'` on the reduced pair.
    pub max_min: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VoteChainReport {
    pub weak_ij: i64,
    pub ij: i64,
    pub ji: i64,
    pub weak_ji: i64,
    pub holds: bool,
}

impl From<VoteChain> for VoteChainReport {
    fn from(c: VoteChain) -> Self {
        VoteChainReport {
            weak_ij: c.weak_ij,
            ij: c.ij,
            ji: c.ji,
            weak_ji: c.weak_ji,
            holds: c.holds(),
        }
    }
}

impl ExchangeTrial {
    pub fn passed(&self) -> bool {
        self.chain.holds
            && self.brute_agrees
            && self.exchange_inequality
            && self.filtered_matching
            && self.max_min.0 >= self.max_min.1
    }
}

/// One trial of the exchange inequalities on a random side of a random instance.
pub fn exchange_trial(family: Family, max_size: usize, seed: u64) -> Result<ExchangeTrial> {
    let mut rng = rng_for(seed ^ 0x5eed_0001);
    let size = rng.gen_range(1..=max_size);
    let file = generate_random_instance(family, size, seed)?;
    let pi = file.to_popular()?;
    let side_no = rng.gen_range(0..2);
    let side = pi.side(side_no);
    let i = random_independent(&mut rng, side.matroid());
    let j = random_independent(&mut rng, side.matroid());
    let mut brute_agrees = true;
    for (a, b) in [(&i, &j), (&j, &i)] {
        let engine = [vote(side, a, b)?.value, vote_weak(side, a, b)?.value];
        let exhaustive = [
            vote_bruteforce(side, a, b, PairingMode::Feasible)?.value,
            vote_bruteforce(side, a, b, PairingMode::WeaklyFeasible)?.value,
        ];
        brute_agrees &= engine == exhaustive;
    }
    let chain = VoteChain {
        weak_ij: vote_weak(side, &i, &j)?.value,
        ij: vote(side, &i, &j)?.value,
        ji: vote(side, &j, &i)?.value,
        weak_ji: vote_weak(side, &j, &i)?.value,
    };
    let rp = reduce_to_disjoint_bases(side, &i, &j)?;
    let filtered_matching = match dual_filtered_witness(&rp) {
        Ok(w) => w.matching.len() == rp.i_prime.len(),
        Err(Error::Invariant(_)) => false,
        Err(e) => return Err(e),
    };
    let om = OrderedMatroid::new(rp.matroid.clone(), reduced_order(&rp.position))?;
    let (e_a, e_b) = base_exchange_graphs(&om, &rp.i_prime, &rp.j_prime)?;
    let max_min = (
        max_weight_perfect_matching(&e_a).map_or(i64::MIN, |m| m.matching.weight),
        min_weight_perfect_matching(&e_b).map_or(i64::MAX, |m| m.weight),
    );
    let names = |x: &ElemSet| pi.ground().names_of(x);
    Ok(ExchangeTrial {
        seed,
        family,
        side: side_no + 1,
        size,
        i: names(&i),
        j: names(&j),
        exchange_inequality: chain.ij + chain.ji <= 0,
        chain: chain.into(),
        brute_agrees,
        filtered_matching,
        max_min,
    })
}

fn reduced_order(position: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..position.len()).collect();
    order.sort_by_key(|&e| position[e]);
    order
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasesFamily {
    Graphic,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasesTrial {
    pub seed: u64,
    pub family: BasesFamily,
    pub rank: usize,
    pub engine: (i64, i64),
    pub exhaustive: (i64, i64),
}

impl BasesTrial {
    pub fn passed(&self) -> bool {
        self.engine == self.exhaustive && self.engine.0 >= self.engine.1
    }
}

/// A random matroid with two disjoint bases `A`, `B` of rank at most 6 and a random order.
pub fn random_disjoint_bases(family: BasesFamily, seed: u64) -> Result<(OrderedMatroid, ElemSet, ElemSet)> {
    let mut rng = rng_for(seed ^ 0xba5e);
    loop {
        let m = match family {
            BasesFamily::Graphic => {
                let vertices = rng.gen_range(2..=7);
                let n = rng.gen_range(2 * (vertices - 1)..=12.min(2 * (vertices - 1) + 3));
                let ends = (0..n)
                    .map(|_| {
                        let a = rng.gen_range(0..vertices);
                        let b = (a + rng.gen_range(1..vertices)) % vertices;
                        (a, b)
                    })
                    .collect();
                Matroid::graphic(GroundSet::numbered(n), ends)?
            }
            BasesFamily::Explicit => {
                let dim = rng.gen_range(1..=4);
                let n = rng.gen_range(2 * dim..=10.min(2 * dim + 3));
                let vectors: Vec<u32> = (0..n).map(|_| rng.gen_range(1..1u32 << dim)).collect();
                Matroid::explicit(
                    GroundSet::numbered(n),
                    (0u64..1 << n)
                        .map(|mask| ElemSet::from_mask(n, mask))
                        .filter(|x| gf2_independent(x.iter().map(|e| vectors[e]))),
                )?
            }
        };
        let mut order: Vec<usize> = (0..m.len()).collect();
        order.shuffle(&mut rng);
        let mut perm = order.clone();
        perm.shuffle(&mut rng);
        let a = greedy_in(&m, &perm, &ElemSet::full(m.len()));
        let rest = ElemSet::full(m.len()).difference(&a);
        let b = greedy_in(&m, &perm, &rest);
        if b.len() == a.len() && !a.is_empty() {
            let om = OrderedMatroid::new(m, order)?;
            return Ok((om, a, b));
        }
    }
}

fn greedy_in(m: &Matroid, order: &[usize], within: &ElemSet) -> ElemSet {
    let mut x = ElemSet::empty(m.len());
    for &e in order {
        if within.contains(e) && m.is_independent(&x.with(e)) {
            x.insert(e);
        }
    }
    x
}

fn gf2_independent(vectors: impl Iterator<Item = u32>) -> bool {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            if v ^ b < v {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        basis.push(v);
        basis.sort_unstable_by(|x, y| y.cmp(x));
    }
    true
}

/// Max weight of a perfect matching in `E_A` against min weight in `E_B`,
/// computed by the engine and by enumeration.
pub fn bases_trial(family: BasesFamily, seed: u64) -> Result<BasesTrial> {
    let (om, a, b) = random_disjoint_bases(family, seed)?;
    let (e_a, e_b) = base_exchange_graphs(&om, &a, &b)?;
    let engine = (
        max_weight_perfect_matching(&e_a)
            .ok_or_else(|| Error::invariant("E_A has no perfect matching"))?
            .matching
            .weight,
        min_weight_perfect_matching(&e_b)
            .ok_or_else(|| Error::invariant("E_B has no perfect matching"))?
            .weight,
    );
    let weights = |g| -> Vec<i64> {
        brute::all_perfect_matchings(g)
            .iter()
            .map(|pm| brute::weight_of(g, pm))
            .collect()
    };
    let (wa, wb) = (weights(&e_a), weights(&e_b));
    let exhaustive = (
        wa.iter().copied().max().unwrap_or(i64::MIN),
        wb.iter().copied().min().unwrap_or(i64::MAX),
    );
    Ok(BasesTrial {
        seed,
        family,
        rank: a.len(),
        engine,
        exhaustive,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverTrial {
    pub seed: u64,
    pub family: Family,
    pub size: usize,
    pub output: Vec<String>,
    pub super_popular: bool,
    pub output_size: usize,
    pub max_weakly_defendable: usize,
    /// Per-side vote chains verified while classifying.
    pub chains_checked: usize,
}

impl SolverTrial {
    pub fn passed(&self) -> bool {
        self.super_popular && self.output_size == self.max_weakly_defendable
    }
}

/// Solves a random instance and checks the output exhaustively.
pub fn solver_trial(family: Family, max_size: usize, seed: u64) -> Result<SolverTrial> {
    let mut rng = rng_for(seed ^ 0x5017);
    let size = rng.gen_range(1..=max_size);
    let pi: PopularInstance = generate_random_instance(family, size, seed)?.to_popular()?;
    let out = max_popular(&pi)?;
    let verdict = classify(&pi, &out, max_size.max(12))?;
    let best = max_weakly_defendable_size(&pi, max_size.max(12))?;
    Ok(SolverTrial {
        seed,
        family,
        size,
        output: pi.ground().names_of(&out),
        super_popular: verdict.super_popular,
        output_size: out.len(),
        max_weakly_defendable: best,
        chains_checked: verdict.chains_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_trials_pass() {
        for family in Family::ALL {
            for seed in 0..8 {
                let t = exchange_trial(family, 8, seed).unwrap();
                assert!(t.passed(), "{t:?}");
            }
        }
    }

    #[test]
    fn bases_trials_pass() {
        for family in [BasesFamily::Graphic, BasesFamily::Explicit] {
            for seed in 0..10 {
                let t = bases_trial(family, seed).unwrap();
                assert!(t.passed(), "{t:?}");
                assert!(t.rank <= 6);
            }
        }
    }

    #[test]
    fn solver_trials_pass() {
        for family in Family::ALL {
            for seed in 0..4 {
                let t = solver_trial(family, 7, seed).unwrap();
                assert!(t.passed(), "{t:?}");
            }
        }
    }

    #[test]
    fn trials_replay() {
        let a = exchange_trial(Family::Graphic, 10, 99).unwrap();
        let b = exchange_trial(Family::Graphic, 10, 99).unwrap();
        assert_eq!(a, b);
    }
}
