//! Bipartite b-matchings under lexicographic voting.
//!
//! Each agent compares two b-matchings by the best incident edge on which
//! they differ and casts a single vote. A b-matching is lexicographically
//! popular when no other b-matching wins the vote.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    U,
    W,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::U => Part::W,
            Part::W => Part::U,
        }
    }
}

/// Agent as written in instance files: acceptable partners by name, best first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentDecl {
    pub name: String,
    pub part: Part,
    pub capacity: usize,
    pub prefs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexAgent {
    pub name: String,
    pub part: Part,
    pub capacity: usize,
    /// Incident edge indices, best first.
    pub prefs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BMatchingInstance {
    agents: Vec<LexAgent>,
    /// `(u, w)` with `u` on side U.
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

impl BMatchingInstance {
    /// Builds an instance from explicit edges and per-agent edge orders.
    pub fn new(
        agents: Vec<(String, Part, usize)>,
        edges: Vec<(usize, usize)>,
        prefs: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if prefs.len() != agents.len() {
            return Err(Error::input("one preference list per agent is required"));
        }
        let mut index = HashMap::new();
        for (k, (name, _, cap)) in agents.iter().enumerate() {
            if index.insert(name.clone(), k).is_some() {
                return Err(Error::input(format!("agent {name:?} declared twice")));
            }
            if *cap == 0 {
                return Err(Error::input(format!("agent {name:?} has capacity 0")));
            }
        }
        let mut seen = HashMap::new();
        let mut incident = vec![Vec::new(); agents.len()];
        for (e, &(u, w)) in edges.iter().enumerate() {
            if u >= agents.len() || w >= agents.len() {
                return Err(Error::input(format!("edge {e} names an unknown agent")));
            }
            if agents[u].1 != Part::U || agents[w].1 != Part::W {
                return Err(Error::input(format!(
                    "edge ({}, {}) does not join side U to side W",
                    agents[u].0, agents[w].0
                )));
            }
            if seen.insert((u, w), e).is_some() {
                return Err(Error::input(format!(
                    "edge ({}, {}) listed twice",
                    agents[u].0, agents[w].0
                )));
            }
            incident[u].push(e);
            incident[w].push(e);
        }
        for (v, list) in prefs.iter().enumerate() {
            let mut a = list.clone();
            a.sort_unstable();
            if a != incident[v] {
                return Err(Error::input(format!(
                    "preferences of {:?} do not list exactly its incident edges",
                    agents[v].0
                )));
            }
        }
        let agents = agents
            .into_iter()
            .zip(prefs)
            .map(|((name, part, capacity), prefs)| LexAgent {
                name,
                part,
                capacity,
                prefs,
            })
            .collect();
        Ok(BMatchingInstance { agents, edges, index })
    }

    /// Builds an instance whose edges are the mutually listed pairs.
    ///
    /// Edges are numbered by first appearance, scanning agents in order.
    pub fn from_decls(decls: &[AgentDecl]) -> Result<Self> {
        let mut index = HashMap::new();
        for (k, d) in decls.iter().enumerate() {
            if index.insert(d.name.as_str(), k).is_some() {
                return Err(Error::input(format!("agent {:?} declared twice", d.name)));
            }
        }
        let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut prefs = vec![Vec::new(); decls.len()];
        for (v, d) in decls.iter().enumerate() {
            for p in &d.prefs {
                let &w = index
                    .get(p.as_str())
                    .ok_or_else(|| Error::input(format!("{:?} lists unknown agent {p:?}", d.name)))?;
                if !decls[w].prefs.iter().any(|q| q == &d.name) {
                    return Err(Error::input(format!(
                        "{:?} lists {p:?} but is not listed back",
                        d.name
                    )));
                }
                let key = match d.part {
                    Part::U => (v, w),
                    Part::W => (w, v),
                };
                let e = *edge_of.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edges.len() - 1
                });
                if prefs[v].contains(&e) {
                    return Err(Error::input(format!("{:?} lists {p:?} twice", d.name)));
                }
                prefs[v].push(e);
            }
        }
        let agents = decls
            .iter()
            .map(|d| (d.name.clone(), d.part, d.capacity))
            .collect();
        Self::new(agents, edges, prefs)
    }

    pub fn to_decls(&self) -> Vec<AgentDecl> {
        self.agents
            .iter()
            .enumerate()
            .map(|(v, a)| AgentDecl {
                name: a.name.clone(),
                part: a.part,
                capacity: a.capacity,
                prefs: a
                    .prefs
                    .iter()
                    .map(|&e| self.agents[self.partner(e, v)].name.clone())
                    .collect(),
            })
            .collect()
    }

    pub fn agents(&self) -> &[LexAgent] {
        &self.agents
    }

    pub fn agent(&self, v: usize) -> &LexAgent {
        &self.agents[v]
    }

    pub fn agent_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown agent {name:?}")))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn max_capacity(&self) -> usize {
        self.agents.iter().map(|a| a.capacity).max().unwrap_or(0)
    }

    /// The other endpoint of edge `e` seen from agent `v`.
    pub fn partner(&self, e: usize, v: usize) -> usize {
        let (u, w) = self.edges[e];
        if u == v {
            w
        } else {
            u
        }
    }

    pub fn edge_between(&self, a: &str, b: &str) -> Result<usize> {
        let (x, y) = (self.agent_index(a)?, self.agent_index(b)?);
        self.agents[x]
            .prefs
            .iter()
            .copied()
            .find(|&e| self.partner(e, x) == y)
            .ok_or_else(|| Error::input(format!("no edge between {a:?} and {b:?}")))
    }

    /// Edge set from `(agent, agent)` name pairs, in either orientation.
    pub fn edge_set<S: AsRef<str>>(&self, pairs: &[(S, S)]) -> Result<ElemSet> {
        let mut out = ElemSet::empty(self.num_edges());
        for (a, b) in pairs {
            out.insert(self.edge_between(a.as_ref(), b.as_ref())?);
        }
        Ok(out)
    }

    pub fn edge_names(&self, mu: &ElemSet) -> Vec<(String, String)> {
        mu.iter()
            .map(|e| {
                let (u, w) = self.edges[e];
                (self.agents[u].name.clone(), self.agents[w].name.clone())
            })
            .collect()
    }

    pub fn load(&self, mu: &ElemSet, v: usize) -> usize {
        self.agents[v].prefs.iter().filter(|&&e| mu.contains(e)).count()
    }

    pub fn is_b_matching(&self, mu: &ElemSet) -> bool {
        mu.universe() == self.num_edges()
            && (0..self.num_agents()).all(|v| self.load(mu, v) <= self.agents[v].capacity)
    }

    fn require_b_matching(&self, mu: &ElemSet, what: &str) -> Result<()> {
        if self.is_b_matching(mu) {
            Ok(())
        } else {
            Err(Error::input(format!("{what} is not a b-matching of this instance")))
        }
    }
}

/// `+1` if `v` prefers `mu` to `mu_prime`, `-1` for the reverse, `0` if its edges coincide.
pub fn lex_vote_agent(inst: &BMatchingInstance, mu: &ElemSet, mu_prime: &ElemSet, v: usize) -> i64 {
    for &e in &inst.agents[v].prefs {
        match (mu.contains(e), mu_prime.contains(e)) {
            (true, false) => return 1,
            (false, true) => return -1,
            _ => {}
        }
    }
    0
}

pub fn lex_vote_total(inst: &BMatchingInstance, mu: &ElemSet, mu_prime: &ElemSet) -> i64 {
    (0..inst.num_agents())
        .map(|v| lex_vote_agent(inst, mu, mu_prime, v))
        .sum()
}

/// Outcome of a domination search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexStatus {
    /// Exhaustive search found nothing that beats the matching.
    Popular,
    /// `witness` beats the matching by `margin` votes.
    Dominated { witness: ElemSet, margin: i64 },
    /// The budget ran out before the search space was covered.
    Incomplete { explored: u64 },
}

struct DominationSearch<'a> {
    inst: &'a BMatchingInstance,
    mu: &'a ElemSet,
    cur: ElemSet,
    decided: Vec<bool>,
    load: Vec<usize>,
    /// Next undecided position in each agent's preference list.
    ptr: Vec<usize>,
    /// Vote of each settled agent for `cur` over `mu`.
    settled: Vec<Option<i64>>,
    settled_sum: i64,
    unsettled: i64,
    best: Option<(i64, ElemSet)>,
    explored: u64,
    budget: u64,
}

impl DominationSearch<'_> {
    fn advance(&mut self, v: usize) {
        let prefs = &self.inst.agents[v].prefs;
        while self.settled[v].is_none() {
            match prefs.get(self.ptr[v]) {
                None => self.settle(v, 0),
                Some(&e) if self.decided[e] => {
                    let (a, b) = (self.cur.contains(e), self.mu.contains(e));
                    if a != b {
                        self.settle(v, if a { 1 } else { -1 });
                    } else {
                        self.ptr[v] += 1;
                    }
                }
                Some(_) => break,
            }
        }
    }

    fn settle(&mut self, v: usize, vote: i64) {
        self.settled[v] = Some(vote);
        self.settled_sum += vote;
        self.unsettled -= 1;
    }

    fn target(&self) -> i64 {
        self.best.as_ref().map_or(1, |(m, _)| m + 1)
    }

    /// Depth-first over edges in index order, taking each edge before leaving it out.
    fn dfs(&mut self, e: usize) -> bool {
        if self.explored > self.budget {
            return false;
        }
        if self.settled_sum + self.unsettled < self.target() {
            self.explored += 1;
            return true;
        }
        if e == self.inst.num_edges() {
            self.explored += 1;
            let margin = self.settled_sum;
            debug_assert_eq!(self.unsettled, 0);
            if margin >= self.target() {
                self.best = Some((margin, self.cur.clone()));
            }
            return true;
        }
        let (u, w) = self.inst.edges[e];
        for take in [true, false] {
            if take && (self.load[u] >= self.inst.agents[u].capacity || self.load[w] >= self.inst.agents[w].capacity) {
                continue;
            }
            let saved = (self.ptr[u], self.ptr[w], self.settled[u], self.settled[w], self.settled_sum, self.unsettled);
            self.decided[e] = true;
            if take {
                self.cur.insert(e);
                self.load[u] += 1;
                self.load[w] += 1;
            }
            self.advance(u);
            self.advance(w);
            let ok = self.dfs(e + 1);
            if take {
                self.cur.remove(e);
                self.load[u] -= 1;
                self.load[w] -= 1;
            }
            self.decided[e] = false;
            (self.ptr[u], self.ptr[w], self.settled[u], self.settled[w], self.settled_sum, self.unsettled) = saved;
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Searches for a b-matching that beats `mu`.
///
/// The search is exhaustive with capacity pruning and a vote bound; among
/// dominating b-matchings it returns one of largest margin, the first in
/// include-before-exclude order. `budget` caps the number of explored
/// search leaves. Past it a seeded local search runs and, failing that,
/// the result is [`LexStatus::Incomplete`].
pub fn find_lex_dominating(inst: &BMatchingInstance, mu: &ElemSet, budget: u64) -> Result<LexStatus> {
    inst.require_b_matching(mu, "candidate")?;
    let n = inst.num_agents();
    let mut s = DominationSearch {
        inst,
        mu,
        cur: ElemSet::empty(inst.num_edges()),
        decided: vec![false; inst.num_edges()],
        load: vec![0; n],
        ptr: vec![0; n],
        settled: vec![None; n],
        settled_sum: 0,
        unsettled: n as i64,
        best: None,
        explored: 0,
        budget,
    };
    for v in 0..n {
        s.advance(v);
    }
    if s.dfs(0) {
        return Ok(match s.best {
            Some((margin, witness)) => LexStatus::Dominated { witness, margin },
            None => LexStatus::Popular,
        });
    }
    if let Some((margin, witness)) = s.best {
        return Ok(LexStatus::Dominated { witness, margin });
    }
    if let Some((margin, witness)) = local_search(inst, mu, budget) {
        return Ok(LexStatus::Dominated { witness, margin });
    }
    Ok(LexStatus::Incomplete { explored: s.explored })
}

/// Adds `e` to `x`, dropping the worst edge at each saturated endpoint.
fn add_with_drops(inst: &BMatchingInstance, x: &mut ElemSet, e: usize) {
    let (u, w) = inst.edges[e];
    for v in [u, w] {
        if inst.load(x, v) >= inst.agents[v].capacity {
            if let Some(&worst) = inst.agents[v].prefs.iter().rev().find(|&&f| x.contains(f)) {
                x.remove(worst);
            }
        }
    }
    x.insert(e);
}

/// Seeded hill climbing with sideways moves. Returns a dominating b-matching if one turns up.
fn local_search(inst: &BMatchingInstance, mu: &ElemSet, steps: u64) -> Option<(i64, ElemSet)> {
    let m = inst.num_edges();
    if m == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e7);
    let steps = steps.min(200_000);
    let mut cur = mu.clone();
    let mut cur_margin = 0;
    for step in 0..steps {
        if step % 2_000 == 0 && step > 0 {
            cur = mu.clone();
            cur_margin = 0;
        }
        let mut next = cur.clone();
        let e = rng.gen_range(0..m);
        if next.contains(e) {
            next.remove(e);
        } else {
            add_with_drops(inst, &mut next, e);
        }
        let margin = lex_vote_total(inst, &next, mu);
        if margin > 0 {
            return Some((margin, next));
        }
        if margin >= cur_margin || rng.gen_bool(0.1) {
            cur = next;
            cur_margin = margin;
        }
    }
    None
}

/// Exhaustive verdict; the budget only bounds the work.
pub fn is_lex_popular(inst: &BMatchingInstance, mu: &ElemSet, budget: u64) -> Result<LexStatus> {
    find_lex_dominating(inst, mu, budget)
}

/// Every b-matching of the instance, or a scale error past `limit`.
pub fn all_b_matchings(inst: &BMatchingInstance, limit: usize) -> Result<Vec<ElemSet>> {
    fn go(
        inst: &BMatchingInstance,
        e: usize,
        cur: &mut ElemSet,
        load: &mut [usize],
        out: &mut Vec<ElemSet>,
        limit: usize,
    ) -> bool {
        if e == inst.num_edges() {
            out.push(cur.clone());
            return out.len() <= limit;
        }
        let (u, w) = inst.edges[e];
        if load[u] < inst.agents[u].capacity && load[w] < inst.agents[w].capacity {
            cur.insert(e);
            load[u] += 1;
            load[w] += 1;
            let ok = go(inst, e + 1, cur, load, out, limit);
            cur.remove(e);
            load[u] -= 1;
            load[w] -= 1;
            if !ok {
                return false;
            }
        }
        go(inst, e + 1, cur, load, out, limit)
    }
    let mut out = Vec::new();
    let mut load = vec![0; inst.num_agents()];
    let mut cur = ElemSet::empty(inst.num_edges());
    if !go(inst, 0, &mut cur, &mut load, &mut out, limit) {
        return Err(Error::Scale {
            what: "b-matching count",
            size: out.len(),
            limit,
        });
    }
    Ok(out)
}

/// All lexicographically popular b-matchings, by pairwise comparison of every b-matching.
pub fn lex_popular_matchings(inst: &BMatchingInstance, limit: usize) -> Result<Vec<ElemSet>> {
    let all = all_b_matchings(inst, limit)?;
    let mut popular: Vec<ElemSet> = all
        .par_iter()
        .filter(|mu| all.iter().all(|other| lex_vote_total(inst, mu, other) >= 0))
        .cloned()
        .collect();
    popular.sort();
    Ok(popular)
}

fn decl(name: impl Into<String>, part: Part, capacity: usize, prefs: &[String]) -> AgentDecl {
    AgentDecl {
        name: name.into(),
        part,
        capacity,
        prefs: prefs.to_vec(),
    }
}

fn names(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Agent declarations of the seven-agent gadget with no lexicographically
/// popular b-matching. Names carry `prefix`; `x_head` goes in front of
/// `x`'s list and `flip` swaps the two sides.
fn example1_decls(prefix: &str, q: usize, x_head: &[String], flip: bool) -> Vec<AgentDecl> {
    let p = |s: &str| format!("{prefix}{s}");
    let list = |items: &[&str]| items.iter().map(|s| p(s)).collect::<Vec<_>>();
    let (left, right) = if flip { (Part::W, Part::U) } else { (Part::U, Part::W) };
    let mut x_prefs = x_head.to_vec();
    x_prefs.extend(list(&["v1", "v2"]));
    vec![
        decl(p("x"), left, q, &x_prefs),
        decl(p("u1"), left, 1, &list(&["v1", "v2"])),
        decl(p("u2"), left, 2, &list(&["v1", "v2"])),
        decl(p("u3"), left, 2, &list(&["v2", "v1"])),
        decl(p("u4"), left, 1, &list(&["v2", "v1"])),
        decl(p("v1"), right, 2, &list(&["u3", "u4", "u1", "x", "u2"])),
        decl(p("v2"), right, 2, &list(&["u2", "u1", "x", "u4", "u3"])),
    ]
}

/// The seven-agent gadget with capacity `q` for `x`, optionally with `q`
/// dummy agents `d1..dq` that only `x` accepts and that `x` ranks first.
pub fn build_example1(q: usize, with_dummies: bool) -> Result<BMatchingInstance> {
    if q == 0 {
        return Err(Error::input("capacity of x must be at least 1"));
    }
    let dummies: Vec<String> = if with_dummies {
        (1..=q).map(|i| format!("d{i}")).collect()
    } else {
        Vec::new()
    };
    let mut decls = example1_decls("", q, &dummies, false);
    for d in &dummies {
        decls.push(decl(d.clone(), Part::W, 1, &names(&["x"])));
    }
    BMatchingInstance::from_decls(&decls)
}

/// The gadget's candidate `{(u1,v1),(u2,v2),(u3,v1),(u4,v2)}` plus all dummy edges.
pub fn example1_candidate(inst: &BMatchingInstance) -> Result<ElemSet> {
    let mut mu = inst.edge_set(&[("u1", "v1"), ("u2", "v2"), ("u3", "v1"), ("u4", "v2")])?;
    let x = inst.agent_index("x")?;
    for &e in &inst.agent(x).prefs {
        if inst.agent(inst.partner(e, x)).name.starts_with('d') {
            mu.insert(e);
        }
    }
    Ok(mu)
}

/// Exact 3-cover instance over elements `0..3n`, with `3n` three-element sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X3CInstance {
    pub n: usize,
    pub sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(n: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("x3c instance needs n >= 1"));
        }
        if sets.len() != 3 * n {
            return Err(Error::input(format!("x3c instance needs {} sets, got {}", 3 * n, sets.len())));
        }
        let mut count = vec![0usize; 3 * n];
        for (j, s) in sets.iter().enumerate() {
            if s[0] == s[1] || s[0] == s[2] || s[1] == s[2] {
                return Err(Error::input(format!("set {} repeats an element", j + 1)));
            }
            for &i in s {
                if i >= 3 * n {
                    return Err(Error::input(format!("set {} has element {} outside 1..={}", j + 1, i + 1, 3 * n)));
                }
                count[i] += 1;
            }
        }
        if let Some(i) = count.iter().position(|&c| c != 3) {
            return Err(Error::input(format!(
                "element {} appears in {} sets instead of 3",
                i + 1,
                count[i]
            )));
        }
        Ok(X3CInstance { n, sets })
    }

    /// Indices of the three sets containing element `i`, increasing.
    pub fn sets_of(&self, i: usize) -> Vec<usize> {
        (0..self.sets.len()).filter(|&j| self.sets[j].contains(&i)).collect()
    }

    pub fn is_exact_cover(&self, cover: &[usize]) -> bool {
        let mut hit = vec![0usize; 3 * self.n];
        for &j in cover {
            if j >= self.sets.len() {
                return false;
            }
            for &i in &self.sets[j] {
                hit[i] += 1;
            }
        }
        hit.iter().all(|&h| h == 1)
    }
}

#[derive(Clone, Debug)]
pub struct X3CReduction {
    pub source: X3CInstance,
    pub instance: BMatchingInstance,
    /// The only b-matching that can be lexicographically popular.
    pub candidate: ElemSet,
    /// How the element agents are ordered at the head of each gadget's `x`.
    pub gadget_order_convention: &'static str,
}

const GADGET_ORDER_CONVENTION: &str = "element agents prepended to gadget x lists in increasing element index";
const GADGET_KINDS: [char; 3] = ['a', 'b', 'c'];

fn elem_agent(l: char, i: usize) -> String {
    format!("{l}{}", i + 1)
}

fn gadget_prefix(l: char, j: usize) -> String {
    format!("G{}{l}.", j + 1)
}

fn gadget_x(l: char, j: usize) -> String {
    format!("{}x", gadget_prefix(l, j))
}

/// The b-matching instance of the hardness reduction from exact 3-cover.
pub fn build_x3c_reduction(x3c: &X3CInstance) -> Result<X3CReduction> {
    let x3c = X3CInstance::new(x3c.n, x3c.sets.clone())?;
    let m = 3 * x3c.n;
    let next = |i: usize| (i + 1) % m;
    let prev = |i: usize| (i + m - 1) % m;
    let s_agent = |i: usize, l: usize| format!("s{}_{l}", i + 1);
    let mut decls = Vec::new();
    for i in 0..m {
        let xs = |l: char| x3c.sets_of(i).into_iter().map(move |j| gadget_x(l, j));
        let mut a = vec![elem_agent('b', i)];
        a.extend(xs('a'));
        a.push(elem_agent('d', prev(i)));
        let mut b = vec![elem_agent('c', i)];
        b.extend(xs('b'));
        b.push(elem_agent('a', i));
        let mut c = vec![elem_agent('d', i)];
        c.extend(xs('c'));
        c.push(elem_agent('b', i));
        let d = vec![elem_agent('a', next(i)), s_agent(i, 1), s_agent(i, 2), elem_agent('c', i)];
        decls.push(decl(elem_agent('a', i), Part::U, 3, &a));
        decls.push(decl(elem_agent('b', i), Part::W, 3, &b));
        decls.push(decl(elem_agent('c', i), Part::U, 3, &c));
        decls.push(decl(elem_agent('d', i), Part::W, 2, &d));
        for l in 1..=2 {
            decls.push(decl(s_agent(i, l), Part::U, 1, &[elem_agent('d', i), "t".to_string()]));
        }
    }
    for j in 0..m {
        for l in GADGET_KINDS {
            let mut members = x3c.sets[j].to_vec();
            members.sort_unstable();
            let head: Vec<String> = members.iter().map(|&i| elem_agent(l, i)).collect();
            // x sits opposite its element agents
            let flip = l != 'b';
            decls.extend(example1_decls(&gadget_prefix(l, j), 3, &head, flip));
        }
    }
    let t_prefs: Vec<String> = (0..m).flat_map(|i| [s_agent(i, 1), s_agent(i, 2)]).collect();
    decls.push(decl("t", Part::W, 3, &t_prefs));
    let instance = BMatchingInstance::from_decls(&decls)?;

    let mut pairs: Vec<(String, String)> = Vec::new();
    for (j, set) in x3c.sets.iter().enumerate() {
        for l in GADGET_KINDS {
            for &i in set {
                pairs.push((gadget_x(l, j), elem_agent(l, i)));
            }
            let p = gadget_prefix(l, j);
            for (u, v) in [("u1", "v1"), ("u2", "v2"), ("u3", "v1"), ("u4", "v2")] {
                pairs.push((format!("{p}{u}"), format!("{p}{v}")));
            }
        }
    }
    for i in 0..m {
        for l in 1..=2 {
            pairs.push((elem_agent('d', i), s_agent(i, l)));
        }
    }
    let candidate = instance.edge_set(&pairs)?;
    if !instance.is_b_matching(&candidate) {
        return Err(Error::invariant("reduction candidate violates a capacity"));
    }
    Ok(X3CReduction {
        source: x3c,
        instance,
        candidate,
        gadget_order_convention: GADGET_ORDER_CONVENTION,
    })
}

/// The b-matching that beats the candidate when `cover` (set indices) is an exact 3-cover.
pub fn x3c_domination_witness(red: &X3CReduction, cover: &[usize]) -> Result<ElemSet> {
    let x3c = &red.source;
    if !x3c.is_exact_cover(cover) {
        return Err(Error::input("the given sets are not an exact 3-cover"));
    }
    let m = 3 * x3c.n;
    let mut pairs: Vec<(String, String)> = Vec::new();
    for i in 0..m {
        pairs.push((elem_agent('a', i), elem_agent('b', i)));
        pairs.push((elem_agent('b', i), elem_agent('c', i)));
        pairs.push((elem_agent('c', i), elem_agent('d', i)));
        pairs.push((elem_agent('d', i), elem_agent('a', (i + 1) % m)));
        let j = *cover
            .iter()
            .find(|&&j| x3c.sets[j].contains(&i))
            .expect("exact cover hits every element");
        for l in GADGET_KINDS {
            pairs.push((elem_agent(l, i), gadget_x(l, j)));
        }
    }
    pairs.push(("t".into(), "s1_1".into()));
    for j in 0..m {
        for l in GADGET_KINDS {
            let p = gadget_prefix(l, j);
            for (u, v) in [("u1", "v1"), ("u2", "v2"), ("u3", "v1"), ("u4", "v2")] {
                pairs.push((format!("{p}{u}"), format!("{p}{v}")));
            }
        }
    }
    let witness = red.instance.edge_set(&pairs)?;
    if !red.instance.is_b_matching(&witness) {
        return Err(Error::invariant("domination witness violates a capacity"));
    }
    Ok(witness)
}

/// Instance with every capacity raised to the maximum, padded by dummy agents.
#[derive(Clone, Debug)]
pub struct Equalized {
    pub instance: BMatchingInstance,
    /// Dummy edges; original edges keep their indices.
    pub fixed: ElemSet,
    pub original_edges: usize,
}

impl Equalized {
    /// `mu` moved into the padded instance together with the fixed edges.
    pub fn lift(&self, mu: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.instance.num_edges(), mu.iter()).union(&self.fixed)
    }

    pub fn project(&self, mu: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.original_edges, mu.iter().filter(|&e| e < self.original_edges))
    }
}

/// Gives every agent the maximum capacity `q`. An agent of capacity `c < q`
/// gets `q - c` dummy partners of capacity `q` that accept only it and that
/// it ranks above everyone else.
pub fn equalize_capacities(inst: &BMatchingInstance) -> Result<Equalized> {
    let q = inst.max_capacity();
    let mut agents: Vec<(String, Part, usize)> = inst
        .agents
        .iter()
        .map(|a| (a.name.clone(), a.part, q))
        .collect();
    let mut edges = inst.edges.clone();
    let mut prefs: Vec<Vec<usize>> = inst.agents.iter().map(|a| a.prefs.clone()).collect();
    let m = edges.len();
    for (v, a) in inst.agents.iter().enumerate() {
        let mut head = Vec::new();
        for k in 1..=q - a.capacity {
            let d = agents.len();
            agents.push((format!("{}.d{k}", a.name), a.part.other(), q));
            let e = edges.len();
            edges.push(if a.part == Part::U { (v, d) } else { (d, v) });
            prefs.push(vec![e]);
            head.push(e);
        }
        head.extend(prefs[v].iter().copied());
        prefs[v] = head;
    }
    let total = edges.len();
    let instance = BMatchingInstance::new(agents, edges, prefs)?;
    Ok(Equalized {
        instance,
        fixed: ElemSet::from_indices(total, m..total),
        original_edges: m,
    })
}

/// Random bipartite instance for tests and the generator.
pub fn random_bmatching(
    seed: u64,
    nu: usize,
    nw: usize,
    edge_prob: f64,
    max_capacity: usize,
) -> Result<BMatchingInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agents = Vec::new();
    for k in 0..nu {
        agents.push((format!("u{}", k + 1), Part::U, rng.gen_range(1..=max_capacity.max(1))));
    }
    for k in 0..nw {
        agents.push((format!("w{}", k + 1), Part::W, rng.gen_range(1..=max_capacity.max(1))));
    }
    let mut edges = Vec::new();
    for u in 0..nu {
        for w in 0..nw {
            if rng.gen_bool(edge_prob) {
                edges.push((u, nu + w));
            }
        }
    }
    let mut prefs = vec![Vec::new(); nu + nw];
    for (e, &(u, w)) in edges.iter().enumerate() {
        prefs[u].push(e);
        prefs[w].push(e);
    }
    for p in &mut prefs {
        p.shuffle(&mut rng);
    }
    BMatchingInstance::new(agents, edges, prefs)
}
