//! Matroids given by independence oracles.
//!
//! Every family is queried only through [`Matroid::is_independent`];
//! circuits, ranks and greedy bases are derived from that oracle.

mod axioms;
mod ground;
mod ordered;

use std::collections::HashSet;

pub use axioms::{all_circuits, check_axioms, AXIOM_CHECK_LIMIT};
pub use ground::GroundSet;
pub use ordered::OrderedMatroid;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Matroid {
    ground: GroundSet,
    kind: MatroidKind,
}

#[derive(Clone, Debug)]
pub enum MatroidKind {
    Free,
    Uniform {
        rank: usize,
    },
    /// Each element lies in exactly one class.
    Partition {
        class_of: Vec<usize>,
        capacities: Vec<usize>,
    },
    /// Capacities on a laminar family; elements outside every set are free.
    Laminar {
        sets: Vec<(ElemSet, usize)>,
    },
    /// Element `e` is the edge `ends[e]` of a multigraph on `vertices` vertices.
    Graphic {
        vertices: usize,
        ends: Vec<(usize, usize)>,
    },
    /// Element `e` may be assigned to any target in `adjacency[e]`; a set is
    /// independent iff it can be matched into distinct targets.
    Transversal {
        targets: usize,
        adjacency: Vec<Vec<usize>>,
    },
    Explicit {
        family: HashSet<ElemSet>,
    },
    /// `(base | to_base) / contract`, optionally truncated.
    Minor {
        base: Box<Matroid>,
        to_base: Vec<usize>,
        contract: ElemSet,
        truncate: Option<usize>,
    },
    /// `parts[k].1[local] = global index` of the part's elements.
    DirectSum {
        parts: Vec<(Matroid, Vec<usize>)>,
        locate: Vec<(usize, usize)>,
    },
    /// Two parallel copies of every base element: index `e` and `e + n` both
    /// project onto `e`, and at most one copy may be used.
    Copies {
        base: Box<Matroid>,
    },
}

/// Block decomposition of a ground set into the summands of a direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumStructure {
    block_of: Vec<usize>,
    blocks: Vec<ElemSet>,
}

impl DirectSumStructure {
    pub fn new(universe: usize, blocks: Vec<ElemSet>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; universe];
        for (k, b) in blocks.iter().enumerate() {
            if b.universe() != universe {
                return Err(Error::input("block over a different ground set"));
            }
            for e in b {
                if block_of[e] != usize::MAX {
                    return Err(Error::input(format!("element {e} lies in two blocks")));
                }
                block_of[e] = k;
            }
        }
        if let Some(e) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::input(format!("element {e} lies in no block")));
        }
        Ok(DirectSumStructure { block_of, blocks })
    }

    /// The trivial decomposition with a single block.
    pub fn single(universe: usize) -> Self {
        DirectSumStructure {
            block_of: vec![0; universe],
            blocks: vec![ElemSet::full(universe)],
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[ElemSet] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &ElemSet {
        &self.blocks[k]
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.block_of[e]
    }

    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    /// Exhaustively checks that `m` really decomposes along these blocks.
    pub fn is_consistent_with(&self, m: &Matroid) -> Result<bool> {
        let n = m.len();
        if n > AXIOM_CHECK_LIMIT {
            return Err(Error::Scale {
                what: "ground set",
                size: n,
                limit: AXIOM_CHECK_LIMIT,
            });
        }
        for mask in 0u64..(1 << n) {
            let x = ElemSet::from_mask(n, mask);
            let blockwise = self
                .blocks
                .iter()
                .all(|b| m.is_independent(&x.intersection(b)));
            if blockwise != m.is_independent(&x) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Matroid {
    fn with_kind(ground: GroundSet, kind: MatroidKind) -> Self {
        Matroid { ground, kind }
    }

    pub fn free(ground: GroundSet) -> Self {
        Self::with_kind(ground, MatroidKind::Free)
    }

    pub fn uniform(ground: GroundSet, rank: usize) -> Self {
        Self::with_kind(ground, MatroidKind::Uniform { rank })
    }

    /// Partition matroid from `(class elements, capacity)` pairs that cover the ground set.
    pub fn partition(ground: GroundSet, classes: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        let n = ground.len();
        let mut class_of = vec![usize::MAX; n];
        let mut capacities = Vec::with_capacity(classes.len());
        for (k, (elems, cap)) in classes.into_iter().enumerate() {
            for e in elems {
                if e >= n {
                    return Err(Error::input(format!("partition class uses element {e} outside ground set")));
                }
                if class_of[e] != usize::MAX {
                    return Err(Error::input(format!(
                        "element {:?} in two partition classes",
                        ground.name(e)
                    )));
                }
                class_of[e] = k;
            }
            capacities.push(cap);
        }
        if let Some(e) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::input(format!(
                "element {:?} in no partition class",
                ground.name(e)
            )));
        }
        Ok(Self::with_kind(ground, MatroidKind::Partition { class_of, capacities }))
    }

    pub fn laminar(ground: GroundSet, sets: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        let n = ground.len();
        let mut family = Vec::with_capacity(sets.len());
        for (elems, cap) in sets {
            if let Some(&e) = elems.iter().find(|&&e| e >= n) {
                return Err(Error::input(format!("laminar set uses element {e} outside ground set")));
            }
            family.push((ElemSet::from_indices(n, elems), cap));
        }
        for (a, (x, _)) in family.iter().enumerate() {
            for (y, _) in &family[a + 1..] {
                if !(x.is_disjoint(y) || x.is_subset(y) || y.is_subset(x)) {
                    return Err(Error::input("capacity sets are not laminar"));
                }
            }
        }
        Ok(Self::with_kind(ground, MatroidKind::Laminar { sets: family }))
    }

    pub fn graphic(ground: GroundSet, ends: Vec<(usize, usize)>) -> Result<Self> {
        if ends.len() != ground.len() {
            return Err(Error::input("graphic matroid needs one edge per element"));
        }
        let vertices = ends.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Ok(Self::with_kind(ground, MatroidKind::Graphic { vertices, ends }))
    }

    pub fn transversal(ground: GroundSet, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        if adjacency.len() != ground.len() {
            return Err(Error::input("transversal matroid needs one adjacency list per element"));
        }
        let targets = adjacency.iter().flatten().map(|&t| t + 1).max().unwrap_or(0);
        Ok(Self::with_kind(ground, MatroidKind::Transversal { targets, adjacency }))
    }

    /// Matroid given by its full list of independent sets. The family is not
    /// validated here; use [`check_axioms`].
    pub fn explicit<I: IntoIterator<Item = ElemSet>>(ground: GroundSet, family: I) -> Result<Self> {
        let n = ground.len();
        let family: HashSet<ElemSet> = family.into_iter().collect();
        if family.iter().any(|s| s.universe() != n) {
            return Err(Error::input("independent set over a different ground set"));
        }
        Ok(Self::with_kind(ground, MatroidKind::Explicit { family }))
    }

    /// Stores every independent set of `m` explicitly. Exponential; small ground sets only.
    pub fn materialize(m: &Matroid) -> Result<Self> {
        let n = m.len();
        if n > AXIOM_CHECK_LIMIT {
            return Err(Error::Scale {
                what: "ground set",
                size: n,
                limit: AXIOM_CHECK_LIMIT,
            });
        }
        let family = (0u64..1 << n)
            .map(|mask| ElemSet::from_mask(n, mask))
            .filter(|x| m.is_independent(x));
        Self::explicit(m.ground.clone(), family)
    }

    /// `(m | restrict_to) / contract`, truncated to `truncate_to` if given.
    ///
    /// The ground set of the result is `restrict_to - contract`, in the order of
    /// `m`'s ground set.
    pub fn derive_minor(
        &self,
        restrict_to: &ElemSet,
        contract: &ElemSet,
        truncate_to: Option<usize>,
    ) -> Result<Self> {
        if restrict_to.universe() != self.len() || contract.universe() != self.len() {
            return Err(Error::input("minor sets are over a different ground set"));
        }
        if !contract.is_subset(restrict_to) {
            return Err(Error::input("contraction set is not inside the restriction"));
        }
        if !self.is_independent(contract) {
            return Err(Error::input("contraction set is dependent"));
        }
        let to_base: Vec<usize> = restrict_to.difference(contract).to_vec();
        let ground = GroundSet::new(to_base.iter().map(|&e| self.ground.name(e).to_string()))?;
        Ok(Self::with_kind(
            ground,
            MatroidKind::Minor {
                base: Box::new(self.clone()),
                to_base,
                contract: contract.clone(),
                truncate: truncate_to,
            },
        ))
    }

    /// Direct sum over the concatenation of the parts' ground sets.
    pub fn direct_sum(parts: Vec<Matroid>) -> Result<(Self, DirectSumStructure)> {
        let names: Vec<String> = parts
            .iter()
            .flat_map(|p| p.ground.names().iter().cloned())
            .collect();
        let ground = GroundSet::new(names)
            .map_err(|_| Error::input("direct sum parts have overlapping ground sets"))?;
        Self::direct_sum_over(ground, parts)
    }

    /// Direct sum whose parts are placed onto an existing ground set by
    /// element name. The parts must partition `ground`.
    pub fn direct_sum_over(ground: GroundSet, parts: Vec<Matroid>) -> Result<(Self, DirectSumStructure)> {
        let n = ground.len();
        let mut locate = vec![(usize::MAX, usize::MAX); n];
        let mut placed = Vec::with_capacity(parts.len());
        let mut blocks = Vec::with_capacity(parts.len());
        for (k, part) in parts.into_iter().enumerate() {
            let mut map = Vec::with_capacity(part.len());
            for (local, name) in part.ground.names().iter().enumerate() {
                let g = ground.index_of(name)?;
                if locate[g].0 != usize::MAX {
                    return Err(Error::input(format!(
                        "element {name:?} belongs to two direct-sum parts"
                    )));
                }
                locate[g] = (k, local);
                map.push(g);
            }
            blocks.push(ElemSet::from_indices(n, map.iter().copied()));
            placed.push((part, map));
        }
        if let Some(e) = locate.iter().position(|l| l.0 == usize::MAX) {
            return Err(Error::input(format!(
                "element {:?} is not covered by any direct-sum part",
                ground.name(e)
            )));
        }
        let structure = DirectSumStructure::new(n, blocks)?;
        Ok((
            Self::with_kind(ground, MatroidKind::DirectSum { parts: placed, locate }),
            structure,
        ))
    }

    /// Doubles every element into an `x` copy (index `e`) and a `y` copy
    /// (index `e + n`). A set is independent iff it holds at most one copy of
    /// each element and its projection is independent in `self`.
    pub fn parallel_copies(&self) -> Self {
        let names = self
            .ground
            .names()
            .iter()
            .map(|n| format!("x({n})"))
            .chain(self.ground.names().iter().map(|n| format!("y({n})")));
        let ground = GroundSet::new(names).expect("copies of distinct names are distinct");
        Self::with_kind(ground, MatroidKind::Copies { base: Box::new(self.clone()) })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// Independence oracle. `x` must be a set over this matroid's ground set.
    pub fn is_independent(&self, x: &ElemSet) -> bool {
        debug_assert_eq!(x.universe(), self.len());
        match &self.kind {
            MatroidKind::Free => true,
            MatroidKind::Uniform { rank } => x.len() <= *rank,
            MatroidKind::Partition { class_of, capacities } => {
                let mut used = vec![0usize; capacities.len()];
                for e in x {
                    let c = class_of[e];
                    used[c] += 1;
                    if used[c] > capacities[c] {
                        return false;
                    }
                }
                true
            }
            MatroidKind::Laminar { sets } => sets
                .iter()
                .all(|(s, cap)| x.intersection(s).len() <= *cap),
            MatroidKind::Graphic { vertices, ends } => is_forest(*vertices, x.iter().map(|e| ends[e])),
            MatroidKind::Transversal { targets, adjacency } => {
                is_matchable(*targets, &x.iter().map(|e| &adjacency[e][..]).collect::<Vec<_>>())
            }
            MatroidKind::Explicit { family } => family.contains(x),
            MatroidKind::Minor {
                base,
                to_base,
                contract,
                truncate,
            } => {
                if truncate.is_some_and(|t| x.len() > t) {
                    return false;
                }
                let mut y = contract.clone();
                for e in x {
                    y.insert(to_base[e]);
                }
                base.is_independent(&y)
            }
            MatroidKind::DirectSum { parts, locate } => {
                let mut local: Vec<ElemSet> = parts.iter().map(|(m, _)| ElemSet::empty(m.len())).collect();
                for e in x {
                    let (k, l) = locate[e];
                    local[k].insert(l);
                }
                parts
                    .iter()
                    .zip(&local)
                    .all(|((m, _), s)| m.is_independent(s))
            }
            MatroidKind::Copies { base } => {
                let n = base.len();
                let mut proj = ElemSet::empty(n);
                for e in x {
                    if !proj.insert(e % n) {
                        return false;
                    }
                }
                base.is_independent(&proj)
            }
        }
    }

    /// Name-based independence query.
    pub fn is_independent_names<S: AsRef<str>>(&self, names: &[S]) -> Result<bool> {
        Ok(self.is_independent(&self.ground.set(names)?))
    }

    /// Size of a maximal independent subset of `x`.
    pub fn rank_of(&self, x: &ElemSet) -> usize {
        let mut acc = ElemSet::empty(self.len());
        for e in x {
            acc.insert(e);
            if !self.is_independent(&acc) {
                acc.remove(e);
            }
        }
        acc.len()
    }

    pub fn rank(&self) -> usize {
        self.rank_of(&self.ground.full_set())
    }

    pub fn is_base(&self, x: &ElemSet) -> bool {
        self.is_independent(x) && (0..self.len()).all(|e| x.contains(e) || !self.is_independent(&x.with(e)))
    }

    /// A circuit inside `x`, or `None` when `x` is independent.
    ///
    /// Shrinks `x` one element at a time while it stays dependent; the result
    /// is minimal dependent. For `x = B + e` with `B` independent this is the
    /// unique fundamental circuit.
    pub fn find_circuit(&self, x: &ElemSet) -> Option<ElemSet> {
        if self.is_independent(x) {
            return None;
        }
        let mut c = x.clone();
        for e in x {
            let smaller = c.without(e);
            if !self.is_independent(&smaller) {
                c = smaller;
            }
        }
        Some(c)
    }

    /// True if some element is dependent on its own.
    pub fn has_loop(&self) -> Option<usize> {
        (0..self.len()).find(|&e| !self.is_independent(&ElemSet::from_indices(self.len(), [e])))
    }
}

fn is_forest(vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

// Kuhn's augmenting paths; every left item must be matched.
fn is_matchable(targets: usize, items: &[&[usize]]) -> bool {
    if items.len() > targets {
        return false;
    }
    let mut owner = vec![usize::MAX; targets];
    fn augment(i: usize, items: &[&[usize]], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &t in items[i] {
            if !seen[t] {
                seen[t] = true;
                if owner[t] == usize::MAX || augment(owner[t], items, owner, seen) {
                    owner[t] = i;
                    return true;
                }
            }
        }
        false
    }
    for i in 0..items.len() {
        let mut seen = vec![false; targets];
        if !augment(i, items, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Matroid {
        let g = GroundSet::new(["e12", "e13", "e23"]).unwrap();
        Matroid::graphic(g, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn empty_set_is_independent_everywhere() {
        let g = GroundSet::numbered(3);
        for m in [
            Matroid::free(g.clone()),
            Matroid::uniform(g.clone(), 0),
            k3(),
            Matroid::explicit(g.clone(), [ElemSet::empty(3)]).unwrap(),
        ] {
            assert!(m.is_independent(&ElemSet::empty(3)));
        }
    }

    #[test]
    fn triangle_is_dependent() {
        assert!(!k3().is_independent_names(&["e12", "e13", "e23"]).unwrap());
        assert!(k3().is_independent_names(&["e12", "e13"]).unwrap());
    }

    #[test]
    fn unknown_element_is_input_error() {
        assert!(matches!(k3().is_independent_names(&["e99"]), Err(Error::Input(_))));
    }

    #[test]
    fn partition_capacity() {
        let g = GroundSet::new(["a", "b"]).unwrap();
        let m = Matroid::partition(g, vec![(vec![0, 1], 1)]).unwrap();
        assert!(!m.is_independent_names(&["a", "b"]).unwrap());
        assert!(m.is_independent_names(&["b"]).unwrap());
    }

    #[test]
    fn partition_must_cover() {
        let g = GroundSet::new(["a", "b"]).unwrap();
        assert!(Matroid::partition(g.clone(), vec![(vec![0], 1)]).is_err());
        assert!(Matroid::partition(g, vec![(vec![0, 1], 1), (vec![1], 1)]).is_err());
    }

    #[test]
    fn circuits() {
        let m = k3();
        assert_eq!(m.find_circuit(&m.ground().set(&["e12", "e13"]).unwrap()), None);
        let all = m.ground().full_set();
        assert_eq!(m.find_circuit(&all), Some(all.clone()));

        let u = Matroid::uniform(GroundSet::new(["a", "b", "c"]).unwrap(), 1);
        let c = u.find_circuit(&ElemSet::full(3)).unwrap();
        assert_eq!(c.len(), 2);
        for e in &c {
            assert!(u.is_independent(&c.without(e)));
        }
    }

    #[test]
    fn minor_of_triangle() {
        let m = k3();
        let all = m.ground().full_set();
        let c = m.ground().set(&["e12"]).unwrap();
        let minor = m.derive_minor(&all, &c, None).unwrap();
        assert_eq!(minor.ground().names(), &["e13", "e23"]);
        assert!(!minor.is_independent_names(&["e13", "e23"]).unwrap());
        assert!(minor.is_independent_names(&["e13"]).unwrap());
        assert_eq!(minor.rank(), 1);
    }

    #[test]
    fn minor_identity_and_truncation() {
        let m = k3();
        let all = m.ground().full_set();
        let id = m.derive_minor(&all, &ElemSet::empty(3), None).unwrap();
        for mask in 0..8 {
            let x = ElemSet::from_mask(3, mask);
            assert_eq!(id.is_independent(&x), m.is_independent(&x));
        }
        let free = Matroid::free(GroundSet::new(["a", "b", "c"]).unwrap());
        let t = free.derive_minor(&ElemSet::full(3), &ElemSet::empty(3), Some(2)).unwrap();
        assert!(!t.is_independent(&ElemSet::full(3)));
        assert!(t.is_independent_names(&["a", "c"]).unwrap());
    }

    #[test]
    fn dependent_contraction_rejected() {
        let m = k3();
        let all = m.ground().full_set();
        assert!(matches!(m.derive_minor(&all, &all, None), Err(Error::Input(_))));
    }

    #[test]
    fn direct_sum_blockwise() {
        let p = Matroid::uniform(GroundSet::new(["a", "b"]).unwrap(), 1);
        let q = Matroid::uniform(GroundSet::new(["c", "d"]).unwrap(), 1);
        let (m, s) = Matroid::direct_sum(vec![p, q]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(m.is_independent_names(&["a", "c"]).unwrap());
        assert!(!m.is_independent_names(&["a", "b"]).unwrap());
        assert!(s.is_consistent_with(&m).unwrap());
    }

    #[test]
    fn direct_sum_single_part_is_identity() {
        let (m, s) = Matroid::direct_sum(vec![k3()]).unwrap();
        assert_eq!(s.len(), 1);
        for mask in 0..8 {
            let x = ElemSet::from_mask(3, mask);
            assert_eq!(m.is_independent(&x), k3().is_independent(&x));
        }
    }

    #[test]
    fn direct_sum_overlap_rejected() {
        let p = Matroid::free(GroundSet::new(["a"]).unwrap());
        assert!(Matroid::direct_sum(vec![p.clone(), p]).is_err());
    }

    #[test]
    fn direct_sum_of_uniforms_equals_partition() {
        // one side of a 2x2 stable-marriage market, built two ways
        let names = ["m1w1", "m1w2", "m2w1", "m2w2"];
        let g = GroundSet::new(names).unwrap();
        let direct = Matroid::partition(g.clone(), vec![(vec![0, 1], 1), (vec![2, 3], 1)]).unwrap();
        let m1 = Matroid::uniform(GroundSet::new(["m1w1", "m1w2"]).unwrap(), 1);
        let m2 = Matroid::uniform(GroundSet::new(["m2w1", "m2w2"]).unwrap(), 1);
        let (sum, _) = Matroid::direct_sum_over(g, vec![m2, m1]).unwrap();
        for mask in 0..16 {
            let x = ElemSet::from_mask(4, mask);
            assert_eq!(sum.is_independent(&x), direct.is_independent(&x));
        }
    }

    #[test]
    fn transversal_matchability() {
        // a,b only to target 0; c to 0 or 1
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        let m = Matroid::transversal(g, vec![vec![0], vec![0], vec![0, 1]]).unwrap();
        assert!(m.is_independent_names(&["a", "c"]).unwrap());
        assert!(!m.is_independent_names(&["a", "b"]).unwrap());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn laminar_caps() {
        let g = GroundSet::numbered(4);
        let m = Matroid::laminar(g.clone(), vec![(vec![0, 1, 2], 2), (vec![0, 1], 1)]).unwrap();
        assert!(!m.is_independent(&ElemSet::from_indices(4, [0, 1])));
        assert!(m.is_independent(&ElemSet::from_indices(4, [0, 2, 3])));
        assert!(Matroid::laminar(g, vec![(vec![0, 1], 1), (vec![1, 2], 1)]).is_err());
    }

    #[test]
    fn copies_allow_one_copy() {
        let m = Matroid::free(GroundSet::new(["a"]).unwrap()).parallel_copies();
        assert_eq!(m.ground().names(), &["x(a)", "y(a)"]);
        assert!(m.is_independent_names(&["y(a)"]).unwrap());
        assert!(!m.is_independent(&ElemSet::full(2)));
    }
}
