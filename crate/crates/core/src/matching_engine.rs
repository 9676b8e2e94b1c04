//! Exact integer bipartite optimization.
//!
//! A Hungarian solver with explicit vertex potentials backs every routine
//! here: maximum/minimum weight perfect matching (with a dual certificate)
//! and minimum cost matching that must cover a given vertex set.

use crate::error::{Error, Result};

/// Bipartite graph with integer edge weights. Vertices are `0..left` and `0..right`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipartiteWeightedGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize, i64)>,
}

impl BipartiteWeightedGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteWeightedGraph {
            left,
            right,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(left: usize, right: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        let mut g = Self::new(left, right);
        for &(l, r, w) in edges {
            g.add_edge(l, r, w)?;
        }
        Ok(g)
    }

    /// Adds `(l, r)`. Repeating an edge with the same weight is a no-op; with a
    /// different weight it is an error.
    pub fn add_edge(&mut self, l: usize, r: usize, w: i64) -> Result<()> {
        if l >= self.left || r >= self.right {
            return Err(Error::input(format!("edge ({l},{r}) outside {}x{} graph", self.left, self.right)));
        }
        if let Some(&(_, _, old)) = self.edges.iter().find(|&&(a, b, _)| a == l && b == r) {
            if old != w {
                return Err(Error::input(format!("parallel edges ({l},{r}) with weights {old} and {w}")));
            }
            return Ok(());
        }
        self.edges.push((l, r, w));
        Ok(())
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn weight(&self, l: usize, r: usize) -> Option<i64> {
        self.edges
            .iter()
            .find(|&&(a, b, _)| a == l && b == r)
            .map(|&(_, _, w)| w)
    }

    pub fn negated(&self) -> Self {
        BipartiteWeightedGraph {
            left: self.left,
            right: self.right,
            edges: self.edges.iter().map(|&(l, r, w)| (l, r, -w)).collect(),
        }
    }

    fn dense(&self) -> Vec<Vec<Option<i64>>> {
        let mut m = vec![vec![None; self.right]; self.left];
        for &(l, r, w) in &self.edges {
            m[l][r] = Some(w);
        }
        m
    }

    fn max_abs_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.2.abs()).max().unwrap_or(0)
    }
}

/// Integer vertex potentials for a maximum weight perfect matching:
/// `left[l] + right[r] >= w(l, r)` on every edge, and the potentials sum to
/// the optimum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualCertificate {
    pub left: Vec<i64>,
    pub right: Vec<i64>,
}

impl DualCertificate {
    pub fn total(&self) -> i64 {
        self.left.iter().sum::<i64>() + self.right.iter().sum::<i64>()
    }

    pub fn covers(&self, l: usize, r: usize, w: i64) -> bool {
        self.left[l] + self.right[r] >= w
    }

    /// Checks edge feasibility on `g` and that the potentials sum to `optimum`.
    pub fn certifies(&self, g: &BipartiteWeightedGraph, optimum: i64) -> bool {
        self.left.len() == g.left
            && self.right.len() == g.right
            && self.total() == optimum
            && g.edges.iter().all(|&(l, r, w)| self.covers(l, r, w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMatching {
    /// `(left, right)` pairs, sorted by left vertex.
    pub pairs: Vec<(usize, usize)>,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedMatching {
    pub matching: WeightedMatching,
    pub certificate: DualCertificate,
}

/// Minimum cost perfect assignment on a square cost matrix.
///
/// Returns `(row -> column, row potentials, column potentials)` with
/// `u[i] + v[j] <= cost[i][j]` everywhere and equality on the assignment.
fn hungarian(cost: &[Vec<i64>]) -> (Vec<usize>, Vec<i64>, Vec<i64>) {
    let n = cost.len();
    const INF: i64 = i64::MAX / 4;
    // 1-based, column 0 is the virtual root of each search
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        assign[owner[j] - 1] = j - 1;
    }
    (assign, u[1..].to_vec(), v[1..].to_vec())
}

/// Maximum weight perfect matching with a dual certificate, or `None` when
/// the graph has no perfect matching.
pub fn max_weight_perfect_matching(g: &BipartiteWeightedGraph) -> Option<CertifiedMatching> {
    if g.left != g.right {
        return None;
    }
    let n = g.left;
    let dense = g.dense();
    // Any assignment through a missing edge costs more than every real one.
    let forbidden = 2 * (n as i64) * (g.max_abs_weight() + 1) + 1;
    let cost: Vec<Vec<i64>> = dense
        .iter()
        .map(|row| row.iter().map(|w| w.map_or(forbidden, |w| -w)).collect())
        .collect();
    let (assign, u, v) = hungarian(&cost);
    let mut pairs = Vec::with_capacity(n);
    let mut weight = 0;
    for (l, &r) in assign.iter().enumerate() {
        weight += dense[l][r]?;
        pairs.push((l, r));
    }
    let certificate = DualCertificate {
        left: u.iter().map(|x| -x).collect(),
        right: v.iter().map(|x| -x).collect(),
    };
    debug_assert!(certificate.certifies(g, weight));
    Some(CertifiedMatching {
        matching: WeightedMatching { pairs, weight },
        certificate,
    })
}

/// Minimum weight perfect matching, or `None` when none exists.
pub fn min_weight_perfect_matching(g: &BipartiteWeightedGraph) -> Option<WeightedMatching> {
    max_weight_perfect_matching(&g.negated()).map(|c| WeightedMatching {
        pairs: c.matching.pairs,
        weight: -c.matching.weight,
    })
}

/// Minimum cost matching (not necessarily perfect) that covers every
/// vertex in `mandatory_left` and `mandatory_right`; unmatched vertices cost
/// nothing. `None` when no such matching exists.
pub fn min_cost_cover_matching(
    g: &BipartiteWeightedGraph,
    mandatory_left: &[usize],
    mandatory_right: &[usize],
) -> Result<Option<WeightedMatching>> {
    let (nl, nr) = (g.left, g.right);
    if mandatory_left.iter().any(|&l| l >= nl) || mandatory_right.iter().any(|&r| r >= nr) {
        return Err(Error::input("mandatory vertex outside the graph"));
    }
    let mut must_l = vec![false; nl];
    let mut must_r = vec![false; nr];
    mandatory_left.iter().for_each(|&l| must_l[l] = true);
    mandatory_right.iter().for_each(|&r| must_r[r] = true);

    // Rows: left vertices, then one stand-in per right vertex.
    // Columns: right vertices, then one stand-in per left vertex.
    // A left vertex may sit out on its own stand-in column (unless mandatory),
    // and symmetrically for right vertices.
    let n = nl + nr;
    let forbidden = 2 * (n as i64) * (g.max_abs_weight() + 1) + 1;
    let mut cost = vec![vec![forbidden; n]; n];
    for &(l, r, w) in &g.edges {
        cost[l][r] = w;
    }
    for l in 0..nl {
        if !must_l[l] {
            cost[l][nr + l] = 0;
        }
    }
    for r in 0..nr {
        if !must_r[r] {
            cost[nl + r][r] = 0;
        }
        for l in 0..nl {
            cost[nl + r][nr + l] = 0;
        }
    }
    let (assign, _, _) = hungarian(&cost);
    let mut pairs = Vec::new();
    let mut weight = 0;
    for (row, &col) in assign.iter().enumerate() {
        if cost[row][col] == forbidden {
            return Ok(None);
        }
        if row < nl && col < nr {
            pairs.push((row, col));
            weight += cost[row][col];
        }
    }
    Ok(Some(WeightedMatching { pairs, weight }))
}

/// Exhaustive enumerators used as independent oracles for the solvers.
pub mod brute {
    use super::BipartiteWeightedGraph;

    /// Every matching of `g` (including the empty one), as sorted pair lists.
    pub fn all_matchings(g: &BipartiteWeightedGraph) -> Vec<Vec<(usize, usize)>> {
        let adj = adjacency(g);
        let mut out = Vec::new();
        let mut used = vec![false; g.right()];
        let mut cur = Vec::new();
        rec(&adj, 0, &mut used, &mut cur, &mut out, false);
        out
    }

    /// Every perfect matching of `g`.
    pub fn all_perfect_matchings(g: &BipartiteWeightedGraph) -> Vec<Vec<(usize, usize)>> {
        if g.left() != g.right() {
            return Vec::new();
        }
        let adj = adjacency(g);
        let mut out = Vec::new();
        let mut used = vec![false; g.right()];
        let mut cur = Vec::new();
        rec(&adj, 0, &mut used, &mut cur, &mut out, true);
        out
    }

    pub fn weight_of(g: &BipartiteWeightedGraph, m: &[(usize, usize)]) -> i64 {
        m.iter().map(|&(l, r)| g.weight(l, r).expect("edge of g")).sum()
    }

    fn adjacency(g: &BipartiteWeightedGraph) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); g.left()];
        for &(l, r, _) in g.edges() {
            adj[l].push(r);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    fn rec(
        adj: &[Vec<usize>],
        l: usize,
        used: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        perfect: bool,
    ) {
        if l == adj.len() {
            out.push(cur.clone());
            return;
        }
        if !perfect {
            rec(adj, l + 1, used, cur, out, perfect);
        }
        for &r in &adj[l] {
            if !used[r] {
                used[r] = true;
                cur.push((l, r));
                rec(adj, l + 1, used, cur, out, perfect);
                cur.pop();
                used[r] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let g = BipartiteWeightedGraph::from_edges(1, 1, &[(0, 0, 5)]).unwrap();
        let c = max_weight_perfect_matching(&g).unwrap();
        assert_eq!(c.matching.weight, 5);
        assert_eq!(c.certificate.total(), 5);
        assert_eq!(min_weight_perfect_matching(&g).unwrap().weight, 5);
    }

    #[test]
    fn two_by_two_complete() {
        let g = BipartiteWeightedGraph::from_edges(2, 2, &[(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 0)]).unwrap();
        let c = max_weight_perfect_matching(&g).unwrap();
        assert_eq!(c.matching.weight, 1);
        assert_eq!(c.matching.pairs, vec![(0, 0), (1, 1)]);
        assert!(c.certificate.certifies(&g, 1));
        assert_eq!(min_weight_perfect_matching(&g).unwrap().weight, 0);
    }

    #[test]
    fn isolated_vertex_is_infeasible() {
        let g = BipartiteWeightedGraph::from_edges(2, 2, &[(0, 0, 0), (0, 1, 0)]).unwrap();
        assert!(max_weight_perfect_matching(&g).is_none());
        assert!(min_weight_perfect_matching(&g).is_none());
    }

    #[test]
    fn empty_graph() {
        let g = BipartiteWeightedGraph::new(0, 0);
        let m = min_weight_perfect_matching(&g).unwrap();
        assert_eq!(m.weight, 0);
        assert!(m.pairs.is_empty());
    }

    #[test]
    fn parallel_edges() {
        let mut g = BipartiteWeightedGraph::new(1, 1);
        g.add_edge(0, 0, 2).unwrap();
        g.add_edge(0, 0, 2).unwrap();
        assert!(g.add_edge(0, 0, 3).is_err());
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn cover_matching_examples() {
        let g = BipartiteWeightedGraph::from_edges(2, 2, &[(0, 0, 1), (1, 1, 2)]).unwrap();
        let m = min_cost_cover_matching(&g, &[], &[]).unwrap().unwrap();
        assert_eq!((m.weight, m.pairs.len()), (0, 0));

        let g = BipartiteWeightedGraph::from_edges(1, 1, &[(0, 0, 1)]).unwrap();
        let m = min_cost_cover_matching(&g, &[], &[0]).unwrap().unwrap();
        assert_eq!(m.pairs, vec![(0, 0)]);
        assert_eq!(m.weight, 1);

        // l1r1 −1, l1r2 0, l2r2 +1; cover r1, r2
        let g = BipartiteWeightedGraph::from_edges(2, 2, &[(0, 0, -1), (0, 1, 0), (1, 1, 1)]).unwrap();
        let m = min_cost_cover_matching(&g, &[], &[0, 1]).unwrap().unwrap();
        assert_eq!(m.pairs, vec![(0, 0), (1, 1)]);
        assert_eq!(m.weight, 0);
    }

    #[test]
    fn cover_matching_infeasible() {
        let g = BipartiteWeightedGraph::from_edges(1, 2, &[(0, 0, 0), (0, 1, 0)]).unwrap();
        assert!(min_cost_cover_matching(&g, &[], &[0, 1]).unwrap().is_none());
        assert!(min_cost_cover_matching(&g, &[], &[5]).is_err());
    }

    #[test]
    fn cover_matching_takes_negative_edges() {
        let g = BipartiteWeightedGraph::from_edges(2, 2, &[(0, 0, -1), (1, 1, -1), (0, 1, 3)]).unwrap();
        let m = min_cost_cover_matching(&g, &[], &[]).unwrap().unwrap();
        assert_eq!(m.weight, -2);
    }
}
