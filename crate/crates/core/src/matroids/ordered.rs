use super::Matroid;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// A matroid with a strict total preference order on its ground set.
#[derive(Clone, Debug)]
pub struct OrderedMatroid {
    matroid: Matroid,
    order: Vec<usize>,
    position: Vec<usize>,
}

impl OrderedMatroid {
    /// `order` lists the ground set from best to worst.
    pub fn new(matroid: Matroid, order: Vec<usize>) -> Result<Self> {
        let n = matroid.len();
        if order.len() != n {
            return Err(Error::input(format!(
                "order has {} entries for a ground set of {n}",
                order.len()
            )));
        }
        let mut position = vec![usize::MAX; n];
        for (rank, &e) in order.iter().enumerate() {
            if e >= n || position[e] != usize::MAX {
                return Err(Error::input("order is not a permutation of the ground set"));
            }
            position[e] = rank;
        }
        Ok(OrderedMatroid { matroid, order, position })
    }

    pub fn with_names<S: AsRef<str>>(matroid: Matroid, order: &[S]) -> Result<Self> {
        let order = order
            .iter()
            .map(|s| matroid.ground().index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(matroid, order)
    }

    /// Ground set declaration order is the preference order.
    pub fn declaration_order(matroid: Matroid) -> Self {
        let order = (0..matroid.len()).collect();
        Self::new(matroid, order).expect("identity permutation")
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    /// `u ≻ v`.
    #[inline]
    pub fn prefers(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }

    pub fn len(&self) -> usize {
        self.matroid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matroid.is_empty()
    }

    pub fn is_independent(&self, x: &ElemSet) -> bool {
        self.matroid.is_independent(x)
    }

    /// Greedy maximal independent subset of `x`, scanning best first.
    pub fn optimal_base(&self, x: &ElemSet) -> ElemSet {
        let mut base = ElemSet::empty(self.len());
        for &e in &self.order {
            if x.contains(e) {
                base.insert(e);
                if !self.matroid.is_independent(&base) {
                    base.remove(e);
                }
            }
        }
        base
    }

    /// Whether `v` is dominated by `i`: `i + v` is dependent and every
    /// `u ∈ i` with `i - u + v` independent is better than `v`.
    pub fn is_dominated(&self, i: &ElemSet, v: usize) -> Result<bool> {
        if i.contains(v) {
            return Err(Error::input(format!(
                "element {:?} is already in the set",
                self.matroid.ground().name(v)
            )));
        }
        Ok(self.dominated_unchecked(i, v))
    }

    pub(crate) fn dominated_unchecked(&self, i: &ElemSet, v: usize) -> bool {
        if self.matroid.is_independent(&i.with(v)) {
            return false;
        }
        i.iter()
            .all(|u| self.prefers(u, v) || !self.matroid.is_independent(&i.exchange(u, v)))
    }

    /// Same matroid, different order.
    pub fn reordered(&self, order: Vec<usize>) -> Result<Self> {
        Self::new(self.matroid.clone(), order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroids::GroundSet;

    fn k3(order: &[&str]) -> OrderedMatroid {
        let g = GroundSet::new(["e12", "e13", "e23"]).unwrap();
        let m = Matroid::graphic(g, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        OrderedMatroid::with_names(m, order).unwrap()
    }

    fn rank1_ab(order: &[&str]) -> OrderedMatroid {
        let m = Matroid::uniform(GroundSet::new(["a", "b"]).unwrap(), 1);
        OrderedMatroid::with_names(m, order).unwrap()
    }

    #[test]
    fn greedy_on_triangle() {
        let om = k3(&["e12", "e13", "e23"]);
        let all = om.matroid().ground().full_set();
        assert_eq!(om.optimal_base(&all), om.matroid().ground().set(&["e12", "e13"]).unwrap());
        assert!(om.optimal_base(&ElemSet::empty(3)).is_empty());
    }

    #[test]
    fn greedy_restricted_to_subset() {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        let m = Matroid::partition(g, vec![(vec![0, 1], 1), (vec![2], 1)]).unwrap();
        let om = OrderedMatroid::with_names(m, &["a", "c", "b"]).unwrap();
        let x = om.matroid().ground().set(&["b", "c"]).unwrap();
        assert_eq!(om.optimal_base(&x), x);
    }

    #[test]
    fn domination_rank_one() {
        let om = rank1_ab(&["a", "b"]);
        let g = om.matroid().ground().clone();
        assert!(om.is_dominated(&g.set(&["a"]).unwrap(), 1).unwrap());
        assert!(!om.is_dominated(&g.set(&["b"]).unwrap(), 0).unwrap());
        assert!(om.is_dominated(&g.set(&["a"]).unwrap(), 0).is_err());
    }

    #[test]
    fn domination_on_triangle() {
        let om = k3(&["e12", "e23", "e13"]);
        let g = om.matroid().ground().clone();
        let i = g.set(&["e12", "e13"]).unwrap();
        let v = g.index_of("e23").unwrap();
        // e13 is an exchange partner and is worse than e23
        assert!(!om.is_dominated(&i, v).unwrap());
    }

    #[test]
    fn order_must_be_permutation() {
        let m = Matroid::free(GroundSet::numbered(3));
        assert!(OrderedMatroid::new(m.clone(), vec![0, 0, 1]).is_err());
        assert!(OrderedMatroid::new(m, vec![0, 1]).is_err());
    }
}
