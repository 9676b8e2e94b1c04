use std::collections::HashMap;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// An ordered list of distinct element identifiers.
///
/// Identifiers are opaque strings externally; everything inside the crate
/// works with their positions in this list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = GroundSet::default();
        for n in names {
            let n = n.into();
            if g.index.contains_key(&n) {
                return Err(Error::input(format!("duplicate element identifier {n:?}")));
            }
            g.index.insert(n.clone(), g.names.len());
            g.names.push(n);
        }
        Ok(g)
    }

    /// Ground set `e0, e1, ..., e{n-1}`.
    pub fn numbered(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("e{i}"))).expect("distinct by construction")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown element {name:?}")))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn set<S: AsRef<str>>(&self, names: &[S]) -> Result<ElemSet> {
        let mut s = ElemSet::empty(self.len());
        for n in names {
            s.insert(self.index_of(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn names_of(&self, s: &ElemSet) -> Vec<String> {
        s.iter().map(|e| self.names[e].clone()).collect()
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::empty(self.len())
    }

    pub fn full_set(&self) -> ElemSet {
        ElemSet::full(self.len())
    }
}
