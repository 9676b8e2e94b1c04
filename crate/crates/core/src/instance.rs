//! Versioned JSON instance files.
//!
//! A file names the ground set once and lists, per side, the agents that
//! own its elements. Each agent carries a matroid over its own elements and
//! a preference order on them. An optional `bmatching` section holds a
//! bipartite preference system for the lexicographic commands.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::lexpop::{AgentDecl, BMatchingInstance};
use crate::matroids::{check_axioms, GroundSet, Matroid, AXIOM_CHECK_LIMIT};
use crate::popular::{AgentSpec, PopularInstance};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    #[serde(default)]
    pub ground: Vec<String>,
    #[serde(default)]
    pub side1: Vec<AgentEntry>,
    #[serde(default)]
    pub side2: Vec<AgentEntry>,
    #[serde(default, skip_serializing_if = "Interleaving::is_empty")]
    pub interleaving: Interleaving,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bmatching: Option<BMatchingSection>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentEntry {
    pub name: String,
    pub elements: Vec<String>,
    pub matroid: MatroidDescriptor,
    /// The agent's elements, best first.
    pub order: Vec<String>,
}

/// Global preference orders per side. Missing sides concatenate the agent orders.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interleaving {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side1: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side2: Option<Vec<String>>,
}

impl Interleaving {
    pub fn is_empty(&self) -> bool {
        self.side1.is_none() && self.side2.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacitySet {
    pub elements: Vec<String>,
    pub capacity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEdge {
    pub element: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalEntry {
    pub element: String,
    pub targets: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatroidDescriptor {
    Free,
    Uniform { rank: usize },
    Partition { classes: Vec<CapacitySet> },
    Laminar { sets: Vec<CapacitySet> },
    Graphic { edges: Vec<GraphEdge> },
    Transversal { adjacency: Vec<TransversalEntry> },
    /// Independent sets are the subsets of the listed sets.
    Explicit { maximal: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BMatchingSection {
    pub agents: Vec<AgentDecl>,
}

impl MatroidDescriptor {
    /// Builds the matroid over `ground`; `path` prefixes error messages.
    pub fn build(&self, ground: GroundSet, path: &str) -> Result<Matroid> {
        let idx = |name: &str| {
            ground
                .index_of(name)
                .map_err(|_| Error::input(format!("{path}: element {name:?} is not one of the agent's elements")))
        };
        let idx_all = |names: &[String]| names.iter().map(|n| idx(n)).collect::<Result<Vec<_>>>();
        let per_element = |what: &str, seen: &[bool]| {
            match seen.iter().position(|s| !s) {
                Some(e) => Err(Error::input(format!("{path}: {what} missing for element {:?}", ground.name(e)))),
                None => Ok(()),
            }
        };
        let wrap = |e: Error| match e {
            Error::Input(msg) => Error::input(format!("{path}: {msg}")),
            other => other,
        };
        match self {
            MatroidDescriptor::Free => Ok(Matroid::free(ground)),
            MatroidDescriptor::Uniform { rank } => Ok(Matroid::uniform(ground, *rank)),
            MatroidDescriptor::Partition { classes } => {
                let classes = classes
                    .iter()
                    .map(|c| Ok((idx_all(&c.elements)?, c.capacity)))
                    .collect::<Result<Vec<_>>>()?;
                Matroid::partition(ground.clone(), classes).map_err(wrap)
            }
            MatroidDescriptor::Laminar { sets } => {
                let sets = sets
                    .iter()
                    .map(|c| Ok((idx_all(&c.elements)?, c.capacity)))
                    .collect::<Result<Vec<_>>>()?;
                Matroid::laminar(ground.clone(), sets).map_err(wrap)
            }
            MatroidDescriptor::Graphic { edges } => {
                let mut vertex: HashMap<String, usize> = HashMap::new();
                let mut ends = vec![(0, 0); ground.len()];
                let mut seen = vec![false; ground.len()];
                for edge in edges {
                    let e = idx(&edge.element)?;
                    if std::mem::replace(&mut seen[e], true) {
                        return Err(Error::input(format!("{path}: element {:?} has two edges", edge.element)));
                    }
                    let mut id = |v: &str| {
                        let next = vertex.len();
                        *vertex.entry(v.to_string()).or_insert(next)
                    };
                    let (a, b) = (id(&edge.ends[0]), id(&edge.ends[1]));
                    ends[e] = (a, b);
                }
                per_element("edge", &seen)?;
                Matroid::graphic(ground.clone(), ends).map_err(wrap)
            }
            MatroidDescriptor::Transversal { adjacency } => {
                let mut target: HashMap<&str, usize> = HashMap::new();
                let mut adj = vec![Vec::new(); ground.len()];
                let mut seen = vec![false; ground.len()];
                for entry in adjacency {
                    let e = idx(&entry.element)?;
                    if std::mem::replace(&mut seen[e], true) {
                        return Err(Error::input(format!("{path}: element {:?} listed twice", entry.element)));
                    }
                    for t in &entry.targets {
                        let next = target.len();
                        adj[e].push(*target.entry(t).or_insert(next));
                    }
                }
                per_element("adjacency", &seen)?;
                Matroid::transversal(ground.clone(), adj).map_err(wrap)
            }
            MatroidDescriptor::Explicit { maximal } => {
                let n = ground.len();
                if n > AXIOM_CHECK_LIMIT {
                    return Err(Error::Scale {
                        what: "explicit matroid ground set",
                        size: n,
                        limit: AXIOM_CHECK_LIMIT,
                    });
                }
                let tops = maximal
                    .iter()
                    .map(|s| Ok(ElemSet::from_indices(n, idx_all(s)?)))
                    .collect::<Result<Vec<_>>>()?;
                let family = (0u64..1 << n)
                    .map(|mask| ElemSet::from_mask(n, mask))
                    .filter(|x| x.is_empty() || tops.iter().any(|t| x.is_subset(t)));
                let m = Matroid::explicit(ground.clone(), family).map_err(wrap)?;
                if !check_axioms(&m)? {
                    return Err(Error::input(format!("{path}: listed sets do not generate a matroid")));
                }
                Ok(m)
            }
        }
    }
}

/// A parsed file: the matroid instance, the bipartite instance, or both.
#[derive(Clone, Debug)]
pub struct ParsedInstance {
    pub popular: Option<PopularInstance>,
    pub bmatching: Option<BMatchingInstance>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::input(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(Error::input(format!(
                "version: unsupported format version {} (expected {FORMAT_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn has_matroid_part(&self) -> bool {
        !self.ground.is_empty() || !self.side1.is_empty() || !self.side2.is_empty()
    }

    pub fn parse(&self) -> Result<ParsedInstance> {
        let popular = if self.has_matroid_part() {
            Some(self.to_popular()?)
        } else {
            None
        };
        let bmatching = self.to_bmatching()?;
        if popular.is_none() && bmatching.is_none() {
            return Err(Error::input("instance has neither matroid sides nor a bmatching section"));
        }
        Ok(ParsedInstance { popular, bmatching })
    }

    pub fn to_bmatching(&self) -> Result<Option<BMatchingInstance>> {
        self.bmatching
            .as_ref()
            .map(|b| {
                BMatchingInstance::from_decls(&b.agents).map_err(|e| match e {
                    Error::Input(msg) => Error::input(format!("bmatching: {msg}")),
                    other => other,
                })
            })
            .transpose()
    }

    pub fn to_popular(&self) -> Result<PopularInstance> {
        let ground = GroundSet::new(self.ground.iter().cloned())
            .map_err(|e| Error::input(format!("ground: {e}")))?;
        let mut sides = Vec::with_capacity(2);
        for (k, agents) in [&self.side1, &self.side2].into_iter().enumerate() {
            sides.push(self.side_specs(&ground, k + 1, agents)?);
        }
        let side2 = sides.pop().expect("two sides");
        let side1 = sides.pop().expect("two sides");
        for (k, order) in [&self.interleaving.side1, &self.interleaving.side2].into_iter().enumerate() {
            if let Some(order) = order {
                check_permutation(order, &self.ground, &format!("interleaving.side{}", k + 1))?;
            }
        }
        PopularInstance::from_agents(
            ground,
            side1,
            side2,
            [self.interleaving.side1.clone(), self.interleaving.side2.clone()],
        )
    }

    fn side_specs(&self, ground: &GroundSet, side: usize, agents: &[AgentEntry]) -> Result<Vec<AgentSpec>> {
        let mut owner: Vec<Option<&str>> = vec![None; ground.len()];
        let mut specs = Vec::with_capacity(agents.len());
        for (a, entry) in agents.iter().enumerate() {
            let path = format!("side{side}[{a}] ({:?})", entry.name);
            for name in &entry.elements {
                let e = ground
                    .index_of(name)
                    .map_err(|_| Error::input(format!("{path}.elements: unknown element {name:?}")))?;
                if let Some(prev) = owner[e] {
                    return Err(Error::input(format!(
                        "element {name:?} owned twice on side {side} (agents {prev:?} and {:?})",
                        entry.name
                    )));
                }
                owner[e] = Some(&entry.name);
            }
            check_permutation(&entry.order, &entry.elements, &format!("{path}.order"))?;
            let local = GroundSet::new(entry.elements.iter().cloned())
                .map_err(|e| Error::input(format!("{path}.elements: {e}")))?;
            let matroid = entry.matroid.build(local, &format!("{path}.matroid"))?;
            specs.push(AgentSpec {
                name: entry.name.clone(),
                matroid,
                order: entry.order.clone(),
            });
        }
        if let Some(e) = owner.iter().position(Option::is_none) {
            return Err(Error::input(format!(
                "element {:?} has no owner on side {side}",
                ground.name(e)
            )));
        }
        Ok(specs)
    }
}

fn check_permutation(order: &[String], of: &[String], path: &str) -> Result<()> {
    let mut count: HashMap<&str, i32> = of.iter().map(|s| (s.as_str(), 0)).collect();
    for name in order {
        match count.get_mut(name.as_str()) {
            Some(c) if *c == 0 => *c = 1,
            Some(_) => return Err(Error::input(format!("{path}: element {name:?} listed twice"))),
            None => return Err(Error::input(format!("{path}: unknown element {name:?}"))),
        }
    }
    if let Some(missing) = of.iter().find(|s| count[s.as_str()] == 0) {
        return Err(Error::input(format!("{path}: missing element {missing:?}")));
    }
    Ok(())
}

impl From<&BMatchingInstance> for InstanceFile {
    fn from(inst: &BMatchingInstance) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            ground: Vec::new(),
            side1: Vec::new(),
            side2: Vec::new(),
            interleaving: Interleaving::default(),
            bmatching: Some(BMatchingSection {
                agents: inst.to_decls(),
            }),
            metadata: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_agents() -> InstanceFile {
        let text = r#"{
            "version": 1,
            "ground": ["a", "b", "c"],
            "side1": [
                {"name": "p", "elements": ["a", "b"], "matroid": {"kind": "uniform", "rank": 1}, "order": ["b", "a"]},
                {"name": "q", "elements": ["c"], "matroid": {"kind": "free"}, "order": ["c"]}
            ],
            "side2": [
                {"name": "r", "elements": ["a", "b", "c"],
                 "matroid": {"kind": "partition", "classes": [{"elements": ["a", "c"], "capacity": 1}, {"elements": ["b"], "capacity": 1}]},
                 "order": ["a", "b", "c"]}
            ]
        }"#;
        InstanceFile::from_json(text).unwrap()
    }

    #[test]
    fn parses_two_agent_file() {
        let f = two_agents();
        let pi = f.to_popular().unwrap();
        assert_eq!(pi.len(), 3);
        assert_eq!(pi.side1().ordered().order(), &[1, 0, 2]);
        assert_eq!(pi.agent_names(0), &["p", "q"]);
    }

    #[test]
    fn round_trip() {
        let f = two_agents();
        let again = InstanceFile::from_json(&f.to_json()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn element_owned_twice() {
        let mut f = two_agents();
        f.side1[1].elements.push("a".into());
        f.side1[1].order.push("a".into());
        let err = f.to_popular().unwrap_err().to_string();
        assert!(err.contains("element \"a\" owned twice on side 1"), "{err}");
    }

    #[test]
    fn order_missing_element() {
        let mut f = two_agents();
        f.side1[0].order.pop();
        let err = f.to_popular().unwrap_err().to_string();
        assert!(err.contains("missing element \"a\""), "{err}");
    }

    #[test]
    fn unknown_kind_reports_position() {
        let text = r#"{"version": 1, "ground": ["a"], "side1": [
            {"name": "p", "elements": ["a"], "matroid": {"kind": "vector"}, "order": ["a"]}], "side2": []}"#;
        let err = InstanceFile::from_json(text).unwrap_err().to_string();
        assert!(err.contains("unknown variant") && err.contains("line"), "{err}");
    }

    #[test]
    fn loops_rejected() {
        let mut f = two_agents();
        f.side1[1].matroid = MatroidDescriptor::Uniform { rank: 0 };
        assert!(f.to_popular().is_err());
    }

    #[test]
    fn explicit_must_be_matroid() {
        let mut f = two_agents();
        f.side1[0].matroid = MatroidDescriptor::Explicit {
            maximal: vec![vec!["a".into()], vec!["b".into()]],
        };
        assert!(f.to_popular().is_ok());
        let mut g = two_agents();
        g.side2[0].matroid = MatroidDescriptor::Explicit {
            maximal: vec![vec!["a".into(), "b".into()], vec!["c".into()]],
        };
        assert!(g.to_popular().is_err());
    }

    #[test]
    fn graphic_descriptor() {
        let mut f = two_agents();
        f.side2[0].matroid = MatroidDescriptor::Graphic {
            edges: vec![
                GraphEdge { element: "a".into(), ends: ["1".into(), "2".into()] },
                GraphEdge { element: "b".into(), ends: ["2".into(), "3".into()] },
                GraphEdge { element: "c".into(), ends: ["1".into(), "3".into()] },
            ],
        };
        let pi = f.to_popular().unwrap();
        assert!(!pi.side2().matroid().is_independent(&ElemSet::full(3)));
    }

    #[test]
    fn bmatching_only_file() {
        let inst = crate::lexpop::build_example1(1, true).unwrap();
        let f = InstanceFile::from(&inst);
        let parsed = InstanceFile::from_json(&f.to_json()).unwrap().parse().unwrap();
        assert!(parsed.popular.is_none());
        assert_eq!(parsed.bmatching.unwrap(), inst);
    }
}
