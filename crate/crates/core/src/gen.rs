//! Deterministic random instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{
    AgentEntry, CapacitySet, GraphEdge, InstanceFile, Interleaving, MatroidDescriptor, FORMAT_VERSION,
};

pub const MAX_GENERATED_SIZE: usize = 16;

/// Explicit agents stay small enough to list their bases.
const EXPLICIT_AGENT_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Partition matroids on both sides.
    Partition,
    /// Graphic matroids on side 1, partition matroids on side 2.
    Graphic,
    /// Explicitly listed binary matroids on both sides.
    Explicit,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Partition, Family::Graphic, Family::Explicit];

    pub fn name(self) -> &'static str {
        match self {
            Family::Partition => "partition",
            Family::Graphic => "graphic",
            Family::Explicit => "explicit",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partition" | "partition/partition" => Ok(Family::Partition),
            "graphic" | "graphic/partition" => Ok(Family::Graphic),
            "explicit" | "explicit/explicit" => Ok(Family::Explicit),
            other => Err(Error::input(format!(
                "unknown family {other:?} (expected partition, graphic or explicit)"
            ))),
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random instance file; the same arguments always give the same file.
pub fn generate_random_instance(family: Family, size: usize, seed: u64) -> Result<InstanceFile> {
    if size > MAX_GENERATED_SIZE {
        return Err(Error::Scale {
            what: "generated ground set",
            size,
            limit: MAX_GENERATED_SIZE,
        });
    }
    let mut rng = rng_for(seed);
    let ground: Vec<String> = (1..=size).map(|i| format!("e{i}")).collect();
    let (side1, side2) = match family {
        Family::Partition => (
            partition_side(&mut rng, &ground, "A", size),
            partition_side(&mut rng, &ground, "B", size),
        ),
        Family::Graphic => (
            graphic_side(&mut rng, &ground),
            partition_side(&mut rng, &ground, "B", size),
        ),
        Family::Explicit => (
            explicit_side(&mut rng, &ground, "A"),
            explicit_side(&mut rng, &ground, "B"),
        ),
    };
    let mut file = InstanceFile {
        version: FORMAT_VERSION,
        ground: ground.clone(),
        side1,
        side2,
        interleaving: Interleaving::default(),
        bmatching: None,
        metadata: [
            ("family".to_string(), family.to_string()),
            ("seed".to_string(), seed.to_string()),
        ]
        .into_iter()
        .collect(),
    };
    let orders = [random_interleave(&mut rng, &mut file.side1, &ground), random_interleave(&mut rng, &mut file.side2, &ground)];
    let [o1, o2] = orders;
    file.interleaving = Interleaving {
        side1: Some(o1),
        side2: Some(o2),
    };
    file.to_popular()?;
    Ok(file)
}

/// Splits `ground` among `k` agents, every agent getting at least one element.
fn split_among(rng: &mut ChaCha8Rng, ground: &[String], k: usize) -> Vec<Vec<String>> {
    let mut shuffled = ground.to_vec();
    shuffled.shuffle(rng);
    let mut parts = vec![Vec::new(); k];
    for (i, e) in shuffled.into_iter().enumerate() {
        let a = if i < k { i } else { rng.gen_range(0..k) };
        parts[a].push(e);
    }
    for p in &mut parts {
        p.sort_by_key(|e| ground.iter().position(|g| g == e));
    }
    parts
}

fn partition_side(rng: &mut ChaCha8Rng, ground: &[String], prefix: &str, size: usize) -> Vec<AgentEntry> {
    if ground.is_empty() {
        return Vec::new();
    }
    let k = rng.gen_range(1..=size.min(4));
    split_among(rng, ground, k)
        .into_iter()
        .enumerate()
        .map(|(a, elements)| {
            let classes = if elements.len() >= 2 && rng.gen_bool(0.3) {
                let cut = rng.gen_range(1..elements.len());
                vec![elements[..cut].to_vec(), elements[cut..].to_vec()]
            } else {
                vec![elements.clone()]
            };
            let classes = classes
                .into_iter()
                .map(|c| {
                    let capacity = rng.gen_range(1..=c.len().min(3));
                    CapacitySet { elements: c, capacity }
                })
                .collect();
            AgentEntry {
                name: format!("{prefix}{}", a + 1),
                order: elements.clone(),
                elements,
                matroid: MatroidDescriptor::Partition { classes },
            }
        })
        .collect()
}

fn graphic_side(rng: &mut ChaCha8Rng, ground: &[String]) -> Vec<AgentEntry> {
    if ground.is_empty() {
        return Vec::new();
    }
    let k = if ground.len() >= 8 { rng.gen_range(1..=2) } else { 1 };
    split_among(rng, ground, k)
        .into_iter()
        .enumerate()
        .map(|(a, elements)| {
            let m = elements.len();
            let mut ends: Vec<(usize, usize)> = Vec::with_capacity(m);
            // a complete graph on four vertices first, when there is room
            if m >= 6 && rng.gen_bool(0.5) {
                ends.extend([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
            }
            let vertices = (m / 2 + 2).max(4);
            while ends.len() < m {
                let x = rng.gen_range(0..vertices);
                let y = rng.gen_range(0..vertices);
                if x != y {
                    ends.push((x, y));
                }
            }
            ends.shuffle(rng);
            let edges = elements
                .iter()
                .zip(ends)
                .map(|(e, (x, y))| GraphEdge {
                    element: e.clone(),
                    ends: [format!("v{x}"), format!("v{y}")],
                })
                .collect();
            AgentEntry {
                name: format!("A{}", a + 1),
                order: elements.clone(),
                elements,
                matroid: MatroidDescriptor::Graphic { edges },
            }
        })
        .collect()
}

/// Rank of GF(2) vectors given as bit masks.
fn gf2_rank(vectors: impl IntoIterator<Item = u32>) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn explicit_side(rng: &mut ChaCha8Rng, ground: &[String], prefix: &str) -> Vec<AgentEntry> {
    if ground.is_empty() {
        return Vec::new();
    }
    let min_agents = ground.len().div_ceil(EXPLICIT_AGENT_LIMIT);
    let k = rng.gen_range(min_agents..=min_agents.max(3).min(ground.len()));
    let mut parts = split_among(rng, ground, k);
    // rebalance anything above the limit
    while let Some(big) = parts.iter().position(|p| p.len() > EXPLICIT_AGENT_LIMIT) {
        let small = (0..parts.len()).min_by_key(|&i| parts[i].len()).expect("nonempty");
        let e = parts[big].pop().expect("nonempty");
        parts[small].push(e);
    }
    parts
        .into_iter()
        .enumerate()
        .map(|(a, elements)| {
            let m = elements.len();
            let dim = rng.gen_range(1..=m.min(4));
            let vectors: Vec<u32> = (0..m).map(|_| rng.gen_range(1..1u32 << dim)).collect();
            let rank = gf2_rank(vectors.iter().copied());
            let maximal = (0u32..1 << m)
                .filter(|mask| mask.count_ones() as usize == rank)
                .filter(|mask| gf2_rank((0..m).filter(|i| mask >> i & 1 == 1).map(|i| vectors[i])) == rank)
                .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| elements[i].clone()).collect())
                .collect();
            AgentEntry {
                name: format!("{prefix}{}", a + 1),
                order: elements.clone(),
                elements,
                matroid: MatroidDescriptor::Explicit { maximal },
            }
        })
        .collect()
}

/// Shuffles every agent's order, then merges them into a random global order.
fn random_interleave(rng: &mut ChaCha8Rng, agents: &mut [AgentEntry], ground: &[String]) -> Vec<String> {
    for a in agents.iter_mut() {
        a.order.shuffle(rng);
    }
    let mut global = ground.to_vec();
    global.shuffle(rng);
    // keep the random slot pattern but fill each agent's slots in its own order
    let owner = |e: &String| agents.iter().position(|a| a.elements.contains(e)).expect("owned");
    let slots: Vec<usize> = global.iter().map(owner).collect();
    let mut next = vec![0usize; agents.len()];
    slots
        .into_iter()
        .map(|a| {
            let e = agents[a].order[next[a]].clone();
            next[a] += 1;
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroids::check_axioms;

    #[test]
    fn deterministic() {
        for family in Family::ALL {
            let a = generate_random_instance(family, 9, 42).unwrap().to_json();
            let b = generate_random_instance(family, 9, 42).unwrap().to_json();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn graphic_side_is_matroid() {
        for seed in 0..10 {
            let f = generate_random_instance(Family::Graphic, 8, seed).unwrap();
            let pi = f.to_popular().unwrap();
            assert!(check_axioms(pi.side1().matroid()).unwrap());
        }
    }

    #[test]
    fn partition_orders_are_permutations() {
        let f = generate_random_instance(Family::Partition, 8, 3).unwrap();
        for a in f.side1.iter().chain(&f.side2) {
            let mut o = a.order.clone();
            o.sort();
            let mut e = a.elements.clone();
            e.sort();
            assert_eq!(o, e);
        }
    }

    #[test]
    fn sizes_and_limits() {
        for family in Family::ALL {
            for size in [0, 1, 5, 16] {
                let f = generate_random_instance(family, size, 11).unwrap();
                assert_eq!(f.ground.len(), size);
            }
        }
        assert!(matches!(
            generate_random_instance(Family::Partition, 17, 0),
            Err(Error::Scale { .. })
        ));
    }

    #[test]
    fn family_names() {
        for family in Family::ALL {
            assert_eq!(family.name().parse::<Family>().unwrap(), family);
        }
        assert!("vector".parse::<Family>().is_err());
    }

    #[test]
    fn gf2() {
        assert_eq!(gf2_rank([1, 2, 3]), 2);
        assert_eq!(gf2_rank([1, 1]), 1);
        assert_eq!(gf2_rank([]), 0);
    }
}
