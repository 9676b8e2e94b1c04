//! Python bindings: two-sided matroid instances and lexicographic b-matching instances.
//!
//! Sets cross the boundary as lists of element names, b-matchings as lists of `(u, w)` name pairs.
//! Structured results (verdicts, search outcomes) come back as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::json;

use popmat::gen::{generate_random_instance, Family};
use popmat::instance::InstanceFile;
use popmat::kernel::find_kernel;
use popmat::lexpop::{
    build_example1, build_x3c_reduction, equalize_capacities, example1_candidate, is_lex_popular, lex_vote_total,
    random_bmatching, x3c_domination_witness, BMatchingInstance, LexStatus, X3CInstance,
};
use popmat::popular::{classify, max_weakly_defendable_size, solve, PopularInstance, DEFAULT_BRUTE_FORCE_BOUND};
use popmat::voting::{vote, vote_weak};
use popmat::{ElemSet, Error};

create_exception!(popmat_py, ScaleError, PyValueError, "Instance too large for an exhaustive check.");
create_exception!(popmat_py, InvariantError, PyRuntimeError, "An internal consistency check failed.");

fn py_err(err: Error) -> PyErr {
    match err {
        Error::Input(_) => PyValueError::new_err(err.to_string()),
        Error::Scale { .. } => ScaleError::new_err(err.to_string()),
        _ => InvariantError::new_err(err.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for popmat::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_dict<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

fn read(path: &str) -> PyResult<String> {
    std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("cannot read {path}: {e}")))
}

/// A two-sided instance: each side is a direct sum of ordered matroids, one per agent.
#[pyclass(frozen, module = "popmat_py")]
pub struct Instance {
    file: InstanceFile,
    inner: PopularInstance,
}

impl Instance {
    fn wrap(file: InstanceFile) -> PyResult<Self> {
        let inner = file.to_popular().py()?;
        Ok(Instance { file, inner })
    }

    fn set(&self, names: Vec<String>) -> PyResult<ElemSet> {
        self.inner.ground().set(&names).py()
    }

    fn names(&self, x: &ElemSet) -> Vec<String> {
        self.inner.ground().names_of(x)
    }
}

#[pymethods]
impl Instance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::wrap(InstanceFile::from_json(text).py()?)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Self::from_json(&read(path)?)
    }

    /// Random instance of the given family (`partition`, `graphic` or `explicit`).
    #[staticmethod]
    #[pyo3(signature = (family, size, seed = 0))]
    fn generate(family: &str, size: usize, seed: u64) -> PyResult<Self> {
        let family: Family = family.parse().py()?;
        Self::wrap(generate_random_instance(family, size, seed).py()?)
    }

    fn to_json(&self) -> String {
        self.file.to_json()
    }

    #[getter]
    fn ground(&self) -> Vec<String> {
        self.inner.ground().names().to_vec()
    }

    /// Agent names on side 1 or 2.
    fn agents(&self, side: usize) -> PyResult<Vec<String>> {
        match side {
            1 | 2 => Ok(self.inner.agent_names(side - 1).to_vec()),
            _ => Err(PyValueError::new_err("side must be 1 or 2")),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn is_common_independent(&self, set: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_common_independent(&self.set(set)?))
    }

    /// A maximum-size popular common independent set.
    fn max_popular(&self) -> PyResult<Vec<String>> {
        let sol = solve(&self.inner).py()?;
        Ok(self.names(&sol.set))
    }

    /// Kernel of the two sides by deferred acceptance, side 1 proposing.
    fn kernel(&self) -> PyResult<Vec<String>> {
        let (k, _) = find_kernel(&self.inner.kernel_instance().py()?).py()?;
        Ok(self.names(&k))
    }

    /// Vote of `set_i` against `set_j`, on one side or summed over both.
    #[pyo3(signature = (set_i, set_j, side = None, weak = false))]
    fn vote(&self, set_i: Vec<String>, set_j: Vec<String>, side: Option<usize>, weak: bool) -> PyResult<i64> {
        let (i, j) = (self.set(set_i)?, self.set(set_j)?);
        let sides = match side {
            None => vec![0, 1],
            Some(k @ (1 | 2)) => vec![k - 1],
            Some(_) => return Err(PyValueError::new_err("side must be 1 or 2")),
        };
        let mut total = 0;
        for k in sides {
            let s = self.inner.side(k);
            total += if weak { vote_weak(s, &i, &j) } else { vote(s, &i, &j) }.py()?.value;
        }
        Ok(total)
    }

    /// Exhaustive popularity classification against every common independent set.
    #[pyo3(signature = (set, bound = DEFAULT_BRUTE_FORCE_BOUND))]
    fn classify<'py>(&self, py: Python<'py>, set: Vec<String>, bound: usize) -> PyResult<Bound<'py, PyAny>> {
        let verdict = classify(&self.inner, &self.set(set)?, bound).py()?;
        let value = serde_json::to_value(&verdict).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        to_dict(py, &value)
    }

    #[pyo3(signature = (bound = DEFAULT_BRUTE_FORCE_BOUND))]
    fn max_weakly_defendable_size(&self, bound: usize) -> PyResult<usize> {
        max_weakly_defendable_size(&self.inner, bound).py()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(elements={}, side1_agents={}, side2_agents={})",
            self.inner.len(),
            self.inner.agent_names(0).len(),
            self.inner.agent_names(1).len()
        )
    }
}

/// A bipartite b-matching instance with strict preferences over incident edges.
#[pyclass(frozen, module = "popmat_py")]
pub struct BMatching {
    file: InstanceFile,
    inner: BMatchingInstance,
}

fn pairs(inst: &BMatchingInstance, mu: &ElemSet) -> Vec<(String, String)> {
    inst.edge_names(mu)
}

impl BMatching {
    fn wrap(file: InstanceFile) -> PyResult<Self> {
        let inner = file
            .to_bmatching()
            .py()?
            .ok_or_else(|| PyValueError::new_err("instance has no bmatching section"))?;
        Ok(BMatching { file, inner })
    }

    fn from_inner(inner: BMatchingInstance, metadata: Vec<(&str, &ElemSet)>) -> Self {
        let mut file = InstanceFile::from(&inner);
        for (key, mu) in metadata {
            let text: Vec<String> = inner.edge_names(mu).into_iter().map(|(u, w)| format!("{u}:{w}")).collect();
            file.metadata.insert(key.into(), text.join(","));
        }
        BMatching { file, inner }
    }

    fn matching(&self, edges: Vec<(String, String)>) -> PyResult<ElemSet> {
        let mu = self.inner.edge_set(&edges).py()?;
        if !self.inner.is_b_matching(&mu) {
            return Err(PyValueError::new_err("the given edges exceed a capacity"));
        }
        Ok(mu)
    }
}

#[pymethods]
impl BMatching {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::wrap(InstanceFile::from_json(text).py()?)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Self::from_json(&read(path)?)
    }

    /// The seven-agent gadget with capacities scaled by `q`; with `dummies`, `x` gets `q` private partners.
    #[staticmethod]
    #[pyo3(signature = (q = 1, dummies = false))]
    fn example1(q: usize, dummies: bool) -> PyResult<Self> {
        let inner = build_example1(q, dummies).py()?;
        let meta = if dummies { Some(example1_candidate(&inner).py()?) } else { None };
        Ok(Self::from_inner(inner, meta.iter().map(|m| ("candidate", m)).collect()))
    }

    /// Reduction from exact 3-cover; `sets` and `cover` are 1-based.
    #[staticmethod]
    #[pyo3(signature = (sets, cover = None))]
    fn x3c(sets: Vec<[usize; 3]>, cover: Option<Vec<usize>>) -> PyResult<Self> {
        let mut zero = Vec::with_capacity(sets.len());
        for s in &sets {
            if s.contains(&0) {
                return Err(PyValueError::new_err("elements are numbered from 1"));
            }
            zero.push(s.map(|e| e - 1));
        }
        let red = build_x3c_reduction(&X3CInstance::new(sets.len() / 3, zero).py()?).py()?;
        let witness = match cover {
            Some(c) => {
                if c.contains(&0) {
                    return Err(PyValueError::new_err("sets are numbered from 1"));
                }
                let c: Vec<usize> = c.into_iter().map(|k| k - 1).collect();
                Some(x3c_domination_witness(&red, &c).py()?)
            }
            None => None,
        };
        let mut meta = vec![("candidate", &red.candidate)];
        if let Some(w) = &witness {
            meta.push(("witness", w));
        }
        let mut out = Self::from_inner(red.instance.clone(), meta);
        out.file.metadata.insert("gadget_order".into(), red.gadget_order_convention.to_string());
        Ok(out)
    }

    /// Random instance with edge probability `p` and capacities in `1..=max_capacity`.
    #[staticmethod]
    #[pyo3(signature = (seed, left, right, p = 0.5, max_capacity = 2))]
    fn random(seed: u64, left: usize, right: usize, p: f64, max_capacity: usize) -> PyResult<Self> {
        Ok(Self::from_inner(random_bmatching(seed, left, right, p, max_capacity).py()?, vec![]))
    }

    fn to_json(&self) -> String {
        self.file.to_json()
    }

    #[getter]
    fn agents(&self) -> Vec<String> {
        self.inner.agents().iter().map(|a| a.name.clone()).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String)> {
        pairs(&self.inner, &ElemSet::full(self.inner.num_edges()))
    }

    /// A b-matching stored in the file metadata, such as `candidate` or `witness`.
    fn stored(&self, key: &str) -> PyResult<Option<Vec<(String, String)>>> {
        let Some(text) = self.file.metadata.get(key) else { return Ok(None) };
        let mut out = Vec::new();
        for item in text.split(',').filter(|s| !s.is_empty()) {
            let (u, w) = item
                .split_once(':')
                .ok_or_else(|| PyValueError::new_err(format!("bad edge {item:?} in metadata")))?;
            out.push((u.to_string(), w.to_string()));
        }
        Ok(Some(out))
    }

    /// Lexicographic votes for `a` minus votes for `b`.
    fn vote(&self, a: Vec<(String, String)>, b: Vec<(String, String)>) -> PyResult<i64> {
        Ok(lex_vote_total(&self.inner, &self.matching(a)?, &self.matching(b)?))
    }

    /// Decide lexicographic popularity; the dict has `status` and, when beaten, `witness` and `margin`.
    #[pyo3(signature = (matching, budget = 1 << 24))]
    fn popularity<'py>(
        &self,
        py: Python<'py>,
        matching: Vec<(String, String)>,
        budget: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mu = self.matching(matching)?;
        let value = match is_lex_popular(&self.inner, &mu, budget).py()? {
            LexStatus::Popular => json!({"status": "popular"}),
            LexStatus::Dominated { witness, margin } => {
                json!({"status": "dominated", "witness": pairs(&self.inner, &witness), "margin": margin})
            }
            LexStatus::Incomplete { explored } => json!({"status": "incomplete", "explored": explored}),
        };
        to_dict(py, &value)
    }

    /// Capacities raised to the maximum with dummy partners; the fixed dummy edges go under `fixed`.
    fn equalize(&self) -> PyResult<Self> {
        let eq = equalize_capacities(&self.inner).py()?;
        Ok(Self::from_inner(eq.instance.clone(), vec![("fixed", &eq.fixed)]))
    }

    fn __repr__(&self) -> String {
        format!("BMatching(agents={}, edges={})", self.inner.num_agents(), self.inner.num_edges())
    }
}

#[pymodule]
fn popmat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<BMatching>()?;
    m.add("ScaleError", m.py().get_type::<ScaleError>())?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    Ok(())
}
