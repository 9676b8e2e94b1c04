//! Matroid kernels: common independent sets in which every outside element
//! is dominated in at least one of the two ordered matroids.

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::matroids::OrderedMatroid;

/// Two ordered matroids over the same ground set, neither with loops.
#[derive(Clone, Debug)]
pub struct KernelInstance {
    m1: OrderedMatroid,
    m2: OrderedMatroid,
}

impl KernelInstance {
    pub fn new(m1: OrderedMatroid, m2: OrderedMatroid) -> Result<Self> {
        if m1.matroid().ground() != m2.matroid().ground() {
            return Err(Error::input("kernel instance matroids have different ground sets"));
        }
        for (side, om) in [(1, &m1), (2, &m2)] {
            if let Some(e) = om.matroid().has_loop() {
                return Err(Error::input(format!(
                    "element {:?} is a loop in matroid {side}",
                    om.matroid().ground().name(e)
                )));
            }
        }
        Ok(KernelInstance { m1, m2 })
    }

    pub fn m1(&self) -> &OrderedMatroid {
        &self.m1
    }

    pub fn m2(&self) -> &OrderedMatroid {
        &self.m2
    }

    pub fn len(&self) -> usize {
        self.m1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m1.is_empty()
    }

    pub fn is_common_independent(&self, x: &ElemSet) -> bool {
        self.m1.is_independent(x) && self.m2.is_independent(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelRound {
    /// Optimal base of the first matroid over the elements not yet rejected.
    pub proposed: ElemSet,
    /// Optimal base of the second matroid inside `proposed`.
    pub accepted: ElemSet,
    pub rejected: ElemSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KernelTrace {
    pub rounds: Vec<KernelRound>,
}

/// Deferred acceptance with matroid choice on both sides.
///
/// The first matroid proposes its optimal base among the elements the
/// second has not rejected; the second keeps its optimal base of that
/// proposal and rejects the rest for good. When nothing is rejected the
/// proposal is a kernel.
pub fn find_kernel(ki: &KernelInstance) -> Result<(ElemSet, KernelTrace)> {
    let n = ki.len();
    let mut rejected = ElemSet::empty(n);
    let mut trace = KernelTrace::default();
    loop {
        let proposed = ki.m1.optimal_base(&ElemSet::full(n).difference(&rejected));
        let accepted = ki.m2.optimal_base(&proposed);
        let newly = proposed.difference(&accepted);
        trace.rounds.push(KernelRound {
            proposed: proposed.clone(),
            accepted,
            rejected: newly.clone(),
        });
        if newly.is_empty() {
            let check = is_kernel(ki, &proposed);
            if !check.is_kernel {
                return Err(Error::invariant(format!(
                    "deferred acceptance output is blocked by {:?}",
                    check.blockers
                )));
            }
            return Ok((proposed, trace));
        }
        rejected = rejected.union(&newly);
        if trace.rounds.len() > n + 1 {
            return Err(Error::invariant("deferred acceptance did not terminate"));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelCheck {
    pub is_kernel: bool,
    pub common_independent: bool,
    /// Outside elements dominated in neither matroid.
    pub blockers: Vec<usize>,
}

pub fn is_kernel(ki: &KernelInstance, i: &ElemSet) -> KernelCheck {
    if !ki.is_common_independent(i) {
        return KernelCheck {
            is_kernel: false,
            common_independent: false,
            blockers: Vec::new(),
        };
    }
    let blockers: Vec<usize> = (0..ki.len())
        .filter(|&v| !i.contains(v))
        .filter(|&v| !ki.m1.dominated_unchecked(i, v) && !ki.m2.dominated_unchecked(i, v))
        .collect();
    KernelCheck {
        is_kernel: blockers.is_empty(),
        common_independent: true,
        blockers,
    }
}
