use super::Matroid;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// Largest ground set the exhaustive checks will touch.
pub const AXIOM_CHECK_LIMIT: usize = 12;

fn guard(m: &Matroid) -> Result<usize> {
    let n = m.len();
    if n > AXIOM_CHECK_LIMIT {
        return Err(Error::Scale {
            what: "ground set",
            size: n,
            limit: AXIOM_CHECK_LIMIT,
        });
    }
    Ok(n)
}

fn independence_table(m: &Matroid, n: usize) -> Vec<bool> {
    (0u64..1 << n)
        .map(|mask| m.is_independent(&ElemSet::from_mask(n, mask)))
        .collect()
}

/// Exhaustively checks the matroid axioms: the empty set is independent,
/// the family is hereditary, and the augmentation property holds.
pub fn check_axioms(m: &Matroid) -> Result<bool> {
    let n = guard(m)?;
    let indep = independence_table(m, n);
    if !indep[0] {
        return Ok(false);
    }
    for mask in 0..indep.len() {
        if !indep[mask] {
            continue;
        }
        let mut bits = mask;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if !indep[mask ^ low] {
                return Ok(false);
            }
            bits ^= low;
        }
    }
    // With heredity in place, augmenting from |A| to |A|+1 suffices.
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (mask, &ok) in indep.iter().enumerate() {
        if ok {
            by_size[mask.count_ones() as usize].push(mask);
        }
    }
    for k in 0..n {
        for &a in &by_size[k] {
            for &b in &by_size[k + 1] {
                let mut extra = b & !a;
                let mut found = false;
                while extra != 0 {
                    let low = extra & extra.wrapping_neg();
                    if indep[a | low] {
                        found = true;
                        break;
                    }
                    extra ^= low;
                }
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All circuits of a small matroid.
pub fn all_circuits(m: &Matroid) -> Result<Vec<ElemSet>> {
    let n = guard(m)?;
    let indep = independence_table(m, n);
    let mut out = Vec::new();
    for mask in 0..indep.len() {
        if indep[mask] {
            continue;
        }
        let mut bits = mask;
        let mut minimal = true;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if !indep[mask ^ low] {
                minimal = false;
                break;
            }
            bits ^= low;
        }
        if minimal {
            out.push(ElemSet::from_mask(n, mask as u64));
        }
    }
    Ok(out)
}
