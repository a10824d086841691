//! Brute-force reference implementations for small datasets.
//!
//! Nothing here reuses the relation, closure or index code of the other
//! modules: edges are recomputed from raw inner products in product form
//! (`p^t·x^s ≤ e^t p^t·x^t`) and cycles are enumerated explicitly.

use crate::error::{Error, Result};
use crate::model::{Dataset, EfficiencyVector};
use crate::scalar::Scalar;

/// Largest dataset the enumerations accept.
pub const ORACLE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict<S> {
    pub garp_holds: bool,
    /// Every simple cycle that contains a strict edge, rotated to start at
    /// its smallest index and closed (`[a, …, a]`), in discovery order.
    pub violating_cycles: Vec<Vec<usize>>,
    /// Filled in by [`full_oracle`].
    pub ccei_value: Option<S>,
}

struct Edges {
    weak: Vec<Vec<bool>>,
    strict: Vec<Vec<bool>>,
}

fn check_cap<S: Scalar>(d: &Dataset<S>) -> Result<()> {
    if d.observations() > ORACLE_CAP {
        return Err(Error::TooLarge {
            observations: d.observations(),
            cap: ORACLE_CAP,
        });
    }
    Ok(())
}

fn inner<S: Scalar>(p: &[S], x: &[S]) -> S {
    let mut acc = S::zero();
    for i in 0..p.len() {
        acc = acc + p[i].clone() * &x[i];
    }
    acc
}

fn edges<S: Scalar>(d: &Dataset<S>, e: &[S]) -> Edges {
    let n = d.observations();
    let mut weak = vec![vec![false; n]; n];
    let mut strict = vec![vec![false; n]; n];
    for t in 0..n {
        let budget = e[t].clone() * &inner(d.price(t), d.bundle(t));
        for s in 0..n {
            let cost = inner(d.price(t), d.bundle(s));
            weak[t][s] = cost.le_tol(&budget);
            strict[t][s] = cost.lt_tol(&budget);
        }
    }
    Edges { weak, strict }
}

/// Depth-first enumeration of simple cycles whose smallest vertex is the
/// start vertex.
fn simple_cycles(weak: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn extend(
        weak: &[Vec<bool>],
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().unwrap();
        for next in start..weak.len() {
            if !weak[last][next] {
                continue;
            }
            if next == start {
                let mut cycle = path.clone();
                cycle.push(start);
                out.push(cycle);
            } else if !on_path[next] {
                on_path[next] = true;
                path.push(next);
                extend(weak, start, path, on_path, out);
                path.pop();
                on_path[next] = false;
            }
        }
    }

    let n = weak.len();
    let mut out = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        on_path[start] = true;
        extend(weak, start, &mut vec![start], &mut on_path, &mut out);
    }
    out
}

fn enumerate<S: Scalar>(d: &Dataset<S>, e: &[S]) -> (bool, Vec<Vec<usize>>) {
    let g = edges(d, e);
    let violating: Vec<Vec<usize>> = simple_cycles(&g.weak)
        .into_iter()
        .filter(|c| c.windows(2).any(|w| g.strict[w[0]][w[1]]))
        .collect();
    (violating.is_empty(), violating)
}

pub fn garp_oracle<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>) -> Result<OracleVerdict<S>> {
    check_cap(d)?;
    e.check_len(d.observations())?;
    let (garp_holds, violating_cycles) = enumerate(d, e.values());
    Ok(OracleVerdict {
        garp_holds,
        violating_cycles,
        ccei_value: None,
    })
}

/// [`garp_oracle`] plus the dataset's efficiency index.
pub fn full_oracle<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>) -> Result<OracleVerdict<S>> {
    let mut v = garp_oracle(d, e)?;
    v.ccei_value = Some(ccei_oracle(d)?);
    Ok(v)
}

/// Evaluates the cycle enumeration at every ratio `p^t·x^s / p^t·x^t` in
/// `(0, 1]`, at 1, and at the midpoints below each of them. The index is
/// the largest candidate at which GARP holds either at the candidate or
/// just below it.
pub fn ccei_oracle<S: Scalar>(d: &Dataset<S>) -> Result<S> {
    check_cap(d)?;
    let n = d.observations();
    let mut candidates = vec![S::one()];
    for t in 0..n {
        let own = inner(d.price(t), d.bundle(t));
        for s in 0..n {
            let r = inner(d.price(t), d.bundle(s)) / &own;
            if r.is_positive() && r <= S::one() && !candidates.contains(&r) {
                candidates.push(r);
            }
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let holds = |level: &S| enumerate(d, &vec![level.clone(); n]).0;
    let mut best = None;
    let mut below = S::zero();
    for c in &candidates {
        let mid = S::midpoint(&below, c);
        if holds(c) || holds(&mid) {
            best = Some(c.clone());
        }
        below = c.clone();
    }
    Ok(best.expect("GARP holds below the smallest ratio"))
}

/// Searches for integer utility levels `u` with `u^t ≥ u^s` on weak edges
/// and `u^t > u^s` on strict edges by longest-path relaxation. Returns the
/// levels, or `None` when a strict edge sits on a cycle.
pub fn ordinal_levels<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>) -> Result<Option<Vec<i64>>> {
    check_cap(d)?;
    e.check_len(d.observations())?;
    let g = edges(d, e.values());
    let n = d.observations();
    let mut u = vec![0i64; n];
    for _ in 0..=n {
        let mut changed = false;
        for t in 0..n {
            for s in 0..n {
                if g.weak[t][s] {
                    let need = u[s] + i64::from(g.strict[t][s]);
                    if u[t] < need {
                        u[t] = need;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

pub fn ordinal_oracle<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>) -> Result<bool> {
    Ok(ordinal_levels(d, e)?.is_some())
}
