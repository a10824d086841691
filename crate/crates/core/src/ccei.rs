//! Afriat's critical cost efficiency index.
//!
//! The index is `sup { e : (e, …, e)-GARP holds }`. Both relations grow
//! as `e` grows, so the set of passing levels is an interval starting at
//! zero and its right end is one of the breakpoint ratios `r[t][s]` (or 1).
//! Between two consecutive breakpoints `c < c'` the relations are those of
//! `c` with every weak edge at `c` turned strict, and at `c'` the edges
//! with ratio `c'` join as weak edges only. Hence the supremum can be
//! missed at `c'` itself: when the verdict passes on `(c, c')` but fails
//! at `c'`, the index is `c'` and it is not attained.

use crate::error::{Error, Result};
use crate::model::{cross_expenditures, CrossMatrix, Dataset};
use crate::revpref::{check_uniform, verdict, CycleWitness, GarpVerdict};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct CceiResult<S> {
    /// The index, in `(0, 1]`.
    pub value: S,
    /// Whether `(value, …, value)`-GARP holds.
    pub attained: bool,
    /// Level above `value` at which the violation below was found.
    pub probe_above: Option<S>,
    /// Violation at `probe_above`; present whenever `value < 1`.
    pub witness_above: Option<CycleWitness>,
    /// Sorted candidate levels.
    pub breakpoints: Vec<S>,
}

/// Evaluates uniform e-GARP at sorted candidate levels.
struct Probe<'a, S> {
    cross: &'a CrossMatrix<S>,
}

impl<S: Scalar> Probe<'_, S> {
    fn verdict(&self, e: &S) -> GarpVerdict {
        verdict(&check_uniform(self.cross, e))
    }

    fn holds(&self, e: &S) -> bool {
        check_uniform(self.cross, e).first_violation().is_none()
    }
}

/// Exact index from the finite candidate set.
pub fn ccei_exact<S: Scalar>(d: &Dataset<S>) -> CceiResult<S> {
    let cross = cross_expenditures(d);
    ccei_from_cross(&cross)
}

pub fn ccei_from_cross<S: Scalar>(cross: &CrossMatrix<S>) -> CceiResult<S> {
    let breakpoints = cross.breakpoints();
    let probe = Probe { cross };

    // Largest candidate index that passes; `None` if even the smallest fails.
    let passing = breakpoints.partition_point(|c| probe.holds(c));
    let last_pass = passing.checked_sub(1);

    let (value, attained) = match last_pass {
        Some(k) if k + 1 == breakpoints.len() => (breakpoints[k].clone(), true),
        _ => {
            let lower = last_pass.map_or_else(S::zero, |k| breakpoints[k].clone());
            let next = &breakpoints[passing];
            if probe.holds(&S::midpoint(&lower, next)) {
                (next.clone(), false)
            } else {
                // last_pass is Some: below the smallest breakpoint the
                // relation is empty and always passes.
                (lower, true)
            }
        }
    };

    let (probe_above, witness_above) = if value < S::one() {
        let next = breakpoints
            .iter()
            .find(|c| **c > value)
            .cloned()
            .unwrap_or_else(S::one);
        let mid = S::midpoint(&value, &next);
        let w = probe.verdict(&mid).witness;
        debug_assert!(w.is_some());
        (Some(mid), w)
    } else {
        (None, None)
    };

    CceiResult {
        value,
        attained,
        probe_above,
        witness_above,
        breakpoints,
    }
}

/// Bisection over uniform levels in `[0, 1]`, keeping GARP satisfied at the
/// lower end and violated at the upper end. Returns the lower end once the
/// bracket is narrower than `tol`.
pub fn ccei_binary_search<S: Scalar>(d: &Dataset<S>, tol: &S) -> Result<S> {
    if !tol.is_positive() {
        return Err(Error::InvalidTolerance);
    }
    let cross = cross_expenditures(d);
    let probe = Probe { cross: &cross };
    if probe.holds(&S::one()) {
        return Ok(S::one());
    }
    let (mut lo, mut hi) = (S::zero(), S::one());
    while hi.clone() - &lo > *tol {
        let mid = S::midpoint(&lo, &hi);
        if probe.holds(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{d_viol, section4, singleton, unattained};
    use crate::scalar::{ratio, Exact};

    #[test]
    fn consistent_data_has_index_one() {
        for d in [section4::<Exact>(), singleton()] {
            let r = ccei_exact(&d);
            assert_eq!(r.value, ratio(1, 1));
            assert!(r.attained);
            assert!(r.witness_above.is_none());
            assert_eq!(ccei_binary_search(&d, &ratio(1, 1_000_000_000)).unwrap(), ratio(1, 1));
        }
    }

    #[test]
    fn violating_pair_has_index_four_fifths() {
        let r = ccei_exact(&d_viol::<Exact>());
        assert_eq!(r.value, ratio(4, 5));
        assert!(r.attained);
        assert_eq!(r.breakpoints, vec![ratio(4, 5), ratio(1, 1)]);
        assert_eq!(r.probe_above, Some(ratio(9, 10)));
        assert_eq!(r.witness_above.unwrap().indices, vec![0, 1, 0]);

        let b = ccei_binary_search(&d_viol::<Exact>(), &ratio(1, 1_000_000_000)).unwrap();
        assert!((b - ratio(4, 5)) <= ratio(1, 1_000_000_000));
        let f = ccei_binary_search(&d_viol::<f64>(), &1e-9).unwrap();
        assert!((f - 0.8).abs() <= 1e-9);
        assert!((ccei_exact(&d_viol::<f64>()).value - 0.8).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_cycle_index_is_not_attained() {
        let d = unattained::<Exact>();
        let r = ccei_exact(&d);
        assert_eq!(r.value, ratio(9, 10));
        assert!(!r.attained);
        assert_eq!(r.probe_above, Some(ratio(19, 20)));
        let b = ccei_binary_search(&d, &ratio(1, 1_000_000_000)).unwrap();
        assert!(ratio(9, 10) - b <= ratio(1, 1_000_000_000));
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        assert_eq!(
            ccei_binary_search(&section4::<f64>(), &0.0),
            Err(Error::InvalidTolerance)
        );
        assert_eq!(
            ccei_binary_search(&section4::<f64>(), &-1.0),
            Err(Error::InvalidTolerance)
        );
    }
}
