//! Small reference datasets used throughout the tests and the CLI docs.

use crate::model::Dataset;
use crate::scalar::Scalar;

fn build<S: Scalar>(prices: &[&[&str]], bundles: &[&[&str]]) -> Dataset<S> {
    let parse = |rows: &[&[&str]]| -> Vec<Vec<S>> {
        rows.iter()
            .map(|r| r.iter().map(|v| S::parse_decimal(v).unwrap()).collect())
            .collect()
    };
    Dataset::new(parse(prices), parse(bundles)).unwrap()
}

/// `p¹ = (1,1), x¹ = (1,1); p² = (2,2), x² = (2,2)`. Consistent with
/// GARP, yet swapping the bundles across observations would save money.
pub fn section4<S: Scalar>() -> Dataset<S> {
    build(&[&["1", "1"], &["2", "2"]], &[&["1", "1"], &["2", "2"]])
}

/// Symmetric strict 2-cycle: `a = [[5,4],[4,5]]`, both breakpoints `4/5`.
pub fn d_viol<S: Scalar>() -> Dataset<S> {
    build(&[&["2", "1"], &["1", "2"]], &[&["2", "1"], &["1", "2"]])
}

/// Asymmetric 2-cycle with breakpoints `r[0][1] = 1/2` and
/// `r[1][0] = 9/10`. e-GARP holds for every `e < 9/10` and fails at
/// `9/10`, so the efficiency index `9/10` is a supremum that is not
/// attained.
pub fn unattained<S: Scalar>() -> Dataset<S> {
    build(&[&["1", "1"], &["0.45", "1"]], &[&["2", "0"], &["0", "1"]])
}

/// Single observation.
pub fn singleton<S: Scalar>() -> Dataset<S> {
    build(&[&["1", "1"]], &[&["1", "1"]])
}
