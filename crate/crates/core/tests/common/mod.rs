#![allow(dead_code)]

use ccei_core::scalar::ratio;
use ccei_core::{cross_expenditures, Dataset, EfficiencyVector, Exact};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Entry in `[0.1, 10]` with two decimals, as hundredths.
fn hundredths<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(10..=1000)
}

pub fn random_dataset<R: Rng>(rng: &mut R, max_t: usize, max_l: usize) -> Dataset<Exact> {
    let t = rng.gen_range(1..=max_t);
    let l = rng.gen_range(1..=max_l);
    dataset_from_hundredths(
        (0..t).map(|_| (0..l).map(|_| hundredths(rng)).collect()).collect(),
        (0..t).map(|_| (0..l).map(|_| hundredths(rng)).collect()).collect(),
    )
}

pub fn dataset_from_hundredths(prices: Vec<Vec<i64>>, bundles: Vec<Vec<i64>>) -> Dataset<Exact> {
    let conv = |rows: Vec<Vec<i64>>| -> Vec<Vec<Exact>> {
        rows.into_iter()
            .map(|r| r.into_iter().map(|v| ratio(v, 100)).collect())
            .collect()
    };
    Dataset::new(conv(prices), conv(bundles)).unwrap()
}

/// Efficiency vectors that land on breakpoints often enough to exercise
/// ties: each coefficient is 1, a ratio from the data, or a random level.
pub fn random_efficiency<R: Rng>(rng: &mut R, d: &Dataset<Exact>) -> EfficiencyVector<Exact> {
    let cross = cross_expenditures(d);
    let candidates = cross.breakpoints();
    let n = d.observations();
    let uniform = rng.gen_bool(0.3);
    let draw = |rng: &mut R| match rng.gen_range(0..3) {
        0 => ratio(1, 1),
        1 => candidates.choose(rng).unwrap().clone(),
        _ => ratio(rng.gen_range(1..=1000), 1000),
    };
    if uniform {
        let e = draw(rng);
        EfficiencyVector::uniform(e, n).unwrap()
    } else {
        EfficiencyVector::new((0..n).map(|_| draw(rng)).collect()).unwrap()
    }
}

pub fn arb_dataset(max_t: usize, max_l: usize) -> impl Strategy<Value = Dataset<Exact>> {
    (1..=max_t, 1..=max_l).prop_flat_map(|(t, l)| {
        let row = || prop::collection::vec(10i64..=1000, l);
        (
            prop::collection::vec(row(), t),
            prop::collection::vec(row(), t),
        )
            .prop_map(|(p, x)| dataset_from_hundredths(p, x))
    })
}

/// Dataset together with an efficiency vector (thousandths in (0, 1]).
pub fn arb_dataset_with_e(
    max_t: usize,
    max_l: usize,
) -> impl Strategy<Value = (Dataset<Exact>, EfficiencyVector<Exact>)> {
    arb_dataset(max_t, max_l).prop_flat_map(|d| {
        let n = d.observations();
        (
            Just(d),
            prop::collection::vec(prop_oneof![Just(1000i64), 1i64..=1000], n),
        )
            .prop_map(|(d, e)| {
                let e = EfficiencyVector::new(e.into_iter().map(|v| ratio(v, 1000)).collect()).unwrap();
                (d, e)
            })
    })
}
