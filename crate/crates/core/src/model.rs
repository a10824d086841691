//! Datasets, efficiency vectors and cross expenditures.

use crate::error::{Error, Result};
use crate::scalar::{dot, Exact, Scalar};

/// `T` observations of `L` strictly positive prices and nonzero,
/// nonnegative bundles. Rows are stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<S> {
    observations: usize,
    goods: usize,
    prices: Vec<S>,
    bundles: Vec<S>,
}

impl<S: Scalar> Dataset<S> {
    /// Validates raw rows and builds a dataset.
    pub fn new(prices: Vec<Vec<S>>, bundles: Vec<Vec<S>>) -> Result<Self> {
        validate_dataset(prices, bundles)
    }

    pub fn observations(&self) -> usize {
        self.observations
    }

    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn price(&self, t: usize) -> &[S] {
        &self.prices[t * self.goods..(t + 1) * self.goods]
    }

    pub fn bundle(&self, t: usize) -> &[S] {
        &self.bundles[t * self.goods..(t + 1) * self.goods]
    }

    /// `p^t · x^t`.
    pub fn expenditure(&self, t: usize) -> S {
        dot(self.price(t), self.bundle(t))
    }

    /// `p^t · x` for an arbitrary bundle.
    pub fn cost_at(&self, t: usize, x: &[S]) -> S {
        dot(self.price(t), x)
    }

    pub fn price_rows(&self) -> impl Iterator<Item = &[S]> {
        self.prices.chunks(self.goods)
    }

    pub fn bundle_rows(&self) -> impl Iterator<Item = &[S]> {
        self.bundles.chunks(self.goods)
    }

    /// Applies `f` entrywise. Validation is repeated on the result.
    pub fn try_map<U: Scalar>(&self, mut f: impl FnMut(&S) -> Option<U>) -> Result<Dataset<U>> {
        let conv = |rows: &[S], f: &mut dyn FnMut(&S) -> Option<U>| -> Result<Vec<Vec<U>>> {
            rows.chunks(self.goods)
                .map(|row| {
                    row.iter()
                        .map(|v| {
                            f(v).ok_or_else(|| {
                                Error::ShapeMismatch("value not representable".into())
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let prices = conv(&self.prices, &mut f)?;
        let bundles = conv(&self.bundles, &mut f)?;
        Dataset::new(prices, bundles)
    }

    pub fn to_f64(&self) -> Dataset<f64> {
        Dataset {
            observations: self.observations,
            goods: self.goods,
            prices: self.prices.iter().map(Scalar::to_f64).collect(),
            bundles: self.bundles.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Reorders observations: observation `i` of the result is
    /// observation `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Dataset<S> {
        let mut prices = Vec::with_capacity(self.prices.len());
        let mut bundles = Vec::with_capacity(self.bundles.len());
        for &t in order {
            prices.extend_from_slice(self.price(t));
            bundles.extend_from_slice(self.bundle(t));
        }
        Dataset {
            observations: self.observations,
            goods: self.goods,
            prices,
            bundles,
        }
    }

    /// Multiplies the price vector at observation `t` by `factor > 0`.
    pub fn with_scaled_prices(&self, t: usize, factor: &S) -> Dataset<S> {
        assert!(factor.is_positive());
        let mut out = self.clone();
        for p in &mut out.prices[t * self.goods..(t + 1) * self.goods] {
            *p = p.clone() * factor;
        }
        out
    }
}

impl Dataset<f64> {
    /// Exact image of a floating-point dataset (every finite `f64` is a
    /// dyadic rational).
    pub fn to_exact(&self) -> Dataset<Exact> {
        Dataset {
            observations: self.observations,
            goods: self.goods,
            prices: self.prices.iter().map(|v| Exact::try_from_f64(*v).unwrap()).collect(),
            bundles: self.bundles.iter().map(|v| Exact::try_from_f64(*v).unwrap()).collect(),
        }
    }
}

/// Checks the domain assumptions: rectangular input, every price strictly
/// positive, every bundle nonnegative and nonzero.
pub fn validate_dataset<S: Scalar>(prices: Vec<Vec<S>>, bundles: Vec<Vec<S>>) -> Result<Dataset<S>> {
    let observations = prices.len();
    if observations == 0 {
        return Err(Error::ShapeMismatch("dataset has no observations".into()));
    }
    if bundles.len() != observations {
        return Err(Error::ShapeMismatch(format!(
            "{} price rows but {} bundle rows",
            observations,
            bundles.len()
        )));
    }
    let goods = prices[0].len();
    if goods == 0 {
        return Err(Error::ShapeMismatch("observations have no goods".into()));
    }
    for (t, (p, x)) in prices.iter().zip(&bundles).enumerate() {
        if p.len() != goods || x.len() != goods {
            return Err(Error::ShapeMismatch(format!(
                "observation {} has {} prices and {} quantities, expected {}",
                t + 1,
                p.len(),
                x.len(),
                goods
            )));
        }
        if let Some(i) = p.iter().position(|v| !v.is_positive()) {
            return Err(Error::NonpositivePrice { obs: t, good: i });
        }
        if let Some(i) = x.iter().position(|v| *v < S::zero()) {
            return Err(Error::NegativeQuantity { obs: t, good: i });
        }
        if x.iter().all(|v| v.is_zero()) {
            return Err(Error::ZeroBundle { obs: t });
        }
    }
    Ok(Dataset {
        observations,
        goods,
        prices: prices.into_iter().flatten().collect(),
        bundles: bundles.into_iter().flatten().collect(),
    })
}

/// Per-observation efficiency coefficients, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyVector<S>(Vec<S>);

impl<S: Scalar> EfficiencyVector<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        if let Some(t) = values
            .iter()
            .position(|e| !e.is_positive() || *e > S::one())
        {
            return Err(Error::InvalidEfficiency { obs: t });
        }
        Ok(EfficiencyVector(values))
    }

    /// `(e, e, …, e)`.
    pub fn uniform(e: S, observations: usize) -> Result<Self> {
        Self::new(vec![e; observations])
    }

    pub fn ones(observations: usize) -> Self {
        EfficiencyVector(vec![S::one(); observations])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.0
    }

    pub fn get(&self, t: usize) -> &S {
        &self.0[t]
    }

    pub fn check_len(&self, observations: usize) -> Result<()> {
        if self.0.len() != observations {
            return Err(Error::LengthMismatch {
                expected: observations,
                found: self.0.len(),
            });
        }
        Ok(())
    }

    pub fn to_f64(&self) -> EfficiencyVector<f64> {
        EfficiencyVector(self.0.iter().map(Scalar::to_f64).collect())
    }
}

/// Raw cross expenditures `a[t][s] = p^t · x^s` and the breakpoint ratios
/// `r[t][s] = a[t][s] / a[t][t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossMatrix<S> {
    n: usize,
    a: Vec<S>,
    ratios: Vec<S>,
}

impl<S: Scalar> CrossMatrix<S> {
    pub fn observations(&self) -> usize {
        self.n
    }

    pub fn expenditure(&self, t: usize, s: usize) -> &S {
        &self.a[t * self.n + s]
    }

    pub fn own(&self, t: usize) -> &S {
        self.expenditure(t, t)
    }

    pub fn ratio(&self, t: usize, s: usize) -> &S {
        &self.ratios[t * self.n + s]
    }

    /// `p^t · (x^s − e^t x^t)`.
    pub fn slack(&self, t: usize, s: usize, e_t: &S) -> S {
        self.expenditure(t, s).clone() - e_t.clone() * self.own(t)
    }

    /// Off-diagonal and diagonal ratios in `(0, 1]`, plus `1`, sorted and
    /// deduplicated. The e-GARP verdict under a uniform efficiency level can
    /// only change at these values.
    pub fn breakpoints(&self) -> Vec<S> {
        let mut out: Vec<S> = self
            .ratios
            .iter()
            .filter(|r| r.is_positive() && **r <= S::one())
            .cloned()
            .chain(std::iter::once(S::one()))
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).expect("ratios are finite"));
        out.dedup();
        out
    }
}

pub fn cross_expenditures<S: Scalar>(d: &Dataset<S>) -> CrossMatrix<S> {
    let n = d.observations();
    let mut a = Vec::with_capacity(n * n);
    for t in 0..n {
        for s in 0..n {
            a.push(dot(d.price(t), d.bundle(s)));
        }
    }
    let ratios = (0..n)
        .flat_map(|t| {
            let own = a[t * n + t].clone();
            let row = &a[t * n..(t + 1) * n];
            row.iter()
                .enumerate()
                .map(move |(s, v)| if s == t { S::one() } else { v.clone() / &own })
                .collect::<Vec<_>>()
        })
        .collect();
    CrossMatrix { n, a, ratios }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn q(n: i64) -> Exact {
        ratio(n, 1)
    }

    fn section4() -> Dataset<Exact> {
        Dataset::new(vec![vec![q(1), q(1)], vec![q(2), q(2)]], vec![vec![q(1), q(1)], vec![q(2), q(2)]])
            .unwrap()
    }

    #[test]
    fn worked_example_validates() {
        let d = section4();
        assert_eq!(d.observations(), 2);
        assert_eq!(d.goods(), 2);
        assert_eq!(d.expenditure(1), q(8));
    }

    #[test]
    fn zero_bundle_is_rejected() {
        let err = Dataset::new(vec![vec![1.0, 1.0]], vec![vec![0.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::ZeroBundle { obs: 0 });
        assert_eq!(err.to_string(), "bundle at observation 1 is the zero vector");
    }

    #[test]
    fn nonpositive_price_is_rejected() {
        let err = Dataset::new(vec![vec![0.0, 1.0]], vec![vec![1.0, 1.0]]).unwrap_err();
        assert_eq!(err, Error::NonpositivePrice { obs: 0, good: 0 });
        let err = Dataset::new(vec![vec![1.0, -2.0]], vec![vec![1.0, 1.0]]).unwrap_err();
        assert_eq!(err, Error::NonpositivePrice { obs: 0, good: 1 });
    }

    #[test]
    fn negative_quantity_and_ragged_rows_are_rejected() {
        let err = Dataset::new(vec![vec![1.0, 1.0]], vec![vec![2.0, -1.0]]).unwrap_err();
        assert_eq!(err, Error::NegativeQuantity { obs: 0, good: 1 });
        assert!(matches!(
            Dataset::new(vec![vec![1.0, 1.0], vec![1.0]], vec![vec![1.0, 1.0], vec![1.0, 1.0]]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            Dataset::new(vec![vec![1.0]], vec![vec![1.0], vec![1.0]]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            Dataset::<f64>::new(vec![], vec![]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn worked_example_cross_matrix() {
        let c = cross_expenditures(&section4());
        assert_eq!(*c.expenditure(0, 0), q(2));
        assert_eq!(*c.expenditure(0, 1), q(4));
        assert_eq!(*c.expenditure(1, 0), q(4));
        assert_eq!(*c.expenditure(1, 1), q(8));
        assert_eq!(*c.ratio(0, 1), q(2));
        assert_eq!(*c.ratio(1, 0), ratio(1, 2));
        assert_eq!(*c.ratio(0, 0), q(1));
        assert_eq!(c.breakpoints(), vec![ratio(1, 2), q(1)]);
    }

    #[test]
    fn single_observation_cross_matrix() {
        let d = Dataset::new(vec![vec![q(1), q(1)]], vec![vec![q(1), q(1)]]).unwrap();
        let c = cross_expenditures(&d);
        assert_eq!(*c.expenditure(0, 0), q(2));
        assert_eq!(*c.ratio(0, 0), q(1));
    }

    #[test]
    fn price_scaling_scales_row_and_keeps_ratios() {
        let d = section4();
        let scaled = d.with_scaled_prices(0, &ratio(7, 3));
        let (c, cs) = (cross_expenditures(&d), cross_expenditures(&scaled));
        for s in 0..2 {
            assert_eq!(*cs.expenditure(0, s), c.expenditure(0, s).clone() * ratio(7, 3));
            assert_eq!(cs.expenditure(1, s), c.expenditure(1, s));
            for t in 0..2 {
                assert_eq!(cs.ratio(t, s), c.ratio(t, s));
            }
        }
    }

    #[test]
    fn efficiency_vector_bounds() {
        assert!(EfficiencyVector::new(vec![1.0, 0.5]).is_ok());
        assert_eq!(
            EfficiencyVector::new(vec![1.0, 0.0]).unwrap_err(),
            Error::InvalidEfficiency { obs: 1 }
        );
        assert_eq!(
            EfficiencyVector::new(vec![1.01]).unwrap_err(),
            Error::InvalidEfficiency { obs: 0 }
        );
        let e = EfficiencyVector::<f64>::ones(3);
        assert_eq!(
            e.check_len(2).unwrap_err(),
            Error::LengthMismatch { expected: 2, found: 3 }
        );
    }
}
