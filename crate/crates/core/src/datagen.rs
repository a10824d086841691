//! Synthetic demand data from Cobb-Douglas and CES consumers.
//!
//! With zero waste the bundle is the closed-form Marshallian demand. With
//! waste `w > 0` the consumer still spends the whole income but ends up
//! with the utility that `(1 − w)` of the income would have bought: the
//! bundle slides from the optimum towards the corner that spends
//! everything on good 1 until utility drops to that level.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ccei::ccei_exact;
use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::scalar::Exact;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UtilityFamily {
    /// `U(x) = Π x_i^{α_i}`, weights positive and summing to one.
    CobbDouglas { weights: Vec<f64> },
    /// `U(x) = (Σ α_i x_i^ρ)^{1/ρ}` with `ρ = (σ − 1)/σ`, `σ ≠ 1`.
    Ces { weights: Vec<f64>, elasticity: f64 },
}

impl UtilityFamily {
    pub fn weights(&self) -> &[f64] {
        match self {
            UtilityFamily::CobbDouglas { weights } | UtilityFamily::Ces { weights, .. } => weights,
        }
    }

    pub fn utility(&self, x: &[f64]) -> f64 {
        match self {
            UtilityFamily::CobbDouglas { weights } => weights
                .iter()
                .zip(x)
                .map(|(a, v)| v.powf(*a))
                .product(),
            UtilityFamily::Ces {
                weights,
                elasticity,
            } => {
                let rho = (elasticity - 1.0) / elasticity;
                if rho < 0.0 && x.iter().any(|v| *v <= 0.0) {
                    return 0.0;
                }
                let s: f64 = weights.iter().zip(x).map(|(a, v)| a * v.powf(rho)).sum();
                s.powf(1.0 / rho)
            }
        }
    }

    /// Utility-maximizing bundle at prices `p` and income `m`.
    pub fn demand(&self, p: &[f64], m: f64) -> Vec<f64> {
        match self {
            UtilityFamily::CobbDouglas { weights } => {
                weights.iter().zip(p).map(|(a, pi)| a * m / pi).collect()
            }
            UtilityFamily::Ces {
                weights,
                elasticity,
            } => {
                let s = *elasticity;
                let denom: f64 = weights
                    .iter()
                    .zip(p)
                    .map(|(a, pi)| a.powf(s) * pi.powf(1.0 - s))
                    .sum();
                weights
                    .iter()
                    .zip(p)
                    .map(|(a, pi)| a.powf(s) * pi.powf(-s) * m / denom)
                    .collect()
            }
        }
    }

    fn validate(&self, goods: usize) -> Result<()> {
        let w = self.weights();
        if w.len() != goods {
            return Err(Error::InvalidSpec(format!(
                "{} weights for {} goods",
                w.len(),
                goods
            )));
        }
        if w.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidSpec("weights must be positive".into()));
        }
        if let UtilityFamily::CobbDouglas { .. } = self {
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidSpec(format!(
                    "Cobb-Douglas weights sum to {total}, expected 1"
                )));
            }
        }
        if let UtilityFamily::Ces { elasticity, .. } = self {
            if !elasticity.is_finite() || *elasticity <= 0.0 {
                return Err(Error::InvalidSpec("elasticity must be positive".into()));
            }
            if (*elasticity - 1.0).abs() < 1e-12 {
                return Err(Error::InvalidSpec(
                    "CES with elasticity 1 is Cobb-Douglas; use that family".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: UtilityFamily,
    pub observations: usize,
    pub goods: usize,
    pub price_range: (f64, f64),
    pub income_range: (f64, f64),
    /// Per-observation waste in `[0, 1)`. Empty means no waste.
    #[serde(default)]
    pub waste: Vec<f64>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.observations == 0 || self.goods == 0 {
            return Err(Error::InvalidSpec("need at least one observation and one good".into()));
        }
        self.family.validate(self.goods)?;
        for (name, (lo, hi)) in [("price", self.price_range), ("income", self.income_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return Err(Error::InvalidSpec(format!(
                    "{name} range must satisfy 0 < low ≤ high"
                )));
            }
        }
        if !self.waste.is_empty() && self.waste.len() != self.observations {
            return Err(Error::InvalidSpec(format!(
                "{} waste entries for {} observations",
                self.waste.len(),
                self.observations
            )));
        }
        if self.waste.iter().any(|w| !(0.0..1.0).contains(w)) {
            return Err(Error::InvalidSpec("waste must lie in [0, 1)".into()));
        }
        Ok(())
    }

    fn waste_at(&self, t: usize) -> f64 {
        self.waste.get(t).copied().unwrap_or(0.0)
    }
}

fn draw<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Generated data together with the income drawn at each observation.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub data: Dataset<f64>,
    pub incomes: Vec<f64>,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Dataset<f64>> {
    Ok(generate_with_incomes(spec)?.data)
}

pub fn generate_with_incomes(spec: &GeneratorSpec) -> Result<Generated> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut prices = Vec::with_capacity(spec.observations);
    let mut bundles = Vec::with_capacity(spec.observations);
    let mut incomes = Vec::with_capacity(spec.observations);
    for t in 0..spec.observations {
        let p: Vec<f64> = (0..spec.goods).map(|_| draw(&mut rng, spec.price_range)).collect();
        let m = draw(&mut rng, spec.income_range);
        let optimum = spec.family.demand(&p, m);
        let w = spec.waste_at(t);
        let x = if w > 0.0 {
            wasteful_bundle(&spec.family, &p, m, &optimum, w).ok_or(Error::InfeasibleWaste { obs: t })?
        } else {
            optimum
        };
        prices.push(p);
        bundles.push(x);
        incomes.push(m);
    }
    Ok(Generated {
        data: Dataset::new(prices, bundles)?,
        incomes,
    })
}

/// On-budget bundle whose utility equals that of the optimum at income
/// `(1 − w)·m`, found by bisection along the segment from the optimum to
/// the all-good-1 corner.
fn wasteful_bundle(family: &UtilityFamily, p: &[f64], m: f64, optimum: &[f64], w: f64) -> Option<Vec<f64>> {
    let target = family.utility(&family.demand(p, (1.0 - w) * m));
    let mut corner = vec![0.0; p.len()];
    corner[0] = m / p[0];
    let along = |theta: f64| -> Vec<f64> {
        optimum
            .iter()
            .zip(&corner)
            .map(|(o, c)| (1.0 - theta) * o + theta * c)
            .collect()
    };
    if family.utility(&corner) > target {
        return None;
    }
    // Quasi-concave utility decreases along the segment away from the optimum.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if family.utility(&along(mid)) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Some(along(lo))
}

/// Efficiency index of the generated data, computed exactly.
pub fn waste_floor(spec: &GeneratorSpec) -> Result<Exact> {
    Ok(ccei_exact(&generate(spec)?.to_exact()).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn cd(weights: Vec<f64>) -> UtilityFamily {
        UtilityFamily::CobbDouglas { weights }
    }

    fn spec(family: UtilityFamily, observations: usize, goods: usize) -> GeneratorSpec {
        GeneratorSpec {
            family,
            observations,
            goods,
            price_range: (0.5, 3.0),
            income_range: (5.0, 20.0),
            waste: vec![],
            seed: 11,
        }
    }

    #[test]
    fn cobb_douglas_closed_form() {
        let f = cd(vec![0.5, 0.5]);
        assert_eq!(f.demand(&[1.0, 1.0], 2.0), vec![1.0, 1.0]);
        assert_eq!(f.demand(&[2.0, 2.0], 8.0), vec![2.0, 2.0]);
    }

    #[test]
    fn ces_demand_exhausts_income_and_is_optimal_on_a_grid() {
        let f = UtilityFamily::Ces {
            weights: vec![0.3, 0.7],
            elasticity: 0.5,
        };
        let (p, m) = ([1.5, 0.8], 10.0);
        let x = f.demand(&p, m);
        assert!((p[0] * x[0] + p[1] * x[1] - m).abs() < 1e-12);
        let best = f.utility(&x);
        for k in 1..100 {
            let a = m * k as f64 / 100.0 / p[0];
            let b = (m - a * p[0]) / p[1];
            assert!(f.utility(&[a, b]) <= best + 1e-12);
        }
    }

    #[test]
    fn zero_waste_data_has_full_efficiency() {
        let s = spec(cd(vec![0.2, 0.3, 0.5]), 6, 3);
        assert_eq!(waste_floor(&s).unwrap(), ratio(1, 1));
    }

    #[test]
    fn waste_keeps_expenditure_and_lowers_utility() {
        let mut s = spec(cd(vec![0.4, 0.6]), 2, 2);
        s.waste = vec![0.2, 0.0];
        let d = generate(&s).unwrap();
        let clean = generate(&GeneratorSpec { waste: vec![], ..s.clone() }).unwrap();
        assert_eq!(d.price(0), clean.price(0));
        let (m, m0) = (d.expenditure(0), clean.expenditure(0));
        assert!((m - m0).abs() <= 1e-12 * m0);
        let u = s.family.utility(d.bundle(0));
        let u0 = s.family.utility(clean.bundle(0));
        assert!((u - 0.8 * u0).abs() <= 1e-9 * u0);
        assert!(waste_floor(&s).unwrap() <= ratio(1, 1));
    }

    #[test]
    fn constant_prices_stay_consistent_under_waste() {
        let mut s = spec(cd(vec![0.5, 0.5]), 5, 2);
        s.price_range = (1.5, 1.5);
        s.waste = vec![0.2; 5];
        assert_eq!(waste_floor(&s).unwrap(), ratio(1, 1));
    }

    #[test]
    fn unreachable_waste_is_reported() {
        // High substitutability: the corner is worth more than 80% of the optimum.
        let mut s = spec(
            UtilityFamily::Ces {
                weights: vec![0.5, 0.5],
                elasticity: 8.0,
            },
            1,
            2,
        );
        s.price_range = (1.0, 1.0);
        s.waste = vec![0.2];
        assert_eq!(generate(&s), Err(Error::InfeasibleWaste { obs: 0 }));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(matches!(generate(&spec(cd(vec![0.5, 0.6]), 2, 2)), Err(Error::InvalidSpec(_))));
        assert!(matches!(generate(&spec(cd(vec![1.0]), 2, 2)), Err(Error::InvalidSpec(_))));
        let ces1 = UtilityFamily::Ces {
            weights: vec![0.5, 0.5],
            elasticity: 1.0,
        };
        assert!(matches!(generate(&spec(ces1, 2, 2)), Err(Error::InvalidSpec(_))));
        let mut s = spec(cd(vec![0.5, 0.5]), 2, 2);
        s.waste = vec![1.0, 0.0];
        assert!(matches!(generate(&s), Err(Error::InvalidSpec(_))));
        s.waste = vec![];
        s.price_range = (0.0, 1.0);
        assert!(matches!(generate(&s), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn same_seed_same_data() {
        let s = spec(cd(vec![0.5, 0.5]), 4, 2);
        assert_eq!(generate(&s).unwrap().to_exact(), generate(&s).unwrap().to_exact());
        let other = GeneratorSpec { seed: 12, ..s.clone() };
        assert_ne!(generate(&s).unwrap(), generate(&other).unwrap());
    }
}
