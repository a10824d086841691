//! Sampling checks that a constructed Afriat utility both e-rationalizes
//! and e-cost-rationalizes the data.
//!
//! Rationalization: nothing in the deflated budget set
//! `B^t(e^t) = { x ≥ 0 : p^t·x ≤ e^t p^t·x^t }` beats `x^t`.
//! Cost-rationalization: nothing in the upper set
//! `P^t = { x : U(x) ≥ U(x^t) }` costs less than `e^t p^t·x^t` at `p^t`.
//!
//! All sampling runs in `f64` through [`AfriatUtility`], independently of
//! how the numbers were constructed. Observations are checked in parallel;
//! each draws from its own generator seeded from the master seed, so a
//! report depends only on the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::afriat::{AfriatSolution, AfriatUtility};
use crate::error::Result;
use crate::model::{Dataset, EfficiencyVector};
use crate::revpref::check_e_garp;
use crate::scalar::{dot, Scalar};

pub const DEFAULT_SAMPLES: usize = 10_000;
/// Utility gap at which the ray bisection stops.
pub const LEVEL_TOL: f64 = 1e-10;
/// Relative slack allowed before a sample counts as a violation.
pub const SAMPLE_REL_TOL: f64 = 1e-9;

const MAX_DOUBLINGS: usize = 200;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalizationViolation {
    pub x: Vec<f64>,
    pub utility: f64,
    pub observed_utility: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostViolation {
    pub x: Vec<f64>,
    pub cost: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub observation: usize,
    pub budget_samples: usize,
    pub upper_set_samples: usize,
    pub rationalization_violations: Vec<RationalizationViolation>,
    pub cost_violations: Vec<CostViolation>,
    /// Seed of this observation's generator.
    pub seed: u64,
    /// The box rejection sampler accepted nothing. Ray samples still ran.
    pub rejection_exhausted: bool,
}

impl VerificationReport {
    fn new(observation: usize, seed: u64) -> Self {
        VerificationReport {
            observation,
            budget_samples: 0,
            upper_set_samples: 0,
            rationalization_violations: Vec::new(),
            cost_violations: Vec::new(),
            seed,
            rejection_exhausted: false,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.rationalization_violations.is_empty() && self.cost_violations.is_empty()
    }
}

/// Per-observation seed (SplitMix64 of the master seed and index).
pub fn observation_seed(master: u64, t: usize) -> u64 {
    let mut z = master.wrapping_add((t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Shared `f64` view of the problem.
struct Frame {
    data: Dataset<f64>,
    utility: AfriatUtility<f64>,
    budgets: Vec<f64>,
    observed_utility: Vec<f64>,
}

impl Frame {
    fn new<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>, sol: &AfriatSolution<S>) -> Result<Self> {
        e.check_len(d.observations())?;
        let data = d.to_f64();
        let utility = AfriatUtility::new(&sol.to_f64(), &data);
        let budgets = (0..d.observations())
            .map(|t| (e.get(t).clone() * &d.expenditure(t)).to_f64())
            .collect();
        let observed_utility = (0..d.observations())
            .map(|t| utility.eval_unchecked(data.bundle(t)))
            .collect();
        Ok(Frame {
            data,
            utility,
            budgets,
            observed_utility,
        })
    }

    fn check_budget_point(&self, t: usize, x: Vec<f64>, report: &mut VerificationReport) {
        let u = self.utility.eval_unchecked(&x);
        let target = self.observed_utility[t];
        report.budget_samples += 1;
        if u > target + SAMPLE_REL_TOL * (1.0 + target.abs() + u.abs()) {
            report.rationalization_violations.push(RationalizationViolation {
                x,
                utility: u,
                observed_utility: target,
            });
        }
    }

    fn check_upper_point(&self, t: usize, x: Vec<f64>, report: &mut VerificationReport) {
        let cost = dot(self.data.price(t), &x);
        let threshold = self.budgets[t];
        report.upper_set_samples += 1;
        if cost < threshold * (1.0 - SAMPLE_REL_TOL) {
            report.cost_violations.push(CostViolation { x, cost, threshold });
        }
    }
}

/// Uniform point of the unit simplex.
fn simplex<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter_mut().for_each(|v| *v /= total);
    } else {
        w.iter_mut().for_each(|v| *v = 1.0 / dim as f64);
    }
    w
}

/// Samples `B^t(e^t)` at every observation and records bundles that the
/// utility ranks above `x^t`. The sample set is the origin, the budget
/// vertices, every observed bundle inside the budget, and `n_samples`
/// random points (simplex allocation of the budget scaled by a uniform
/// radial factor).
pub fn verify_rationalization<S: Scalar>(
    d: &Dataset<S>,
    e: &EfficiencyVector<S>,
    sol: &AfriatSolution<S>,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let frame = Frame::new(d, e, sol)?;
    let goods = d.goods();
    Ok((0..d.observations())
        .into_par_iter()
        .map(|t| {
            let obs_seed = observation_seed(seed, t);
            let mut rng = ChaCha8Rng::seed_from_u64(obs_seed);
            let mut report = VerificationReport::new(t, obs_seed);
            let p = frame.data.price(t);
            let budget = frame.budgets[t];

            frame.check_budget_point(t, vec![0.0; goods], &mut report);
            for i in 0..goods {
                let mut x = vec![0.0; goods];
                x[i] = budget / p[i];
                frame.check_budget_point(t, x, &mut report);
            }
            let limit = e.get(t).clone() * &d.expenditure(t);
            for s in 0..d.observations() {
                if d.cost_at(t, d.bundle(s)) <= limit {
                    frame.check_budget_point(t, frame.data.bundle(s).to_vec(), &mut report);
                }
            }
            for _ in 0..n_samples {
                let radial: f64 = rng.gen();
                let w = simplex(&mut rng, goods);
                let x = w
                    .iter()
                    .zip(p)
                    .map(|(wi, pi)| radial * wi * budget / pi)
                    .collect();
                frame.check_budget_point(t, x, &mut report);
            }
            report
        })
        .collect())
}

/// Samples `P^t` at every observation and records bundles cheaper than
/// `e^t p^t·x^t`. Two samplers run `n_samples` draws each: rejection from
/// the box `[0, 2·max_s x^s]`, and bisection along rays from the origin to
/// the first point whose utility reaches `U(x^t)`.
pub fn verify_cost_rationalization<S: Scalar>(
    d: &Dataset<S>,
    e: &EfficiencyVector<S>,
    sol: &AfriatSolution<S>,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let frame = Frame::new(d, e, sol)?;
    let goods = d.goods();
    let upper: Vec<f64> = (0..goods)
        .map(|i| {
            2.0 * frame
                .data
                .bundle_rows()
                .map(|x| x[i])
                .fold(0.0, f64::max)
                .max(f64::MIN_POSITIVE)
        })
        .collect();

    Ok((0..d.observations())
        .into_par_iter()
        .map(|t| {
            let obs_seed = observation_seed(seed ^ 0xC057, t);
            let mut rng = ChaCha8Rng::seed_from_u64(obs_seed);
            let mut report = VerificationReport::new(t, obs_seed);
            let target = frame.observed_utility[t];

            frame.check_upper_point(t, frame.data.bundle(t).to_vec(), &mut report);

            let mut accepted = 0;
            for _ in 0..n_samples {
                let x: Vec<f64> = upper.iter().map(|hi| rng.gen::<f64>() * hi).collect();
                if frame.utility.eval_unchecked(&x) >= target {
                    accepted += 1;
                    frame.check_upper_point(t, x, &mut report);
                }
            }
            report.rejection_exhausted = n_samples > 0 && accepted == 0;

            for _ in 0..n_samples {
                let dir = simplex(&mut rng, goods);
                if let Some(x) = level_crossing(&frame.utility, &dir, target) {
                    frame.check_upper_point(t, x, &mut report);
                }
            }
            report
        })
        .collect())
}

/// Smallest `s·dir` (to [`LEVEL_TOL`] in utility) with `U(s·dir) ≥ target`.
/// The returned point always satisfies the inequality.
pub fn level_crossing(u: &AfriatUtility<f64>, dir: &[f64], target: f64) -> Option<Vec<f64>> {
    let at = |s: f64| -> (Vec<f64>, f64) {
        let x: Vec<f64> = dir.iter().map(|v| v * s).collect();
        let val = u.eval_unchecked(&x);
        (x, val)
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let (mut x_hi, mut u_hi) = at(hi);
    let mut doublings = 0;
    while u_hi < target {
        lo = hi;
        hi *= 2.0;
        (x_hi, u_hi) = at(hi);
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return None;
        }
    }
    let mut u_lo = at(lo).1;
    for _ in 0..MAX_BISECTIONS {
        if u_hi - u_lo <= LEVEL_TOL || hi - lo <= f64::EPSILON * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (x_mid, u_mid) = at(mid);
        if u_mid >= target {
            hi = mid;
            x_hi = x_mid;
            u_hi = u_mid;
        } else {
            lo = mid;
            u_lo = u_mid;
        }
    }
    Some(x_hi)
}

/// Outcome of the two sampling checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualityVerdict {
    pub rationalization_clean: bool,
    pub cost_clean: bool,
}

impl DualityVerdict {
    pub fn from_reports(rationalization: &[VerificationReport], cost: &[VerificationReport]) -> Self {
        DualityVerdict {
            rationalization_clean: rationalization
                .iter()
                .all(|r| r.rationalization_violations.is_empty()),
            cost_clean: cost.iter().all(|r| r.cost_violations.is_empty()),
        }
    }
}

/// Consistency assertion: if both checks came back clean, e-GARP must
/// hold. `None` (nothing was verified) is vacuously consistent.
pub fn check_duality_garp<S: Scalar>(
    d: &Dataset<S>,
    e: &EfficiencyVector<S>,
    verdict: Option<DualityVerdict>,
) -> Result<bool> {
    match verdict {
        Some(v) if v.rationalization_clean && v.cost_clean => Ok(check_e_garp(d, e)?.holds),
        _ => {
            e.check_len(d.observations())?;
            Ok(true)
        }
    }
}
