//! Afriat numbers and the induced concave utility.
//!
//! Given e-GARP, numbers `φ^t` and `λ^t > 0` with
//!
//! ```text
//! φ^s ≤ φ^t + λ^t · (p^t·x^s − e^t p^t·x^t)     for all t, s
//! ```
//!
//! are built without a solver. Observations are grouped into classes of
//! mutual revealed preference; inside a class every weak edge lies on a
//! cycle and is therefore not strict, so all intra-class slacks are
//! nonnegative and a shared `φ` satisfies them. Classes are then processed
//! so that each class comes after every class revealed preferred to it.
//! When class `C` is reached, no processed observation is weakly revealed
//! worse than a member of `C`, so every slack from `C` into the processed
//! set is strictly positive:
//!
//! * `φ_C` is the smallest right-hand side `φ^u + λ^u a^{u,t}` over
//!   processed `u` and `t ∈ C`, which settles all inequalities into `C`;
//! * each `λ^t`, `t ∈ C`, is the largest of 1 and `(φ^s − φ_C) / a^{t,s}`
//!   over processed `s`, which settles all inequalities out of `C`.
//!
//! Every inequality is re-checked before a solution is returned.

use crate::error::{Error, Result};
use crate::model::{cross_expenditures, CrossMatrix, Dataset, EfficiencyVector};
use crate::revpref::{verdict, CycleWitness, RevealedRelation};
use crate::scalar::{dot, Scalar};

/// Relative tolerance for the post-hoc check in floating-point mode.
pub const AFRIAT_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AfriatSolution<S> {
    pub phi: Vec<S>,
    pub lambda: Vec<S>,
    pub efficiency: EfficiencyVector<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Afriat<S> {
    Solved(AfriatSolution<S>),
    /// e-GARP fails, so no numbers exist.
    Infeasible(CycleWitness),
}

impl<S> Afriat<S> {
    pub fn solution(&self) -> Option<&AfriatSolution<S>> {
        match self {
            Afriat::Solved(s) => Some(s),
            Afriat::Infeasible(_) => None,
        }
    }
}

impl<S: Scalar> AfriatSolution<S> {
    /// Checks all `T²` inequalities and `λ > 0`. Exact back-ends compare
    /// exactly; `f64` allows a relative error of [`AFRIAT_FLOAT_TOL`].
    pub fn verify(&self, cross: &CrossMatrix<S>) -> Result<()> {
        let n = cross.observations();
        if self.phi.len() != n || self.lambda.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.phi.len().min(self.lambda.len()),
            });
        }
        for t in 0..n {
            if !self.lambda[t].is_positive() {
                return Err(Error::InequalityViolated { t, s: t });
            }
            let e_t = self.efficiency.get(t);
            for s in 0..n {
                let slack = cross.slack(t, s, e_t);
                let rhs = self.phi[t].clone() + self.lambda[t].clone() * &slack;
                let ok = if S::EXACT {
                    self.phi[s] <= rhs
                } else {
                    let scale = [
                        self.phi[s].to_f64(),
                        self.phi[t].to_f64(),
                        (self.lambda[t].clone() * cross.expenditure(t, s)).to_f64(),
                        (self.lambda[t].clone() * e_t * cross.own(t)).to_f64(),
                    ]
                    .iter()
                    .fold(1.0_f64, |m, v| m.max(v.abs()));
                    self.phi[s].to_f64() <= rhs.to_f64() + AFRIAT_FLOAT_TOL * scale
                };
                if !ok {
                    return Err(Error::InequalityViolated { t, s });
                }
            }
        }
        Ok(())
    }

    pub fn to_f64(&self) -> AfriatSolution<f64> {
        AfriatSolution {
            phi: self.phi.iter().map(Scalar::to_f64).collect(),
            lambda: self.lambda.iter().map(Scalar::to_f64).collect(),
            efficiency: self.efficiency.to_f64(),
        }
    }
}

pub fn solve_afriat<S: Scalar>(d: &Dataset<S>, e: &EfficiencyVector<S>) -> Result<Afriat<S>> {
    e.check_len(d.observations())?;
    let cross = cross_expenditures(d);
    let rel = RevealedRelation::from_cross(&cross, |t| e.get(t).clone());
    if let Some(w) = verdict(&rel).witness {
        return Ok(Afriat::Infeasible(w));
    }
    let sol = construct(&cross, &rel, e);
    sol.verify(&cross)?;
    Ok(Afriat::Solved(sol))
}

fn construct<S: Scalar>(
    cross: &CrossMatrix<S>,
    rel: &RevealedRelation,
    e: &EfficiencyVector<S>,
) -> AfriatSolution<S> {
    let n = cross.observations();

    // Class representative: smallest index in the class.
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for t in 0..n {
        if class_of[t] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let members: Vec<usize> = (t..n)
            .filter(|&s| s == t || (rel.closure.get(t, s) && rel.closure.get(s, t)))
            .collect();
        for &s in &members {
            class_of[s] = id;
        }
        classes.push(members);
    }

    // Number of unprocessed classes with a weak edge into each class.
    let k = classes.len();
    let mut has_edge = vec![vec![false; k]; k];
    for t in 0..n {
        for s in rel.weak.row(t) {
            let (a, b) = (class_of[t], class_of[s]);
            if a != b {
                has_edge[a][b] = true;
            }
        }
    }
    let mut indegree: Vec<usize> = (0..k)
        .map(|b| (0..k).filter(|&a| has_edge[a][b]).count())
        .collect();

    let mut phi: Vec<Option<S>> = vec![None; n];
    let mut lambda: Vec<Option<S>> = vec![None; n];
    let mut processed: Vec<usize> = Vec::with_capacity(n);
    let mut done = vec![false; k];

    for _ in 0..k {
        let c = (0..k)
            .find(|&c| !done[c] && indegree[c] == 0)
            .expect("class graph is acyclic");
        done[c] = true;
        for b in 0..k {
            if has_edge[c][b] {
                indegree[b] -= 1;
            }
        }

        let members = &classes[c];
        let phi_c = processed
            .iter()
            .flat_map(|&u| members.iter().map(move |&t| (u, t)))
            .map(|(u, t)| {
                let lam = lambda[u].as_ref().unwrap();
                phi[u].clone().unwrap() + lam.clone() * &cross.slack(u, t, e.get(u))
            })
            .reduce(S::min_of)
            .unwrap_or_else(S::zero);

        for &t in members {
            let lam = processed
                .iter()
                .filter_map(|&s| {
                    let gap = phi[s].clone().unwrap() - &phi_c;
                    gap.is_positive()
                        .then(|| gap / &cross.slack(t, s, e.get(t)))
                })
                .fold(S::one(), S::max_of);
            phi[t] = Some(phi_c.clone());
            lambda[t] = Some(lam);
        }
        processed.extend_from_slice(members);
    }

    AfriatSolution {
        phi: phi.into_iter().map(Option::unwrap).collect(),
        lambda: lambda.into_iter().map(Option::unwrap).collect(),
        efficiency: e.clone(),
    }
}

/// `U(x) = min_t { φ^t + λ^t (p^t·x − e^t p^t·x^t) }` stored as affine
/// pieces `c_t + λ^t p^t · x`.
#[derive(Debug, Clone)]
pub struct AfriatUtility<S> {
    goods: usize,
    intercepts: Vec<S>,
    slopes: Vec<Vec<S>>,
}

impl<S: Scalar> AfriatUtility<S> {
    pub fn new(sol: &AfriatSolution<S>, d: &Dataset<S>) -> Self {
        let n = d.observations();
        let intercepts = (0..n)
            .map(|t| {
                sol.phi[t].clone()
                    - sol.lambda[t].clone() * sol.efficiency.get(t) * &d.expenditure(t)
            })
            .collect();
        let slopes = (0..n)
            .map(|t| {
                d.price(t)
                    .iter()
                    .map(|p| sol.lambda[t].clone() * p)
                    .collect()
            })
            .collect();
        AfriatUtility {
            goods: d.goods(),
            intercepts,
            slopes,
        }
    }

    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn evaluate(&self, x: &[S]) -> Result<S> {
        if x.len() != self.goods {
            return Err(Error::DimensionMismatch {
                expected: self.goods,
                found: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub fn eval_unchecked(&self, x: &[S]) -> S {
        self.intercepts
            .iter()
            .zip(&self.slopes)
            .map(|(c, g)| c.clone() + dot(g, x))
            .reduce(S::min_of)
            .expect("at least one observation")
    }
}

pub fn evaluate_utility<S: Scalar>(sol: &AfriatSolution<S>, d: &Dataset<S>, x: &[S]) -> Result<S> {
    AfriatUtility::new(sol, d).evaluate(x)
}
