//! Revealed-preference tools for consumer expenditure data.
//!
//! * [`revpref`] builds the direct and transitive revealed-preference
//!   relations under a vector of efficiency coefficients and tests e-GARP.
//! * [`ccei`] computes Afriat's critical cost efficiency index, exactly
//!   from the finite set of breakpoints and by bisection.
//! * [`afriat`] constructs numbers satisfying Afriat's inequalities and the
//!   concave, strictly increasing utility they induce.
//! * [`duality`] checks by sampling that this utility both e-rationalizes
//!   and e-cost-rationalizes the data.
//! * [`oracle`] holds brute-force reference implementations.
//! * [`datagen`] generates data from Cobb-Douglas and CES consumers.
//!
//! Everything is generic over [`Scalar`]: [`Exact`] (arbitrary-precision
//! rationals, ties decided exactly) or `f64`.

pub mod afriat;
pub mod ccei;
pub mod datagen;
pub mod duality;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod oracle;
pub mod revpref;
pub mod scalar;

pub use afriat::{evaluate_utility, solve_afriat, Afriat, AfriatSolution, AfriatUtility};
pub use ccei::{ccei_binary_search, ccei_exact, CceiResult};
pub use datagen::{generate, generate_with_incomes, waste_floor, Generated, GeneratorSpec, UtilityFamily};
pub use duality::{
    check_duality_garp, verify_cost_rationalization, verify_rationalization, DualityVerdict,
    VerificationReport,
};
pub use error::{Error, Result};
pub use model::{cross_expenditures, validate_dataset, CrossMatrix, Dataset, EfficiencyVector};
pub use oracle::{ccei_oracle, garp_oracle, ordinal_oracle, OracleVerdict};
pub use revpref::{check_e_garp, direct_relations, CycleWitness, GarpVerdict, RevealedRelation};
pub use scalar::{Exact, Scalar};
