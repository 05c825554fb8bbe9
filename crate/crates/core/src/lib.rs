//! Partial-equilibrium model of the world oil market used to compare an EU
//! fuel-tax cut with a cash transfer of the same fiscal cost.

// `!(x >= 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod model;
pub mod regression;
pub mod report;
pub mod scenarios;
pub mod sensitivity;
pub mod units;

pub use equilibrium::{EquilibriumSolution, ExactEffects, IsoelasticMarket};
pub use error::{Error, Result};
pub use model::{
    evaluate, evaluate_tax_cut, evaluate_transfer, CostModel, ModelParams, PolicyResponse,
    PolicyShock,
};
pub use regression::{fit_ols, urals_brent_analysis, OlsFit, PriceSeries};
pub use scenarios::{baseline, Horizon};
pub use sensitivity::{policy_pair, sweep, PolicyPair, SweepSummary};
