//! Exact market clearing with constant-elasticity curves.
//!
//! Each curve passes through its baseline quantity at the baseline price and
//! keeps the baseline elasticity everywhere:
//!
//! ```text
//! D_EU(f, I) = d_eu0 · (f / f0)^ε_D,EU · (I / I0)^ε_I,EU
//! D_ROW(q)   = d_row0 · (q / q0)^ε_D,ROW
//! S_i(p)     = s_i0 · (p / p0)^ε_S,i
//! ```
//!
//! with `f` the EU pump price and `q` the rest-of-world consumer price. The
//! clearing price is found by bisection, so policy effects carry no
//! linearization error and can be compared against [`crate::model`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CostModel, ModelParams, PolicyResponse, PolicyShock};
use crate::scenarios::derive_shares;

pub const BRACKET_FACTOR: f64 = 100.0;
pub const PRICE_REL_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;
pub const RESIDUAL_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoelasticMarket {
    baseline: ModelParams,
    d_eu0: f64,
    d_row0: f64,
    s_ru0: f64,
    s_row0: f64,
    /// Baseline EU pump price incl. VAT.
    f0: f64,
    /// Baseline rest-of-world consumer price incl. VAT.
    q0: f64,
    v_row: f64,
    income0: Option<f64>,
}

/// Quantities in Ml/d at a given price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketQuantities {
    pub d_eu: f64,
    pub d_row: f64,
    pub s_ru: f64,
    pub s_row: f64,
}

impl MarketQuantities {
    pub fn demand(&self) -> f64 {
        self.d_eu + self.d_row
    }

    pub fn supply(&self) -> f64 {
        self.s_ru + self.s_row
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    pub price: f64,
    pub quantities: MarketQuantities,
    /// Demand minus supply at `price`, Ml/d.
    pub residual: f64,
    pub iterations: usize,
}

/// Builds curves through the baseline volumes. The baseline must clear to
/// within 1e-9 relative.
pub fn calibrate(params: &ModelParams, v_row: f64) -> Result<IsoelasticMarket> {
    params.validate()?;
    if !(v_row >= 0.0) || !v_row.is_finite() {
        return Err(Error::invalid("v_row", "VAT rate must be >= 0"));
    }
    derive_shares(params.d_eu, params.d_row, params.s_ru, params.s_row)?;
    let mut market = IsoelasticMarket {
        baseline: *params,
        d_eu0: params.d_eu,
        d_row0: params.d_row,
        s_ru0: params.s_ru,
        s_row0: params.s_row,
        f0: 0.0,
        q0: 0.0,
        v_row,
        income0: params.income_eu,
    };
    market.f0 = market.eu_price(params.p, params.tau);
    market.q0 = market.row_price(params.p);
    if !(market.q0 > 0.0) {
        return Err(Error::invalid(
            "c",
            "rest-of-world consumer price must be positive",
        ));
    }
    Ok(market)
}

/// `base^exp` with zero elasticities giving exactly one.
fn scale(ratio: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        ratio.powf(exp)
    }
}

impl IsoelasticMarket {
    pub fn baseline(&self) -> &ModelParams {
        &self.baseline
    }

    pub fn v_row(&self) -> f64 {
        self.v_row
    }

    pub fn reference_quantities(&self) -> MarketQuantities {
        MarketQuantities {
            d_eu: self.d_eu0,
            d_row: self.d_row0,
            s_ru: self.s_ru0,
            s_row: self.s_row0,
        }
    }

    /// The baseline with `x` and `y` replaced by the calibrated volume
    /// shares, so the linear model is the exact tangent of this market.
    pub fn linear_params(&self) -> ModelParams {
        let mut p = self.baseline;
        let demand = self.d_eu0 + self.d_row0;
        let supply = self.s_ru0 + self.s_row0;
        p.x = self.d_eu0 / demand;
        p.y = self.s_ru0 / supply;
        p
    }

    fn product_price(&self, p: f64) -> f64 {
        match self.baseline.cost_model {
            CostModel::Additive => p + self.baseline.c,
            CostModel::Proportional => (1.0 + self.baseline.z) * p,
        }
    }

    pub fn eu_price(&self, p: f64, tau: f64) -> f64 {
        (1.0 + self.baseline.v_eu) * (self.product_price(p) + tau)
    }

    pub fn row_price(&self, p: f64) -> f64 {
        (1.0 + self.v_row) * self.product_price(p)
    }

    fn income_factor(&self, income: Option<f64>) -> Result<f64> {
        match (income, self.income0) {
            (None, _) => Ok(1.0),
            (Some(i), Some(i0)) => Ok(scale(i / i0, self.baseline.eps_i_eu)),
            (Some(_), None) => Err(Error::MissingIncome),
        }
    }

    fn quantities_with(&self, p: f64, tau: f64, income_factor: f64) -> MarketQuantities {
        let b = &self.baseline;
        let p_ratio = p / b.p;
        MarketQuantities {
            d_eu: self.d_eu0 * scale(self.eu_price(p, tau) / self.f0, b.eps_d_eu) * income_factor,
            d_row: self.d_row0 * scale(self.row_price(p) / self.q0, b.eps_d_row),
            s_ru: self.s_ru0 * scale(p_ratio, b.eps_s_ru),
            s_row: self.s_row0 * scale(p_ratio, b.eps_s_row),
        }
    }

    /// Curve quantities at oil price `p`, duty `tau` and EU income `income`
    /// (baseline income when `None`).
    pub fn quantities(&self, p: f64, tau: f64, income: Option<f64>) -> Result<MarketQuantities> {
        Ok(self.quantities_with(p, tau, self.income_factor(income)?))
    }

    pub fn excess_demand(&self, p: f64, tau: f64, income: Option<f64>) -> Result<f64> {
        let q = self.quantities(p, tau, income)?;
        Ok(q.demand() - q.supply())
    }

    /// Clearing oil price for duty `tau` and income `income`.
    pub fn solve_price(&self, tau: f64, income: Option<f64>) -> Result<EquilibriumSolution> {
        let factor = self.income_factor(income)?;
        let excess = |p: f64| {
            let q = self.quantities_with(p, tau, factor);
            q.demand() - q.supply()
        };
        let p0 = self.baseline.p;
        let root = bisect(excess, p0 / BRACKET_FACTOR, p0 * BRACKET_FACTOR)?;
        let quantities = self.quantities_with(root.x, tau, factor);
        let residual = quantities.demand() - quantities.supply();
        if residual.abs() >= RESIDUAL_REL_TOL * quantities.demand() {
            return Err(Error::NonConvergence {
                iterations: root.iterations,
                residual,
            });
        }
        Ok(EquilibriumSolution {
            price: root.x,
            quantities,
            residual,
            iterations: root.iterations,
        })
    }

    fn tax_revenue(&self, p: f64, tau: f64, d_eu: f64) -> f64 {
        let v = self.baseline.v_eu;
        (v * self.product_price(p) + (1.0 + v) * tau) * d_eu
    }

    fn profit(&self, p: f64, s_ru: f64) -> f64 {
        (p - self.baseline.e) * s_ru
    }

    /// Differences between the baseline equilibrium and the one after `shock`.
    pub fn exact_policy_effects(&self, shock: &PolicyShock) -> Result<ExactEffects> {
        let b = &self.baseline;
        let income0 = self.income0;
        let (tau1, income1, transfer) = match *shock {
            PolicyShock::DutyChange { delta_tau } => (b.tau + delta_tau, income0, 0.0),
            PolicyShock::IncomeChange { delta_income } => {
                let i0 = income0.ok_or(Error::MissingIncome)?;
                (b.tau, Some(i0 + delta_income), delta_income)
            }
        };
        let before = self.solve_price(b.tau, income0)?;
        let after = self.solve_price(tau1, income1)?;
        let d_fiscal = match shock {
            PolicyShock::DutyChange { .. } => {
                self.tax_revenue(after.price, tau1, after.quantities.d_eu)
                    - self.tax_revenue(before.price, b.tau, before.quantities.d_eu)
            }
            PolicyShock::IncomeChange { .. } => -transfer,
        };
        let response = PolicyResponse::assemble(
            b.horizon,
            after.price - before.price,
            self.eu_price(after.price, tau1) - self.eu_price(before.price, b.tau),
            d_fiscal,
            self.profit(after.price, after.quantities.s_ru)
                - self.profit(before.price, before.quantities.s_ru),
        );
        Ok(ExactEffects {
            response,
            before,
            after,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactEffects {
    pub response: PolicyResponse,
    pub before: EquilibriumSolution,
    pub after: EquilibriumSolution,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` until the bracket is narrower than
/// `PRICE_REL_TOL` relative to its midpoint or `f` hits zero exactly.
pub fn bisect<F>(f: F, lo: f64, hi: f64) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            iterations: 0,
        });
    }
    if !(f_lo.signum() != f_hi.signum()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    for iteration in 1..=MAX_ITERATIONS {
        let mid = lo + 0.5 * (hi - lo);
        let f_mid = f(mid);
        if f_mid == 0.0 || hi - lo <= PRICE_REL_TOL * mid.abs() {
            return Ok(Root {
                x: mid,
                iterations: iteration,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
        residual: f(lo + 0.5 * (hi - lo)),
    })
}
