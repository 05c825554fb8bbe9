//! Linearized comparative statics of the oil market.
//!
//! The market clears where EU road-fuel demand plus rest-of-world oil demand
//! equals Russian plus rest-of-world supply. Differentiating that condition
//! around a baseline gives the price response to a fuel-duty change or to a
//! change in EU disposable income; the other responses (fuel price, tax
//! revenue, Russian profit) follow from the price response.
//!
//! Two cost structures are supported. With [`CostModel::Additive`] refining and
//! distribution add a fixed `c` EUR/l on top of the crude price; with
//! [`CostModel::Proportional`] they scale with it, so the pre-tax product
//! price is `(1 + z) p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenarios::Horizon;
use crate::units::{annualize, MoneyRate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CostModel {
    #[default]
    Additive,
    Proportional,
}

impl CostModel {
    pub fn label(&self) -> &'static str {
        match self {
            CostModel::Additive => "additive",
            CostModel::Proportional => "proportional",
        }
    }
}

/// One full parameterization of the market at one horizon.
///
/// Prices and costs are EUR per liter of product, quantities Ml/d and income
/// MEUR/d. Elasticities are dimensionless; demand elasticities are
/// nonpositive and supply and income elasticities nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub horizon: Horizon,
    pub cost_model: CostModel,
    /// EU road-fuel demand elasticity w.r.t. the consumer price.
    pub eps_d_eu: f64,
    /// Rest-of-world oil demand elasticity w.r.t. its consumer price.
    pub eps_d_row: f64,
    pub eps_s_ru: f64,
    pub eps_s_row: f64,
    /// EU road-fuel demand elasticity w.r.t. disposable income.
    pub eps_i_eu: f64,
    /// Producer oil price.
    pub p: f64,
    /// Fuel duty, before VAT.
    pub tau: f64,
    /// Per-liter refining and distribution cost (additive model).
    pub c: f64,
    /// Refining and distribution cost as a share of `p` (proportional model).
    pub z: f64,
    pub v_eu: f64,
    /// Extraction cost per liter.
    pub e: f64,
    /// EU road-fuel share of global demand.
    pub x: f64,
    /// Russian share of global supply.
    pub y: f64,
    pub s_ru: f64,
    pub d_eu: f64,
    pub d_row: f64,
    pub s_row: f64,
    pub income_eu: Option<f64>,
}

impl ModelParams {
    /// Checks every field constraint, naming the first offending field.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eps_d_eu", self.eps_d_eu),
            ("eps_d_row", self.eps_d_row),
            ("eps_s_ru", self.eps_s_ru),
            ("eps_s_row", self.eps_s_row),
            ("eps_i_eu", self.eps_i_eu),
            ("p", self.p),
            ("tau", self.tau),
            ("c", self.c),
            ("z", self.z),
            ("v_eu", self.v_eu),
            ("e", self.e),
            ("x", self.x),
            ("y", self.y),
            ("s_ru", self.s_ru),
            ("d_eu", self.d_eu),
            ("d_row", self.d_row),
            ("s_row", self.s_row),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        let check = |ok: bool, field: &str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(field, reason))
            }
        };
        check(
            self.eps_d_eu <= 0.0,
            "eps_d_eu",
            "demand elasticity must be <= 0",
        )?;
        check(
            self.eps_d_row <= 0.0,
            "eps_d_row",
            "demand elasticity must be <= 0",
        )?;
        check(
            self.eps_s_ru >= 0.0,
            "eps_s_ru",
            "supply elasticity must be >= 0",
        )?;
        check(
            self.eps_s_row >= 0.0,
            "eps_s_row",
            "supply elasticity must be >= 0",
        )?;
        check(
            self.eps_i_eu >= 0.0,
            "eps_i_eu",
            "income elasticity must be >= 0",
        )?;
        check(self.p > 0.0, "p", "oil price must be positive")?;
        check(self.tau >= 0.0, "tau", "fuel duty must be >= 0")?;
        check(self.v_eu >= 0.0, "v_eu", "VAT rate must be >= 0")?;
        check(self.e >= 0.0, "e", "extraction cost must be >= 0")?;
        check(
            self.x > 0.0 && self.x <= 1.0,
            "x",
            "share must lie in (0, 1]",
        )?;
        check(
            self.y >= 0.0 && self.y <= 1.0,
            "y",
            "share must lie in [0, 1]",
        )?;
        for (name, q) in [
            ("s_ru", self.s_ru),
            ("d_eu", self.d_eu),
            ("d_row", self.d_row),
            ("s_row", self.s_row),
        ] {
            check(q >= 0.0, name, "quantity must be >= 0")?;
        }
        if let Some(income) = self.income_eu {
            check(
                income.is_finite() && income > 0.0,
                "income_eu",
                "income must be positive",
            )?;
        }
        match self.cost_model {
            CostModel::Additive => {
                check(self.p + self.c > 0.0, "c", "p + c must be positive")?;
            }
            CostModel::Proportional => {
                check(1.0 + self.z > 0.0, "z", "1 + z must be positive")?;
            }
        }
        check(
            self.consumer_price() > 0.0,
            "tau",
            "consumer fuel price must be positive",
        )?;
        Ok(())
    }

    /// Multiplier from a crude price change to the pre-tax product price.
    pub fn pass_factor(&self) -> f64 {
        match self.cost_model {
            CostModel::Additive => 1.0,
            CostModel::Proportional => 1.0 + self.z,
        }
    }

    /// Product price before duty: `p + c` or `(1 + z) p`.
    pub fn product_price(&self) -> f64 {
        match self.cost_model {
            CostModel::Additive => self.p + self.c,
            CostModel::Proportional => (1.0 + self.z) * self.p,
        }
    }

    /// EU pump price before VAT.
    pub fn pre_vat_fuel_price(&self) -> f64 {
        self.product_price() + self.tau
    }

    /// EU pump price including VAT.
    pub fn consumer_price(&self) -> f64 {
        (1.0 + self.v_eu) * self.pre_vat_fuel_price()
    }

    /// Duty change that lowers the pump price by `cents` including VAT.
    pub fn duty_change_for_consumer_cut(&self, cents: f64) -> f64 {
        -(cents / 100.0) / (1.0 + self.v_eu)
    }

    /// Elasticity of the EU consumer price w.r.t. the oil price, times `x`,
    /// times the EU demand elasticity: the EU term of the market slope.
    fn eu_demand_term(&self) -> f64 {
        self.x * self.pass_factor() * self.p / self.pre_vat_fuel_price() * self.eps_d_eu
    }

    fn row_demand_term(&self) -> f64 {
        let ratio = match self.cost_model {
            CostModel::Additive => self.p / (self.p + self.c),
            CostModel::Proportional => 1.0,
        };
        (1.0 - self.x) * ratio * self.eps_d_row
    }

    /// Common denominator of the price responses: share-weighted supply
    /// elasticities minus share-weighted demand elasticities in oil-price
    /// terms. Positive unless every term vanishes.
    pub fn market_slope(&self) -> f64 {
        self.y * self.eps_s_ru + (1.0 - self.y) * self.eps_s_row
            - self.eu_demand_term()
            - self.row_demand_term()
    }

    fn checked_slope(&self) -> Result<f64> {
        let slope = self.market_slope();
        if slope == 0.0 || !slope.is_finite() {
            Err(Error::DegenerateElasticities)
        } else {
            Ok(slope)
        }
    }
}

/// A policy change applied to a baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolicyShock {
    /// Change in the fuel duty in EUR/l before VAT; negative is a cut.
    DutyChange { delta_tau: f64 },
    /// Aggregate transfer to EU households in MEUR/d; positive is a payout.
    IncomeChange { delta_income: f64 },
}

impl PolicyShock {
    /// Duty change equivalent to a pump-price cut of `cents` incl. VAT.
    pub fn consumer_tax_cut(cents: f64, v_eu: f64) -> Self {
        PolicyShock::DutyChange {
            delta_tau: -(cents / 100.0) / (1.0 + v_eu),
        }
    }

    pub fn transfer(meur_per_day: f64) -> Self {
        PolicyShock::IncomeChange {
            delta_income: meur_per_day,
        }
    }
}

/// Signed effects of a policy. Prices in EUR/l, money in MEUR/d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyResponse {
    pub d_oil_price: f64,
    pub d_fuel_price_eu: f64,
    /// Change in EU tax revenue net of transfers; negative is a cost.
    pub d_fiscal_eu: f64,
    pub d_profit_ru: f64,
    /// Absent for the very short run, where a yearly figure is meaningless.
    pub d_profit_ru_yearly: Option<f64>,
}

impl PolicyResponse {
    pub(crate) fn assemble(
        horizon: Horizon,
        d_oil_price: f64,
        d_fuel_price_eu: f64,
        d_fiscal_eu: f64,
        d_profit_ru: f64,
    ) -> Self {
        let d_profit_ru_yearly = horizon
            .reports_yearly()
            .then(|| annualize(MoneyRate::per_day(d_profit_ru)).value);
        Self {
            d_oil_price,
            d_fuel_price_eu,
            d_fiscal_eu,
            d_profit_ru,
            d_profit_ru_yearly,
        }
    }

    /// Fiscal change as a positive cost, the way results tables show it.
    pub fn fiscal_cost(&self) -> f64 {
        -self.d_fiscal_eu
    }
}

/// dp/dτ: response of the oil price to the fuel duty.
pub fn price_response_to_tax(params: &ModelParams) -> Result<f64> {
    let slope = params.checked_slope()?;
    let numerator = params.x * params.p / params.pre_vat_fuel_price() * params.eps_d_eu;
    Ok(numerator / slope)
}

/// Change in the EU pump price incl. VAT.
pub fn fuel_price_change(params: &ModelParams, d_oil_price: f64, delta_tau: f64) -> f64 {
    (1.0 + params.v_eu) * (params.pass_factor() * d_oil_price + delta_tau)
}

/// Linearized change in EU duty plus VAT revenue, MEUR/d.
///
/// Revenue is `(v·P + (1+v)·τ)·D_EU` with `P` the product price; the bracket
/// is its total derivative w.r.t. τ per unit of demand.
pub fn fiscal_burden(params: &ModelParams, dp_dtau: f64, delta_tau: f64) -> f64 {
    let pre_vat = params.pre_vat_fuel_price();
    let tax_share = (params.tau + params.v_eu * pre_vat) / pre_vat;
    let price_pass = 1.0 + params.pass_factor() * dp_dtau;
    (1.0 + (params.v_eu + tax_share * params.eps_d_eu) * price_pass) * params.d_eu * delta_tau
}

/// Linearized change in Russian oil profit `(p - e)·S_RU(p)`, MEUR/d.
pub fn profit_change_from_price(params: &ModelParams, d_oil_price: f64) -> f64 {
    let margin = (params.p - params.e) / params.p;
    (1.0 + margin * params.eps_s_ru) * params.s_ru * d_oil_price
}

/// dp/dI in EUR/l per MEUR/d of EU disposable income.
pub fn price_response_to_income(params: &ModelParams) -> Result<f64> {
    let income = params.income_eu.ok_or(Error::MissingIncome)?;
    let slope = params.checked_slope()?;
    Ok(params.p / income * params.x * params.eps_i_eu / slope)
}

/// Effects of changing the duty by `delta_tau` EUR/l.
pub fn evaluate_duty_change(params: &ModelParams, delta_tau: f64) -> Result<PolicyResponse> {
    let dp_dtau = price_response_to_tax(params)?;
    let d_oil_price = dp_dtau * delta_tau;
    Ok(PolicyResponse::assemble(
        params.horizon,
        d_oil_price,
        fuel_price_change(params, d_oil_price, delta_tau),
        fiscal_burden(params, dp_dtau, delta_tau),
        profit_change_from_price(params, d_oil_price),
    ))
}

/// Effects of a pump-price tax cut of `consumer_cut_cents` incl. VAT.
pub fn evaluate_tax_cut(params: &ModelParams, consumer_cut_cents: f64) -> Result<PolicyResponse> {
    if !(consumer_cut_cents >= 0.0) {
        return Err(Error::invalid("cut_cents", "tax cut must be >= 0"));
    }
    evaluate_duty_change(
        params,
        params.duty_change_for_consumer_cut(consumer_cut_cents),
    )
}

/// Effects of a lump-sum transfer of `transfer` MEUR/d to EU households.
/// The fiscal cost is the transfer itself.
pub fn evaluate_transfer(params: &ModelParams, transfer: f64) -> Result<PolicyResponse> {
    if !(transfer >= 0.0) {
        return Err(Error::invalid("transfer", "transfer must be >= 0"));
    }
    evaluate_income_change(params, transfer)
}

fn evaluate_income_change(params: &ModelParams, delta_income: f64) -> Result<PolicyResponse> {
    let d_oil_price = price_response_to_income(params)? * delta_income;
    let d_fuel = (1.0 + params.v_eu) * params.pass_factor() * d_oil_price;
    Ok(PolicyResponse::assemble(
        params.horizon,
        d_oil_price,
        d_fuel,
        -delta_income,
        profit_change_from_price(params, d_oil_price),
    ))
}

pub fn evaluate(params: &ModelParams, shock: &PolicyShock) -> Result<PolicyResponse> {
    match *shock {
        PolicyShock::DutyChange { delta_tau } => evaluate_duty_change(params, delta_tau),
        PolicyShock::IncomeChange { delta_income } => evaluate_income_change(params, delta_income),
    }
}

/// Transfer with the same budget cost as `tax_cut`, set in whole MEUR/d.
pub fn fiscal_equivalent_transfer(tax_cut: &PolicyResponse) -> f64 {
    tax_cut.fiscal_cost().round().max(0.0)
}
