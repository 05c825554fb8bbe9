//! Corner sweeps over the sensitivity bounds and the proportional-cost runs.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{
    evaluate, evaluate_tax_cut, evaluate_transfer, fiscal_equivalent_transfer, CostModel,
    ModelParams, PolicyResponse, PolicyShock,
};
use crate::scenarios::{baseline, sensitivity_grid, Horizon, Toggles};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    OilPrice,
    FuelPrice,
    Fiscal,
    Profit,
}

impl Column {
    pub const ALL: [Column; 4] = [
        Column::OilPrice,
        Column::FuelPrice,
        Column::Fiscal,
        Column::Profit,
    ];

    pub fn of(&self, r: &PolicyResponse) -> f64 {
        match self {
            Column::OilPrice => r.d_oil_price,
            Column::FuelPrice => r.d_fuel_price_eu,
            Column::Fiscal => r.d_fiscal_eu,
            Column::Profit => r.d_profit_ru,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub toggles: Toggles,
    pub params: ModelParams,
    pub response: PolicyResponse,
}

/// Extremes of one output over the grid, on signed values. `argmin` and
/// `argmax` index into [`SweepSummary::rows`]; ties go to the earlier row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub column: Column,
    pub min: f64,
    pub base: f64,
    pub max: f64,
    pub argmin: usize,
    pub argmax: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub horizon: Horizon,
    pub cost_model: CostModel,
    pub policy: PolicyShock,
    pub base: PolicyResponse,
    pub columns: Vec<ColumnSummary>,
    pub rows: Vec<SweepRow>,
}

impl SweepSummary {
    pub fn column(&self, c: Column) -> &ColumnSummary {
        self.columns
            .iter()
            .find(|s| s.column == c)
            .expect("every column is summarized")
    }
}

fn summarize(column: Column, base: &PolicyResponse, rows: &[SweepRow]) -> ColumnSummary {
    let mut s = ColumnSummary {
        column,
        min: f64::INFINITY,
        base: column.of(base),
        max: f64::NEG_INFINITY,
        argmin: 0,
        argmax: 0,
    };
    for (i, row) in rows.iter().enumerate() {
        let v = column.of(&row.response);
        if v < s.min {
            s.min = v;
            s.argmin = i;
        }
        if v > s.max {
            s.max = v;
            s.argmax = i;
        }
    }
    s
}

/// Evaluates `policy` at the baseline and at all 32 grid corners.
pub fn sweep(h: Horizon, policy: &PolicyShock, cost_model: CostModel) -> Result<SweepSummary> {
    let base = evaluate(&baseline(h, cost_model), policy)?;
    let rows = sensitivity_grid(h, cost_model)
        .into_iter()
        .map(|g| {
            Ok(SweepRow {
                toggles: g.toggles,
                params: g.params,
                response: evaluate(&g.params, policy)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = Column::ALL
        .iter()
        .map(|&c| summarize(c, &base, &rows))
        .collect();
    Ok(SweepSummary {
        horizon: h,
        cost_model,
        policy: *policy,
        base,
        columns,
        rows,
    })
}

/// Pump-price cut used throughout the results tables, EUR cents incl. VAT.
pub const STANDARD_CUT_CENTS: f64 = 20.0;

/// The standard tax cut and its fiscally equivalent transfer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyPair {
    pub horizon: Horizon,
    pub cost_model: CostModel,
    pub tax_cut: PolicyResponse,
    pub transfer_amount: f64,
    pub transfer: PolicyResponse,
}

pub fn policy_pair(h: Horizon, cost_model: CostModel) -> Result<PolicyPair> {
    let params = baseline(h, cost_model);
    let tax_cut = evaluate_tax_cut(&params, STANDARD_CUT_CENTS)?;
    let transfer_amount = fiscal_equivalent_transfer(&tax_cut);
    Ok(PolicyPair {
        horizon: h,
        cost_model,
        tax_cut,
        transfer_amount,
        transfer: evaluate_transfer(&params, transfer_amount)?,
    })
}

/// Tax cut and matching transfer with costs proportional to the oil price.
pub fn proportional_run(h: Horizon) -> Result<(PolicyResponse, PolicyResponse)> {
    let pair = policy_pair(h, CostModel::Proportional)?;
    Ok((pair.tax_cut, pair.transfer))
}
