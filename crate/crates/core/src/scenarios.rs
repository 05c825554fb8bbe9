//! Calibrated parameter sets, sensitivity bounds and context figures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CostModel, ModelParams};
use crate::units::{oil_price_per_liter, per_barrel_to_per_liter, LITERS_PER_BARREL};

/// EU aggregate disposable income, MEUR/d.
pub const EU_INCOME_MEUR_PER_DAY: f64 = 42_000.0;
/// Proportional refining cost share that keeps the pump price at 2 EUR/l.
pub const PROPORTIONAL_COST_SHARE: f64 = 0.83;
pub const BRENT_USD_PER_BARREL: f64 = 110.0;
pub const FX_EUR_PER_USD: f64 = 0.9;
pub const EXTRACTION_COST_EUR_PER_BARREL: f64 = 17.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Horizon {
    /// Up to a month; the EU behaves as an isolated market.
    #[serde(rename = "vsr", alias = "very_short_run")]
    VeryShortRun,
    /// One to twelve months; fixed global supply.
    #[serde(rename = "sr", alias = "short_run")]
    ShortRun,
    /// Beyond a year; supply and demand both respond.
    #[serde(rename = "lr", alias = "long_run")]
    LongRun,
}

impl Horizon {
    pub const ALL: [Horizon; 3] = [Horizon::VeryShortRun, Horizon::ShortRun, Horizon::LongRun];

    pub fn tag(&self) -> &'static str {
        match self {
            Horizon::VeryShortRun => "vsr",
            Horizon::ShortRun => "sr",
            Horizon::LongRun => "lr",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Horizon::VeryShortRun => "Very short run",
            Horizon::ShortRun => "Short run",
            Horizon::LongRun => "Long run",
        }
    }

    /// Whether a yearly profit figure makes sense at this horizon.
    pub fn reports_yearly(&self) -> bool {
        !matches!(self, Horizon::VeryShortRun)
    }
}

impl std::str::FromStr for Horizon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vsr" | "very_short_run" | "very-short-run" => Ok(Horizon::VeryShortRun),
            "sr" | "short_run" | "short-run" => Ok(Horizon::ShortRun),
            "lr" | "long_run" | "long-run" => Ok(Horizon::LongRun),
            _ => Err(Error::invalid("horizon", format!("unknown horizon `{s}`"))),
        }
    }
}

/// Market volumes in Mb/d of crude: EU road fuel, other demand, Russian
/// exports, other supply.
struct Volumes {
    d_eu: f64,
    d_row: f64,
    s_ru: f64,
    s_row: f64,
}

fn volumes(h: Horizon) -> Volumes {
    match h {
        // 2.595 = 4.095 normal exports to Europe less 1.5 lost. Other demand is
        // set so the isolated EU market clears at 10.195.
        Horizon::VeryShortRun => Volumes {
            d_eu: 4.8,
            d_row: 5.395,
            s_ru: 2.595,
            s_row: 7.6,
        },
        Horizon::ShortRun => Volumes {
            d_eu: 5.6,
            d_row: 91.9,
            s_ru: 5.5,
            s_row: 92.0,
        },
        Horizon::LongRun => Volumes {
            d_eu: 5.7,
            d_row: 94.3,
            s_ru: 8.0,
            s_row: 92.0,
        },
    }
}

/// The calibrated parameter set for a horizon.
pub fn baseline(h: Horizon, cost_model: CostModel) -> ModelParams {
    let (eps_d_eu, eps_d_row, eps_s) = match h {
        Horizon::VeryShortRun | Horizon::ShortRun => (-0.25, -0.125, 0.0),
        Horizon::LongRun => (-0.9, -0.45, 0.13),
    };
    // Published shares, rounded as published.
    let (x, y) = match h {
        Horizon::VeryShortRun => (0.48, 0.25),
        Horizon::ShortRun => (0.057, 0.056),
        Horizon::LongRun => (0.057, 0.08),
    };
    let v = volumes(h);
    ModelParams {
        horizon: h,
        cost_model,
        eps_d_eu,
        eps_d_row,
        eps_s_ru: eps_s,
        eps_s_row: eps_s,
        eps_i_eu: 1.0,
        p: 0.58,
        tau: 0.6,
        c: 0.48,
        z: PROPORTIONAL_COST_SHARE,
        v_eu: 0.2,
        e: per_barrel_to_per_liter(EXTRACTION_COST_EUR_PER_BARREL),
        x,
        y,
        s_ru: v.s_ru * LITERS_PER_BARREL,
        d_eu: v.d_eu * LITERS_PER_BARREL,
        d_row: v.d_row * LITERS_PER_BARREL,
        s_row: v.s_row * LITERS_PER_BARREL,
        income_eu: Some(EU_INCOME_MEUR_PER_DAY),
    }
}

/// Unrounded oil price implied by 110 USD/b at 0.9 EUR/USD.
pub fn unrounded_oil_price() -> f64 {
    oil_price_per_liter(BRENT_USD_PER_BARREL, FX_EUR_PER_USD).expect("positive constants")
}

/// EU demand share `x` and Russian supply share `y` from volumes.
pub fn derive_shares(d_eu: f64, d_row: f64, s_ru: f64, s_row: f64) -> Result<(f64, f64)> {
    for (name, q) in [
        ("d_eu", d_eu),
        ("d_row", d_row),
        ("s_ru", s_ru),
        ("s_row", s_row),
    ] {
        if !(q >= 0.0) {
            return Err(Error::invalid(name, "quantity must be >= 0"));
        }
    }
    let demand = d_eu + d_row;
    let supply = s_ru + s_row;
    if !(demand > 0.0) || !(supply > 0.0) {
        return Err(Error::invalid("d_eu", "market totals must be positive"));
    }
    if (demand - supply).abs() > 1e-9 * demand.max(supply) {
        return Err(Error::MarketImbalance { demand, supply });
    }
    Ok((d_eu / demand, s_ru / supply))
}

/// Low and high values for one swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub low: f64,
    pub base: f64,
    pub high: f64,
}

impl Bounds {
    const fn new(low: f64, base: f64, high: f64) -> Self {
        Self { low, base, high }
    }

    pub fn pick(&self, high: bool) -> f64 {
        if high {
            self.high
        } else {
            self.low
        }
    }
}

/// Sensitivity ranges for one horizon. The rest-of-world demand elasticity
/// is always the chosen EU elasticity divided by `eps_d_row_divisor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityBounds {
    pub eps_d_eu: Bounds,
    pub eps_d_row_divisor: Bounds,
    pub eps_s_ru: Bounds,
    pub eps_s_row: Bounds,
    /// Russian exports, Mb/d.
    pub s_ru_mbd: Bounds,
}

pub fn sensitivity_bounds(h: Horizon) -> SensitivityBounds {
    let divisor = Bounds::new(3.0, 2.0, 1.5);
    match h {
        Horizon::VeryShortRun => SensitivityBounds {
            eps_d_eu: Bounds::new(-0.1, -0.25, -0.3),
            eps_d_row_divisor: divisor,
            eps_s_ru: Bounds::new(0.0, 0.0, 0.0),
            eps_s_row: Bounds::new(0.0, 0.0, 0.0),
            s_ru_mbd: Bounds::new(1.595, 2.595, 4.095),
        },
        Horizon::ShortRun => SensitivityBounds {
            eps_d_eu: Bounds::new(-0.2, -0.25, -0.3),
            eps_d_row_divisor: divisor,
            eps_s_ru: Bounds::new(0.0, 0.0, 0.1),
            eps_s_row: Bounds::new(0.0, 0.0, 0.1),
            s_ru_mbd: Bounds::new(5.0, 5.5, 8.0),
        },
        Horizon::LongRun => SensitivityBounds {
            eps_d_eu: Bounds::new(-0.7, -0.9, -1.1),
            eps_d_row_divisor: divisor,
            eps_s_ru: Bounds::new(0.05, 0.13, 0.2),
            eps_s_row: Bounds::new(0.05, 0.13, 0.2),
            s_ru_mbd: Bounds::new(8.0, 8.0, 8.0),
        },
    }
}

/// Which end of each range a grid point uses; `true` selects the high row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Toggles {
    pub eps_d_eu: bool,
    pub eps_d_row_divisor: bool,
    pub eps_s_ru: bool,
    pub eps_s_row: bool,
    pub s_ru: bool,
}

impl Toggles {
    /// Grid index to toggles, the first toggle varying slowest.
    pub fn from_index(i: usize) -> Self {
        let bit = |k: usize| (i >> (4 - k)) & 1 == 1;
        Self {
            eps_d_eu: bit(0),
            eps_d_row_divisor: bit(1),
            eps_s_ru: bit(2),
            eps_s_row: bit(3),
            s_ru: bit(4),
        }
    }

    pub fn label(&self) -> String {
        let hl = |b: bool| if b { 'H' } else { 'L' };
        [
            self.eps_d_eu,
            self.eps_d_row_divisor,
            self.eps_s_ru,
            self.eps_s_row,
            self.s_ru,
        ]
        .iter()
        .map(|&b| hl(b))
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub toggles: Toggles,
    pub eps_d_row_divisor: f64,
    pub params: ModelParams,
}

pub const GRID_SIZE: usize = 32;

/// Every low/high combination of the five swept parameters.
///
/// Demand volumes, `x` and other-supply volume stay at the baseline; when
/// Russian exports move, `y` is recomputed against the fixed other supply.
pub fn sensitivity_grid(h: Horizon, cost_model: CostModel) -> Vec<GridPoint> {
    let base = baseline(h, cost_model);
    let bounds = sensitivity_bounds(h);
    (0..GRID_SIZE)
        .map(|i| {
            let t = Toggles::from_index(i);
            let eps_d_eu = bounds.eps_d_eu.pick(t.eps_d_eu);
            let divisor = bounds.eps_d_row_divisor.pick(t.eps_d_row_divisor);
            let s_ru = bounds.s_ru_mbd.pick(t.s_ru) * LITERS_PER_BARREL;
            let mut params = base;
            params.eps_d_eu = eps_d_eu;
            params.eps_d_row = eps_d_eu / divisor;
            params.eps_s_ru = bounds.eps_s_ru.pick(t.eps_s_ru);
            params.eps_s_row = bounds.eps_s_row.pick(t.eps_s_row);
            params.s_ru = s_ru;
            params.y = s_ru / (s_ru + base.s_row);
            GridPoint {
                toggles: t,
                eps_d_row_divisor: divisor,
                params,
            }
        })
        .collect()
}

/// Yardsticks for the size of a profit gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextConstants {
    pub gdp_ru: f64,
    pub military_ru: f64,
    pub soldier_salary: f64,
    pub police_salary: f64,
    pub troll_salary: f64,
    pub mlrs_unit: f64,
    pub tank_upgrade: f64,
}

/// GDP and military budget in MEUR/d; salaries in EUR/yr; equipment in EUR.
pub const CONTEXT: ContextConstants = ContextConstants {
    gdp_ru: 3700.0,
    military_ru: 160.0,
    soldier_salary: 7500.0,
    police_salary: 7200.0,
    troll_salary: 6800.0,
    mlrs_unit: 2_000_000.0,
    tank_upgrade: 211_000.0,
};

/// What one day of extra profit amounts to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextReport {
    pub profit_meur_per_day: f64,
    pub gdp_share: f64,
    pub military_share: f64,
    pub soldier_salaries: u64,
    pub police_salaries: u64,
    pub troll_salaries: u64,
    pub mlrs_units: u64,
    pub tank_upgrades: u64,
}

pub fn context_report(profit: f64) -> Result<ContextReport> {
    if !(profit >= 0.0) || !profit.is_finite() {
        return Err(Error::invalid("profit", "must be a finite value >= 0"));
    }
    let eur = profit * 1e6;
    let count = |unit: f64| (eur / unit).floor() as u64;
    Ok(ContextReport {
        profit_meur_per_day: profit,
        gdp_share: profit / CONTEXT.gdp_ru,
        military_share: profit / CONTEXT.military_ru,
        soldier_salaries: count(CONTEXT.soldier_salary),
        police_salaries: count(CONTEXT.police_salary),
        troll_salaries: count(CONTEXT.troll_salary),
        mlrs_units: count(CONTEXT.mlrs_unit),
        tank_upgrades: count(CONTEXT.tank_upgrade),
    })
}
