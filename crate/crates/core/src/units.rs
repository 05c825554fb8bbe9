//! Unit conventions shared by the whole crate.
//!
//! Volumes are carried in million liters of refined product per day (Ml/d),
//! prices in EUR per liter and money flows in million EUR per day (MEUR/d).
//! One barrel of crude is taken to yield 170 liters of sellable product.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const LITERS_PER_BARREL: f64 = 170.0;
pub const DAYS_PER_YEAR: f64 = 365.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeUnit {
    MillionLitersPerDay,
    MillionBarrelsPerDay,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeRate {
    value: f64,
    unit: VolumeUnit,
}

impl VolumeRate {
    pub fn new(value: f64, unit: VolumeUnit) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeQuantity {
                what: "volume",
                value,
            });
        }
        Ok(Self { value, unit })
    }

    pub fn mbd(value: f64) -> Result<Self> {
        Self::new(value, VolumeUnit::MillionBarrelsPerDay)
    }

    pub fn mld(value: f64) -> Result<Self> {
        Self::new(value, VolumeUnit::MillionLitersPerDay)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn unit(&self) -> VolumeUnit {
        self.unit
    }

    pub fn to_unit(self, unit: VolumeUnit) -> Self {
        let value = match (self.unit, unit) {
            (a, b) if a == b => self.value,
            (VolumeUnit::MillionBarrelsPerDay, VolumeUnit::MillionLitersPerDay) => {
                self.value * LITERS_PER_BARREL
            }
            _ => self.value / LITERS_PER_BARREL,
        };
        Self { value, unit }
    }

    /// Value in Ml/d regardless of the stored unit.
    pub fn liters(&self) -> f64 {
        self.to_unit(VolumeUnit::MillionLitersPerDay).value
    }

    pub fn barrels(&self) -> f64 {
        self.to_unit(VolumeUnit::MillionBarrelsPerDay).value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoneyUnit {
    MeurPerDay,
    MeurPerYear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoneyRate {
    pub value: f64,
    pub unit: MoneyUnit,
}

impl MoneyRate {
    pub fn per_day(value: f64) -> Self {
        Self {
            value,
            unit: MoneyUnit::MeurPerDay,
        }
    }

    pub fn per_year(value: f64) -> Self {
        Self {
            value,
            unit: MoneyUnit::MeurPerYear,
        }
    }
}

/// Mb/d of crude to Ml/d of product.
pub fn barrels_to_liters(mbd: f64) -> Result<f64> {
    Ok(VolumeRate::mbd(mbd)?.liters())
}

pub fn liters_to_barrels(mld: f64) -> Result<f64> {
    Ok(VolumeRate::mld(mld)?.barrels())
}

/// Crude price in USD/barrel to EUR per liter of product.
pub fn oil_price_per_liter(usd_per_barrel: f64, fx_eur_per_usd: f64) -> Result<f64> {
    if !(usd_per_barrel > 0.0) {
        return Err(Error::invalid("usd_per_barrel", "must be positive"));
    }
    if !(fx_eur_per_usd > 0.0) {
        return Err(Error::invalid("fx_eur_per_usd", "must be positive"));
    }
    Ok(usd_per_barrel * fx_eur_per_usd / LITERS_PER_BARREL)
}

/// Per-barrel cost to per-liter cost in the same currency.
pub fn per_barrel_to_per_liter(cost_per_barrel: f64) -> f64 {
    cost_per_barrel / LITERS_PER_BARREL
}

pub fn annualize(m: MoneyRate) -> MoneyRate {
    match m.unit {
        MoneyUnit::MeurPerDay => MoneyRate::per_year(m.value * DAYS_PER_YEAR),
        MoneyUnit::MeurPerYear => m,
    }
}
