//! Helpers shared by the integration suites.
#![allow(dead_code)]

use fueltax_core::model::{evaluate_tax_cut, price_response_to_tax, CostModel, ModelParams};
use fueltax_core::scenarios::{baseline, Horizon};
use proptest::prelude::*;

/// True when `computed` shows as `shown` to within one unit of its last
/// displayed digit. For integers the unit is set by the trailing zeros, so
/// "4100" has unit 100 and "141" has unit 1.
pub fn matches_display(computed: f64, shown: &str) -> bool {
    let clean: String = shown.chars().filter(|c| !c.is_whitespace()).collect();
    let target: f64 = clean.parse().expect("numeric display value");
    let unit = match clean.split_once('.') {
        Some((_, frac)) => 10f64.powi(-(frac.len() as i32)),
        None => {
            let digits = clean.trim_start_matches('-');
            let zeros = digits.len() - digits.trim_end_matches('0').len();
            10f64.powi(zeros.min(digits.len() - 1) as i32)
        }
    };
    let rounded = (computed / unit).round() * unit;
    (rounded - target).abs() <= unit * (1.0 + 1e-9)
}

/// Random parameter sets inside the sign constraints. The box keeps
/// |eps_d_eu| <= 1 and e <= p, where a tax cut always costs revenue and
/// raises profit.
pub fn params_strategy() -> impl Strategy<Value = ModelParams> {
    (
        (-1.0f64..-0.01, -2.0f64..=0.0, 0.0f64..2.0, 0.0f64..2.0),
        (0.001f64..=1.0, 0.0f64..=1.0, 0.05f64..2.0, 0.0f64..1.0),
        (0.0f64..2.0, 0.0f64..0.5, 0.0f64..1.0, 0.0f64..1.5),
        (any::<bool>(), 1.0f64..2000.0, 1.0f64..20000.0),
    )
        .prop_map(
            |((ede, edr, esr, esw), (x, y, p, c), (tau, v, e_frac, z), (prop, s_ru, d_eu))| {
                let mut m = baseline(
                    Horizon::LongRun,
                    if prop {
                        CostModel::Proportional
                    } else {
                        CostModel::Additive
                    },
                );
                m.eps_d_eu = ede;
                m.eps_d_row = edr;
                m.eps_s_ru = esr;
                m.eps_s_row = esw;
                m.x = x;
                m.y = y;
                m.p = p;
                m.c = c;
                m.tau = tau;
                m.v_eu = v;
                m.e = e_frac * p;
                m.z = z;
                m.s_ru = s_ru;
                m.d_eu = d_eu;
                m
            },
        )
}

fn magnitude(p: &ModelParams) -> f64 {
    price_response_to_tax(p).expect("non-degenerate").abs()
}

fn nondecreasing(name: &str, lower: f64, upper: f64) -> Result<(), String> {
    if upper >= lower * (1.0 - 1e-12) {
        Ok(())
    } else {
        Err(format!(
            "|dp/dtau| ordering in {name} broken: {lower} > {upper}"
        ))
    }
}

/// Bound, sign, monotonicity and linearity checks for one parameter set.
/// `bump` is a random factor above one used for the monotonicity steps.
pub fn check_model_properties(p: &ModelParams, cut_cents: f64, bump: f64) -> Result<(), String> {
    p.validate().map_err(|e| e.to_string())?;
    let k = price_response_to_tax(p).map_err(|e| e.to_string())?;
    if !(-1.0..=0.0).contains(&k) {
        return Err(format!("dp/dtau = {k} outside [-1, 0]"));
    }

    let r = evaluate_tax_cut(p, cut_cents).map_err(|e| e.to_string())?;
    let tol = 1e-12;
    if r.d_oil_price < -tol
        || r.d_fuel_price_eu > tol
        || r.d_fiscal_eu > tol
        || r.d_profit_ru < -tol
    {
        return Err(format!("sign violated for a tax cut: {r:?}"));
    }

    let base = magnitude(p);
    let mut q = *p;
    q.x = (p.x * bump).min(1.0);
    nondecreasing("x", base, magnitude(&q))?;
    let mut q = *p;
    q.eps_d_eu = p.eps_d_eu * bump;
    nondecreasing("|eps_d_eu|", base, magnitude(&q))?;
    for (name, f) in [
        (
            "eps_s_ru",
            (|q: &mut ModelParams, b: f64| q.eps_s_ru = q.eps_s_ru * b + 0.01)
                as fn(&mut ModelParams, f64),
        ),
        ("eps_s_row", |q: &mut ModelParams, b: f64| {
            q.eps_s_row = q.eps_s_row * b + 0.01
        }),
        ("|eps_d_row|", |q: &mut ModelParams, b: f64| {
            q.eps_d_row = q.eps_d_row * b - 0.01
        }),
    ] {
        let mut q = *p;
        f(&mut q, bump);
        nondecreasing(name, magnitude(&q), base)?;
    }

    let double = evaluate_tax_cut(p, 2.0 * cut_cents).map_err(|e| e.to_string())?;
    let pairs = [
        (double.d_oil_price, r.d_oil_price),
        (double.d_fuel_price_eu, r.d_fuel_price_eu),
        (double.d_fiscal_eu, r.d_fiscal_eu),
        (double.d_profit_ru, r.d_profit_ru),
        (
            double.d_profit_ru_yearly.unwrap_or(0.0),
            r.d_profit_ru_yearly.unwrap_or(0.0),
        ),
    ];
    for (two, one) in pairs {
        if (two - 2.0 * one).abs() > f64::EPSILON * two.abs() {
            return Err(format!("cut not linear: {two} vs 2 x {one}"));
        }
    }
    Ok(())
}
