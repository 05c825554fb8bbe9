//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use chrono::NaiveDate;
use clap::Parser;
use common::{check_model_properties, matches_display, params_strategy};
use fueltax_core::cli::{execute, Cli};
use fueltax_core::equilibrium::calibrate;
use fueltax_core::model::{
    evaluate_tax_cut, evaluate_transfer, price_response_to_tax, CostModel, PolicyResponse,
    PolicyShock,
};
use fueltax_core::regression::{
    fit_ols, urals_brent_analysis, PriceObservation, PriceSeries, SplitDates,
};
use fueltax_core::report::{results_tables, Precision};
use fueltax_core::scenarios::{baseline, context_report, Horizon, EU_INCOME_MEUR_PER_DAY};
use fueltax_core::sensitivity::{policy_pair, sweep, Column, STANDARD_CUT_CENTS};
use fueltax_core::units::{barrels_to_liters, liters_to_barrels, VolumeRate, VolumeUnit};
use proptest::test_runner::{Config, TestRunner};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Compares a response against a published row; `None` marks a dash.
fn compare_row(
    label: &str,
    r: &PolicyResponse,
    fiscal: f64,
    shown: [Option<&str>; 5],
) -> Result<usize, String> {
    let computed = [
        Some(r.d_oil_price * 100.0),
        Some(r.d_fuel_price_eu * 100.0),
        Some(fiscal),
        Some(r.d_profit_ru),
        r.d_profit_ru_yearly,
    ];
    let mut n = 0;
    for (i, (c, s)) in computed.iter().zip(shown).enumerate() {
        match (c, s) {
            (Some(c), Some(s)) => {
                ensure(matches_display(*c, s), || {
                    format!("{label} column {}: {c} vs {s}", i + 1)
                })?;
                n += 1;
            }
            (None, None) => {}
            _ => return Err(format!("{label} column {}: dash mismatch", i + 1)),
        }
    }
    Ok(n)
}

const TABLE2: [[Option<&str>; 5]; 3] = [
    [Some("8.9"), Some("-9.3"), Some("140"), Some("39"), None],
    [
        Some("1.2"),
        Some("-18"),
        Some("170"),
        Some("11"),
        Some("4100"),
    ],
    [
        Some("0.79"),
        Some("-19"),
        Some("115"),
        Some("12"),
        Some("4300"),
    ],
];
const TABLE3: [[Option<&str>; 5]; 3] = [
    [Some("1.2"), Some("1.4"), Some("140"), Some("5.3"), None],
    [
        Some("0.19"),
        Some("0.23"),
        Some("170"),
        Some("1.8"),
        Some("650"),
    ],
    [
        Some("0.024"),
        Some("0.029"),
        Some("115"),
        Some("0.36"),
        Some("132"),
    ],
];
const TABLE8: [[Option<&str>; 5]; 3] = [
    [Some("4.9"), Some("-9.3"), Some("141"), Some("22"), None],
    [
        Some("0.65"),
        Some("-19"),
        Some("166"),
        Some("6.1"),
        Some("2200"),
    ],
    [
        Some("0.51"),
        Some("-19"),
        Some("115"),
        Some("7.6"),
        Some("2800"),
    ],
];
const TABLE9: [[Option<&str>; 5]; 3] = [
    [Some("0.66"), Some("1.4"), Some("141"), Some("2.9"), None],
    [
        Some("0.10"),
        Some("0.23"),
        Some("166"),
        Some("0.97"),
        Some("350"),
    ],
    [
        Some("0.016"),
        Some("0.034"),
        Some("115"),
        Some("0.23"),
        Some("85"),
    ],
];

fn criterion_1() -> Check {
    let mut n = 0;
    for (h, row) in Horizon::ALL.iter().zip(TABLE2) {
        let r = evaluate_tax_cut(&baseline(*h, CostModel::Additive), STANDARD_CUT_CENTS)
            .map_err(|e| e.to_string())?;
        n += compare_row(h.label(), &r, r.fiscal_cost(), row)?;
    }
    Ok(format!("{n} tax-cut values within one displayed unit"))
}

fn criterion_2() -> Check {
    let mut n = 0;
    for (h, row) in Horizon::ALL.iter().zip(TABLE3) {
        let pair = policy_pair(*h, CostModel::Additive).map_err(|e| e.to_string())?;
        n += compare_row(h.label(), &pair.transfer, pair.transfer_amount, row)?;
    }
    // Profit is proportional to 1/I, so one published yearly figure pins I.
    let lr = baseline(Horizon::LongRun, CostModel::Additive);
    let at_base = evaluate_transfer(&lr, 115.0).map_err(|e| e.to_string())?;
    let income = EU_INCOME_MEUR_PER_DAY * at_base.d_profit_ru_yearly.unwrap_or(f64::NAN) / 132.0;
    ensure((41_000.0..=43_500.0).contains(&income), || {
        format!("back-solved I = {income}")
    })?;
    for (h, row) in Horizon::ALL.iter().zip(TABLE3).take(2) {
        let mut p = baseline(*h, CostModel::Additive);
        let amount = policy_pair(*h, CostModel::Additive)
            .map_err(|e| e.to_string())?
            .transfer_amount;
        p.income_eu = Some(income);
        let r = evaluate_transfer(&p, amount).map_err(|e| e.to_string())?;
        compare_row(&format!("{} at back-solved I", h.label()), &r, amount, row)?;
    }
    Ok(format!("{n} transfer values match; I back-solved from long-run yearly profit = {income:.0} MEUR/day"))
}

fn criterion_3() -> Check {
    let mut n = 0;
    for (i, h) in Horizon::ALL.iter().enumerate() {
        let pair = policy_pair(*h, CostModel::Proportional).map_err(|e| e.to_string())?;
        n += compare_row(
            h.label(),
            &pair.tax_cut,
            pair.tax_cut.fiscal_cost(),
            TABLE8[i],
        )?;
        n += compare_row(h.label(), &pair.transfer, pair.transfer_amount, TABLE9[i])?;
    }
    Ok(format!(
        "{n} proportional-cost values within one displayed unit"
    ))
}

fn criterion_4() -> Check {
    let within = |v: f64, target: f64| (v - target).abs() <= 0.10 * target;
    let cut = PolicyShock::consumer_tax_cut(STANDARD_CUT_CENTS, 0.2);
    let run = |h| sweep(h, &cut, CostModel::Additive).map_err(|e| e.to_string());
    let vsr = run(Horizon::VeryShortRun)?;
    let sr = run(Horizon::ShortRun)?;
    let lr = run(Horizon::LongRun)?;
    let (a, b, c) = (
        vsr.column(Column::Profit),
        sr.column(Column::Profit),
        lr.column(Column::Profit),
    );
    ensure(within(a.min, 21.0) && within(a.max, 74.0), || {
        format!("vSR profit {}..{}", a.min, a.max)
    })?;
    ensure(
        (3.3..=3.6).contains(&b.min) && (23.0..=25.0).contains(&b.max),
        || format!("SR profit {}..{}", b.min, b.max),
    )?;
    ensure(within(c.min, 7.4) && within(c.max, 21.0), || {
        format!("LR profit {}..{}", c.min, c.max)
    })?;
    let sr_oil_min = sr.column(Column::OilPrice).min * 100.0;
    ensure(matches_display(sr_oil_min, "0.38"), || {
        format!("SR min oil price {sr_oil_min}")
    })?;
    let lr_fiscal_max = -lr.column(Column::Fiscal).max;
    ensure(matches_display(lr_fiscal_max, "97"), || {
        format!("LR max fiscal {lr_fiscal_max}")
    })?;
    let tables = results_tables()
        .map_err(|e| e.to_string())?
        .tables(Precision::Display);
    let sens = &tables[2];
    ensure(
        sens.rows[3][2] == "0.38 [a]" && sens.rows[8][4] == "97 [b]",
        || {
            format!(
                "erratum cells rendered as {:?} / {:?}",
                sens.rows[3][2], sens.rows[8][4]
            )
        },
    )?;
    Ok(format!(
        "profit vSR {:.1}..{:.1}, SR {:.2}..{:.1}, LR {:.1}..{:.1}; SR min oil price {:.3} c/l; LR max fiscal cost {:.1}",
        a.min, a.max, b.min, b.max, c.min, c.max, sr_oil_min, lr_fiscal_max
    ))
}

fn criterion_5() -> Check {
    let mut report = Vec::new();
    for h in Horizon::ALL {
        let m = calibrate(&baseline(h, CostModel::Additive), 0.0).map_err(|e| e.to_string())?;
        let k = price_response_to_tax(&m.linear_params()).map_err(|e| e.to_string())?;
        let tau = m.baseline().tau;
        let p0 = m.baseline().p;
        let gap = |dt: f64| -> Result<f64, String> {
            let exact = m
                .solve_price(tau + dt, None)
                .map_err(|e| e.to_string())?
                .price
                - p0;
            Ok((k * dt - exact).abs() / exact.abs())
        };
        let small = gap(-0.001)?;
        ensure(small < 0.005, || {
            format!("{} gap at -0.1 cent = {small}", h.tag())
        })?;
        let full = -STANDARD_CUT_CENTS / 100.0 / 1.2;
        let ladder = (0..4)
            .map(|i| gap(full / 2f64.powi(i)))
            .collect::<Result<Vec<_>, _>>()?;
        for w in ladder.windows(2) {
            ensure(w[1] / w[0] <= 0.75, || {
                format!("{} ladder {ladder:?}", h.tag())
            })?;
        }
        report.push(format!(
            "{} {:.1e}/{:.2}%",
            h.tag(),
            small,
            ladder[0] * 100.0
        ));
    }
    Ok(format!(
        "gap at -0.1 cent / at -16.67 cents: {}",
        report.join(", ")
    ))
}

fn criterion_6() -> Check {
    let mut worst_residual = 0f64;
    let mut worst_spread = 0f64;
    for h in Horizon::ALL {
        for cm in [CostModel::Additive, CostModel::Proportional] {
            let p = baseline(h, cm);
            let amount = policy_pair(h, cm)
                .map_err(|e| e.to_string())?
                .transfer_amount;
            for shock in [
                PolicyShock::consumer_tax_cut(STANDARD_CUT_CENTS, p.v_eu),
                PolicyShock::transfer(amount),
            ] {
                let mut results = Vec::new();
                for v_row in [0.0, 0.2, 0.5] {
                    let m = calibrate(&p, v_row).map_err(|e| e.to_string())?;
                    let fx = m.exact_policy_effects(&shock).map_err(|e| e.to_string())?;
                    for s in [&fx.before, &fx.after] {
                        let rel = s.residual.abs() / s.quantities.demand();
                        worst_residual = worst_residual.max(rel);
                        ensure(rel < 1e-10, || format!("{h:?} residual {rel}"))?;
                    }
                    results.push(fx.response);
                }
                for r in &results[1..] {
                    let b = &results[0];
                    for (x, y) in [
                        (r.d_oil_price, b.d_oil_price),
                        (r.d_fuel_price_eu, b.d_fuel_price_eu),
                        (r.d_fiscal_eu, b.d_fiscal_eu),
                        (r.d_profit_ru, b.d_profit_ru),
                    ] {
                        let spread = if x == y { 0.0 } else { (x - y).abs() / y.abs() };
                        worst_spread = worst_spread.max(spread);
                        ensure(spread <= 1e-12, || {
                            format!("{h:?} {cm:?} v_row spread {spread}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "max relative residual {worst_residual:.1e}; max v_row spread {worst_spread:.1e}"
    ))
}

fn criterion_7() -> Check {
    const CASES: u32 = 10_000;
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(
            &(params_strategy(), 0.1f64..100.0, 1.01f64..3.0),
            |(p, cut, bump)| {
                check_model_properties(&p, cut, bump)
                    .map_err(proptest::test_runner::TestCaseError::fail)
            },
        )
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{CASES} random parameter sets: bound, signs, four monotonicities, linearity"
    ))
}

fn criterion_8() -> Check {
    let low = context_report(11.0).map_err(|e| e.to_string())?;
    let high = context_report(39.0).map_err(|e| e.to_string())?;
    ensure(
        low.soldier_salaries > 1400 && low.soldier_salaries < 1500,
        || format!("soldiers {}", low.soldier_salaries),
    )?;
    ensure(matches_display(low.police_salaries as f64, "1500"), || {
        format!("police {}", low.police_salaries)
    })?;
    ensure(matches_display(low.troll_salaries as f64, "1600"), || {
        format!("trolls {}", low.troll_salaries)
    })?;
    ensure(low.mlrs_units == 5, || {
        format!("vehicles {}", low.mlrs_units)
    })?;
    ensure(low.tank_upgrades > 50 && low.tank_upgrades < 60, || {
        format!("tanks {}", low.tank_upgrades)
    })?;
    for (c, mil, gdp) in [(&low, "7", "0.3"), (&high, "24", "1")] {
        ensure(matches_display(c.military_share * 100.0, mil), || {
            format!("military {}", c.military_share)
        })?;
        ensure(matches_display(c.gdp_share * 100.0, gdp), || {
            format!("gdp {}", c.gdp_share)
        })?;
    }
    Ok(format!(
        "11 MEUR/day: {} soldiers, {} police, {} trolls, {} MLRS, {} tanks, {:.1}% military, {:.2}% GDP; 39 MEUR/day: {:.1}% military, {:.2}% GDP",
        low.soldier_salaries,
        low.police_salaries,
        low.troll_salaries,
        low.mlrs_units,
        low.tank_upgrades,
        low.military_share * 100.0,
        low.gdp_share * 100.0,
        high.military_share * 100.0,
        high.gdp_share * 100.0
    ))
}

fn criterion_9() -> Check {
    let f = fit_ols(&[0.0, 1.0, 2.0], &[1.0, 2.0, 4.0]).map_err(|e| e.to_string())?;
    ensure((f.slope.estimate - 1.5).abs() < 1e-10, || {
        format!("slope {}", f.slope.estimate)
    })?;
    ensure((f.intercept.estimate - 5.0 / 6.0).abs() < 1e-10, || {
        format!("intercept {}", f.intercept.estimate)
    })?;
    ensure(
        (f.slope.std_error - (1.0f64 / 12.0).sqrt()).abs() < 1e-10,
        || format!("se {}", f.slope.std_error),
    )?;

    let xs: Vec<f64> = (0..40)
        .map(|i| (i as f64 * 0.7).sin() * 10.0 + i as f64)
        .collect();
    let line: Vec<f64> = xs.iter().map(|x| 3.25 - 0.5 * x).collect();
    let exact = fit_ols(&xs, &line).map_err(|e| e.to_string())?;
    ensure(
        (exact.slope.estimate + 0.5).abs() < 1e-10
            && (exact.intercept.estimate - 3.25).abs() < 1e-9,
        || format!("exact line recovered as {:?}", exact.slope),
    )?;

    let ys: Vec<f64> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| 2.0 + 0.8 * x + ((i * 7) % 5) as f64 - 2.0)
        .collect();
    let base = fit_ols(&xs, &ys).map_err(|e| e.to_string())?;
    let moved: Vec<f64> = xs.iter().map(|x| 4.0 * x - 7.0).collect();
    let affine = fit_ols(&moved, &ys).map_err(|e| e.to_string())?;
    ensure(
        (affine.slope.estimate * 4.0 - base.slope.estimate).abs() < 1e-10,
        || "slope not rescaled".into(),
    )?;
    ensure(
        (affine.slope.t_stat - base.slope.t_stat).abs() < 1e-8,
        || "t statistic changed".into(),
    )?;
    ensure((affine.sse - base.sse).abs() < 1e-8 * base.sse, || {
        "sse changed".into()
    })?;

    let start = NaiveDate::from_ymd_opt(2022, 1, 1).unwrap();
    let split = NaiveDate::from_ymd_opt(2022, 2, 24).unwrap();
    let obs = (0..90)
        .map(|i| {
            let date = start + chrono::Days::new(i);
            let urals = 70.0 + 10.0 * (i as f64 * 0.37).sin() + 0.1 * i as f64;
            let brent = if date < split {
                4.269 + 0.947 * urals
            } else {
                urals + 30.0
            };
            PriceObservation { date, brent, urals }
        })
        .collect();
    let series = PriceSeries::new(obs).map_err(|e| e.to_string())?;
    let r = urals_brent_analysis(&series, SplitDates::same(split)).map_err(|e| e.to_string())?;
    ensure(
        (r.levels_pre.slope.estimate - 0.947).abs() < 1e-10
            && (r.levels_post.slope.estimate - 1.0).abs() < 1e-10,
        || "synthetic break not recovered".into(),
    )?;

    let csv = "date,brent,urals\n2022-03-01,104.97,85.12\n2022-03-02,112.93,86.46\n2022-03-03,110.46,80.0001\n";
    let s = PriceSeries::from_csv(csv.as_bytes()).map_err(|e| e.to_string())?;
    let want = [(104.97, 85.12), (112.93, 86.46), (110.46, 80.0001)];
    ensure(
        s.observations().iter().zip(want).all(|(o, (b, u))| {
            o.brent.to_bits() == f64::to_bits(b) && o.urals.to_bits() == f64::to_bits(u)
        }),
        || "CSV values not bit-exact".into(),
    )?;
    ensure(
        PriceSeries::from_csv("date,urals,brent\n".as_bytes()).is_err(),
        || "wrong header accepted".into(),
    )?;
    Ok(
        "hand example, exact line, affine invariance, synthetic break and bit-exact CSV ingestion"
            .into(),
    )
}

fn cli(args: &[&str]) -> Result<String, String> {
    let cli = Cli::try_parse_from(std::iter::once("fueltax").chain(args.iter().copied()))
        .map_err(|e| e.to_string())?;
    execute(&cli).map_err(|e| e.message)
}

fn criterion_10() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for h in ["vsr", "sr", "lr"] {
        for cm in ["additive", "proportional"] {
            let file = dir.path().join(format!("{h}-{cm}.json"));
            let file = file.to_str().ok_or("non-utf8 temp path")?;
            cli(&[
                "params",
                "--horizon",
                h,
                "--cost-model",
                cm,
                "--write",
                file,
            ])?;
            for policy in ["tax-cut", "transfer"] {
                let direct = cli(&[
                    "run",
                    "--horizon",
                    h,
                    "--cost-model",
                    cm,
                    "--policy",
                    policy,
                    "--format",
                    "json",
                ])?;
                let loaded = cli(&[
                    "run", "--params", file, "--policy", policy, "--format", "json",
                ])?;
                ensure(direct == loaded, || {
                    format!("{h} {cm} {policy} differs after round trip")
                })?;
                compared += 1;
            }
        }
    }
    let mut worst = 0f64;
    for i in 0..=1000 {
        let q = i as f64 * 0.731 + 1e-3;
        let back = VolumeRate::mbd(q)
            .and_then(|v| {
                VolumeRate::new(
                    v.to_unit(VolumeUnit::MillionLitersPerDay).value(),
                    VolumeUnit::MillionLitersPerDay,
                )
            })
            .map(|v| v.to_unit(VolumeUnit::MillionBarrelsPerDay).value())
            .map_err(|e| e.to_string())?;
        let direct = liters_to_barrels(barrels_to_liters(q).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        worst = worst.max((back - q).abs() / q).max((direct - q).abs() / q);
    }
    ensure(worst <= 1e-12, || format!("unit round trip error {worst}"))?;
    Ok(format!("{compared} runs identical after parameter export and ingest; unit round trip error {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("tax cut table", criterion_1),
        ("cash transfer table and income back-solve", criterion_2),
        ("proportional-cost tables", criterion_3),
        ("sensitivity sweep endpoints and errata", criterion_4),
        ("linear vs exact oracle", criterion_5),
        ("exact-model residuals and v_row invariance", criterion_6),
        ("randomized model properties", criterion_7),
        ("context figures", criterion_8),
        ("regression", criterion_9),
        ("round trips", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
