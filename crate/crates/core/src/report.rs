//! Rendering of results as aligned text, CSV and JSON.
//!
//! Values are kept at full precision until a text table is rendered; only
//! then are deltas and money amounts rounded to two significant figures.

use serde::{Deserialize, Serialize};

use crate::equilibrium::ExactEffects;
use crate::error::Result;
use crate::model::PolicyShock;
use crate::model::{CostModel, PolicyResponse};
use crate::regression::{Coefficient, OlsFit, UralsBrentReport};
use crate::scenarios::{ContextReport, Horizon};
use crate::sensitivity::{
    policy_pair, sweep, Column, PolicyPair, SweepSummary, STANDARD_CUT_CENTS,
};

pub const DISPLAY_SIG_FIGS: usize = 2;

/// Rounds to `digits` significant figures.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let decimals = digits as i32 - 1 - v.abs().log10().floor() as i32;
    let scale = 10f64.powi(decimals);
    (v * scale).round() / scale
}

/// Formats with `digits` significant figures, never in exponent notation.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let r = round_sig(v, digits);
    if r == 0.0 {
        return "0".to_string();
    }
    let decimals = (digits as i32 - 1 - r.abs().log10().floor() as i32).max(0) as usize;
    format!("{r:.decimals$}")
}

pub fn display(v: f64) -> String {
    format_sig(v, DISPLAY_SIG_FIGS)
}

/// Plain rectangular table with a title and optional footnotes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub id: String,
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(id: &str, title: &str, header: &[&str]) -> Self {
        Self {
            id: id.to_string(),
            title: title.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render_text(&self) -> String {
        let ncol = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate().take(ncol) {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == 0 {
                        format!("{c:<w$}", w = widths[i])
                    } else {
                        format!("{c:>w$}", w = widths[i])
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        out.push_str(&self.title);
        out.push('\n');
        out.push_str(&line(&self.header));
        out.push('\n');
        let total: usize = widths.iter().sum::<usize>() + 2 * ncol.saturating_sub(1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    pub fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| crate::error::Error::Data(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| crate::error::Error::Data(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Cell formatting for text (rounded) or CSV (full precision).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Display,
    Full,
}

impl Precision {
    pub fn fmt(&self, v: f64) -> String {
        match self {
            Precision::Display => display(v),
            Precision::Full => v.to_string(),
        }
    }

    fn fmt_opt(&self, v: Option<f64>) -> String {
        match (self, v) {
            (_, Some(v)) => self.fmt(v),
            (Precision::Display, None) => "–".to_string(),
            (Precision::Full, None) => String::new(),
        }
    }
}

const RESPONSE_HEADER: [&str; 6] = [
    "Horizon",
    "Oil price change c/l",
    "EU fuel price change c/l",
    "Fiscal cost EU MEUR/day",
    "Profit gain Russia MEUR/day",
    "Profit gain Russia MEUR/year",
];

pub fn response_cells(label: &str, r: &PolicyResponse, prec: Precision) -> Vec<String> {
    vec![
        label.to_string(),
        prec.fmt(r.d_oil_price * 100.0),
        prec.fmt(r.d_fuel_price_eu * 100.0),
        prec.fmt(r.fiscal_cost()),
        prec.fmt(r.d_profit_ru),
        prec.fmt_opt(r.d_profit_ru_yearly),
    ]
}

pub fn response_table(
    id: &str,
    title: &str,
    rows: &[(String, PolicyResponse)],
    prec: Precision,
) -> Table {
    let mut t = Table::new(id, title, &RESPONSE_HEADER);
    for (label, r) in rows {
        t.push(response_cells(label, r, prec));
    }
    t
}

/// Everything needed for the five results tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsTables {
    pub additive: Vec<PolicyPair>,
    pub proportional: Vec<PolicyPair>,
    pub sensitivity: Vec<SweepSummary>,
}

pub fn results_tables() -> Result<ResultsTables> {
    let pairs = |cm| {
        Horizon::ALL
            .iter()
            .map(|&h| policy_pair(h, cm))
            .collect::<Result<Vec<_>>>()
    };
    let sensitivity = Horizon::ALL
        .iter()
        .map(|&h| {
            let shock = PolicyShock::consumer_tax_cut(STANDARD_CUT_CENTS, 0.2);
            sweep(h, &shock, CostModel::Additive)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultsTables {
        additive: pairs(CostModel::Additive)?,
        proportional: pairs(CostModel::Proportional)?,
        sensitivity,
    })
}

impl ResultsTables {
    pub fn tables(&self, prec: Precision) -> Vec<Table> {
        let rows = |pairs: &[PolicyPair], tax: bool| {
            pairs
                .iter()
                .map(|p| {
                    let r = if tax { p.tax_cut } else { p.transfer };
                    (p.horizon.label().to_string(), r)
                })
                .collect::<Vec<_>>()
        };
        vec![
            response_table(
                "tax_cut",
                "Effect of an EU fuel tax cut of 20 euro cents/liter",
                &rows(&self.additive, true),
                prec,
            ),
            response_table(
                "transfer",
                "Effect of a fiscally equivalent cash transfer",
                &rows(&self.additive, false),
                prec,
            ),
            sensitivity_table(&self.sensitivity, prec),
            response_table(
                "tax_cut_proportional",
                "Effect of an EU fuel tax cut of 20 euro cents/liter with proportional costs",
                &rows(&self.proportional, true),
                prec,
            ),
            response_table(
                "transfer_proportional",
                "Effect of a fiscally equivalent cash transfer with proportional costs",
                &rows(&self.proportional, false),
                prec,
            ),
        ]
    }
}

/// Minimum, base and maximum of each output per horizon. Fiscal extremes are
/// taken on the signed revenue change and shown as a cost, so the "Maximum"
/// row carries the smallest cost.
pub fn sensitivity_table(sweeps: &[SweepSummary], prec: Precision) -> Table {
    let mut t = Table::new(
        "sensitivity",
        "Results of sensitivity analysis (20 cent tax cut)",
        &[
            "Horizon",
            "Row",
            "Oil price change c/l",
            "EU fuel price change c/l",
            "Fiscal cost EU MEUR/day",
            "Profit gain Russia MEUR/day",
        ],
    );
    let mut marked = Vec::new();
    for s in sweeps {
        for (row, pick) in [("Minimum", 0), ("Base case", 1), ("Maximum", 2)] {
            let value = |c: Column| {
                let cs = s.column(c);
                [cs.min, cs.base, cs.max][pick]
            };
            let mut oil = prec.fmt(value(Column::OilPrice) * 100.0);
            let mut fiscal = prec.fmt(-value(Column::Fiscal));
            if prec == Precision::Display {
                if s.horizon == Horizon::ShortRun && pick == 0 {
                    oil.push_str(" [a]");
                    marked.push("a");
                }
                if s.horizon == Horizon::LongRun && pick == 2 {
                    fiscal.push_str(" [b]");
                    marked.push("b");
                }
            }
            t.push(vec![
                s.horizon.label().to_string(),
                row.to_string(),
                oil,
                prec.fmt(value(Column::FuelPrice) * 100.0),
                fiscal,
                prec.fmt(value(Column::Profit)),
            ]);
        }
    }
    if marked.contains(&"a") {
        t.notes
            .push("[a] 0.38 c/l; a figure of 3.8 misplaces the decimal point.".to_string());
    }
    if marked.contains(&"b") {
        t.notes
            .push("[b] Shown as a cost; as a revenue change it is -97.".to_string());
    }
    t
}

/// Full 32-row grid of a sweep.
pub fn sweep_grid_table(s: &SweepSummary, prec: Precision) -> Table {
    let mut t = Table::new(
        "sweep_grid",
        &format!(
            "Sensitivity grid, {} ({} costs)",
            s.horizon.label(),
            s.cost_model.label()
        ),
        &[
            "Toggles",
            "eps_d_eu",
            "eps_d_row",
            "eps_s_ru",
            "eps_s_row",
            "s_ru Ml/d",
            "y",
            "Oil price change c/l",
            "EU fuel price change c/l",
            "Fiscal cost EU MEUR/day",
            "Profit gain Russia MEUR/day",
        ],
    );
    for row in &s.rows {
        let p = &row.params;
        let r = &row.response;
        t.push(vec![
            row.toggles.label(),
            p.eps_d_eu.to_string(),
            format_param(p.eps_d_row, prec),
            p.eps_s_ru.to_string(),
            p.eps_s_row.to_string(),
            format_param(p.s_ru, prec),
            format_param(p.y, prec),
            prec.fmt(r.d_oil_price * 100.0),
            prec.fmt(r.d_fuel_price_eu * 100.0),
            prec.fmt(r.fiscal_cost()),
            prec.fmt(r.d_profit_ru),
        ]);
    }
    t
}

fn format_param(v: f64, prec: Precision) -> String {
    match prec {
        Precision::Display => format_sig(v, 4),
        Precision::Full => v.to_string(),
    }
}

pub fn sweep_summary_table(s: &SweepSummary, prec: Precision) -> Table {
    let mut t = sensitivity_table(std::slice::from_ref(s), prec);
    t.id = "sweep_summary".to_string();
    t.title = format!(
        "Sensitivity summary, {} ({} costs)",
        s.horizon.label(),
        s.cost_model.label()
    );
    t
}

/// Linear and exact effects of one policy at one horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub horizon: Horizon,
    pub cost_model: CostModel,
    pub linear: PolicyResponse,
    pub exact: ExactEffects,
    pub gap_oil_price: f64,
    pub gap_fiscal: f64,
    pub gap_profit: f64,
}

/// `|linear - exact| / |exact|`, zero when both vanish.
pub fn relative_gap(linear: f64, exact: f64) -> f64 {
    if linear == exact {
        0.0
    } else {
        (linear - exact).abs() / exact.abs()
    }
}

impl OracleComparison {
    pub fn new(
        horizon: Horizon,
        cost_model: CostModel,
        linear: PolicyResponse,
        exact: ExactEffects,
    ) -> Self {
        let e = &exact.response;
        Self {
            horizon,
            cost_model,
            linear,
            exact,
            gap_oil_price: relative_gap(linear.d_oil_price, e.d_oil_price),
            gap_fiscal: relative_gap(linear.d_fiscal_eu, e.d_fiscal_eu),
            gap_profit: relative_gap(linear.d_profit_ru, e.d_profit_ru),
        }
    }
}

pub fn oracle_table(rows: &[OracleComparison], prec: Precision) -> Table {
    let mut t = Table::new(
        "oracle",
        "Linearized vs exact isoelastic equilibrium",
        &[
            "Horizon",
            "Costs",
            "Oil price linear c/l",
            "Oil price exact c/l",
            "Gap",
            "Profit linear MEUR/day",
            "Profit exact MEUR/day",
            "Gap",
            "Fiscal linear MEUR/day",
            "Fiscal exact MEUR/day",
            "Gap",
            "Iterations",
        ],
    );
    let gap = |g: f64| match prec {
        Precision::Display => format!("{}%", format_sig(g * 100.0, 2)),
        Precision::Full => g.to_string(),
    };
    for r in rows {
        let e = &r.exact.response;
        t.push(vec![
            r.horizon.label().to_string(),
            r.cost_model.label().to_string(),
            prec.fmt(r.linear.d_oil_price * 100.0),
            prec.fmt(e.d_oil_price * 100.0),
            gap(r.gap_oil_price),
            prec.fmt(r.linear.d_profit_ru),
            prec.fmt(e.d_profit_ru),
            gap(r.gap_profit),
            prec.fmt(r.linear.d_fiscal_eu),
            prec.fmt(e.d_fiscal_eu),
            gap(r.gap_fiscal),
            r.exact.after.iterations.to_string(),
        ]);
    }
    t
}

type FitCell = dyn Fn(&OlsFit) -> String;

fn coefficient_cell(c: &Coefficient, prec: Precision) -> String {
    match prec {
        Precision::Display => format!(
            "{}{} ({})",
            format_sig(c.estimate, 3),
            c.stars.as_str(),
            format_sig(c.std_error, 3)
        ),
        Precision::Full => c.estimate.to_string(),
    }
}

pub fn regression_table(r: &UralsBrentReport, prec: Precision) -> Table {
    let fits: [&OlsFit; 4] = [
        &r.levels_pre,
        &r.differences_pre,
        &r.levels_post,
        &r.differences_post,
    ];
    let mut t = Table::new(
        "regression",
        &format!(
            "Brent on Urals, split at {} (levels) / {} (first differences)",
            r.split.levels, r.split.differences
        ),
        &[
            "",
            "(1) Brent price, pre",
            "(2) Brent FD, pre",
            "(3) Brent price, post",
            "(4) Brent FD, post",
        ],
    );
    let cells = |f: &dyn Fn(&OlsFit) -> String| fits.iter().map(|fit| f(fit)).collect::<Vec<_>>();
    let row = |label: &str, rest: Vec<String>| {
        let mut v = vec![label.to_string()];
        v.extend(rest);
        v
    };
    match prec {
        Precision::Display => {
            t.push(row(
                "Urals (levels or FD)",
                cells(&|f| coefficient_cell(&f.slope, prec)),
            ));
            t.push(row(
                "Constant",
                cells(&|f| coefficient_cell(&f.intercept, prec)),
            ));
            t.push(row("Observations", cells(&|f| f.n.to_string())));
            t.notes.push(
                "* p<0.1, ** p<0.05, *** p<0.001. Standard errors in parentheses.".to_string(),
            );
        }
        Precision::Full => {
            t.header[0] = "statistic".to_string();
            let stats: [(&str, &FitCell); 10] = [
                ("slope", &|f| f.slope.estimate.to_string()),
                ("slope_se", &|f| f.slope.std_error.to_string()),
                ("slope_t", &|f| f.slope.t_stat.to_string()),
                ("slope_p", &|f| f.slope.p_value.to_string()),
                ("intercept", &|f| f.intercept.estimate.to_string()),
                ("intercept_se", &|f| f.intercept.std_error.to_string()),
                ("intercept_t", &|f| f.intercept.t_stat.to_string()),
                ("intercept_p", &|f| f.intercept.p_value.to_string()),
                ("sse", &|f| f.sse.to_string()),
                ("n", &|f| f.n.to_string()),
            ];
            for (name, f) in stats {
                t.push(row(name, cells(f)));
            }
        }
    }
    t
}

pub fn context_table(c: &ContextReport, prec: Precision) -> Table {
    let mut t = Table::new(
        "context",
        &format!(
            "What {} MEUR of extra profit per day pays for",
            prec.fmt(c.profit_meur_per_day)
        ),
        &["Measure", "Value"],
    );
    let pct = |v: f64| match prec {
        Precision::Display => format!("{}%", display(v * 100.0)),
        Precision::Full => v.to_string(),
    };
    t.push(vec!["Share of daily GDP".into(), pct(c.gdp_share)]);
    t.push(vec![
        "Share of daily military spending".into(),
        pct(c.military_share),
    ]);
    t.push(vec![
        "Yearly contract-soldier salaries".into(),
        c.soldier_salaries.to_string(),
    ]);
    t.push(vec![
        "Yearly entry-level police salaries".into(),
        c.police_salaries.to_string(),
    ]);
    t.push(vec![
        "Yearly troll-farm salaries".into(),
        c.troll_salaries.to_string(),
    ]);
    t.push(vec![
        "Multiple-launch rocket systems".into(),
        c.mlrs_units.to_string(),
    ]);
    t.push(vec![
        "Main battle tank upgrades".into(),
        c.tank_upgrades.to_string(),
    ]);
    t
}
