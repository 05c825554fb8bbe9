//! Command-line front end. Exit codes: 0 success, 2 usage or validation
//! error, 3 computational failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::equilibrium::calibrate;
use crate::error::Error;
use crate::model::{
    evaluate, evaluate_tax_cut, fiscal_equivalent_transfer, CostModel, ModelParams, PolicyResponse,
    PolicyShock,
};
use crate::regression::{urals_brent_analysis, PriceSeries, SplitDates};
use crate::report::{
    context_table, oracle_table, regression_table, response_table, results_tables,
    sweep_grid_table, sweep_summary_table, OracleComparison, Precision, Table,
};
use crate::scenarios::{baseline, context_report, Horizon};
use crate::sensitivity::{sweep, STANDARD_CUT_CENTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn compute(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_COMPUTE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Self::usage(e.to_string())
        } else {
            Self::compute(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "fueltax",
    version,
    about = "Oil-market effects of EU fuel-tax cuts and cash transfers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one policy with the linearized model.
    Run(RunArgs),
    /// Reproduce the full set of results tables.
    Tables(OutputArgs),
    /// Sweep the 32 corners of the sensitivity bounds.
    Sweep(SweepArgs),
    /// Compare the linearized model with the exact isoelastic equilibrium.
    Oracle(OracleArgs),
    /// Regress Brent on Urals before and after a break date.
    Regress(RegressArgs),
    /// Put a daily profit figure in context.
    Context(ContextArgs),
    /// Print a parameter file for a horizon.
    Params(ParamsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HorizonArg {
    Vsr,
    Sr,
    Lr,
}

impl From<HorizonArg> for Horizon {
    fn from(h: HorizonArg) -> Self {
        match h {
            HorizonArg::Vsr => Horizon::VeryShortRun,
            HorizonArg::Sr => Horizon::ShortRun,
            HorizonArg::Lr => Horizon::LongRun,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostModelArg {
    Additive,
    Proportional,
}

impl From<CostModelArg> for CostModel {
    fn from(c: CostModelArg) -> Self {
        match c {
            CostModelArg::Additive => CostModel::Additive,
            CostModelArg::Proportional => CostModel::Proportional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum PolicyArg {
    #[default]
    TaxCut,
    Transfer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Horizon; all three when omitted.
    #[arg(long, value_enum, conflicts_with = "params")]
    pub horizon: Option<HorizonArg>,
    #[arg(long, value_enum, conflicts_with = "params")]
    pub cost_model: Option<CostModelArg>,
    /// JSON parameter file keyed by symbol name.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Override one parameter, e.g. `--set eps_d_eu=-0.3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    #[arg(long, value_enum, default_value = "tax-cut")]
    pub policy: PolicyArg,
    /// Pump-price cut in EUR cents per liter, VAT included.
    #[arg(long, value_name = "CENTS")]
    pub cut_cents: Option<f64>,
    /// Transfer in MEUR per day. Defaults to the fiscal cost of the tax cut.
    #[arg(long, value_name = "MEUR_PER_DAY")]
    pub transfer: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Write one file per table into this directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub horizon: Option<HorizonArg>,
    #[arg(long, value_enum, default_value = "additive")]
    pub cost_model: CostModelArg,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// VAT rate on non-EU fuel. Exact results do not depend on it.
    #[arg(long, default_value_t = 0.0)]
    pub v_row: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RegressArgs {
    /// CSV with header `date,brent,urals`.
    pub data: PathBuf,
    /// Break date for the level regressions.
    #[arg(long, value_name = "YYYY-MM-DD")]
    pub split: Option<NaiveDate>,
    /// Break date for the first-difference regressions; defaults to `--split`.
    #[arg(long, value_name = "YYYY-MM-DD")]
    pub fd_split: Option<NaiveDate>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ContextArgs {
    /// Extra profit in MEUR per day.
    #[arg(long, num_args = 1.., default_values_t = [11.0, 39.0])]
    pub profit: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ParamsArgs {
    #[arg(long, value_enum, default_value = "sr")]
    pub horizon: HorizonArg,
    #[arg(long, value_enum, default_value = "additive")]
    pub cost_model: CostModelArg,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub write: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and prints the
/// result. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Runs a parsed command and returns what it would print.
pub fn execute(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Run(a) => run(a),
        Command::Tables(o) => {
            let t = results_tables()?;
            emit(
                &t.tables(Precision::Display),
                &t.tables(Precision::Full),
                &t,
                "tables",
                o,
            )
        }
        Command::Sweep(a) => run_sweep(a),
        Command::Oracle(a) => oracle(a),
        Command::Regress(a) => regress(a),
        Command::Context(a) => context(a),
        Command::Params(a) => export_params(a),
    }
}

/// Loads a parameter file. Horizon and cost model come from the file.
pub fn load_params(path: &Path) -> CliResult<ModelParams> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let p: ModelParams = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid parameter file {}: {e}", path.display())))?;
    p.validate()?;
    Ok(p)
}

/// Applies `key=value` overrides. Values are read as JSON, falling back to
/// a bare string, so `horizon=lr` and `income_eu=null` both work.
pub fn apply_overrides(params: ModelParams, overrides: &[String]) -> CliResult<ModelParams> {
    if overrides.is_empty() {
        return Ok(params);
    }
    let mut value = serde_json::to_value(params).expect("parameters serialize");
    let map = value.as_object_mut().expect("parameters are an object");
    for o in overrides {
        let (key, raw) = o
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("override `{o}` is not KEY=VALUE")))?;
        let key = key.trim();
        if !map.contains_key(key) {
            return Err(CliError::usage(format!("unknown parameter `{key}`")));
        }
        let v = serde_json::from_str(raw.trim())
            .unwrap_or_else(|_| Value::String(raw.trim().to_string()));
        map.insert(key.to_string(), v);
    }
    let p: ModelParams = serde_json::from_value(value)
        .map_err(|e| CliError::usage(format!("invalid override: {e}")))?;
    p.validate()?;
    Ok(p)
}

/// Parameter sets selected by the model flags.
pub fn resolve_params(m: &ModelArgs) -> CliResult<Vec<ModelParams>> {
    let bases = match &m.params {
        Some(path) => vec![load_params(path)?],
        None => {
            let cm = m.cost_model.map(CostModel::from).unwrap_or_default();
            let horizons = match m.horizon {
                Some(h) => vec![Horizon::from(h)],
                None => Horizon::ALL.to_vec(),
            };
            horizons.into_iter().map(|h| baseline(h, cm)).collect()
        }
    };
    bases
        .into_iter()
        .map(|p| apply_overrides(p, &m.overrides))
        .collect()
}

/// Policy for one parameter set. A transfer without an amount matches the
/// fiscal cost of the tax cut under the same parameters.
pub fn resolve_policy(
    a: &PolicyArgs,
    params: &ModelParams,
) -> CliResult<(PolicyShock, Option<f64>)> {
    let cents = a.cut_cents.unwrap_or(STANDARD_CUT_CENTS);
    if !cents.is_finite() || cents < 0.0 {
        return Err(CliError::usage("--cut-cents must be a non-negative number"));
    }
    match a.policy {
        PolicyArg::TaxCut => {
            if a.transfer.is_some() {
                return Err(CliError::usage("--transfer needs --policy transfer"));
            }
            Ok((PolicyShock::consumer_tax_cut(cents, params.v_eu), None))
        }
        PolicyArg::Transfer => {
            let amount = match a.transfer {
                Some(t) if !t.is_finite() || t < 0.0 => {
                    return Err(CliError::usage("--transfer must be a non-negative number"))
                }
                Some(t) => t,
                None => fiscal_equivalent_transfer(&evaluate_tax_cut(params, cents)?),
            };
            Ok((PolicyShock::transfer(amount), Some(amount)))
        }
    }
}

fn describe(shock: &PolicyShock) -> String {
    match shock {
        PolicyShock::DutyChange { delta_tau } => {
            format!("duty change of {:.4} EUR/l", delta_tau)
        }
        PolicyShock::IncomeChange { delta_income } => {
            format!("cash transfer of {delta_income} MEUR/day")
        }
    }
}

#[derive(Debug, Serialize)]
struct RunRecord {
    params: ModelParams,
    policy: PolicyShock,
    response: PolicyResponse,
}

fn run(a: &RunArgs) -> CliResult<String> {
    let mut records = Vec::new();
    for p in resolve_params(&a.model)? {
        let (shock, _) = resolve_policy(&a.policy, &p)?;
        let response = evaluate(&p, &shock)?;
        records.push(RunRecord {
            params: p,
            policy: shock,
            response,
        });
    }
    let title = {
        let first = &records[0];
        let what = match a.policy.policy {
            PolicyArg::TaxCut => format!(
                "Tax cut of {} cents/liter ({})",
                a.policy.cut_cents.unwrap_or(STANDARD_CUT_CENTS),
                describe(&first.policy)
            ),
            PolicyArg::Transfer => "Cash transfer".to_string(),
        };
        format!("{what}, {} costs", first.params.cost_model.label())
    };
    let rows = |with_amount: bool| {
        records
            .iter()
            .map(|r| {
                let mut label = r.params.horizon.label().to_string();
                if let (true, PolicyShock::IncomeChange { delta_income }) = (with_amount, r.policy)
                {
                    label.push_str(&format!(" ({delta_income} MEUR/day)"));
                }
                (label, r.response)
            })
            .collect::<Vec<_>>()
    };
    let text = vec![response_table(
        "run",
        &title,
        &rows(true),
        Precision::Display,
    )];
    let mut csv = response_table("run", &title, &rows(false), Precision::Full);
    csv.header.insert(1, "Policy input".to_string());
    for (row, r) in csv.rows.iter_mut().zip(&records) {
        let input = match r.policy {
            PolicyShock::DutyChange { delta_tau } => delta_tau,
            PolicyShock::IncomeChange { delta_income } => delta_income,
        };
        row.insert(1, input.to_string());
    }
    emit(&text, &[csv], &records, "run", &a.output)
}

fn run_sweep(a: &SweepArgs) -> CliResult<String> {
    let cm = CostModel::from(a.cost_model);
    let horizons = match a.horizon {
        Some(h) => vec![Horizon::from(h)],
        None => Horizon::ALL.to_vec(),
    };
    let mut summaries = Vec::new();
    for h in horizons {
        let (shock, _) = resolve_policy(&a.policy, &baseline(h, cm))?;
        summaries.push(sweep(h, &shock, cm)?);
    }
    let tables = |prec| {
        let mut out = Vec::new();
        for s in &summaries {
            let mut summary = sweep_summary_table(s, prec);
            summary.id = format!("sweep_summary_{}", s.horizon.tag());
            let mut grid = sweep_grid_table(s, prec);
            grid.id = format!("sweep_grid_{}", s.horizon.tag());
            out.push(summary);
            out.push(grid);
        }
        out
    };
    emit(
        &tables(Precision::Display),
        &tables(Precision::Full),
        &summaries,
        "sweep",
        &a.output,
    )
}

/// Linear and exact effects for each selected parameter set. The exact
/// side is solved first so that a failed bracket surfaces as an error.
pub fn oracle_comparisons(
    params: &[ModelParams],
    policy: &PolicyArgs,
    v_row: f64,
) -> CliResult<Vec<OracleComparison>> {
    params
        .iter()
        .map(|p| {
            let market = calibrate(p, v_row)?;
            let linear_params = market.linear_params();
            let (shock, _) = resolve_policy(policy, &linear_params)?;
            let exact = market.exact_policy_effects(&shock)?;
            let linear = evaluate(&linear_params, &shock)?;
            Ok(OracleComparison::new(
                p.horizon,
                p.cost_model,
                linear,
                exact,
            ))
        })
        .collect()
}

fn oracle(a: &OracleArgs) -> CliResult<String> {
    let rows = oracle_comparisons(&resolve_params(&a.model)?, &a.policy, a.v_row)?;
    emit(
        &[oracle_table(&rows, Precision::Display)],
        &[oracle_table(&rows, Precision::Full)],
        &rows,
        "oracle",
        &a.output,
    )
}

fn regress(a: &RegressArgs) -> CliResult<String> {
    let series = PriceSeries::from_path(&a.data)?;
    let mut split = SplitDates::default();
    if let Some(d) = a.split {
        split = SplitDates::same(d);
    }
    if let Some(d) = a.fd_split {
        split.differences = d;
    }
    let report = urals_brent_analysis(&series, split)?;
    emit(
        &[regression_table(&report, Precision::Display)],
        &[regression_table(&report, Precision::Full)],
        &report,
        "regression",
        &a.output,
    )
}

fn context(a: &ContextArgs) -> CliResult<String> {
    let reports = a
        .profit
        .iter()
        .map(|&p| context_report(p))
        .collect::<Result<Vec<_>, _>>()?;
    let tables = |prec| {
        reports
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut t = context_table(r, prec);
                if reports.len() > 1 {
                    t.id = format!("context_{}", i + 1);
                }
                t
            })
            .collect::<Vec<Table>>()
    };
    emit(
        &tables(Precision::Display),
        &tables(Precision::Full),
        &reports,
        "context",
        &a.output,
    )
}

fn export_params(a: &ParamsArgs) -> CliResult<String> {
    let p = baseline(a.horizon.into(), a.cost_model.into());
    let p = apply_overrides(p, &a.overrides)?;
    let json = serde_json::to_string_pretty(&p).expect("parameters serialize") + "\n";
    match &a.write {
        Some(path) => {
            write_file(path, &json)?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(json),
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::compute(format!("cannot write {}: {e}", path.display())))
}

/// Renders in the requested format. With `--out`, each table goes to its
/// own file (JSON to one file named after `name`) and the file list is
/// returned.
fn emit<T: Serialize>(
    display: &[Table],
    full: &[Table],
    data: &T,
    name: &str,
    o: &OutputArgs,
) -> CliResult<String> {
    let json = || serde_json::to_string_pretty(data).expect("results serialize") + "\n";
    match &o.out {
        None => Ok(match o.format {
            Format::Table => display
                .iter()
                .map(Table::render_text)
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Json => json(),
            Format::Csv => {
                let parts = full
                    .iter()
                    .map(|t| t.render_csv())
                    .collect::<Result<Vec<_>, _>>()?;
                if parts.len() == 1 {
                    parts.into_iter().next().unwrap_or_default()
                } else {
                    full.iter()
                        .zip(parts)
                        .map(|(t, csv)| format!("# {}\n{csv}", t.id))
                        .collect::<Vec<_>>()
                        .join("\n")
                }
            }
        }),
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::compute(format!("cannot create {}: {e}", dir.display())))?;
            let mut written = Vec::new();
            match o.format {
                Format::Json => {
                    let path = dir.join(format!("{name}.json"));
                    write_file(&path, &json())?;
                    written.push(path);
                }
                Format::Csv => {
                    for t in full {
                        let path = dir.join(format!("{}.csv", t.id));
                        write_file(&path, &t.render_csv()?)?;
                        written.push(path);
                    }
                }
                Format::Table => {
                    for t in display {
                        let path = dir.join(format!("{}.txt", t.id));
                        write_file(&path, &t.render_text())?;
                        written.push(path);
                    }
                }
            }
            Ok(written
                .iter()
                .map(|p| format!("wrote {}\n", p.display()))
                .collect())
        }
    }
}
