//! Python bindings. Results cross the boundary as plain dicts and lists.

use fueltax_core::cli::{apply_overrides, oracle_comparisons, PolicyArg, PolicyArgs};
use fueltax_core::equilibrium::calibrate;
use fueltax_core::model::{self, CostModel, ModelParams, PolicyShock};
use fueltax_core::report::results_tables;
use fueltax_core::scenarios::{self, Horizon};
use fueltax_core::{regression, sensitivity, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

fn to_py(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn json_to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let json = PyModule::import(py, "json")?;
    Ok(json.call_method1("loads", (text,))?.unbind())
}

fn parse_horizon(s: &str) -> PyResult<Horizon> {
    s.parse().map_err(to_py)
}

fn parse_cost_model(s: &str) -> PyResult<CostModel> {
    match s {
        "additive" => Ok(CostModel::Additive),
        "proportional" => Ok(CostModel::Proportional),
        _ => Err(PyValueError::new_err(format!("unknown cost model `{s}`"))),
    }
}

/// A parameter set with the linearized and exact models attached.
#[pyclass(module = "fueltax", from_py_object)]
#[derive(Clone)]
pub struct Model {
    params: ModelParams,
}

#[pymethods]
impl Model {
    /// Baseline for `horizon`, with keyword overrides by symbol name.
    #[new]
    #[pyo3(signature = (horizon = "sr", cost_model = "additive", **overrides))]
    fn new(
        horizon: &str,
        cost_model: &str,
        overrides: Option<&Bound<'_, PyDict>>,
    ) -> PyResult<Self> {
        let base = scenarios::baseline(parse_horizon(horizon)?, parse_cost_model(cost_model)?);
        let mut sets = Vec::new();
        if let Some(kw) = overrides {
            let json = PyModule::import(kw.py(), "json")?;
            for (k, v) in kw.iter() {
                let v: String = json.call_method1("dumps", (v,))?.extract()?;
                sets.push(format!("{k}={v}"));
            }
        }
        let params = apply_overrides(base, &sets).map_err(|e| PyValueError::new_err(e.message))?;
        Ok(Self { params })
    }

    /// Builds a model from a dict in the parameter-file layout.
    #[staticmethod]
    fn from_dict(py: Python<'_>, d: &Bound<'_, PyDict>) -> PyResult<Self> {
        let json = PyModule::import(py, "json")?;
        let text: String = json.call_method1("dumps", (d,))?.extract()?;
        let params: ModelParams =
            serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        params.validate().map_err(to_py)?;
        Ok(Self { params })
    }

    fn params(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        json_to_py(py, &self.params)
    }

    #[getter]
    fn horizon(&self) -> &'static str {
        self.params.horizon.tag()
    }

    #[getter]
    fn cost_model(&self) -> &'static str {
        self.params.cost_model.label()
    }

    #[pyo3(signature = (cut_cents = 20.0))]
    fn tax_cut(&self, py: Python<'_>, cut_cents: f64) -> PyResult<Py<PyAny>> {
        json_to_py(
            py,
            &model::evaluate_tax_cut(&self.params, cut_cents).map_err(to_py)?,
        )
    }

    fn transfer(&self, py: Python<'_>, amount: f64) -> PyResult<Py<PyAny>> {
        json_to_py(
            py,
            &model::evaluate_transfer(&self.params, amount).map_err(to_py)?,
        )
    }

    /// Daily transfer with the same fiscal cost as a cut of `cut_cents`.
    #[pyo3(signature = (cut_cents = 20.0))]
    fn equivalent_transfer(&self, cut_cents: f64) -> PyResult<f64> {
        let cut = model::evaluate_tax_cut(&self.params, cut_cents).map_err(to_py)?;
        Ok(model::fiscal_equivalent_transfer(&cut))
    }

    /// Clearing oil price of the isoelastic market at duty `tau`.
    #[pyo3(signature = (tau, income = None, v_row = 0.0))]
    fn solve_price(
        &self,
        py: Python<'_>,
        tau: f64,
        income: Option<f64>,
        v_row: f64,
    ) -> PyResult<Py<PyAny>> {
        let market = calibrate(&self.params, v_row).map_err(to_py)?;
        json_to_py(py, &market.solve_price(tau, income).map_err(to_py)?)
    }

    /// Linear and exact effects of a tax cut or, with `transfer`, a transfer.
    #[pyo3(signature = (cut_cents = 20.0, transfer = None, v_row = 0.0))]
    fn oracle(
        &self,
        py: Python<'_>,
        cut_cents: f64,
        transfer: Option<f64>,
        v_row: f64,
    ) -> PyResult<Py<PyAny>> {
        let policy = PolicyArgs {
            policy: if transfer.is_some() {
                PolicyArg::Transfer
            } else {
                PolicyArg::TaxCut
            },
            cut_cents: Some(cut_cents),
            transfer,
        };
        let rows = oracle_comparisons(&[self.params], &policy, v_row).map_err(|e| {
            if e.code == fueltax_core::cli::EXIT_USAGE {
                PyValueError::new_err(e.message)
            } else {
                PyRuntimeError::new_err(e.message)
            }
        })?;
        json_to_py(py, &rows[0])
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(horizon='{}', cost_model='{}')",
            self.horizon(),
            self.cost_model()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (horizon = "sr", cost_model = "additive"))]
fn baseline(py: Python<'_>, horizon: &str, cost_model: &str) -> PyResult<Py<PyAny>> {
    json_to_py(
        py,
        &scenarios::baseline(parse_horizon(horizon)?, parse_cost_model(cost_model)?),
    )
}

#[pyfunction]
#[pyo3(signature = (horizon = "sr", cost_model = "additive"))]
fn policy_pair(py: Python<'_>, horizon: &str, cost_model: &str) -> PyResult<Py<PyAny>> {
    let pair = sensitivity::policy_pair(parse_horizon(horizon)?, parse_cost_model(cost_model)?)
        .map_err(to_py)?;
    json_to_py(py, &pair)
}

#[pyfunction]
#[pyo3(signature = (horizon = "sr", cost_model = "additive", cut_cents = 20.0, transfer = None))]
fn sweep(
    py: Python<'_>,
    horizon: &str,
    cost_model: &str,
    cut_cents: f64,
    transfer: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let shock = match transfer {
        Some(t) => PolicyShock::transfer(t),
        None => PolicyShock::consumer_tax_cut(cut_cents, 0.2),
    };
    let s = sensitivity::sweep(
        parse_horizon(horizon)?,
        &shock,
        parse_cost_model(cost_model)?,
    )
    .map_err(to_py)?;
    json_to_py(py, &s)
}

#[pyfunction]
fn tables(py: Python<'_>) -> PyResult<Py<PyAny>> {
    json_to_py(py, &results_tables().map_err(to_py)?)
}

#[pyfunction]
fn fit_ols(py: Python<'_>, xs: Vec<f64>, ys: Vec<f64>) -> PyResult<Py<PyAny>> {
    json_to_py(py, &regression::fit_ols(&xs, &ys).map_err(to_py)?)
}

#[pyfunction]
fn context_report(py: Python<'_>, profit: f64) -> PyResult<Py<PyAny>> {
    json_to_py(py, &scenarios::context_report(profit).map_err(to_py)?)
}

#[pymodule]
fn fueltax(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(baseline, m)?)?;
    m.add_function(wrap_pyfunction!(policy_pair, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(tables, m)?)?;
    m.add_function(wrap_pyfunction!(fit_ols, m)?)?;
    m.add_function(wrap_pyfunction!(context_report, m)?)?;
    Ok(())
}
