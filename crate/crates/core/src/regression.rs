//! OLS of Brent on Urals prices, in levels and first differences, before and
//! after a break date.

use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceObservation {
    pub date: NaiveDate,
    /// USD/b
    pub brent: f64,
    /// USD/b
    pub urals: f64,
}

/// Daily prices with strictly increasing dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    observations: Vec<PriceObservation>,
}

impl PriceSeries {
    pub fn new(observations: Vec<PriceObservation>) -> Result<Self> {
        for (i, o) in observations.iter().enumerate() {
            if !o.brent.is_finite() || !o.urals.is_finite() {
                return Err(Error::Data(format!(
                    "row {}: non-finite price on {}",
                    i + 1,
                    o.date
                )));
            }
        }
        if let Some(w) = observations.windows(2).find(|w| w[1].date <= w[0].date) {
            return Err(Error::Data(format!(
                "dates must be strictly increasing: {} followed by {}",
                w[0].date, w[1].date
            )));
        }
        Ok(Self { observations })
    }

    /// Reads CSV with header `date,brent,urals` and ISO-8601 dates.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Data(e.to_string()))?
            .iter()
            .map(str::to_ascii_lowercase)
            .collect::<Vec<_>>();
        if headers != ["date", "brent", "urals"] {
            return Err(Error::Data(format!(
                "expected header `date,brent,urals`, found `{}`",
                headers.join(",")
            )));
        }
        let observations = rdr
            .deserialize::<PriceObservation>()
            .enumerate()
            .map(|(i, r)| r.map_err(|e| Error::Data(format!("row {}: {e}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(observations)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::from_csv(file)
    }

    pub fn observations(&self) -> &[PriceObservation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stars {
    #[serde(rename = "")]
    None,
    #[serde(rename = "*")]
    One,
    #[serde(rename = "**")]
    Two,
    #[serde(rename = "***")]
    Three,
}

impl Stars {
    /// `***` below 0.001, `**` below 0.05, `*` below 0.1.
    pub fn from_p(p: f64) -> Self {
        if p < 0.001 {
            Stars::Three
        } else if p < 0.05 {
            Stars::Two
        } else if p < 0.1 {
            Stars::One
        } else {
            Stars::None
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Stars::None => "",
            Stars::One => "*",
            Stars::Two => "**",
            Stars::Three => "***",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub estimate: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub stars: Stars,
}

impl Coefficient {
    fn new(estimate: f64, std_error: f64, df: f64) -> Self {
        let t_stat = estimate / std_error;
        let p_value = two_sided_p(t_stat, df);
        Self {
            estimate,
            std_error,
            t_stat,
            p_value,
            stars: Stars::from_p(p_value),
        }
    }
}

/// Simple regression `y = intercept + slope·x` with classical errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub slope: Coefficient,
    pub intercept: Coefficient,
    pub sse: f64,
    pub n: usize,
}

fn two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0)
}

pub fn fit_ols(xs: &[f64], ys: &[f64]) -> Result<OlsFit> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::SeriesTooShort { needed: 3, got: n });
    }
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        sxx += dx * dx;
        sxy += dx * (y - mean_y);
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateRegressor);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let df = nf - 2.0;
    let s2 = sse / df;
    let se_slope = (s2 / sxx).sqrt();
    let se_intercept = (s2 * (1.0 / nf + mean_x * mean_x / sxx)).sqrt();
    Ok(OlsFit {
        slope: Coefficient::new(slope, se_slope, df),
        intercept: Coefficient::new(intercept, se_intercept, df),
        sse,
        n,
    })
}

/// `s[i+1] - s[i]`.
pub fn first_differences(s: &[f64]) -> Result<Vec<f64>> {
    if s.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: s.len(),
        });
    }
    Ok(s.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Break dates for the two regressions. Observations dated before a split
/// belong to the pre window. A first difference belongs to a window only
/// when both of its observations do, so no difference straddles the break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDates {
    pub levels: NaiveDate,
    pub differences: NaiveDate,
}

impl SplitDates {
    pub fn same(date: NaiveDate) -> Self {
        Self {
            levels: date,
            differences: date,
        }
    }
}

impl Default for SplitDates {
    fn default() -> Self {
        Self::same(NaiveDate::from_ymd_opt(2022, 2, 24).expect("valid date"))
    }
}

/// Four regressions of Brent on Urals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UralsBrentReport {
    pub split: SplitDates,
    pub levels_pre: OlsFit,
    pub differences_pre: OlsFit,
    pub levels_post: OlsFit,
    pub differences_post: OlsFit,
}

fn window_fit(name: &str, points: Vec<(f64, f64)>) -> Result<OlsFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientWindow {
            window: name.to_string(),
            got: points.len(),
            needed: 3,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    fit_ols(&xs, &ys)
}

pub fn urals_brent_analysis(data: &PriceSeries, split: SplitDates) -> Result<UralsBrentReport> {
    let obs = data.observations();
    let levels = |pre: bool| {
        obs.iter()
            .filter(|o| (o.date < split.levels) == pre)
            .map(|o| (o.urals, o.brent))
            .collect::<Vec<_>>()
    };
    let diffs = |pre: bool| {
        obs.windows(2)
            .filter(|w| {
                (w[0].date < split.differences) == pre && (w[1].date < split.differences) == pre
            })
            .map(|w| (w[1].urals - w[0].urals, w[1].brent - w[0].brent))
            .collect::<Vec<_>>()
    };
    Ok(UralsBrentReport {
        split,
        levels_pre: window_fit("pre-break levels", levels(true))?,
        differences_pre: window_fit("pre-break first-difference", diffs(true))?,
        levels_post: window_fit("post-break levels", levels(false))?,
        differences_post: window_fit("post-break first-difference", diffs(false))?,
    })
}
