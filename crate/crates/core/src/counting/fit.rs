use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::CountReport;
use crate::error::{domain, Error, Result};

/// Which model and which samples a fit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `log N = a log B + b log log B + c` over samples with `B >= e^2`.
    LogPower,
    /// As `LogPower`, restricted to samples with `B >= B_max / 10`.
    LogPowerTopDecade,
    /// `log N = a log B + c` over samples with `B >= e^2`; `b` is
    /// reported as 0.
    PowerLaw,
}

impl FitModel {
    fn min_samples(self) -> usize {
        match self {
            FitModel::LogPower | FitModel::LogPowerTopDecade => 4,
            FitModel::PowerLaw => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub model: FitModel,
    pub samples_used: usize,
}

/// Least-squares fit of `log N` against `log B` (and `log log B`).
pub fn fit_samples(samples: &[(f64, f64)], model: FitModel) -> Result<Fit> {
    if samples.iter().any(|&(b, n)| !(b > 0.0) || !n.is_finite()) {
        return domain("samples need positive bounds and finite counts");
    }
    let top = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let e2 = std::f64::consts::E.powi(2);
    let used: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(b, n)| {
            n >= 1.0 && b >= e2 && (model != FitModel::LogPowerTopDecade || b >= top / 10.0)
        })
        .collect();
    let need = model.min_samples();
    if used.len() < need {
        return Err(Error::InsufficientSamples { need, have: used.len() });
    }
    let cols = if model == FitModel::PowerLaw { 2 } else { 3 };
    let x = DMatrix::from_fn(used.len(), cols, |i, j| {
        let lb = used[i].0.ln();
        match (j, cols) {
            (0, _) => lb,
            (1, 3) => lb.ln(),
            _ => 1.0,
        }
    });
    let y = DVector::from_iterator(used.len(), used.iter().map(|s| s.1.ln()));
    let coef = x
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::Domain(format!("least squares failed: {e}")))?;
    let (a, b, c) = if cols == 3 { (coef[0], coef[1], coef[2]) } else { (coef[0], 0.0, coef[1]) };
    Ok(Fit { a, b, c, model, samples_used: used.len() })
}

/// Fit the samples of a report.
pub fn fit_exponents(report: &CountReport, model: FitModel) -> Result<Fit> {
    let samples: Vec<(f64, f64)> = report.samples.iter().map(|s| (s.bound, s.count as f64)).collect();
    fit_samples(&samples, model)
}
