//! Numerical core: logistic regression with Wald diagnostics, RBF support
//! vector machine, Platt scaling, cross-validation, grid search and the
//! paired t-test.
//!
//! Labels are booleans with `true` meaning female (coded 1).

mod cv;
mod logistic;
mod platt;
mod svm;
mod ttest;

pub use cv::{
    cross_validate, grid_search, stratified_folds, CvResult, GridPoint, GridResult, ModelSpec,
};
pub use logistic::{
    diagnostics, fit_logistic, Diagnostics, LogisticModel, DEFAULT_MAX_ITER, DEFAULT_TOL,
    VIF_SENTINEL,
};
pub use platt::{fit_platt, Platt};
pub use svm::{
    fit_svm_rbf, fit_svm_rbf_calibrated, rbf_kernel, solve_smo, SmoSolution, SvmModel,
    DEFAULT_SVM_TOL,
};
pub use ttest::{paired_ttest, TTest, T_SENTINEL};

use crate::error::{Error, Result};

/// Design matrix (one row per observation, no intercept column) and
/// binary outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    x: Vec<Vec<f64>>,
    y: Vec<bool>,
    p: usize,
}

impl Sample {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<bool>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "{} feature rows but {} labels",
                x.len(),
                y.len()
            )));
        }
        let p = x.first().map_or(0, Vec::len);
        for (i, row) in x.iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} features, expected {p}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("row {i} has a non-finite feature")));
            }
        }
        Ok(Sample { x, y, p })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn labels(&self) -> &[bool] {
        &self.y
    }

    pub fn n_positive(&self) -> usize {
        self.y.iter().filter(|&&v| v).count()
    }

    pub fn subset(&self, idx: &[usize]) -> Sample {
        Sample {
            x: idx.iter().map(|&i| self.x[i].clone()).collect(),
            y: idx.iter().map(|&i| self.y[i]).collect(),
            p: self.p,
        }
    }

    pub(crate) fn require_both_classes(&self) -> Result<()> {
        let pos = self.n_positive();
        if pos == 0 {
            Err(Error::SingleClass("male"))
        } else if pos == self.len() {
            Err(Error::SingleClass("female"))
        } else {
            Ok(())
        }
    }
}

/// Column-wise affine map onto `[0, 1]` fitted on training rows. Constant
/// columns map to 0.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let p = rows.first().map_or(0, Vec::len);
        let mut min = vec![f64::INFINITY; p];
        let mut max = vec![f64::NEG_INFINITY; p];
        for row in rows {
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        for j in 0..p {
            if !min[j].is_finite() {
                min[j] = 0.0;
                max[j] = 0.0;
            }
        }
        MinMaxScaler { min, max }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let range = self.max[j] - self.min[j];
                if range > 0.0 {
                    (v - self.min[j]) / range
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Column-wise z-score standardization. Constant columns are centred only.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StandardScaler {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl StandardScaler {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let p = rows.first().map_or(0, Vec::len);
        let n = rows.len() as f64;
        let mut mean = vec![0.0; p];
        for row in rows {
            for (j, &v) in row.iter().enumerate() {
                mean[j] += v / n;
            }
        }
        let mut sd = vec![0.0; p];
        for row in rows {
            for (j, &v) in row.iter().enumerate() {
                sd[j] += (v - mean[j]).powi(2);
            }
        }
        for s in &mut sd {
            *s = if n > 1.0 { (*s / (n - 1.0)).sqrt() } else { 0.0 };
        }
        StandardScaler { mean, sd }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let c = v - self.mean[j];
                if self.sd[j] > 0.0 {
                    c / self.sd[j]
                } else {
                    c
                }
            })
            .collect()
    }
}
