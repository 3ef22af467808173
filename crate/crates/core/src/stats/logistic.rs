use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::Sample;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100;
/// Reported in place of an infinite variance inflation factor.
pub const VIF_SENTINEL: f64 = 1e12;

/// Linear predictor magnitude beyond which a correctly classified point is
/// taken as evidence of (quasi-)complete separation.
const SEPARATION_ETA: f64 = 30.0;

/// Binary logistic regression fitted with an intercept. `beta[0]` is the
/// intercept, `beta[j + 1]` belongs to feature `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub beta: Vec<f64>,
    pub converged: bool,
    pub n_iter: usize,
    /// Set when fitted probabilities reached 0 or 1 on correctly classified
    /// points; the maximum likelihood estimate does not exist.
    pub separation: bool,
    pub log_likelihood: f64,
    /// Max-norm of the score vector at `beta`.
    pub gradient_norm: f64,
}

impl LogisticModel {
    pub fn linear_predictor(&self, row: &[f64]) -> f64 {
        self.beta[0] + row.iter().zip(&self.beta[1..]).map(|(x, b)| x * b).sum::<f64>()
    }

    /// Fitted probability of the positive (female) class.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        sigmoid(self.linear_predictor(row))
    }

    pub fn predict(&self, row: &[f64]) -> bool {
        self.predict_proba(row) >= 0.5
    }
}

pub(crate) fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

fn design(s: &Sample) -> DMatrix<f64> {
    let (n, p) = (s.len(), s.n_features());
    DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { s.rows()[i][j - 1] })
}

fn targets(s: &Sample) -> DVector<f64> {
    DVector::from_iterator(s.len(), s.labels().iter().map(|&b| if b { 1.0 } else { 0.0 }))
}

fn log_likelihood(eta: &DVector<f64>, y: &DVector<f64>) -> f64 {
    eta.iter().zip(y.iter()).map(|(&e, &t)| t * e - softplus(e)).sum()
}

/// Greedy rank check of the design. Returns the columns (0 = intercept)
/// involved in the first exact linear dependency found.
fn collinear_columns(gram: &DMatrix<f64>) -> Option<Vec<usize>> {
    let k = gram.nrows();
    let mut kept: Vec<usize> = Vec::new();
    for j in 0..k {
        let gjj = gram[(j, j)];
        if gjj <= 0.0 {
            return Some(vec![j]);
        }
        if kept.is_empty() {
            kept.push(j);
            continue;
        }
        let gkk = DMatrix::from_fn(kept.len(), kept.len(), |a, b| gram[(kept[a], kept[b])]);
        let gkj = DVector::from_fn(kept.len(), |a, _| gram[(kept[a], j)]);
        let Some(chol) = gkk.cholesky() else {
            return Some(kept.clone());
        };
        let c = chol.solve(&gkj);
        let rss = gjj - gkj.dot(&c);
        if rss <= 1e-9 * gjj {
            let scale = c.amax().max(1.0);
            let mut cols: Vec<usize> = kept
                .iter()
                .zip(c.iter())
                .filter(|(_, &v)| v.abs() > 1e-8 * scale)
                .map(|(&col, _)| col)
                .collect();
            cols.push(j);
            return Some(cols);
        }
        kept.push(j);
    }
    None
}

/// Maximum likelihood fit by iteratively reweighted least squares with
/// step-halving.
///
/// Convergence means the max-norm of the score vector `X'(y - p)` is at
/// most `tol`. Separated data return `converged = false` with
/// `separation = true`; an exactly collinear design is an error naming the
/// dependent columns (0 = intercept, `j + 1` = feature `j`).
pub fn fit_logistic(s: &Sample, tol: f64, max_iter: usize) -> Result<LogisticModel> {
    if s.len() < 2 {
        return Err(Error::InvalidInput("logistic regression needs at least 2 rows".into()));
    }
    s.require_both_classes()?;
    let x = design(s);
    let y = targets(s);
    let gram = x.transpose() * &x;
    if let Some(columns) = collinear_columns(&gram) {
        return Err(Error::Singular { columns });
    }

    let k = x.ncols();
    let ybar = y.mean();
    let mut beta = DVector::zeros(k);
    beta[0] = (ybar / (1.0 - ybar)).ln();
    let mut eta = &x * &beta;
    let mut ll = log_likelihood(&eta, &y);
    let mut n_iter = 0;
    let mut stalled = false;

    let gradient = |eta: &DVector<f64>| -> DVector<f64> {
        let resid = DVector::from_iterator(y.len(), eta.iter().zip(y.iter()).map(|(&e, &t)| t - sigmoid(e)));
        x.tr_mul(&resid)
    };

    while n_iter < max_iter {
        let grad = gradient(&eta);
        if grad.amax() <= tol {
            break;
        }
        n_iter += 1;
        let w: Vec<f64> = eta.iter().map(|&e| {
            let p = sigmoid(e);
            p * (1.0 - p)
        }).collect();
        let mut xw = x.clone();
        for (i, mut row) in xw.row_iter_mut().enumerate() {
            row *= w[i];
        }
        let info = x.tr_mul(&xw);
        let Some(chol) = info.cholesky() else {
            stalled = true;
            break;
        };
        let delta = chol.solve(&grad);
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = &beta + &delta * step;
            let cand_eta = &x * &cand;
            let cand_ll = log_likelihood(&cand_eta, &y);
            if cand_ll.is_finite() && cand_ll >= ll - 1e-12 * ll.abs() {
                beta = cand;
                eta = cand_eta;
                ll = cand_ll;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            stalled = true;
            break;
        }
    }

    let gradient_norm = gradient(&eta).amax();
    let separation = eta
        .iter()
        .zip(y.iter())
        .any(|(&e, &t)| e.abs() > SEPARATION_ETA && (e > 0.0) == (t > 0.5));
    let converged = gradient_norm <= tol && !separation && !stalled;
    Ok(LogisticModel {
        beta: beta.iter().copied().collect(),
        converged,
        n_iter,
        separation,
        log_likelihood: ll,
        gradient_norm,
    })
}

/// Inferential statistics of a converged logistic fit. Index 0 of every
/// per-coefficient vector is the intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n: usize,
    pub se: Vec<f64>,
    pub wald_chi2: Vec<f64>,
    pub df: Vec<u32>,
    pub p_values: Vec<f64>,
    pub odds_ratios: Vec<f64>,
    pub log_likelihood: f64,
    pub null_log_likelihood: f64,
    pub nagelkerke_r2: f64,
    /// One entry per feature (no intercept). Infinite values are replaced
    /// by [`VIF_SENTINEL`] and flagged in `vif_infinite`.
    pub vif: Vec<f64>,
    pub vif_infinite: Vec<bool>,
}

pub fn diagnostics(m: &LogisticModel, s: &Sample) -> Result<Diagnostics> {
    if !m.converged {
        return Err(Error::NotConverged);
    }
    if m.beta.len() != s.n_features() + 1 {
        return Err(Error::InvalidInput(format!(
            "model has {} coefficients, sample has {} features",
            m.beta.len(),
            s.n_features()
        )));
    }
    let x = design(s);
    let y = targets(s);
    let beta = DVector::from_column_slice(&m.beta);
    let eta = &x * &beta;
    let mut xw = x.clone();
    for (i, mut row) in xw.row_iter_mut().enumerate() {
        let p = sigmoid(eta[i]);
        row *= p * (1.0 - p);
    }
    let info = x.tr_mul(&xw);
    let cov = info
        .cholesky()
        .ok_or_else(|| Error::Singular { columns: (0..x.ncols()).collect() })?
        .inverse();
    let se: Vec<f64> = (0..x.ncols()).map(|j| cov[(j, j)].sqrt()).collect();
    let wald_chi2: Vec<f64> = m.beta.iter().zip(&se).map(|(b, s)| (b / s).powi(2)).collect();
    let chi2 = ChiSquared::new(1.0).expect("df 1 is valid");
    let p_values = wald_chi2.iter().map(|&w| chi2.sf(w)).collect();

    let n = s.len() as f64;
    let l1 = log_likelihood(&eta, &y);
    let n1 = y.sum();
    let n0 = n - n1;
    let l0 = n1 * (n1 / n).ln() + n0 * (n0 / n).ln();
    let cox_snell = 1.0 - ((2.0 / n) * (l0 - l1)).exp();
    let max_r2 = 1.0 - ((2.0 / n) * l0).exp();
    let nagelkerke_r2 = if max_r2 > 0.0 { (cox_snell / max_r2).clamp(0.0, 1.0) } else { 0.0 };

    let (vif, vif_infinite) = vif(s);
    Ok(Diagnostics {
        n: s.len(),
        se,
        wald_chi2,
        df: vec![1; m.beta.len()],
        p_values,
        odds_ratios: m.beta.iter().map(|b| b.exp()).collect(),
        log_likelihood: l1,
        null_log_likelihood: l0,
        nagelkerke_r2,
        vif,
        vif_infinite,
    })
}

/// VIF_j = 1 / (1 - R²_j), R²_j from the OLS regression (with intercept) of
/// feature j on the remaining features.
fn vif(s: &Sample) -> (Vec<f64>, Vec<bool>) {
    let p = s.n_features();
    let n = s.len() as f64;
    let mut mean = vec![0.0; p];
    for row in s.rows() {
        for j in 0..p {
            mean[j] += row[j] / n;
        }
    }
    let mut c = DMatrix::<f64>::zeros(p, p);
    for row in s.rows() {
        for a in 0..p {
            let da = row[a] - mean[a];
            for b in a..p {
                c[(a, b)] += da * (row[b] - mean[b]);
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            c[(a, b)] = c[(b, a)];
        }
    }
    let mut out = Vec::with_capacity(p);
    let mut flags = Vec::with_capacity(p);
    for j in 0..p {
        let tss = c[(j, j)];
        if p == 1 && tss > 0.0 {
            out.push(1.0);
            flags.push(false);
            continue;
        }
        let others: Vec<usize> = (0..p).filter(|&o| o != j).collect();
        let coo = DMatrix::from_fn(others.len(), others.len(), |a, b| c[(others[a], others[b])]);
        let coj = DVector::from_fn(others.len(), |a, _| c[(others[a], j)]);
        let rss = match coo.pseudo_inverse(1e-12) {
            Ok(inv) => tss - coj.dot(&(inv * &coj)),
            Err(_) => 0.0,
        };
        let unexplained = if tss > 0.0 { rss / tss } else { 0.0 };
        if unexplained <= 1e-12 {
            out.push(VIF_SENTINEL);
            flags.push(true);
        } else {
            out.push((1.0 / unexplained).max(1.0));
            flags.push(false);
        }
    }
    (out, flags)
}
