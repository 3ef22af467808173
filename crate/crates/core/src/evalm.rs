//! Confusion tables, accuracy, recall, error rates, Cohen's kappa and AUC.
//!
//! Female is the positive class. AUC is reported for the male class because
//! gender scores are male-positive: it is the probability that a random
//! male outscores a random female.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Gender;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionTable {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionTable {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn add(&mut self, truth: bool, pred: bool) {
        match (truth, pred) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fn_ += 1,
        }
    }

    pub fn merge(&self, other: &ConfusionTable) -> ConfusionTable {
        ConfusionTable {
            tp: self.tp + other.tp,
            fp: self.fp + other.fp,
            tn: self.tn + other.tn,
            fn_: self.fn_ + other.fn_,
        }
    }
}

/// Cross-tabulate labels, `true` meaning female.
pub fn confusion(truth: &[bool], pred: &[bool]) -> Result<ConfusionTable> {
    if truth.len() != pred.len() {
        return Err(Error::InvalidInput(format!(
            "{} true labels but {} predictions",
            truth.len(),
            pred.len()
        )));
    }
    let mut ct = ConfusionTable::default();
    for (&t, &p) in truth.iter().zip(pred) {
        ct.add(t, p);
    }
    Ok(ct)
}

pub fn confusion_genders(truth: &[Gender], pred: &[Gender]) -> Result<ConfusionTable> {
    let t: Vec<bool> = truth.iter().map(|g| g.is_female()).collect();
    let p: Vec<bool> = pred.iter().map(|g| g.is_female()).collect();
    confusion(&t, &p)
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Rates derived from a confusion table. Fields with a zero denominator are
/// `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n: u64,
    pub acc: Option<f64>,
    /// Recall of the female class (sensitivity).
    pub rec: Option<f64>,
    /// Recall of the male class.
    pub specificity: Option<f64>,
    /// fp / (fp + tn).
    pub fpr: Option<f64>,
    /// fn / (fn + tp).
    pub fnr: Option<f64>,
    /// fp / (fp + tp): share of female predictions that are wrong.
    pub fdr: Option<f64>,
    /// fn / (fn + tn): share of male predictions that are wrong.
    #[serde(rename = "for")]
    pub for_: Option<f64>,
}

pub fn metrics(ct: &ConfusionTable) -> Metrics {
    let ConfusionTable { tp, fp, tn, fn_ } = *ct;
    Metrics {
        n: ct.total(),
        acc: ratio(tp + tn, ct.total()),
        rec: ratio(tp, tp + fn_),
        specificity: ratio(tn, tn + fp),
        fpr: ratio(fp, fp + tn),
        fnr: ratio(fn_, fn_ + tp),
        fdr: ratio(fp, fp + tp),
        for_: ratio(fn_, fn_ + tn),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kappa {
    pub value: f64,
    /// Chance agreement was 1, so kappa is undefined and reported as 0.
    pub degenerate: bool,
}

/// Cohen's kappa `(p_o - p_e) / (1 - p_e)`.
pub fn kappa(ct: &ConfusionTable) -> Kappa {
    let n = ct.total() as f64;
    if n == 0.0 {
        return Kappa { value: 0.0, degenerate: true };
    }
    let ConfusionTable { tp, fp, tn, fn_ } = *ct;
    let (tp, fp, tn, fn_) = (tp as f64, fp as f64, tn as f64, fn_ as f64);
    let p_o = (tp + tn) / n;
    let p_e = ((tp + fp) * (tp + fn_) + (fn_ + tn) * (fp + tn)) / (n * n);
    if (1.0 - p_e).abs() < 1e-15 {
        return Kappa { value: 0.0, degenerate: true };
    }
    Kappa { value: (p_o - p_e) / (1.0 - p_e), degenerate: false }
}

/// Mann-Whitney AUC of male-positive scores, ties counted one half.
/// `female[i]` is the true label of `scores[i]`.
pub fn auc(scores: &[f64], female: &[bool]) -> Result<f64> {
    if scores.len() != female.len() {
        return Err(Error::InvalidInput(format!("{} scores but {} labels", scores.len(), female.len())));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidInput("NaN score".into()));
    }
    let n_f = female.iter().filter(|&&f| f).count();
    let n_m = female.len() - n_f;
    if n_f == 0 {
        return Err(Error::SingleClass("male"));
    }
    if n_m == 0 {
        return Err(Error::SingleClass("female"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_male = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            if !female[k] {
                rank_sum_male += avg_rank;
            }
        }
        i = j + 1;
    }
    let (n_m, n_f) = (n_m as f64, n_f as f64);
    Ok((rank_sum_male - n_m * (n_m + 1.0) / 2.0) / (n_m * n_f))
}
