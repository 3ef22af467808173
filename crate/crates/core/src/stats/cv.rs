use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::logistic::{fit_logistic, DEFAULT_MAX_ITER, DEFAULT_TOL};
use super::svm::fit_svm_rbf;
use super::Sample;
use crate::error::{Error, Result};
use crate::evalm::{confusion, kappa, ConfusionTable};

/// Classifier evaluated by [`cross_validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum ModelSpec {
    Logistic,
    SvmRbf { gamma: f64, cost: f64, tol: f64 },
    /// Predicts the majority class of the training fold (female on a tie).
    Majority,
}

/// Predictions for `test` from a model fitted on `train`. A training fold
/// holding a single class predicts that class.
fn fit_predict(spec: ModelSpec, train: &Sample, test: &Sample) -> Result<Vec<bool>> {
    let pos = train.n_positive();
    if pos == 0 || pos == train.len() || spec == ModelSpec::Majority {
        let label = 2 * pos >= train.len();
        return Ok(vec![label; test.len()]);
    }
    Ok(match spec {
        ModelSpec::Logistic => {
            let m = fit_logistic(train, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
            test.rows().iter().map(|x| m.predict(x)).collect()
        }
        ModelSpec::SvmRbf { gamma, cost, tol } => {
            let m = fit_svm_rbf(train, gamma, cost, tol)?;
            test.rows().iter().map(|x| m.predict(x)).collect()
        }
        ModelSpec::Majority => unreachable!(),
    })
}

/// Fold index per row. Each class is shuffled and dealt round-robin, the
/// second class continuing where the first stopped, so fold sizes differ by
/// at most one and class proportions are preserved.
pub fn stratified_folds(labels: &[bool], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut fold = vec![0; labels.len()];
    let mut offset = 0;
    for class in [false, true] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(rng);
        for (pos, &i) in idx.iter().enumerate() {
            fold[i] = (offset + pos) % k;
        }
        offset += idx.len();
    }
    fold
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Per-fold accuracy, repeat-major.
    pub accuracy: Vec<f64>,
    pub kappa: Vec<f64>,
    pub mean_accuracy: f64,
    pub sd_accuracy: f64,
    pub mean_kappa: f64,
    pub sd_kappa: f64,
    /// Sum of the per-fold tables.
    pub pooled: ConfusionTable,
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = if v.len() > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

/// Repeated stratified k-fold cross-validation. Repeat `r` draws its fold
/// assignment from ChaCha8 seeded with `seed` on stream `r`. Folds are
/// fitted in parallel and reduced in fold order.
pub fn cross_validate(spec: ModelSpec, s: &Sample, folds: usize, repeats: usize, seed: u64) -> Result<CvResult> {
    if folds < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 folds, got {folds}")));
    }
    if repeats < 1 {
        return Err(Error::InvalidInput("need at least 1 repeat".into()));
    }
    if s.len() < folds {
        return Err(Error::InvalidInput(format!("{} rows cannot fill {folds} folds", s.len())));
    }
    let assignments: Vec<Vec<usize>> = (0..repeats)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            stratified_folds(s.labels(), folds, &mut rng)
        })
        .collect();
    let jobs: Vec<(usize, usize)> = (0..repeats).flat_map(|r| (0..folds).map(move |f| (r, f))).collect();
    let tables: Vec<ConfusionTable> = jobs
        .par_iter()
        .map(|&(r, f)| {
            let assign = &assignments[r];
            let (test_idx, train_idx): (Vec<usize>, Vec<usize>) = (0..s.len()).partition(|&i| assign[i] == f);
            let train = s.subset(&train_idx);
            let test = s.subset(&test_idx);
            let pred = fit_predict(spec, &train, &test)?;
            confusion(test.labels(), &pred)
        })
        .collect::<Result<_>>()?;

    let accuracy: Vec<f64> = tables.iter().map(|t| (t.tp + t.tn) as f64 / t.total() as f64).collect();
    let kappas: Vec<f64> = tables.iter().map(|t| kappa(t).value).collect();
    let (mean_accuracy, sd_accuracy) = mean_sd(&accuracy);
    let (mean_kappa, sd_kappa) = mean_sd(&kappas);
    let pooled = tables.iter().fold(ConfusionTable::default(), |acc, t| acc.merge(t));
    Ok(CvResult {
        folds,
        repeats,
        seed,
        accuracy,
        kappa: kappas,
        mean_accuracy,
        sd_accuracy,
        mean_kappa,
        sd_kappa,
        pooled,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub gamma: f64,
    pub cost: f64,
    pub cv: CvResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best: GridPoint,
    pub points: Vec<GridPoint>,
}

/// Cross-validate an RBF SVM at every `(gamma, cost)` pair with the same
/// fold assignments and keep the highest mean accuracy. Ties go to the
/// smaller cost, then the smaller gamma.
pub fn grid_search(
    s: &Sample,
    grid: &[(f64, f64)],
    tol: f64,
    folds: usize,
    repeats: usize,
    seed: u64,
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty parameter grid".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &(gamma, cost) in grid {
        let cv = cross_validate(ModelSpec::SvmRbf { gamma, cost, tol }, s, folds, repeats, seed)?;
        points.push(GridPoint { gamma, cost, cv });
    }
    let mut best = 0;
    for (i, p) in points.iter().enumerate().skip(1) {
        let b = &points[best];
        let diff = p.cv.mean_accuracy - b.cv.mean_accuracy;
        let better = diff > 1e-12
            || (diff.abs() <= 1e-12 && (p.cost < b.cost || (p.cost == b.cost && p.gamma < b.gamma)));
        if better {
            best = i;
        }
    }
    Ok(GridResult {
        best: points[best].clone(),
        points,
    })
}
