//! Two-step threshold classifier over user records.
//!
//! Step 1 labels a user directly when the absolute gender score of the
//! display name exceeds `tau`. Every other user goes to step 2, an RBF SVM
//! over term frequencies, profile statistics and the gender score.
//!
//! Feature layout: for each [`TermKind`] in [`TermKind::ALL`] order the
//! frequencies of the male terms then the female terms, followed by the
//! seven [`PROFILE_STATS`] and the gender score. Columns are min-max scaled
//! with bounds taken from the training users.

pub mod lovins;
pub mod terms;
pub mod text;
pub mod users;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use lovins::{costem, lovins_split, lovins_stem};
pub use terms::{select_top_terms, TermBag, TermKind, TermList};
pub use text::{char_ngrams, tokenize_tweets, Tokens};
pub use users::{profile_stats, read_users_jsonl, Profile, UserFile, UserRecord, PROFILE_STATS};

use crate::corpus::NameDb;
use crate::error::{Error, Result};
use crate::evalm::{auc, kappa, metrics, ConfusionTable, Kappa, Metrics};
use crate::score::{gender_score, namchar_score, GenderScore, GridSummary, NamCharModel, DEFAULT_COSTS, DEFAULT_GAMMAS};
use crate::stats::{fit_svm_rbf, grid_search, MinMaxScaler, Sample, SvmModel, DEFAULT_SVM_TOL};
use crate::Gender;

/// Name scoring used by step 1 and as a feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scoring {
    /// Dictionary gender score only; unknown names score 0.
    Census,
    /// Dictionary score with the NamChar fallback for unknown names.
    Namchar,
}

impl std::str::FromStr for Scoring {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "census" | "plain" | "dictionary" => Ok(Scoring::Census),
            "namchar" => Ok(Scoring::Namchar),
            _ => Err(format!("unknown scoring {s:?} (expected census or namchar)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub k: usize,
    pub tau: f64,
    pub scoring: Scoring,
    pub seed: u64,
    pub grid: Vec<(f64, f64)>,
    pub folds: usize,
    pub repeats: usize,
    pub svm_tol: f64,
}

impl PipelineConfig {
    pub fn new(scoring: Scoring, seed: u64) -> Self {
        PipelineConfig {
            k: 20,
            tau: 0.85,
            scoring,
            seed,
            grid: DEFAULT_GAMMAS
                .iter()
                .flat_map(|&g| DEFAULT_COSTS.iter().map(move |&c| (g, c)))
                .collect(),
            folds: 10,
            repeats: 1,
            svm_tol: DEFAULT_SVM_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::InvalidInput(format!("tau must lie in [0, 1], got {}", self.tau)));
        }
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidInput("empty parameter grid".into()));
        }
        Ok(())
    }
}

/// A dictionary file the model was trained with, recorded for later use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbRef {
    pub path: String,
    pub format: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub labelled_users: usize,
    pub stage2_users: usize,
    /// Step-2 users held a single class, so the SVM was fitted on all
    /// labelled users.
    pub stage2_fallback: bool,
    pub grid_users: usize,
}

pub const PIPELINE_SCHEMA: &str = "namechar/pipeline-model";
pub const PIPELINE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineModel {
    pub schema: String,
    pub version: u32,
    pub k: usize,
    pub tau: f64,
    pub scoring: Scoring,
    pub seed: u64,
    pub term_lists: Vec<TermList>,
    pub scaler: MinMaxScaler,
    pub svm: SvmModel,
    pub grid: Vec<GridSummary>,
    pub training: TrainingSummary,
    #[serde(default)]
    pub databases: Vec<DbRef>,
    /// Present when `scoring` is [`Scoring::Namchar`].
    pub namchar: Option<NamCharModel>,
}

impl PipelineModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: PipelineModel = serde_json::from_str(text)?;
        if m.schema != PIPELINE_SCHEMA || m.version != PIPELINE_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported model schema {} v{} (expected {PIPELINE_SCHEMA} v{PIPELINE_VERSION})",
                m.schema, m.version
            )));
        }
        if m.scoring == Scoring::Namchar && m.namchar.is_none() {
            return Err(Error::InvalidInput("namchar scoring without an embedded NamChar model".into()));
        }
        Ok(m)
    }
}

/// Feature blocks of one user.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub terms: Vec<f64>,
    pub profile: [f64; 7],
    pub gender_score: f64,
}

impl FeatureVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.terms.clone();
        v.extend_from_slice(&self.profile);
        v.push(self.gender_score);
        v
    }
}

struct Prepared {
    bag: TermBag,
    profile: [f64; 7],
}

fn prepare(u: &UserRecord) -> Prepared {
    let tokens = tokenize_tweets(&u.tweets);
    Prepared {
        profile: profile_stats(u, &tokens),
        bag: TermBag::from_tokens(&tokens),
    }
}

fn features(p: &Prepared, lists: &[TermList], score: f64) -> FeatureVector {
    let mut terms = Vec::new();
    for l in lists {
        for t in l.male_terms.iter().chain(&l.female_terms) {
            terms.push(p.bag.frequency(l.kind, t));
        }
    }
    FeatureVector {
        terms,
        profile: p.profile,
        gender_score: score,
    }
}

fn name_score(db: &NameDb, scoring: Scoring, namchar: Option<&NamCharModel>, name: &str) -> Result<GenderScore> {
    match (scoring, namchar) {
        (Scoring::Census, _) => Ok(gender_score(db, name)),
        (Scoring::Namchar, Some(m)) => Ok(namchar_score(db, m, name)),
        (Scoring::Namchar, None) => Err(Error::InvalidInput("namchar scoring needs a NamChar model".into())),
    }
}

/// Term, profile and gender-score features of `u` under `model`.
pub fn user_features(u: &UserRecord, model: &PipelineModel, db: &NameDb) -> Result<FeatureVector> {
    let score = name_score(db, model.scoring, model.namchar.as_ref(), &u.name)?;
    Ok(features(&prepare(u), &model.term_lists, score.value))
}

/// Fit the term lists and the step-2 SVM on the labelled users.
pub fn train(
    users: &[UserRecord],
    config: &PipelineConfig,
    db: &NameDb,
    namchar: Option<&NamCharModel>,
) -> Result<PipelineModel> {
    config.validate()?;
    let labelled: Vec<&UserRecord> = users.iter().filter(|u| u.gender.is_some()).collect();
    let female: Vec<bool> = labelled.iter().map(|u| u.gender == Some(Gender::Female)).collect();
    if !female.contains(&true) {
        return Err(Error::SingleClass("male"));
    }
    if !female.contains(&false) {
        return Err(Error::SingleClass("female"));
    }
    let namchar = match config.scoring {
        Scoring::Census => None,
        Scoring::Namchar => Some(namchar.ok_or_else(|| Error::InvalidInput("namchar scoring needs a NamChar model".into()))?),
    };

    let prepared: Vec<Prepared> = labelled.par_iter().map(|u| prepare(u)).collect();
    let scores: Vec<f64> = labelled
        .par_iter()
        .map(|u| name_score(db, config.scoring, namchar, &u.name).map(|s| s.value))
        .collect::<Result<_>>()?;

    let bags: Vec<(&TermBag, bool)> = prepared.iter().zip(&female).map(|(p, &f)| (&p.bag, f)).collect();
    let term_lists = TermKind::ALL
        .iter()
        .map(|&kind| match select_top_terms(&bags, kind, config.k) {
            Ok(l) => Ok(l),
            Err(Error::InvalidInput(_)) => Ok(TermList { kind, male_terms: vec![], female_terms: vec![], short: true }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;

    let stage2: Vec<usize> = (0..labelled.len()).filter(|&i| scores[i].abs() <= config.tau).collect();
    let stage2_has_both = stage2.iter().any(|&i| female[i]) && stage2.iter().any(|&i| !female[i]);
    let train_idx: Vec<usize> = if stage2_has_both { stage2.clone() } else { (0..labelled.len()).collect() };

    let raw: Vec<Vec<f64>> = train_idx
        .iter()
        .map(|&i| features(&prepared[i], &term_lists, scores[i]).to_vec())
        .collect();
    let scaler = MinMaxScaler::fit(&raw);
    let sample = Sample::new(
        raw.iter().map(|r| scaler.transform(r)).collect(),
        train_idx.iter().map(|&i| female[i]).collect(),
    )?;

    let mut order: Vec<usize> = (0..sample.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
    let mut half: Vec<usize> = order[..sample.len().div_ceil(2)].to_vec();
    half.sort_unstable();
    let half_sample = sample.subset(&half);
    let folds = config.folds.min(half_sample.len());
    let (best, grid) = if folds >= 2 {
        let r = grid_search(&half_sample, &config.grid, config.svm_tol, folds, config.repeats, config.seed)?;
        let grid = r
            .points
            .iter()
            .map(|p| GridSummary::from_point(p, p.gamma == r.best.gamma && p.cost == r.best.cost))
            .collect();
        ((r.best.gamma, r.best.cost), grid)
    } else {
        (config.grid[0], Vec::new())
    };
    let svm = fit_svm_rbf(&sample, best.0, best.1, config.svm_tol)?;

    Ok(PipelineModel {
        schema: PIPELINE_SCHEMA.to_owned(),
        version: PIPELINE_VERSION,
        k: config.k,
        tau: config.tau,
        scoring: config.scoring,
        seed: config.seed,
        term_lists,
        scaler,
        svm,
        grid,
        training: TrainingSummary {
            labelled_users: labelled.len(),
            stage2_users: stage2.len(),
            stage2_fallback: !stage2_has_both,
            grid_users: half.len(),
        },
        databases: Vec::new(),
        namchar: namchar.cloned(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub user_id: String,
    pub label: Gender,
    pub stage: u8,
    pub score: GenderScore,
    /// SVM decision value for step-2 users (positive means female).
    pub decision: Option<f64>,
}

/// Step 1 when `|score| > tau`, otherwise step 2.
pub fn classify(model: &PipelineModel, u: &UserRecord, db: &NameDb) -> Result<Classification> {
    let score = name_score(db, model.scoring, model.namchar.as_ref(), &u.name)?;
    let (label, stage, decision) = if score.value.abs() > model.tau {
        (Gender::from_female(score.value < 0.0), 1, None)
    } else {
        let x = features(&prepare(u), &model.term_lists, score.value).to_vec();
        let d = model.svm.decision_value(&model.scaler.transform(&x));
        (Gender::from_female(d > 0.0), 2, Some(d))
    };
    Ok(Classification {
        user_id: u.user_id.clone(),
        label,
        stage,
        score,
        decision,
    })
}

pub fn classify_all(model: &PipelineModel, users: &[UserRecord], db: &NameDb) -> Result<Vec<Classification>> {
    users.par_iter().map(|u| classify(model, u, db)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub n: u64,
    pub table: ConfusionTable,
    pub metrics: Metrics,
    pub kappa: Kappa,
}

impl StageReport {
    fn new(table: ConfusionTable) -> Self {
        StageReport {
            n: table.total(),
            table,
            metrics: metrics(&table),
            kappa: kappa(&table),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Users with a known gender.
    pub n: usize,
    pub stage1: StageReport,
    pub stage2: StageReport,
    pub overall: StageReport,
    /// AUC of the name gender score for the male class; absent when the
    /// evaluated users hold a single gender.
    pub auc: Option<f64>,
    pub kappa: f64,
}

/// Metrics per stage over the users with a known gender. `results[i]` must
/// belong to `users[i]`.
pub fn report(results: &[Classification], users: &[UserRecord]) -> Result<EvalReport> {
    if results.len() != users.len() {
        return Err(Error::InvalidInput(format!("{} results for {} users", results.len(), users.len())));
    }
    let mut tables = [ConfusionTable::default(); 2];
    let mut scores = Vec::new();
    let mut truth = Vec::new();
    for (r, u) in results.iter().zip(users) {
        let Some(g) = u.gender else { continue };
        tables[usize::from(r.stage == 2)].add(g.is_female(), r.label.is_female());
        scores.push(r.score.value);
        truth.push(g.is_female());
    }
    let overall = tables[0].merge(&tables[1]);
    Ok(EvalReport {
        n: truth.len(),
        stage1: StageReport::new(tables[0]),
        stage2: StageReport::new(tables[1]),
        kappa: kappa(&overall).value,
        overall: StageReport::new(overall),
        auc: auc(&scores, &truth).ok(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub train_users: usize,
    pub test_users: usize,
    pub report: EvalReport,
    pub results: Vec<Classification>,
}

/// Split the labelled users into random halves, train on the first and
/// report on the second.
pub fn evaluate(
    users: &[UserRecord],
    config: &PipelineConfig,
    db: &NameDb,
    namchar: Option<&NamCharModel>,
) -> Result<Evaluation> {
    let mut labelled: Vec<UserRecord> = users.iter().filter(|u| u.gender.is_some()).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    labelled.shuffle(&mut rng);
    let test = labelled.split_off(labelled.len() / 2);
    let model = train(&labelled, config, db, namchar)?;
    let results = classify_all(&model, &test, db)?;
    Ok(Evaluation {
        train_users: labelled.len(),
        test_users: test.len(),
        report: report(&results, &test)?,
        results,
    })
}

#[cfg(test)]
mod tests;
