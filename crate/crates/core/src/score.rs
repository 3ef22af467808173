//! Gender scores in `[-1, 1]` (male positive) from dictionary records, and
//! the NamChar classifier used for names missing from every dictionary.

use std::io::{Read, Write};

use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{DictEntry, GenderCategory, NameDb, Source};
use crate::error::{Error, Result};
use crate::namefeat::{extract, Predictor};
use crate::nameproc::{first_match, normalize, normalize_token};
use crate::stats::{
    diagnostics, fit_logistic, fit_svm_rbf_calibrated, grid_search, Diagnostics, GridPoint, LogisticModel,
    Sample, StandardScaler, SvmModel, DEFAULT_MAX_ITER, DEFAULT_SVM_TOL, DEFAULT_TOL,
};
use crate::Gender;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Dictionary,
    Namchar,
    Unscored,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenderScore {
    pub value: f64,
    pub provenance: Provenance,
    /// Dictionary token that matched, or the token NamChar classified.
    pub matched_token: Option<String>,
}

impl GenderScore {
    pub fn unscored() -> Self {
        GenderScore {
            value: 0.0,
            provenance: Provenance::Unscored,
            matched_token: None,
        }
    }

    fn dictionary(value: f64) -> Self {
        GenderScore {
            value: value.clamp(-1.0, 1.0),
            provenance: Provenance::Dictionary,
            matched_token: None,
        }
    }

    fn with_token(mut self, token: &str) -> Self {
        self.matched_token = Some(token.to_owned());
        self
    }
}

/// `(M - F) / (M + F)` over the summed usage weights of `records`.
pub fn census_score(records: &[DictEntry]) -> GenderScore {
    let m: f64 = records.iter().map(|r| r.male).sum();
    let f: f64 = records.iter().map(|r| r.female).sum();
    if m + f > 0.0 {
        GenderScore::dictionary((m - f) / (m + f))
    } else {
        GenderScore::unscored()
    }
}

/// Categorical score of one `nam_dict` record. The if-first-part categories
/// count only when the matched token is the first token of the name.
pub fn category_value(category: GenderCategory, first_token: bool) -> f64 {
    match category {
        GenderCategory::Male => 1.0,
        GenderCategory::Female => -1.0,
        GenderCategory::MostlyMale => 0.8,
        GenderCategory::MostlyFemale => -0.8,
        GenderCategory::MaleIfFirstPart if first_token => 1.0,
        GenderCategory::FemaleIfFirstPart if first_token => -1.0,
        GenderCategory::MaleIfFirstPart | GenderCategory::FemaleIfFirstPart => 0.0,
        GenderCategory::Unisex => 0.0,
    }
}

/// Mean categorical score over all records.
pub fn namdict_score(records: &[DictEntry], first_token: bool) -> GenderScore {
    if records.is_empty() {
        return GenderScore::unscored();
    }
    let sum: f64 = records.iter().map(|r| category_value(r.category, first_token)).sum();
    GenderScore::dictionary(sum / records.len() as f64)
}

/// Score from the records stored under one key. Census records take
/// precedence; otherwise all records are scored categorically.
pub fn dictionary_score(records: &[DictEntry], first_token: bool) -> GenderScore {
    let census: Vec<DictEntry> = records.iter().filter(|r| r.source == Source::Census).cloned().collect();
    if !census.is_empty() {
        census_score(&census)
    } else {
        namdict_score(records, first_token)
    }
}

/// Plain gender score: the first token found in `db`, 0.0 otherwise.
pub fn gender_score(db: &NameDb, raw_name: &str) -> GenderScore {
    let name = normalize(raw_name);
    match first_match(db, &name) {
        Some(m) => dictionary_score(m.records, m.index == 0).with_token(m.token),
        None => GenderScore::unscored(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Logistic,
    SvmRbf,
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "logistic" => Ok(Engine::Logistic),
            "svm_rbf" | "svm-rbf" | "svm" => Ok(Engine::SvmRbf),
            _ => Err(format!("unknown engine {s:?} (expected logistic or svm_rbf)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamCharConfig {
    pub engine: Engine,
    pub seed: u64,
    /// `(gamma, cost)` pairs searched for the SVM.
    pub grid: Vec<(f64, f64)>,
    pub folds: usize,
    pub repeats: usize,
    /// Upper bound on the names used by the grid search; a seeded random
    /// subsample is drawn when the training set is larger.
    pub grid_max_names: Option<usize>,
    pub svm_tol: f64,
}

pub const DEFAULT_GAMMAS: [f64; 3] = [0.05, 0.1745521, 0.5];
pub const DEFAULT_COSTS: [f64; 3] = [0.25, 0.5, 1.0];

impl NamCharConfig {
    pub fn new(engine: Engine, seed: u64) -> Self {
        NamCharConfig {
            engine,
            seed,
            grid: DEFAULT_GAMMAS
                .iter()
                .flat_map(|&g| DEFAULT_COSTS.iter().map(move |&c| (g, c)))
                .collect(),
            folds: 10,
            repeats: 3,
            grid_max_names: None,
            svm_tol: DEFAULT_SVM_TOL,
        }
    }
}

/// Training rows: one per non-derived, non-unisex `nam_dict` or custom
/// record, with the mostly/if-first-part categories collapsed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub tokens: Vec<String>,
    pub female: Vec<bool>,
}

impl TrainingSet {
    pub fn from_db(db: &NameDb) -> TrainingSet {
        let mut tokens = Vec::new();
        let mut female = Vec::new();
        for (_, records) in db.iter() {
            for r in records {
                if r.derived || r.source == Source::Census {
                    continue;
                }
                let Some(g) = r.category.binary() else { continue };
                let token = normalize_token(&r.name);
                if token.is_empty() {
                    continue;
                }
                tokens.push(token);
                female.push(g.is_female());
            }
        }
        TrainingSet { tokens, female }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn sample(&self, predictors: &[Predictor]) -> Result<Sample> {
        let x = self
            .tokens
            .iter()
            .map(|t| Ok(extract(t)?.vector(predictors)))
            .collect::<Result<Vec<_>>>()?;
        Sample::new(x, self.female.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum NamCharClassifier {
    Logistic {
        model: LogisticModel,
        diagnostics: Option<Diagnostics>,
    },
    SvmRbf {
        model: SvmModel,
        scaler: StandardScaler,
        grid: Vec<GridSummary>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub gamma: f64,
    pub cost: f64,
    pub mean_accuracy: f64,
    pub sd_accuracy: f64,
    pub mean_kappa: f64,
    pub sd_kappa: f64,
    pub selected: bool,
}

impl GridSummary {
    pub(crate) fn from_point(p: &GridPoint, selected: bool) -> Self {
        GridSummary {
            gamma: p.gamma,
            cost: p.cost,
            mean_accuracy: p.cv.mean_accuracy,
            sd_accuracy: p.cv.sd_accuracy,
            mean_kappa: p.cv.mean_kappa,
            sd_kappa: p.cv.sd_kappa,
            selected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingInfo {
    pub n: usize,
    pub n_female: usize,
    pub seed: u64,
    pub folds: usize,
    pub repeats: usize,
    /// Names used by the grid search when subsampled.
    pub grid_names: Option<usize>,
}

pub const MODEL_SCHEMA: &str = "namechar/namchar-model";
pub const MODEL_VERSION: u32 = 1;

/// Trained NamChar classifier. Serialized as JSON with a schema name and
/// version; `predictors` fixes the feature order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamCharModel {
    pub schema: String,
    pub version: u32,
    pub predictors: Vec<Predictor>,
    pub classifier: NamCharClassifier,
    pub training: TrainingInfo,
}

impl NamCharModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_json()?.as_bytes())?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: NamCharModel = serde_json::from_str(text)?;
        if m.schema != MODEL_SCHEMA || m.version != MODEL_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported model schema {} v{} (expected {MODEL_SCHEMA} v{MODEL_VERSION})",
                m.schema, m.version
            )));
        }
        Ok(m)
    }

    pub fn read_json<R: Read>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    pub fn engine(&self) -> Engine {
        match self.classifier {
            NamCharClassifier::Logistic { .. } => Engine::Logistic,
            NamCharClassifier::SvmRbf { .. } => Engine::SvmRbf,
        }
    }

    /// Probability that a normalized token is female.
    pub fn p_female(&self, token: &str) -> Result<f64> {
        let x = extract(token)?.vector(&self.predictors);
        match &self.classifier {
            NamCharClassifier::Logistic { model, .. } => Ok(model.predict_proba(&x)),
            NamCharClassifier::SvmRbf { model, scaler, .. } => model
                .predict_proba(&scaler.transform(&x))
                .ok_or_else(|| Error::InvalidInput("SVM model carries no Platt parameters".into())),
        }
    }
}

/// Fit NamChar on the non-unisex `nam_dict` and custom records of `db`.
pub fn train_namchar(db: &NameDb, config: &NamCharConfig) -> Result<NamCharModel> {
    let set = TrainingSet::from_db(db);
    if set.is_empty() {
        return Err(Error::InvalidInput("no gendered nam_dict or custom records to train on".into()));
    }
    train_namchar_on(&set, &Predictor::NAMCHAR, config)
}

pub fn train_namchar_on(set: &TrainingSet, predictors: &[Predictor], config: &NamCharConfig) -> Result<NamCharModel> {
    let sample = set.sample(predictors)?;
    sample.require_both_classes()?;
    let mut training = TrainingInfo {
        n: sample.len(),
        n_female: sample.n_positive(),
        seed: config.seed,
        folds: config.folds,
        repeats: config.repeats,
        grid_names: None,
    };
    let classifier = match config.engine {
        Engine::Logistic => {
            let model = fit_logistic(&sample, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
            let diagnostics = if model.converged { Some(diagnostics(&model, &sample)?) } else { None };
            NamCharClassifier::Logistic { model, diagnostics }
        }
        Engine::SvmRbf => {
            let scaler = StandardScaler::fit(sample.rows());
            let scaled = Sample::new(
                sample.rows().iter().map(|r| scaler.transform(r)).collect(),
                sample.labels().to_vec(),
            )?;
            let grid_sample = match config.grid_max_names {
                Some(max) if scaled.len() > max => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    let mut idx = sample_indices(&mut rng, scaled.len(), max).into_vec();
                    idx.sort_unstable();
                    training.grid_names = Some(max);
                    scaled.subset(&idx)
                }
                _ => scaled.clone(),
            };
            let result = grid_search(&grid_sample, &config.grid, config.svm_tol, config.folds, config.repeats, config.seed)?;
            let best = &result.best;
            let model = fit_svm_rbf_calibrated(&scaled, best.gamma, best.cost, config.svm_tol, config.seed)?;
            let grid = result
                .points
                .iter()
                .map(|p| GridSummary::from_point(p, p.gamma == best.gamma && p.cost == best.cost))
                .collect();
            NamCharClassifier::SvmRbf { model, scaler, grid }
        }
    };
    Ok(NamCharModel {
        schema: MODEL_SCHEMA.to_owned(),
        version: MODEL_VERSION,
        predictors: predictors.to_vec(),
        classifier,
        training,
    })
}

/// Classify one name token. The label is female iff `p_female >= 0.5`.
pub fn namchar_predict(m: &NamCharModel, token: &str) -> Result<(Gender, f64)> {
    let token = normalize_token(token);
    if token.is_empty() {
        return Err(Error::EmptyToken);
    }
    let p = m.p_female(&token)?;
    Ok((Gender::from_female(p >= 0.5), p))
}

/// Dictionary score of the first matching token; NamChar on the first token
/// when nothing matches (value `1 - 2 p_female`); unscored when the name has
/// no letters.
pub fn namchar_score(db: &NameDb, m: &NamCharModel, raw_name: &str) -> GenderScore {
    let name = normalize(raw_name);
    if let Some(hit) = first_match(db, &name) {
        return dictionary_score(hit.records, hit.index == 0).with_token(hit.token);
    }
    let Some(first) = name.tokens.first() else {
        return GenderScore::unscored();
    };
    match m.p_female(first) {
        Ok(p) => GenderScore {
            value: (1.0 - 2.0 * p).clamp(-1.0, 1.0),
            provenance: Provenance::Namchar,
            matched_token: Some(first.clone()),
        },
        Err(_) => GenderScore::unscored(),
    }
}
