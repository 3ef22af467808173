//! The `namechar` command line tool.
//!
//! Every command writes one JSON document to stdout (or `--out`) and a short
//! human-readable summary to stderr. Exit codes: 0 on success, 1 on usage
//! errors, 2 on data errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::corpus::{
    build_db, category_counts, parse_census, parse_custom, parse_namdict, serialize_custom, DictEntry, NamDictOptions,
    TextEncoding, CUSTOM_HEADER,
};
use crate::error::{Error, Result};
use crate::namefeat::{extract, NameFeatures};
use crate::pipeline::{
    classify_all, evaluate, read_users_jsonl, report, train, DbRef, PipelineConfig, PipelineModel, Scoring, UserRecord,
};
use crate::score::{dictionary_score, gender_score, namchar_predict, namchar_score, train_namchar, Engine, NamCharConfig};
use crate::stats::paired_ttest;
use crate::{normalize, Gender, GenderScore, NamCharModel, NameDb};

/// Environment variable naming the default database root.
pub const DATA_DIR_ENV: &str = "NAMECHAR_DATA_DIR";

const CENSUS_MALE: &str = "dist.male.first";
const CENSUS_FEMALE: &str = "dist.female.first";

#[derive(Debug, Parser)]
#[command(name = "namechar", version, about = "Gender inference from personal names and user records")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build or inspect name dictionaries.
    #[command(subcommand, arg_required_else_help = true)]
    Dict(DictCommand),
    /// Normalize, featurize and score single names.
    #[command(subcommand, arg_required_else_help = true)]
    Name(NameCommand),
    /// Train and apply the NamChar name classifier.
    #[command(subcommand, arg_required_else_help = true)]
    Namchar(NamcharCommand),
    /// Train, apply and evaluate the two-step user classifier.
    #[command(subcommand, arg_required_else_help = true)]
    Pipeline(PipelineCommand),
    /// Statistical tests.
    #[command(subcommand, arg_required_else_help = true)]
    Stats(StatsCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum DbFormat {
    Census,
    Namdict,
    Custom,
}

impl DbFormat {
    fn as_str(self) -> &'static str {
        match self {
            DbFormat::Census => "census",
            DbFormat::Namdict => "namdict",
            DbFormat::Custom => "custom",
        }
    }
}

#[derive(Debug, Args)]
struct DbArgs {
    /// Dictionary file or census directory; repeat to merge several. Relative
    /// paths are also looked up under $NAMECHAR_DATA_DIR, which is the
    /// default when no --db is given.
    #[arg(long = "db", value_name = "PATH")]
    db: Vec<PathBuf>,
    /// Skip format detection.
    #[arg(long, value_enum)]
    format: Option<DbFormat>,
    /// Text encoding of nam_dict files; default is the declared charset.
    #[arg(long, value_name = "NAME")]
    encoding: Option<TextEncoding>,
    /// Keep nam_dict lines marked as expanded duplicates.
    #[arg(long)]
    expanded_duplicates: bool,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Write the JSON result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum DictCommand {
    /// Merge dictionaries and write them in the canonical TSV format.
    Build {
        #[command(flatten)]
        db: DbArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Report record and category counts.
    Inspect {
        #[command(flatten)]
        db: DbArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Write a CSV histogram of the scores of all keys.
        #[arg(long, value_name = "FILE")]
        histogram: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum NameCommand {
    /// Normalized tokens and written-form features.
    Features {
        #[arg(required = true)]
        names: Vec<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Gender score of each name.
    Score {
        names: Vec<String>,
        /// Read further names from a file, one per line.
        #[arg(long, value_name = "FILE")]
        names_file: Option<PathBuf>,
        #[command(flatten)]
        db: DbArgs,
        /// NamChar model used for names missing from the dictionaries.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Write a CSV histogram of the scores.
        #[arg(long, value_name = "FILE")]
        histogram: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
enum NamcharCommand {
    /// Train on the binary-gender dictionary records.
    Train {
        #[command(flatten)]
        db: DbArgs,
        #[arg(long, default_value = "logistic")]
        engine: Engine,
        #[arg(long)]
        seed: u64,
        /// Run the SVM grid search on a seeded subsample of this size.
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(2..))]
        grid_max_names: Option<u64>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
        folds: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        repeats: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Predict the gender of each name's first token.
    Predict {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(required = true)]
        names: Vec<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct CorpusArgs {
    /// User records, one JSON object per line.
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Skip invalid lines instead of failing.
    #[arg(long)]
    permissive: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, default_value_t = 0.85, value_parser = parse_tau)]
    tau: f64,
    #[arg(long, default_value = "census")]
    scoring: Scoring,
    #[arg(long)]
    seed: u64,
    /// NamChar model for `--scoring namchar`.
    #[arg(long, value_name = "FILE")]
    namchar_model: Option<PathBuf>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
    folds: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
}

#[derive(Debug, Subcommand)]
enum PipelineCommand {
    /// Train on the labelled users of a corpus.
    Train {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        db: DbArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Label every user of a corpus.
    Classify {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Override the dictionaries recorded in the model.
        #[command(flatten)]
        db: DbArgs,
        /// Write an evaluation report over the labelled users.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Train on a random half of the labelled users and test on the rest.
    Evaluate {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        db: DbArgs,
        #[command(flatten)]
        train: TrainArgs,
        /// Write the per-user results of the test half.
        #[arg(long, value_name = "FILE")]
        results: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
enum StatsCommand {
    /// Paired t-test. Each sample is a file of numbers or a comma list.
    Ttest {
        a: String,
        b: String,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn parse_tau(s: &str) -> std::result::Result<f64, String> {
    let tau: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&tau) {
        Ok(tau)
    } else {
        Err(format!("tau must lie in [0, 1], got {tau}"))
    }
}

/// Failure of one command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Data(Error::Json(e))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(Error::Io(e))
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    open(path)?.read_to_string(&mut s)?;
    Ok(s)
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match data_dir().map(|d| d.join(path)) {
        Some(p) if p.exists() => p,
        _ => path.to_path_buf(),
    }
}

fn db_paths(args: &DbArgs) -> std::result::Result<Vec<PathBuf>, Failure> {
    if !args.db.is_empty() {
        return Ok(args.db.iter().map(|p| resolve(p)).collect());
    }
    match data_dir() {
        Some(d) => Ok(vec![d]),
        None => Err(Failure::Usage(format!("no --db given and {DATA_DIR_ENV} is not set"))),
    }
}

/// Directories are census data; files are recognized by their first line.
fn detect_format(path: &Path) -> Result<DbFormat> {
    if path.is_dir() {
        return Ok(DbFormat::Census);
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
    if name == CENSUS_MALE || name == CENSUS_FEMALE {
        return Ok(DbFormat::Census);
    }
    let mut first = Vec::new();
    open(path)?.read_until(b'\n', &mut first)?;
    if first.starts_with(CUSTOM_HEADER.as_bytes()) {
        Ok(DbFormat::Custom)
    } else if first.first() == Some(&b'#') {
        Ok(DbFormat::Namdict)
    } else {
        Ok(DbFormat::Custom)
    }
}

fn census_gender(path: &Path) -> Gender {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
    Gender::from_female(name.contains("female"))
}

/// A directory holds `dist.male.first` and `dist.female.first`, and may also
/// hold `nam_dict.txt`.
fn load_dir(dir: &Path, args: &DbArgs) -> Result<Vec<DictEntry>> {
    let mut out = Vec::new();
    let mut found = false;
    for (file, gender) in [(CENSUS_MALE, Gender::Male), (CENSUS_FEMALE, Gender::Female)] {
        let p = dir.join(file);
        if p.is_file() {
            out.extend(parse_census(open(&p)?, gender)?);
            found = true;
        }
    }
    let namdict = dir.join("nam_dict.txt");
    if namdict.is_file() {
        out.extend(parse_namdict(open(&namdict)?, namdict_options(args))?);
        found = true;
    }
    if !found {
        return Err(Error::InvalidInput(format!("{}: no dictionary files found", dir.display())));
    }
    Ok(out)
}

fn namdict_options(args: &DbArgs) -> NamDictOptions {
    NamDictOptions {
        encoding: args.encoding,
        include_expanded_duplicates: args.expanded_duplicates,
    }
}

fn load_entries(path: &Path, format: DbFormat, args: &DbArgs) -> Result<Vec<DictEntry>> {
    match format {
        DbFormat::Census if path.is_dir() => load_dir(path, args),
        DbFormat::Census => parse_census(open(path)?, census_gender(path)),
        DbFormat::Namdict if path.is_dir() => load_dir(path, args),
        DbFormat::Namdict => parse_namdict(open(path)?, namdict_options(args)),
        DbFormat::Custom => parse_custom(open(path)?),
    }
}

/// Load and merge the databases; returns them with the references recorded
/// in pipeline models.
fn load_db(args: &DbArgs) -> std::result::Result<(NameDb, Vec<DbRef>), Failure> {
    let mut entries = Vec::new();
    let mut refs = Vec::new();
    for path in db_paths(args)? {
        let format = match args.format {
            Some(f) => f,
            None => detect_format(&path)?,
        };
        entries.extend(load_entries(&path, format, args)?);
        refs.push(DbRef {
            path: path.display().to_string(),
            format: format.as_str().to_owned(),
        });
    }
    Ok((build_db(entries), refs))
}

fn load_refs(refs: &[DbRef]) -> std::result::Result<NameDb, Failure> {
    let mut entries = Vec::new();
    for r in refs {
        let format = match r.format.as_str() {
            "census" => DbFormat::Census,
            "namdict" => DbFormat::Namdict,
            "custom" => DbFormat::Custom,
            other => return Err(Error::InvalidInput(format!("unknown database format {other:?} in model")).into()),
        };
        let args = DbArgs {
            db: Vec::new(),
            format: None,
            encoding: None,
            expanded_duplicates: false,
        };
        entries.extend(load_entries(&resolve(Path::new(&r.path)), format, &args)?);
    }
    Ok(build_db(entries))
}

fn load_users(args: &CorpusArgs, err: &mut dyn Write) -> Result<Vec<UserRecord>> {
    let file = read_users_jsonl(open(&args.corpus)?, args.permissive)?;
    for (line, reason) in &file.skipped {
        let _ = writeln!(err, "skipped line {line}: {reason}");
    }
    Ok(file.users)
}

fn load_namchar(path: &Path) -> Result<NamCharModel> {
    NamCharModel::read_json(open(path)?)
}

fn write_text(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit<T: Serialize>(value: &T, args: &OutArgs, out: &mut dyn Write) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(&text, args.out.as_deref(), out)
}

pub const HISTOGRAM_BIN: f64 = 0.05;
const HISTOGRAM_BINS: usize = 40;

/// Score counts in bins of width 0.05 over `[-1, 1]` as CSV. Each bin is
/// closed on the left; the last one also holds 1.0.
pub fn histogram_csv(values: &[f64]) -> String {
    let mut counts = [0u64; HISTOGRAM_BINS];
    for &v in values {
        let i = ((v + 1.0) / HISTOGRAM_BIN + 1e-9).floor();
        counts[(i.max(0.0) as usize).min(HISTOGRAM_BINS - 1)] += 1;
    }
    let mut s = String::from("bin_start,bin_end,count\n");
    for (i, c) in counts.iter().enumerate() {
        let lo = -1.0 + i as f64 * HISTOGRAM_BIN;
        s.push_str(&format!("{lo:.2},{:.2},{c}\n", lo + HISTOGRAM_BIN));
    }
    s
}

fn dict_command(cmd: DictCommand, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        DictCommand::Build { db, out: o } => {
            let (db, _) = load_db(&db)?;
            write_text(&serialize_custom(&db), o.out.as_deref(), out)?;
            let _ = writeln!(err, "{} names, {} records", db.len(), db.record_count());
        }
        DictCommand::Inspect { db, out: o, histogram } => {
            let (db, refs) = load_db(&db)?;
            let primary: Vec<DictEntry> = db.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
            let categories = category_counts(&primary);
            #[derive(Serialize)]
            struct Inspect<'a> {
                databases: &'a [DbRef],
                distinct_names: usize,
                records: usize,
                skipped: usize,
                categories: std::collections::BTreeMap<&'static str, usize>,
                sources: std::collections::BTreeMap<&'static str, &'a crate::corpus::SourceStats>,
            }
            let report = Inspect {
                databases: &refs,
                distinct_names: db.len(),
                records: db.record_count(),
                skipped: db.skipped(),
                categories: categories.iter().map(|(c, n)| (c.as_str(), *n)).collect(),
                sources: db.source_stats().iter().map(|(s, st)| (s.as_str(), st)).collect(),
            };
            emit(&report, &o, out)?;
            if let Some(path) = histogram {
                let scores: Vec<f64> = db.iter().map(|(_, r)| dictionary_score(r, true).value).collect();
                std::fs::write(path, histogram_csv(&scores))?;
            }
            let _ = writeln!(err, "{} distinct names", db.len());
            for (c, n) in &categories {
                let _ = writeln!(err, "  {:<22}{n}", c.as_str());
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TokenFeatures {
    token: String,
    features: NameFeatures,
}

#[derive(Serialize)]
struct NameReport {
    name: String,
    normalized: String,
    tokens: Vec<TokenFeatures>,
}

#[derive(Serialize)]
struct ScoredName {
    name: String,
    #[serde(flatten)]
    score: GenderScore,
}

fn name_command(cmd: NameCommand, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        NameCommand::Features { names, out: o } => {
            let mut reports = Vec::new();
            for name in names {
                let n = normalize(&name);
                let tokens = n
                    .tokens
                    .iter()
                    .map(|t| Ok(TokenFeatures { token: t.clone(), features: extract(t)? }))
                    .collect::<Result<Vec<_>>>()?;
                reports.push(NameReport { name, normalized: n.cleaned.clone(), tokens });
            }
            emit(&reports, &o, out)?;
            let _ = writeln!(err, "{} names", reports.len());
        }
        NameCommand::Score { mut names, names_file, db, model, histogram, out: o } => {
            if let Some(path) = names_file {
                for line in open(&path)?.lines() {
                    let line = line?;
                    if !line.trim().is_empty() {
                        names.push(line.trim().to_owned());
                    }
                }
            }
            if names.is_empty() {
                return Err(Failure::Usage("no names given".into()));
            }
            let (db, _) = load_db(&db)?;
            let model = model.map(|p| load_namchar(&p)).transpose()?;
            let scored: Vec<ScoredName> = names
                .into_iter()
                .map(|name| {
                    let score = match &model {
                        Some(m) => namchar_score(&db, m, &name),
                        None => gender_score(&db, &name),
                    };
                    ScoredName { name, score }
                })
                .collect();
            emit(&scored, &o, out)?;
            if let Some(path) = histogram {
                let values: Vec<f64> = scored.iter().map(|s| s.score.value).collect();
                std::fs::write(path, histogram_csv(&values))?;
            }
            for s in scored.iter().take(20) {
                let token = s.score.matched_token.as_deref().unwrap_or("-");
                let _ = writeln!(err, "{}: {:.3} ({:?}, {token})", s.name, s.score.value, s.score.provenance);
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Prediction {
    name: String,
    token: Option<String>,
    gender: Option<Gender>,
    p_female: Option<f64>,
}

fn namchar_command(cmd: NamcharCommand, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        NamcharCommand::Train { db, engine, seed, grid_max_names, folds, repeats, out: o } => {
            let (db, _) = load_db(&db)?;
            let mut config = NamCharConfig::new(engine, seed);
            config.grid_max_names = grid_max_names.map(|n| n as usize);
            config.folds = folds as usize;
            config.repeats = repeats as usize;
            let model = train_namchar(&db, &config)?;
            let mut text = model.to_json()?;
            text.push('\n');
            write_text(&text, o.out.as_deref(), out)?;
            let t = &model.training;
            let _ = writeln!(err, "trained {engine:?} on {} names ({} female)", t.n, t.n_female);
        }
        NamcharCommand::Predict { model, names, out: o } => {
            let model = load_namchar(&model)?;
            let mut preds = Vec::new();
            for name in names {
                let token = normalize(&name).tokens.into_iter().next();
                let (gender, p_female) = match &token {
                    Some(t) => {
                        let (g, p) = namchar_predict(&model, t)?;
                        (Some(g), Some(p))
                    }
                    None => (None, None),
                };
                preds.push(Prediction { name, token, gender, p_female });
            }
            emit(&preds, &o, out)?;
            for p in &preds {
                let g = p.gender.map_or("-", Gender::as_str);
                let _ = writeln!(err, "{}: {g}", p.name);
            }
        }
    }
    Ok(())
}

fn pipeline_config(args: &TrainArgs) -> PipelineConfig {
    let mut c = PipelineConfig::new(args.scoring, args.seed);
    c.k = args.k as usize;
    c.tau = args.tau;
    c.folds = args.folds as usize;
    c.repeats = args.repeats as usize;
    c
}

fn pipeline_namchar(args: &TrainArgs) -> std::result::Result<Option<NamCharModel>, Failure> {
    match (&args.namchar_model, args.scoring) {
        (Some(p), _) => Ok(Some(load_namchar(p)?)),
        (None, Scoring::Namchar) => Err(Failure::Usage("--scoring namchar requires --namchar-model".into())),
        (None, Scoring::Census) => Ok(None),
    }
}

fn pipeline_command(cmd: PipelineCommand, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        PipelineCommand::Train { corpus, db, train: t, out: o } => {
            let namchar = pipeline_namchar(&t)?;
            let users = load_users(&corpus, err)?;
            let (db, refs) = load_db(&db)?;
            let mut model = train(&users, &pipeline_config(&t), &db, namchar.as_ref())?;
            model.databases = refs;
            let mut text = model.to_json()?;
            text.push('\n');
            write_text(&text, o.out.as_deref(), out)?;
            let s = &model.training;
            let _ = writeln!(err, "trained on {} labelled users, {} in step 2", s.labelled_users, s.stage2_users);
        }
        PipelineCommand::Classify { model, corpus, db, report: report_path, out: o } => {
            let model = PipelineModel::from_json(&read_to_string(&model)?)?;
            let users = load_users(&corpus, err)?;
            let db = if db.db.is_empty() && !model.databases.is_empty() {
                load_refs(&model.databases)?
            } else {
                load_db(&db)?.0
            };
            let results = classify_all(&model, &users, &db)?;
            emit(&results, &o, out)?;
            let stage1 = results.iter().filter(|r| r.stage == 1).count();
            let _ = writeln!(err, "{} users: {stage1} in step 1, {} in step 2", results.len(), results.len() - stage1);
            if let Some(path) = report_path {
                let rep = report(&results, &users)?;
                std::fs::write(path, serde_json::to_string_pretty(&rep)? + "\n")?;
            }
        }
        PipelineCommand::Evaluate { corpus, db, train: t, results: results_path, out: o } => {
            let namchar = pipeline_namchar(&t)?;
            let users = load_users(&corpus, err)?;
            let (db, _) = load_db(&db)?;
            let e = evaluate(&users, &pipeline_config(&t), &db, namchar.as_ref())?;
            #[derive(Serialize)]
            struct Summary<'a> {
                train_users: usize,
                test_users: usize,
                report: &'a crate::pipeline::EvalReport,
            }
            emit(&Summary { train_users: e.train_users, test_users: e.test_users, report: &e.report }, &o, out)?;
            if let Some(path) = results_path {
                std::fs::write(path, serde_json::to_string_pretty(&e.results)? + "\n")?;
            }
            let m = &e.report.overall.metrics;
            let _ = writeln!(
                err,
                "train {} / test {}: accuracy {}, kappa {:.3}",
                e.train_users,
                e.test_users,
                m.acc.map_or("-".to_owned(), |a| format!("{:.2}%", 100.0 * a)),
                e.report.kappa
            );
        }
    }
    Ok(())
}

fn read_sample(arg: &str) -> Result<Vec<f64>> {
    let path = Path::new(arg);
    let text = if path.is_file() { read_to_string(path)? } else { arg.to_owned() };
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| Error::InvalidInput(format!("{s:?}: {e}"))))
        .collect()
}

fn stats_command(cmd: StatsCommand, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        StatsCommand::Ttest { a, b, out: o } => {
            let t = paired_ttest(&read_sample(&a)?, &read_sample(&b)?)?;
            emit(&t, &o, out)?;
            let _ = writeln!(err, "t = {:.4}, df = {}, p = {:.4}", t.t, t.df, t.p);
        }
    }
    Ok(())
}

/// Run the tool with explicit output streams and return the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Dict(c) => dict_command(c, out, err),
        Command::Name(c) => name_command(c, out, err),
        Command::Namchar(c) => namchar_command(c, out, err),
        Command::Pipeline(c) => pipeline_command(c, out, err),
        Command::Stats(c) => stats_command(c, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Run the tool on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}
