use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn namechar(args: &[&str]) -> Output {
    namechar_env(args, None)
}

fn namechar_env(args: &[&str], data_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_namechar"));
    cmd.args(args).env_remove("NAMECHAR_DATA_DIR");
    if let Some(d) = data_dir {
        cmd.env("NAMECHAR_DATA_DIR", d);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const DICT: &str = "name\tcategory\tregions
John\tmale\t
Mary\tfemale\t
Anna\tfemale\t
Lena\tfemale\t
Bob\tmale\t
Karl\tmale\t
Tom\tmale\t
Rosa\tfemale\t
Kim\tunisex\t
Andrea\tmostly_female\t
";

fn dict(dir: &TempDir) -> String {
    let p = dir.path().join("names.tsv");
    fs::write(&p, DICT).unwrap();
    p.to_str().unwrap().to_owned()
}

fn corpus(dir: &TempDir, n: usize) -> String {
    let names = ["John", "Mary", "Kim", "Zorblax", "Andrea", "Qwynn"];
    let mut s = String::new();
    for i in 0..n {
        let female = i % 2 == 1;
        let tweets = if female { r#"["love my hair", "new dress #shopping"]"# } else { r#"["great team win", "match #football"]"# };
        s.push_str(&format!(
            "{{\"user_id\":\"u{i}\",\"name\":\"{}\",\"tweets\":{tweets},\"profile\":{{\"age_days\":{},\"friends\":3,\"followers\":4}},\"gender\":\"{}\"}}\n",
            names[i % names.len()],
            10 + i,
            if female { "female" } else { "male" }
        ));
    }
    let p = dir.path().join("users.jsonl");
    fs::write(&p, s).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = namechar(&[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert!(out.stdout.is_empty());
}

#[test]
fn help_goes_to_stdout() {
    let out = namechar(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("pipeline"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(namechar(&["name", "score", "--bogus"]).status.code(), Some(1));
    assert_eq!(namechar(&["namchar", "train", "--db", "x.tsv"]).status.code(), Some(1), "seed is mandatory");
    let out = namechar(&["pipeline", "train", "--corpus", "c", "--seed", "1", "--tau", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(namechar(&["pipeline", "train", "--corpus", "c", "--seed", "1", "--k", "0"]).status.code(), Some(1));
    assert_eq!(namechar(&["name", "score", "John"]).status.code(), Some(1), "no db and no data dir");
}

#[test]
fn data_errors_exit_two() {
    let out = namechar(&["name", "score", "John", "--db", "/nonexistent/names.tsv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn name_score_reports_value_and_provenance() {
    let dir = TempDir::new().unwrap();
    let db = dict(&dir);
    let v = json(&namechar(&["name", "score", "Jürgen Mary", "Andrea", "Zzz", "--db", &db]));
    assert_eq!(v[0]["value"], -1.0);
    assert_eq!(v[0]["provenance"], "dictionary");
    assert_eq!(v[0]["matched_token"], "mary");
    assert_eq!(v[1]["value"], -0.8);
    assert_eq!(v[2]["value"], 0.0);
    assert_eq!(v[2]["provenance"], "unscored");
}

#[test]
fn data_dir_is_the_default_db_root() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("dist.male.first"), "JOHN 3.271 3.271 1\nKIM 0.004 3.275 2\n").unwrap();
    fs::write(dir.path().join("dist.female.first"), "MARY 2.629 2.629 1\nKIM 0.012 2.641 2\n").unwrap();
    let v = json(&namechar_env(&["name", "score", "Kim"], Some(dir.path())));
    assert!((v[0]["value"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    let v = json(&namechar_env(&["dict", "inspect", "--db", "dist.male.first"], Some(dir.path())));
    assert_eq!(v["distinct_names"], 2);
    assert_eq!(v["databases"][0]["format"], "census");
}

#[test]
fn dict_build_round_trips_and_inspect_counts() {
    let dir = TempDir::new().unwrap();
    let db = dict(&dir);
    let built = dir.path().join("built.tsv");
    let hist = dir.path().join("hist.csv");
    let out = namechar(&["dict", "build", "--db", &db, "--out", built.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&namechar(&["dict", "inspect", "--db", built.to_str().unwrap(), "--histogram", hist.to_str().unwrap()]));
    assert_eq!(v["distinct_names"], 10);
    assert_eq!(v["categories"]["female"], 4);
    assert_eq!(v["categories"]["mostly_female"], 1);
    let csv = fs::read_to_string(hist).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 41);
    assert_eq!(lines[0], "bin_start,bin_end,count");
    assert_eq!(lines[1], "-1.00,-0.95,4");
    assert_eq!(lines[5], "-0.80,-0.75,1");
    assert_eq!(lines[21], "0.00,0.05,1");
    assert_eq!(lines[40], "0.95,1.00,4");
}

#[test]
fn name_features_lists_tokens() {
    let v = json(&namechar(&["name", "features", "Jürgen Müller"]));
    assert_eq!(v[0]["normalized"], "jurgen muller");
    assert_eq!(v[0]["tokens"][0]["token"], "jurgen");
    assert_eq!(v[0]["tokens"][0]["features"]["n_vowels"], 2);
}

#[test]
fn namchar_train_is_deterministic_and_predicts() {
    let dir = TempDir::new().unwrap();
    let db = dict(&dir);
    let a = namechar(&["namchar", "train", "--db", &db, "--seed", "3"]);
    let b = namechar(&["namchar", "train", "--db", &db, "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let model = dir.path().join("m.json");
    fs::write(&model, &a.stdout).unwrap();
    let v = json(&namechar(&["namchar", "predict", "--model", model.to_str().unwrap(), "Lina", "Bert", "!!"]));
    assert_eq!(v[0]["gender"], "female");
    assert_eq!(v[1]["gender"], "male");
    assert_eq!(v[2]["gender"], Value::Null);
    let v = json(&namechar(&["name", "score", "Lina", "--db", &db, "--model", model.to_str().unwrap()]));
    assert_eq!(v[0]["provenance"], "namchar");
}

#[test]
fn pipeline_train_classify_evaluate() {
    let dir = TempDir::new().unwrap();
    let db = dict(&dir);
    let users = corpus(&dir, 40);
    let args = ["pipeline", "train", "--corpus", &users, "--db", &db, "--seed", "5", "--k", "5", "--folds", "3"];
    let a = namechar(&args);
    let b = namechar(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout, "seeded training is byte-identical");
    let model = dir.path().join("p.json");
    fs::write(&model, &a.stdout).unwrap();

    let report = dir.path().join("report.json");
    let v = json(&namechar(&[
        "pipeline",
        "classify",
        "--model",
        model.to_str().unwrap(),
        "--corpus",
        &users,
        "--report",
        report.to_str().unwrap(),
    ]));
    let results = v.as_array().unwrap();
    assert_eq!(results.len(), 40);
    assert!(results.iter().all(|r| r["stage"] == 1 || r["stage"] == 2));
    let rep: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(rep["n"], 40);

    let v = json(&namechar(&["pipeline", "evaluate", "--corpus", &users, "--db", &db, "--seed", "5", "--k", "5", "--folds", "3"]));
    assert_eq!(v["train_users"], 20);
    assert_eq!(v["test_users"], 20);
}

#[test]
fn corpus_errors_are_strict_unless_permissive() {
    let dir = TempDir::new().unwrap();
    let db = dict(&dir);
    let users = corpus(&dir, 20);
    let mut text = fs::read_to_string(&users).unwrap();
    text.push_str("{\"user_id\":\"bad\"}\n");
    fs::write(&users, text).unwrap();
    let args = ["pipeline", "train", "--corpus", &users, "--db", &db, "--seed", "1", "--k", "3", "--folds", "3"];
    assert_eq!(namechar(&args).status.code(), Some(2));
    let mut permissive = args.to_vec();
    permissive.push("--permissive");
    let out = namechar(&permissive);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped line 21"));
}

#[test]
fn stats_ttest_from_lists() {
    let v = json(&namechar(&["stats", "ttest", "1,2,3,4,5", "0,0,0,0,0"]));
    assert!((v["t"].as_f64().unwrap() - 4.242640687).abs() < 1e-6);
    assert_eq!(v["df"], 4);
    assert_eq!(namechar(&["stats", "ttest", "1,2", "1"]).status.code(), Some(2));
}
