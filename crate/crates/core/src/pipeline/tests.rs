use super::*;
use crate::corpus::{build_db, DictEntry, GenderCategory, Source};
use crate::score::{train_namchar_on, Engine, NamCharConfig, TrainingSet};
use crate::namefeat::Predictor;

fn db() -> NameDb {
    build_db(vec![
        DictEntry::from_category("John", Source::Namdict, GenderCategory::Male),
        DictEntry::from_category("Mary", Source::Namdict, GenderCategory::Female),
        DictEntry::from_category("Kim", Source::Namdict, GenderCategory::Unisex),
        DictEntry::from_category("Andrea", Source::Namdict, GenderCategory::MostlyFemale),
    ])
}

fn user(id: usize, name: &str, tweets: &[&str], gender: Option<Gender>) -> UserRecord {
    UserRecord {
        user_id: format!("u{id}"),
        name: name.into(),
        tweets: tweets.iter().map(|s| s.to_string()).collect(),
        profile: Profile { age_days: 10 + id as u64 % 7, friends: 5, followers: 3, ..Default::default() },
        gender,
    }
}

/// Male users write about teams, female users about hair; names cycle
/// through dictionary and unknown names.
fn corpus(n: usize) -> Vec<UserRecord> {
    let names = ["John", "Mary", "Kim", "Andrea", "Zorblax", "Qwynn", "💫"];
    (0..n)
        .map(|i| {
            let female = i % 2 == 1;
            let tweets: &[&str] = if female {
                &["love my hair today", "new dress #shopping"]
            } else {
                &["great team win", "match tonight #football"]
            };
            user(i, names[i % names.len()], tweets, Some(Gender::from_female(female)))
        })
        .collect()
}

fn config(tau: f64) -> PipelineConfig {
    let mut c = PipelineConfig::new(Scoring::Census, 7);
    c.k = 5;
    c.tau = tau;
    c.grid = vec![(0.1, 1.0), (1.0, 1.0)];
    c.folds = 3;
    c
}

#[test]
fn every_user_is_labelled_in_one_stage() {
    let users = corpus(60);
    let db = db();
    let m = train(&users, &config(0.85), &db, None).unwrap();
    let res = classify_all(&m, &users, &db).unwrap();
    assert_eq!(res.len(), users.len());
    for r in &res {
        assert!(r.stage == 1 || r.stage == 2);
        assert_eq!(r.stage == 2, r.score.value.abs() <= m.tau);
        assert_eq!(r.decision.is_some(), r.stage == 2);
    }
    // "Andrea" scores -0.8 and goes to step 2.
    let andrea = res.iter().zip(&users).find(|(_, u)| u.name == "Andrea").unwrap().0;
    assert_eq!((andrea.score.value, andrea.stage), (-0.8, 2));
}

#[test]
fn tau_one_sends_everyone_to_step_two() {
    let users = corpus(40);
    let db = db();
    let m = train(&users, &config(1.0), &db, None).unwrap();
    assert!(classify_all(&m, &users, &db).unwrap().iter().all(|r| r.stage == 2));
}

#[test]
fn stage_one_rule() {
    let users = corpus(40);
    let db = db();
    let m = train(&users, &config(0.85), &db, None).unwrap();
    let r = classify(&m, &user(0, "John Smith", &["hair"], None), &db).unwrap();
    assert_eq!((r.stage, r.label), (1, Gender::Male));
    let r = classify(&m, &user(0, "Mary", &["team"], None), &db).unwrap();
    assert_eq!((r.stage, r.label), (1, Gender::Female));
}

#[test]
fn separable_corpus_is_learned() {
    let users = corpus(80);
    let db = db();
    let e = evaluate(&users, &config(0.85), &db, None).unwrap();
    assert_eq!(e.train_users + e.test_users, 80);
    assert!(e.report.stage2.n > 0);
    assert_eq!(e.report.stage2.metrics.acc, Some(1.0));
}

#[test]
fn seeded_training_is_reproducible() {
    let users = corpus(50);
    let db = db();
    let a = train(&users, &config(0.85), &db, None).unwrap().to_json().unwrap();
    let b = train(&users, &config(0.85), &db, None).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    let m = PipelineModel::from_json(&a).unwrap();
    assert_eq!(m.to_json().unwrap(), a);
}

#[test]
fn single_gender_corpus_is_rejected() {
    let users: Vec<UserRecord> = corpus(20).into_iter().filter(|u| u.gender == Some(Gender::Male)).collect();
    assert!(matches!(train(&users, &config(0.85), &db(), None), Err(Error::SingleClass(_))));
    let mut bad = config(0.85);
    bad.tau = 1.5;
    assert!(train(&corpus(20), &bad, &db(), None).is_err());
}

#[test]
fn feature_fixture() {
    let users = corpus(20);
    let db = db();
    let mut c = config(0.85);
    c.k = 2;
    let m = train(&users, &c, &db, None).unwrap();
    let words = &m.term_lists[TermKind::Word.index()];
    let u = user(3, "Kim", &["team team hair", "RT @x go", "#football"], None);
    let f = user_features(&u, &m, &db).unwrap();
    assert_eq!(f.gender_score, 0.0);
    // Words: team, team, hair, go -> 4 terms.
    for (j, t) in words.male_terms.iter().chain(&words.female_terms).enumerate() {
        let expected = match t.as_str() {
            "team" => 0.5,
            "hair" | "go" => 0.25,
            _ => 0.0,
        };
        assert_eq!(f.terms[j], expected, "{t}");
    }
    // age 13 days, 3 tweets, 1 mention, 1 hashtag, 0 links, 1 retweet, 5 friends / 3 followers.
    let d = 13.0;
    assert_eq!(f.profile, [3.0 / d, 1.0 / d, 1.0 / d, 0.0, 1.0 / d, 1.0 / 3.0, 5.0 / 3.0]);
    let empty = user_features(&user(3, "Kim", &[], None), &m, &db).unwrap();
    assert!(empty.terms.iter().all(|&v| v == 0.0));
    assert!(f.terms.iter().all(|&v| (0.0..=1.0).contains(&v)));
}

#[test]
fn namchar_moves_unknown_names_to_step_one() {
    let users = corpus(42);
    let db = db();
    let train_db = build_db(vec![
        DictEntry::from_category("Bob", Source::Namdict, GenderCategory::Male),
        DictEntry::from_category("Tom", Source::Namdict, GenderCategory::Male),
        DictEntry::from_category("Anna", Source::Namdict, GenderCategory::Female),
        DictEntry::from_category("Lena", Source::Namdict, GenderCategory::Female),
    ]);
    let nc = train_namchar_on(&TrainingSet::from_db(&train_db), &[Predictor::EndsInVowel], &NamCharConfig::new(Engine::Logistic, 0))
        .unwrap();
    let census = train(&users, &config(0.85), &db, None).unwrap();
    let mut cn = config(0.85);
    cn.scoring = Scoring::Namchar;
    assert!(train(&users, &cn, &db, None).is_err());
    let namchar = train(&users, &cn, &db, Some(&nc)).unwrap();
    let a = classify_all(&census, &users, &db).unwrap();
    let b = classify_all(&namchar, &users, &db).unwrap();
    let mut moved = 0;
    for (x, y) in a.iter().zip(&b) {
        if x.score.value == 0.0 && y.score.value.abs() > 0.85 {
            assert_eq!((x.stage, y.stage), (2, 1));
            moved += 1;
        }
        if x.stage == 1 {
            assert_eq!(y.stage, 1);
        }
    }
    assert!(moved > 0);
    assert!(PipelineModel::from_json(&namchar.to_json().unwrap()).unwrap().namchar.is_some());
}
