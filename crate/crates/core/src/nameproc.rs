//! Name normalization and dictionary matching.
//!
//! Raw display names are folded to ASCII, stripped of everything that is not
//! a letter or whitespace, lower-cased and split into tokens. Matching walks
//! the tokens left to right and stops at the first one found in the
//! database.

use serde::Serialize;
use unicode_normalization::char::{decompose_compatible, is_combining_mark};

use crate::corpus::{DictEntry, NameDb};

/// Letters that NFKD does not decompose to an ASCII base.
const FOLD_EXCEPTIONS: &[(char, &str)] = &[
    ('ß', "ss"),
    ('ẞ', "SS"),
    ('æ', "ae"),
    ('Æ', "AE"),
    ('œ', "oe"),
    ('Œ', "OE"),
    ('ø', "o"),
    ('Ø', "O"),
    ('đ', "d"),
    ('Đ', "D"),
    ('ð', "d"),
    ('Ð', "D"),
    ('þ', "th"),
    ('Þ', "TH"),
    ('ł', "l"),
    ('Ł', "L"),
    ('ı', "i"),
    ('ħ', "h"),
    ('Ħ', "H"),
    ('ŧ', "t"),
    ('Ŧ', "T"),
];

fn fold_char(c: char, out: &mut String) {
    if c.is_ascii() {
        out.push(c);
        return;
    }
    if let Some((_, s)) = FOLD_EXCEPTIONS.iter().find(|(k, _)| *k == c) {
        out.push_str(s);
        return;
    }
    let mut base = String::new();
    decompose_compatible(c, |d| {
        if !is_combining_mark(d) {
            base.push(d);
        }
    });
    // Only accept the decomposition when it lands entirely in ASCII;
    // anything else (CJK, Arabic, Hangul jamo, ...) passes through untouched.
    if !base.is_empty() && base.is_ascii() {
        out.push_str(&base);
    } else {
        out.push(c);
    }
}

/// Fold Latin letters with diacritics to their ASCII base letters.
///
/// `"Jürgen"` becomes `"Jurgen"`, `"ß"` becomes `"ss"`. Characters without a
/// Latin base are returned unchanged.
pub fn transliterate(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        fold_char(c, &mut out);
    }
    out
}

/// A display name after ASCII folding and cleanup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedName {
    pub original: String,
    pub ascii: String,
    /// Only `[a-z]` and single interior spaces.
    pub cleaned: String,
    pub tokens: Vec<String>,
}

impl NormalizedName {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Transliterate, drop every non-letter (apostrophes and hyphens included,
/// without inserting a space), collapse whitespace, lower-case and tokenize.
pub fn normalize(s: &str) -> NormalizedName {
    let ascii = transliterate(s);
    let mut cleaned = String::with_capacity(ascii.len());
    let mut pending_space = false;
    for c in ascii.chars() {
        if c.is_ascii_alphabetic() {
            if pending_space && !cleaned.is_empty() {
                cleaned.push(' ');
            }
            pending_space = false;
            cleaned.push(c.to_ascii_lowercase());
        } else if c.is_whitespace() {
            pending_space = true;
        }
    }
    let tokens = cleaned.split(' ').filter(|t| !t.is_empty()).map(str::to_owned).collect();
    NormalizedName {
        original: s.to_owned(),
        ascii,
        cleaned,
        tokens,
    }
}

/// Key form of a dictionary name: all tokens of `normalize` concatenated.
pub fn normalize_token(s: &str) -> String {
    normalize(s).tokens.concat()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Match<'a> {
    pub index: usize,
    pub token: &'a str,
    pub records: &'a [DictEntry],
}

/// First token, scanning left to right, that has records in `db`.
pub fn first_match<'a>(db: &'a NameDb, name: &'a NormalizedName) -> Option<Match<'a>> {
    name.tokens.iter().enumerate().find_map(|(index, token)| {
        db.lookup(token).map(|records| Match {
            index,
            token: token.as_str(),
            records,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_db, DictEntry, GenderCategory, Source};
    use proptest::prelude::*;

    fn entry(name: &str) -> DictEntry {
        DictEntry::from_category(name, Source::Custom, GenderCategory::Male)
    }

    #[test]
    fn transliterate_examples() {
        assert_eq!(transliterate("Jürgen"), "Jurgen");
        assert_eq!(transliterate("abc"), "abc");
        assert_eq!(transliterate("Ángela"), "Angela");
        assert_eq!(transliterate("Straße"), "Strasse");
        assert_eq!(transliterate("Ñuño"), "Nuno");
        assert_eq!(transliterate("Søren Ærø"), "Soren AEro");
        assert_eq!(transliterate("Đorđe"), "Dorde");
        assert_eq!(transliterate("Łukasz"), "Lukasz");
        assert_eq!(transliterate("Мария"), "Мария");
        assert_eq!(transliterate("李"), "李");
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize("[-!Raphael-]").tokens, vec!["raphael"]);
        assert_eq!(normalize("Big Daddy C").tokens, vec!["big", "daddy", "c"]);
        assert!(normalize("💫✨").tokens.is_empty());
        assert_eq!(normalize("O'Brien").cleaned, "obrien");
        assert_eq!(normalize("Jean-Luc  Picard").tokens, vec!["jeanluc", "picard"]);
        assert_eq!(normalize("AlanLeong").tokens, vec!["alanleong"]);
        assert_eq!(normalize("  Jürgen\t Müller 42 ").cleaned, "jurgen muller");
        assert_eq!(normalize("swagboiboo504").tokens, vec!["swagboiboo"]);
    }

    #[test]
    fn first_match_is_leftmost() {
        let db = build_db(vec![entry("Sullivan")]);
        let n = normalize("CJ Sullivan");
        let m = first_match(&db, &n).unwrap();
        assert_eq!(m.index, 1);
        assert_eq!(m.token, "sullivan");

        let db = build_db(vec![entry("Anna"), entry("Maria")]);
        let n = normalize("Anna Maria");
        assert_eq!(first_match(&db, &n).unwrap().token, "anna");

        assert!(first_match(&db, &normalize("")).is_none());
        assert!(first_match(&db, &normalize("Bob")).is_none());
    }

    fn non_ascii(s: &str) -> usize {
        s.chars().filter(|c| !c.is_ascii()).count()
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,40}") {
            let n = normalize(&s);
            prop_assert!(n.cleaned.chars().all(|c| c.is_ascii_lowercase() || c == ' '));
            prop_assert!(!n.cleaned.contains("  "));
            prop_assert!(!n.cleaned.starts_with(' ') && !n.cleaned.ends_with(' '));
            prop_assert_eq!(normalize(&n.cleaned).cleaned, n.cleaned.clone());
            prop_assert_eq!(n.tokens.join(" "), n.cleaned);
        }

        #[test]
        fn transliterate_never_adds_non_ascii(s in "\\PC{0,40}") {
            prop_assert!(non_ascii(&transliterate(&s)) <= non_ascii(&s));
        }

        #[test]
        fn first_match_is_minimal_index(
            tokens in proptest::collection::vec("[a-d]{1,2}", 0..6),
            known in proptest::collection::vec("[a-d]{1,2}", 0..6),
        ) {
            let db = build_db(known.iter().map(|k| entry(k)).collect());
            let n = normalize(&tokens.join(" "));
            let brute = n.tokens.iter().position(|t| db.lookup(t).is_some());
            prop_assert_eq!(first_match(&db, &n).map(|m| m.index), brute);
        }
    }
}
