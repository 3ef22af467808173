//! Written-form characteristics of a single name token.
//!
//! All counts are letter-level proxies: vowels are `a e i o u` (`y` is always
//! a consonant), Bouba letters are `b l m n` / `u o`, Kiki letters are
//! `k p t` / `i e`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const VOWELS: &[u8] = b"aeiou";
const BOUBA_CONSONANTS: &[u8] = b"blmn";
const BOUBA_VOWELS: &[u8] = b"uo";
const KIKI_CONSONANTS: &[u8] = b"kpt";
const KIKI_VOWELS: &[u8] = b"ie";
const BRIGHT_VOWELS: &[u8] = b"ei";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NameFeatures {
    pub n_consonants: u32,
    pub n_vowels: u32,
    pub n_syllables: u32,
    /// 1 when the last letter is a vowel.
    pub ends_in_vowel: u32,
    pub n_bouba_consonants: u32,
    pub n_bouba_vowels: u32,
    pub n_kiki_consonants: u32,
    pub n_kiki_vowels: u32,
    /// Count of front vowels. Never used as a predictor.
    pub vowel_brightness: u32,
}

/// Model inputs derived from [`NameFeatures`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    Consonants,
    Vowels,
    Syllables,
    EndsInVowel,
    BoubaConsonants,
    BoubaVowels,
    KikiConsonants,
    KikiVowels,
    VowelBrightness,
}

impl Predictor {
    pub const ALL: [Predictor; 9] = [
        Predictor::Consonants,
        Predictor::Vowels,
        Predictor::Syllables,
        Predictor::EndsInVowel,
        Predictor::BoubaConsonants,
        Predictor::BoubaVowels,
        Predictor::KikiConsonants,
        Predictor::KikiVowels,
        Predictor::VowelBrightness,
    ];

    /// Predictor set of the NamChar classifier, in model column order.
    pub const NAMCHAR: [Predictor; 6] = [
        Predictor::Vowels,
        Predictor::EndsInVowel,
        Predictor::BoubaConsonants,
        Predictor::BoubaVowels,
        Predictor::KikiConsonants,
        Predictor::KikiVowels,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Predictor::Consonants => "consonants",
            Predictor::Vowels => "vowels",
            Predictor::Syllables => "syllables",
            Predictor::EndsInVowel => "ends_in_vowel",
            Predictor::BoubaConsonants => "bouba_consonants",
            Predictor::BoubaVowels => "bouba_vowels",
            Predictor::KikiConsonants => "kiki_consonants",
            Predictor::KikiVowels => "kiki_vowels",
            Predictor::VowelBrightness => "vowel_brightness",
        }
    }
}

impl NameFeatures {
    pub fn get(&self, p: Predictor) -> u32 {
        match p {
            Predictor::Consonants => self.n_consonants,
            Predictor::Vowels => self.n_vowels,
            Predictor::Syllables => self.n_syllables,
            Predictor::EndsInVowel => self.ends_in_vowel,
            Predictor::BoubaConsonants => self.n_bouba_consonants,
            Predictor::BoubaVowels => self.n_bouba_vowels,
            Predictor::KikiConsonants => self.n_kiki_consonants,
            Predictor::KikiVowels => self.n_kiki_vowels,
            Predictor::VowelBrightness => self.vowel_brightness,
        }
    }

    pub fn vector(&self, predictors: &[Predictor]) -> Vec<f64> {
        predictors.iter().map(|&p| self.get(p) as f64).collect()
    }
}

fn is_vowel(b: u8) -> bool {
    VOWELS.contains(&b)
}

fn check_token(token: &str) -> Result<&[u8]> {
    if token.is_empty() {
        return Err(Error::EmptyToken);
    }
    if !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(Error::InvalidToken(token.to_owned()));
    }
    Ok(token.as_bytes())
}

pub fn extract(token: &str) -> Result<NameFeatures> {
    let bytes = check_token(token)?;
    let count = |set: &[u8]| bytes.iter().filter(|b| set.contains(b)).count() as u32;
    let n_vowels = count(VOWELS);
    Ok(NameFeatures {
        n_consonants: bytes.len() as u32 - n_vowels,
        n_vowels,
        n_syllables: syllables(bytes),
        ends_in_vowel: u32::from(is_vowel(bytes[bytes.len() - 1])),
        n_bouba_consonants: count(BOUBA_CONSONANTS),
        n_bouba_vowels: count(BOUBA_VOWELS),
        n_kiki_consonants: count(KIKI_CONSONANTS),
        n_kiki_vowels: count(KIKI_VOWELS),
        vowel_brightness: count(BRIGHT_VOWELS),
    })
}

/// Vowel-run syllable count with a silent final `e`, floored at 1.
pub fn count_syllables(token: &str) -> u32 {
    syllables(token.as_bytes())
}

fn syllables(bytes: &[u8]) -> u32 {
    let mut runs = 0u32;
    let mut prev_vowel = false;
    for &b in bytes {
        let v = is_vowel(b);
        if v && !prev_vowel {
            runs += 1;
        }
        prev_vowel = v;
    }
    let n = bytes.len();
    if runs > 1 && n >= 2 && bytes[n - 1] == b'e' && !is_vowel(bytes[n - 2]) {
        runs -= 1;
    }
    runs.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn anna() {
        let f = extract("anna").unwrap();
        assert_eq!((f.n_vowels, f.n_consonants, f.ends_in_vowel), (2, 2, 1));
        assert_eq!((f.n_bouba_consonants, f.n_kiki_consonants), (2, 0));
        assert_eq!(f.n_syllables, 2);
    }

    #[test]
    fn kate() {
        let f = extract("kate").unwrap();
        assert_eq!(f.n_kiki_consonants, 2);
        assert_eq!(f.n_kiki_vowels, 1);
        assert_eq!(f.ends_in_vowel, 1);
        assert_eq!(f.n_syllables, 1);
    }

    #[test]
    fn y_is_a_consonant() {
        let f = extract("yvy").unwrap();
        assert_eq!((f.n_vowels, f.n_consonants, f.ends_in_vowel), (0, 3, 0));
    }

    #[test]
    fn bad_tokens() {
        assert!(matches!(extract(""), Err(Error::EmptyToken)));
        assert!(matches!(extract("Anna"), Err(Error::InvalidToken(_))));
        assert!(matches!(extract("an na"), Err(Error::InvalidToken(_))));
    }

    #[test]
    fn syllable_rules() {
        assert_eq!(count_syllables("anna"), 2);
        assert_eq!(count_syllables("kate"), 1);
        assert_eq!(count_syllables("bcd"), 1);
        assert_eq!(count_syllables("e"), 1);
        assert_eq!(count_syllables("jolee"), 2);
    }

    #[test]
    fn common_english_names() {
        // Hand syllabification of common given names. The heuristic agrees
        // on all of them except the ones listed in `misses`.
        let list = [
            ("james", 1), ("john", 1), ("robert", 2), ("michael", 2), ("william", 3),
            ("david", 2), ("richard", 2), ("joseph", 2), ("thomas", 2), ("charles", 1),
            ("mary", 2), ("patricia", 4), ("jennifer", 3), ("linda", 2), ("elizabeth", 4),
            ("barbara", 3), ("susan", 2), ("jessica", 3), ("sarah", 2), ("karen", 2),
            ("daniel", 3), ("matthew", 2), ("anthony", 3), ("mark", 1), ("donald", 2),
            ("steven", 2), ("paul", 1), ("andrew", 2), ("joshua", 3), ("kenneth", 2),
            ("nancy", 2), ("betty", 2), ("margaret", 3), ("sandra", 2), ("ashley", 2),
            ("kimberly", 3), ("emily", 3), ("donna", 2), ("michelle", 2), ("dorothy", 3),
            ("kevin", 2), ("brian", 2), ("george", 1), ("edward", 2), ("ronald", 2),
            ("carol", 2), ("amanda", 3), ("melissa", 3), ("deborah", 3), ("stephanie", 3),
        ];
        let misses = [
            "william", "mary", "patricia", "daniel", "brian", "kimberly", "dorothy", "emily", "anthony",
            "nancy", "betty", "charles", "james", "joshua",
        ];
        let mut agree = 0;
        for (name, expected) in list {
            let got = count_syllables(name);
            if got == expected {
                agree += 1;
                assert!(!misses.contains(&name), "{name} unexpectedly agrees");
            } else {
                assert!(misses.contains(&name), "{name}: got {got}, expected {expected}");
            }
        }
        assert_eq!(agree, list.len() - misses.len());
    }

    #[test]
    fn namchar_predictors_exclude_the_dropped_variables() {
        for p in [Predictor::VowelBrightness, Predictor::Consonants, Predictor::Syllables] {
            assert!(!Predictor::NAMCHAR.contains(&p));
        }
    }

    proptest! {
        #[test]
        fn count_identities(token in "[a-z]{1,20}") {
            let f = extract(&token).unwrap();
            prop_assert_eq!(f.n_consonants + f.n_vowels, token.len() as u32);
            prop_assert!(f.n_bouba_consonants <= f.n_consonants);
            prop_assert!(f.n_kiki_consonants <= f.n_consonants);
            prop_assert!(f.n_bouba_vowels <= f.n_vowels);
            prop_assert!(f.n_kiki_vowels <= f.n_vowels);
            prop_assert!(f.n_syllables >= 1);
            prop_assert!(f.n_syllables <= f.n_vowels.max(1));
            prop_assert_eq!(f, extract(&token).unwrap());
        }
    }
}
