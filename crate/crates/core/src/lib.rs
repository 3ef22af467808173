//! Gender inference for personal names and social-media user records.
//!
//! The crate is organised along the processing chain:
//!
//! - [`corpus`] parses the 1990 US Census first-name files, the `nam_dict`
//!   dictionary and a canonical TSV interchange format into a [`NameDb`].
//! - [`nameproc`] folds raw self-reported names to ASCII tokens and finds the
//!   first token known to the database.
//! - [`namefeat`] extracts written-form characteristics (vowels, ending
//!   character, Bouba/Kiki letter classes) from a single token.
//! - [`stats`] holds the numerical core: IRLS logistic regression with Wald
//!   diagnostics, an RBF support vector machine trained by SMO with Platt
//!   probabilities, stratified cross-validation, grid search and the paired
//!   t-test.
//! - [`score`] turns dictionary records into gender scores in `[-1, 1]` and
//!   trains the NamChar name classifier used for unknown names.
//! - [`pipeline`] is the two-step threshold classifier over user records.
//! - [`evalm`] computes confusion tables, accuracy, recall, kappa and AUC.
//! - [`cli`] wires everything into the `namechar` command line tool.
//!
//! Sign conventions: gender scores are male-positive (`+1` male, `-1`
//! female); binary labels and confusion tables treat female as the positive
//! class.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod evalm;
pub mod namefeat;
pub mod nameproc;
pub mod pipeline;
pub mod score;
pub mod stats;

pub use corpus::{DictEntry, GenderCategory, NameDb, Source};
pub use error::{Error, Result};
pub use nameproc::{normalize, normalize_token, transliterate, NormalizedName};
pub use namefeat::NameFeatures;
pub use score::{GenderScore, NamCharModel, Provenance};

use serde::{Deserialize, Serialize};

/// Binary gender label. Female is the positive class wherever a boolean
/// or a 0/1 coding is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub fn is_female(self) -> bool {
        self == Gender::Female
    }

    pub fn from_female(female: bool) -> Self {
        if female {
            Gender::Female
        } else {
            Gender::Male
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
        }
    }
}

impl std::fmt::Display for Gender {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
