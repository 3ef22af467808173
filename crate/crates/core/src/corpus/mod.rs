//! Name dictionaries: parsers for the Census and `nam_dict` files, the
//! canonical TSV interchange format, and the merged [`NameDb`].

mod census;
mod custom;
mod db;
mod namdict;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use census::parse_census;
pub use custom::{parse_custom, serialize_custom, write_custom, CUSTOM_HEADER};
pub use db::{build_db, NameDb, SourceStats};
pub use namdict::{parse_namdict, NamDictOptions, REGIONS};
pub use text::TextEncoding;

/// The seven gender categories of the `nam_dict` dictionary. Census names
/// use `Male`, `Female`, and `Unisex` for names present in both files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenderCategory {
    Male,
    MostlyMale,
    MaleIfFirstPart,
    Female,
    MostlyFemale,
    FemaleIfFirstPart,
    Unisex,
}

impl GenderCategory {
    pub const ALL: [GenderCategory; 7] = [
        GenderCategory::Male,
        GenderCategory::MostlyMale,
        GenderCategory::MaleIfFirstPart,
        GenderCategory::Female,
        GenderCategory::MostlyFemale,
        GenderCategory::FemaleIfFirstPart,
        GenderCategory::Unisex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GenderCategory::Male => "male",
            GenderCategory::MostlyMale => "mostly_male",
            GenderCategory::MaleIfFirstPart => "male_if_first_part",
            GenderCategory::Female => "female",
            GenderCategory::MostlyFemale => "mostly_female",
            GenderCategory::FemaleIfFirstPart => "female_if_first_part",
            GenderCategory::Unisex => "unisex",
        }
    }

    /// Gender code used in the `nam_dict` file.
    pub fn from_namdict_code(code: &str) -> Option<Self> {
        Some(match code {
            "M" => GenderCategory::Male,
            "1M" => GenderCategory::MaleIfFirstPart,
            "?M" => GenderCategory::MostlyMale,
            "F" => GenderCategory::Female,
            "1F" => GenderCategory::FemaleIfFirstPart,
            "?F" => GenderCategory::MostlyFemale,
            "?" => GenderCategory::Unisex,
            _ => return None,
        })
    }

    /// Binary gender after collapsing the mostly/if-first-part variants;
    /// `None` for unisex.
    pub fn binary(self) -> Option<crate::Gender> {
        use crate::Gender;
        match self {
            GenderCategory::Male | GenderCategory::MostlyMale | GenderCategory::MaleIfFirstPart => {
                Some(Gender::Male)
            }
            GenderCategory::Female
            | GenderCategory::MostlyFemale
            | GenderCategory::FemaleIfFirstPart => Some(Gender::Female),
            GenderCategory::Unisex => None,
        }
    }

    /// Nominal (male, female) usage weights for sources that carry only a
    /// category. They reproduce the categorical score under `(M-F)/(M+F)`.
    pub fn nominal_usage(self) -> (f64, f64) {
        match self {
            GenderCategory::Male | GenderCategory::MaleIfFirstPart => (1.0, 0.0),
            GenderCategory::MostlyMale => (0.9, 0.1),
            GenderCategory::Female | GenderCategory::FemaleIfFirstPart => (0.0, 1.0),
            GenderCategory::MostlyFemale => (0.1, 0.9),
            GenderCategory::Unisex => (0.5, 0.5),
        }
    }
}

impl fmt::Display for GenderCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GenderCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenderCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown gender category {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Census,
    Namdict,
    Custom,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Census => "census",
            Source::Namdict => "namdict",
            Source::Custom => "custom",
        }
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "census" => Ok(Source::Census),
            "namdict" => Ok(Source::Namdict),
            "custom" => Ok(Source::Custom),
            _ => Err(format!("unknown source {s:?}")),
        }
    }
}

/// Usage bin of a name in one region (`nam_dict` frequency digit, 1..=13).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionUsage {
    pub region: String,
    pub weight: u8,
}

/// One name record as read from a dictionary source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictEntry {
    pub name: String,
    pub source: Source,
    pub category: GenderCategory,
    /// M(n): male usage weight. Census: percent of the male population.
    pub male: f64,
    /// F(n): female usage weight.
    pub female: f64,
    pub regions: Vec<RegionUsage>,
    /// Set on records indexed under one part of a compound (`+`) name.
    #[serde(default)]
    pub derived: bool,
}

impl DictEntry {
    pub fn from_category(name: &str, source: Source, category: GenderCategory) -> Self {
        let (male, female) = category.nominal_usage();
        DictEntry {
            name: name.to_owned(),
            source,
            category,
            male,
            female,
            regions: Vec::new(),
            derived: false,
        }
    }
}

/// Per-category entry counts, as reported for a dictionary file.
pub fn category_counts(entries: &[DictEntry]) -> BTreeMap<GenderCategory, usize> {
    let mut counts = BTreeMap::new();
    for e in entries.iter().filter(|e| !e.derived) {
        *counts.entry(e.category).or_insert(0) += 1;
    }
    counts
}
