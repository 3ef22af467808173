use std::collections::BTreeMap;

use serde::Serialize;

use super::{DictEntry, GenderCategory, Source};
use crate::nameproc::normalize_token;

/// Record counts of one source inside a [`NameDb`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SourceStats {
    /// Primary records by category.
    pub by_category: BTreeMap<GenderCategory, usize>,
    /// Records indexed under a part of a compound name.
    pub derived: usize,
    /// All stored records of this source (primary and derived).
    pub total: usize,
}

/// Immutable lookup table from normalized name token to dictionary records.
#[derive(Debug, Clone, Default)]
pub struct NameDb {
    records: BTreeMap<String, Vec<DictEntry>>,
    source_stats: BTreeMap<Source, SourceStats>,
    skipped: usize,
}

impl PartialEq for NameDb {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records && self.source_stats == other.source_stats
    }
}

impl NameDb {
    pub fn lookup(&self, token: &str) -> Option<&[DictEntry]> {
        self.records.get(token).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn record_count(&self) -> usize {
        self.records.values().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[DictEntry])> {
        self.records.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.records.keys().map(String::as_str)
    }

    pub fn source_stats(&self) -> &BTreeMap<Source, SourceStats> {
        &self.source_stats
    }

    /// Entries dropped because their name had no letters left after
    /// normalization.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn has_source(&self, source: Source) -> bool {
        self.source_stats.get(&source).is_some_and(|s| s.total > 0)
    }
}

fn join_census(into: &mut DictEntry, other: DictEntry) {
    into.male += other.male;
    into.female += other.female;
    into.regions.extend(other.regions);
    into.category = match (into.male > 0.0, into.female > 0.0) {
        (true, true) => GenderCategory::Unisex,
        (true, false) => GenderCategory::Male,
        (false, true) => GenderCategory::Female,
        (false, false) => into.category,
    };
}

/// Index entries by normalized name.
///
/// Census records sharing a key are joined into one record carrying both
/// M(n) and F(n) (category `unisex` when both are positive). Records of other
/// sources keep their multiplicity. Names containing `+` are additionally
/// indexed under each part with `derived` set.
pub fn build_db(entries: Vec<DictEntry>) -> NameDb {
    let mut records: BTreeMap<String, Vec<DictEntry>> = BTreeMap::new();
    let mut skipped = 0;
    for mut entry in entries {
        let key = normalize_token(&entry.name);
        if key.is_empty() {
            skipped += 1;
            continue;
        }
        entry.derived = false;
        let slot = records.entry(key).or_default();
        if entry.source == Source::Census {
            if let Some(existing) = slot.iter_mut().find(|e| e.source == Source::Census) {
                join_census(existing, entry);
                continue;
            }
        }
        slot.push(entry);
    }

    let mut derived: Vec<(String, DictEntry)> = Vec::new();
    for records in records.values() {
        for e in records.iter().filter(|e| e.name.contains('+')) {
            let mut parts: Vec<String> = e.name.split('+').map(normalize_token).filter(|p| !p.is_empty()).collect();
            parts.dedup();
            if parts.len() < 2 {
                continue;
            }
            for part in parts {
                let mut d = e.clone();
                d.derived = true;
                derived.push((part, d));
            }
        }
    }
    for (key, d) in derived {
        records.entry(key).or_default().push(d);
    }

    let mut source_stats: BTreeMap<Source, SourceStats> = BTreeMap::new();
    for list in records.values_mut() {
        list.sort_by_key(|e| (e.derived, e.source));
        for e in list.iter() {
            let stats = source_stats.entry(e.source).or_default();
            stats.total += 1;
            if e.derived {
                stats.derived += 1;
            } else {
                *stats.by_category.entry(e.category).or_insert(0) += 1;
            }
        }
    }

    NameDb {
        records,
        source_stats,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_census;
    use crate::Gender;
    use proptest::prelude::*;

    fn nd(name: &str, category: GenderCategory, region: &str) -> DictEntry {
        let mut e = DictEntry::from_category(name, Source::Namdict, category);
        e.regions.push(crate::corpus::RegionUsage {
            region: region.into(),
            weight: 3,
        });
        e
    }

    #[test]
    fn empty_db() {
        let db = build_db(vec![]);
        assert!(db.is_empty());
        assert!(db.lookup("x").is_none());
    }

    #[test]
    fn namdict_duplicates_are_kept() {
        let db = build_db(vec![
            nd("Kim", GenderCategory::Male, "korea"),
            nd("Kim", GenderCategory::Female, "usa"),
        ]);
        assert_eq!(db.len(), 1);
        let recs = db.lookup("kim").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].category, GenderCategory::Male);
        assert_eq!(recs[1].category, GenderCategory::Female);
    }

    #[test]
    fn census_files_are_joined() {
        let male = "JOHN 3.271 6.589 2\nKIM 0.028 82.173 397\n";
        let female = "MARY 2.629 2.629 1\nKIM 0.178 46.592 118\n";
        let mut entries = parse_census(male.as_bytes(), Gender::Male).unwrap();
        entries.extend(parse_census(female.as_bytes(), Gender::Female).unwrap());
        let db = build_db(entries);
        assert_eq!(db.len(), 3);
        let kim = db.lookup("kim").unwrap();
        assert_eq!(kim.len(), 1);
        assert_eq!((kim[0].male, kim[0].female), (0.028, 0.178));
        assert_eq!(kim[0].category, GenderCategory::Unisex);
        let stats = &db.source_stats()[&Source::Census];
        assert_eq!(stats.by_category[&GenderCategory::Unisex], 1);
        assert_eq!(stats.total, 3);
        assert!(db.lookup("john").is_some());
    }

    #[test]
    fn compound_names_index_parts() {
        let db = build_db(vec![nd("Jun+Wei", GenderCategory::Male, "china")]);
        assert_eq!(db.lookup("junwei").unwrap().len(), 1);
        assert!(db.lookup("jun").unwrap()[0].derived);
        assert!(db.lookup("wei").unwrap()[0].derived);
        let stats = &db.source_stats()[&Source::Namdict];
        assert_eq!((stats.total, stats.derived), (3, 2));
    }

    #[test]
    fn letterless_names_are_skipped() {
        let db = build_db(vec![nd("李", GenderCategory::Male, "china")]);
        assert!(db.is_empty());
        assert_eq!(db.skipped(), 1);
    }

    proptest! {
        #[test]
        fn keys_are_normalized_and_stats_add_up(names in proptest::collection::vec("[A-Za-zÄÖÜäöü' +-]{1,10}", 0..40)) {
            let entries: Vec<_> = names.iter().map(|n| nd(n, GenderCategory::Unisex, "usa")).collect();
            let db = build_db(entries);
            for k in db.keys() {
                prop_assert_eq!(normalize_token(k), k);
            }
            let stored: usize = db.source_stats().values().map(|s| s.total).sum();
            prop_assert_eq!(stored, db.record_count());
            for s in db.source_stats().values() {
                prop_assert_eq!(s.total, s.derived + s.by_category.values().sum::<usize>());
            }
        }
    }
}
