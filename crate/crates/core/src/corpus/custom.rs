//! Canonical TSV interchange format.
//!
//! ```text
//! name<TAB>category<TAB>regions[<TAB>male<TAB>female<TAB>source]
//! ```
//!
//! UTF-8, first line is the header. `regions` is a comma-separated list of
//! `region:weight` pairs and may be empty. The three trailing columns are
//! optional; without them the usage weights follow from the category and
//! the source is `custom`. [`serialize_custom`] always writes all six
//! columns so that a database survives a round trip unchanged.

use std::io::{BufRead, Write};

use super::text::{RawLines, TextEncoding};
use super::{DictEntry, GenderCategory, NameDb, RegionUsage, Source};
use crate::error::{Error, Result};

pub const CUSTOM_HEADER: &str = "name\tcategory\tregions";
const EXTENDED_HEADER: &str = "name\tcategory\tregions\tmale\tfemale\tsource";

pub fn parse_custom<R: BufRead>(reader: R) -> Result<Vec<DictEntry>> {
    let mut lines = RawLines::new(reader);
    let mut out = Vec::new();
    while let Some(raw) = lines.next_line()? {
        let number = raw.number;
        let text = TextEncoding::Utf8.decode(raw.bytes, raw.offset)?;
        let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
        if text.trim().is_empty() || text.starts_with('#') {
            continue;
        }
        if number == 1 && text.starts_with(CUSTOM_HEADER) {
            continue;
        }
        out.push(parse_record(text, number)?);
    }
    Ok(out)
}

fn parse_record(text: &str, line: usize) -> Result<DictEntry> {
    let err = |message: String| Error::Parse {
        source_name: "tsv",
        line,
        message,
    };
    let fields: Vec<&str> = text.split('\t').collect();
    if fields.len() < 2 || fields.len() > 6 || fields.len() == 4 || fields.len() == 5 {
        return Err(err(format!("expected 2, 3 or 6 tab-separated fields, found {}", fields.len())));
    }
    let name = fields[0].trim();
    if name.is_empty() {
        return Err(err("empty name".into()));
    }
    let category: GenderCategory = fields[1].trim().parse().map_err(err)?;
    let mut entry = DictEntry::from_category(name, Source::Custom, category);
    if let Some(regions) = fields.get(2) {
        for pair in regions.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (region, weight) = pair
                .rsplit_once(':')
                .ok_or_else(|| err(format!("region entry {pair:?} is not region:weight")))?;
            let weight: u8 = weight
                .parse()
                .map_err(|_| err(format!("invalid region weight {weight:?}")))?;
            entry.regions.push(RegionUsage {
                region: region.to_owned(),
                weight,
            });
        }
    }
    if fields.len() == 6 {
        let weight = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| err(format!("invalid usage weight {s:?}")))?;
            if v.is_finite() && v >= 0.0 {
                Ok(v)
            } else {
                Err(err(format!("usage weight {s:?} out of range")))
            }
        };
        entry.male = weight(fields[3])?;
        entry.female = weight(fields[4])?;
        entry.source = fields[5].trim().parse().map_err(err)?;
    }
    Ok(entry)
}

/// Write every primary (non-derived) record of `db` in key order.
pub fn write_custom<W: Write>(db: &NameDb, mut out: W) -> Result<()> {
    writeln!(out, "{EXTENDED_HEADER}")?;
    for (_, records) in db.iter() {
        for e in records.iter().filter(|e| !e.derived) {
            let regions: Vec<String> = e.regions.iter().map(|r| format!("{}:{}", r.region, r.weight)).collect();
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                e.name,
                e.category,
                regions.join(","),
                e.male,
                e.female,
                e.source.as_str()
            )?;
        }
    }
    Ok(())
}

pub fn serialize_custom(db: &NameDb) -> String {
    let mut buf = Vec::new();
    write_custom(db, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("names are valid UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_db, parse_census};
    use crate::Gender;
    use proptest::prelude::*;

    #[test]
    fn minimal_line_parses() {
        let entries = parse_custom("name\tcategory\tregions\nKim\tunisex\t\n".as_bytes()).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].name, "Kim");
        assert_eq!(entries[0].category, GenderCategory::Unisex);
        assert_eq!(entries[0].source, Source::Custom);
        assert!(entries[0].regions.is_empty());
    }

    #[test]
    fn regions_and_errors() {
        let e = parse_custom("Anna\tfemale\tgermany:7,usa:3\n".as_bytes()).unwrap();
        assert_eq!(e[0].regions.len(), 2);
        assert_eq!(e[0].regions[1], RegionUsage { region: "usa".into(), weight: 3 });
        assert!(parse_custom("Anna\twoman\t\n".as_bytes()).is_err());
        assert!(parse_custom("Anna\tfemale\tgermany\n".as_bytes()).is_err());
        assert!(matches!(
            parse_custom("A\tmale\t\nB\n".as_bytes()).unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
    }

    #[test]
    fn census_round_trip_keeps_weights() {
        let mut entries = parse_census("KIM 0.028 82.173 397\n".as_bytes(), Gender::Male).unwrap();
        entries.extend(parse_census("KIM 0.178 46.592 118\n".as_bytes(), Gender::Female).unwrap());
        let db = build_db(entries);
        let again = build_db(parse_custom(serialize_custom(&db).as_bytes()).unwrap());
        assert_eq!(db, again);
        let kim = &again.lookup("kim").unwrap()[0];
        assert_eq!((kim.male, kim.female), (0.028, 0.178));
    }

    fn arb_entry() -> impl Strategy<Value = DictEntry> {
        (
            "[A-Za-zäöüé]{1,8}(\\+[A-Z][a-z]{1,4})?",
            0usize..7,
            proptest::collection::vec((0usize..55, 1u8..=13), 0..3),
            proptest::option::of((0.0f64..10.0, 0.0f64..10.0)),
            0usize..3,
        )
            .prop_map(|(name, cat, regions, usage, src)| {
                let category = GenderCategory::ALL[cat];
                let source = [Source::Census, Source::Namdict, Source::Custom][src];
                let mut e = DictEntry::from_category(&name, source, category);
                if let Some((m, f)) = usage {
                    e.male = m;
                    e.female = f;
                }
                e.regions = regions
                    .into_iter()
                    .map(|(r, weight)| RegionUsage {
                        region: crate::corpus::REGIONS[r].to_owned(),
                        weight,
                    })
                    .collect();
                e
            })
    }

    proptest! {
        #[test]
        fn canonical_format_is_lossless(entries in proptest::collection::vec(arb_entry(), 0..30)) {
            let db = build_db(entries);
            let text = serialize_custom(&db);
            let again = build_db(parse_custom(text.as_bytes()).unwrap());
            prop_assert_eq!(&db, &again);
            prop_assert_eq!(serialize_custom(&again), text);
        }
    }
}
