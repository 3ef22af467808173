use std::io::BufRead;

use super::text::{RawLines, TextEncoding};
use super::{DictEntry, GenderCategory, Source};
use crate::error::{Error, Result};
use crate::Gender;

/// Parse a 1990 Census first-name file (`dist.male.first` or
/// `dist.female.first`).
///
/// Each line holds `NAME FREQ CUMFREQ RANK`, whitespace separated. The
/// frequency (percent of the population of that gender) becomes the usage
/// weight of `gender`; the other weight is zero. Blank lines are skipped.
pub fn parse_census<R: BufRead>(reader: R, gender: Gender) -> Result<Vec<DictEntry>> {
    parse_census_with(reader, gender, TextEncoding::Ascii)
}

pub(crate) fn parse_census_with<R: BufRead>(
    reader: R,
    gender: Gender,
    encoding: TextEncoding,
) -> Result<Vec<DictEntry>> {
    let mut lines = RawLines::new(reader);
    let mut out = Vec::new();
    while let Some(raw) = lines.next_line()? {
        let number = raw.number;
        let text = encoding.decode(raw.bytes, raw.offset)?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            source_name: "census",
            line: number,
            message,
        };
        if fields.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        }
        let freq: f64 = fields[1]
            .parse()
            .map_err(|_| err(format!("non-numeric frequency {:?}", fields[1])))?;
        fields[2]
            .parse::<f64>()
            .map_err(|_| err(format!("non-numeric cumulative frequency {:?}", fields[2])))?;
        fields[3]
            .parse::<u32>()
            .map_err(|_| err(format!("non-numeric rank {:?}", fields[3])))?;
        if !freq.is_finite() || freq < 0.0 {
            return Err(err(format!("invalid frequency {freq}")));
        }
        let (category, male, female) = match gender {
            Gender::Male => (GenderCategory::Male, freq, 0.0),
            Gender::Female => (GenderCategory::Female, 0.0, freq),
        };
        out.push(DictEntry {
            name: fields[0].to_owned(),
            source: Source::Census,
            category,
            male,
            female,
            regions: Vec::new(),
            derived: false,
        });
    }
    Ok(out)
}
