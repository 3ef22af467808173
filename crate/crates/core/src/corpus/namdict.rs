//! Parser for Jörg Michael's `nam_dict.txt` (version 1.2, 2008).
//!
//! Layout of a data line, by character column:
//!
//! ```text
//! 0..2    gender code: M 1M ?M F 1F ?F ?
//! 3..29   name, '+' joins the parts of Arabic, Chinese and Korean names
//! 29      sort marker: '+' marks duplicate lines sorted with expanded umlauts
//! 30..85  one hex usage digit (1..=D) per region, blank when unused
//! ```
//!
//! Lines starting with `#` are comments, `=` lines list equivalent
//! spellings and carry no gender. The Latin-1 edition writes characters
//! outside ISO-8859-1 as bracketed sequences such as `<s^>`; these are
//! decoded back to Unicode.

use std::io::BufRead;

use super::text::{RawLines, TextEncoding};
use super::{DictEntry, GenderCategory, RegionUsage, Source};
use crate::error::{Error, Result};

/// Region identifiers in column order.
pub const REGIONS: [&str; 55] = [
    "great_britain",
    "ireland",
    "usa",
    "italy",
    "malta",
    "portugal",
    "spain",
    "france",
    "belgium",
    "luxembourg",
    "netherlands",
    "east_frisia",
    "germany",
    "austria",
    "switzerland",
    "iceland",
    "denmark",
    "norway",
    "sweden",
    "finland",
    "estonia",
    "latvia",
    "lithuania",
    "poland",
    "czech_republic",
    "slovakia",
    "hungary",
    "romania",
    "bulgaria",
    "bosnia_herzegovina",
    "croatia",
    "kosovo",
    "macedonia",
    "montenegro",
    "serbia",
    "slovenia",
    "albania",
    "greece",
    "russia",
    "belarus",
    "moldova",
    "ukraine",
    "armenia",
    "azerbaijan",
    "georgia",
    "central_asia",
    "turkey",
    "arabia_persia",
    "israel",
    "china",
    "india_sri_lanka",
    "japan",
    "korea",
    "vietnam",
    "other",
];

const NAME_START: usize = 3;
const MARKER_COL: usize = 29;
const REGION_START: usize = 30;

/// Bracketed sequences used by the Latin-1 edition for characters outside
/// ISO-8859-1.
const ESCAPES: &[(&str, char)] = &[
    ("<A/>", 'Ā'),
    ("<a/>", 'ā'),
    ("<Â>", 'Ă'),
    ("<â>", 'ă'),
    ("<A,>", 'Ą'),
    ("<a,>", 'ą'),
    ("<C´>", 'Ć'),
    ("<c´>", 'ć'),
    ("<C^>", 'Č'),
    ("<CH>", 'Č'),
    ("<c^>", 'č'),
    ("<ch>", 'č'),
    ("<d´>", 'ď'),
    ("<Ð>", 'Đ'),
    ("<DJ>", 'Đ'),
    ("<ð>", 'đ'),
    ("<dj>", 'đ'),
    ("<E/>", 'Ē'),
    ("<e/>", 'ē'),
    ("<E°>", 'Ė'),
    ("<e°>", 'ė'),
    ("<E,>", 'Ę'),
    ("<e,>", 'ę'),
    ("<Ê>", 'Ě'),
    ("<ê>", 'ě'),
    ("<G^>", 'Ğ'),
    ("<g^>", 'ğ'),
    ("<G,>", 'Ģ'),
    ("<g´>", 'ģ'),
    ("<I/>", 'Ī'),
    ("<i/>", 'ī'),
    ("<I°>", 'İ'),
    ("<i>", 'ı'),
    ("<IJ>", 'Ĳ'),
    ("<ij>", 'ĳ'),
    ("<K,>", 'Ķ'),
    ("<k,>", 'ķ'),
    ("<L,>", 'Ļ'),
    ("<l,>", 'ļ'),
    ("<L´>", 'Ľ'),
    ("<l´>", 'ľ'),
    ("<L/>", 'Ł'),
    ("<l/>", 'ł'),
    ("<N,>", 'Ņ'),
    ("<n,>", 'ņ'),
    ("<N^>", 'Ň'),
    ("<n^>", 'ň'),
    ("<Ö>", 'Ő'),
    ("<ö>", 'ő'),
    ("<OE>", 'Œ'),
    ("<oe>", 'œ'),
    ("<R^>", 'Ř'),
    ("<r^>", 'ř'),
    ("<S,>", 'Ş'),
    ("<s,>", 'ş'),
    ("<S^>", 'Š'),
    ("<SCH>", 'Š'),
    ("<SH>", 'Š'),
    ("<s^>", 'š'),
    ("<sch>", 'š'),
    ("<sh>", 'š'),
    ("<T,>", 'Ţ'),
    ("<t,>", 'ţ'),
    ("<t´>", 'ť'),
    ("<U/>", 'Ū'),
    ("<u/>", 'ū'),
    ("<U°>", 'Ů'),
    ("<u°>", 'ů'),
    ("<U,>", 'Ų'),
    ("<u,>", 'ų'),
    ("<Z°>", 'Ż'),
    ("<z°>", 'ż'),
    ("<Z^>", 'Ž'),
    ("<z^>", 'ž'),
    ("<ß>", 'ẞ'),
];

fn decode_escapes(name: &str) -> String {
    if !name.contains('<') {
        return name.to_owned();
    }
    let mut out = String::with_capacity(name.len());
    let mut rest = name;
    while let Some(start) = rest.find('<') {
        out.push_str(&rest[..start]);
        let tail = &rest[start..];
        match ESCAPES.iter().find(|(seq, _)| tail.starts_with(seq)) {
            Some((seq, c)) => {
                out.push(*c);
                rest = &tail[seq.len()..];
            }
            None => {
                out.push('<');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NamDictOptions {
    /// Forced encoding. `None` honours the file's `char set =` header line
    /// and falls back to Latin-1.
    pub encoding: Option<TextEncoding>,
    /// Keep the duplicate lines marked with `+` in the sort column.
    pub include_expanded_duplicates: bool,
}

/// Parse the `nam_dict` text format.
pub fn parse_namdict<R: BufRead>(reader: R, options: NamDictOptions) -> Result<Vec<DictEntry>> {
    let mut encoding = options.encoding.unwrap_or(TextEncoding::Latin1);
    let mut lines = RawLines::new(reader);
    let mut out = Vec::new();
    while let Some(raw) = lines.next_line()? {
        if raw.bytes.first() == Some(&b'#') {
            if options.encoding.is_none() {
                let text = String::from_utf8_lossy(raw.bytes);
                if let Some(declared) = declared_charset(&text) {
                    encoding = declared;
                }
            }
            continue;
        }
        if raw.bytes.iter().all(|b| b.is_ascii_whitespace()) || raw.bytes.first() == Some(&b'=') {
            continue;
        }
        let number = raw.number;
        let text = encoding.decode(raw.bytes, raw.offset)?;
        if let Some(entry) = parse_line(&text, number, options)? {
            out.push(entry);
        }
    }
    Ok(out)
}

fn declared_charset(comment: &str) -> Option<TextEncoding> {
    let body = comment.trim_start_matches('#').trim();
    let value = body.strip_prefix("char set")?.trim_start().strip_prefix('=')?;
    let value = value.split_whitespace().next()?;
    value.parse().ok()
}

fn parse_line(text: &str, line: usize, options: NamDictOptions) -> Result<Option<DictEntry>> {
    let chars: Vec<char> = text.chars().collect();
    let slice = |from: usize, to: usize| -> String {
        chars[from.min(chars.len())..to.min(chars.len())].iter().collect()
    };
    let code = slice(0, 2);
    let code = code.trim();
    let category = GenderCategory::from_namdict_code(code).ok_or_else(|| Error::UnknownGenderCode {
        line,
        code: code.to_owned(),
    })?;
    if chars.get(MARKER_COL) == Some(&'+') && !options.include_expanded_duplicates {
        return Ok(None);
    }
    let name = decode_escapes(slice(NAME_START, MARKER_COL).trim());
    if name.is_empty() {
        return Err(Error::Parse {
            source_name: "nam_dict",
            line,
            message: "empty name field".into(),
        });
    }
    let mut regions = Vec::new();
    for (i, region) in REGIONS.iter().enumerate() {
        let Some(&c) = chars.get(REGION_START + i) else { break };
        if c == ' ' {
            continue;
        }
        let weight = c.to_digit(16).filter(|d| *d > 0).ok_or_else(|| Error::Parse {
            source_name: "nam_dict",
            line,
            message: format!("invalid frequency digit {c:?} for region {region}"),
        })?;
        regions.push(RegionUsage {
            region: (*region).to_owned(),
            weight: weight as u8,
        });
    }
    let mut entry = DictEntry::from_category(&name, Source::Namdict, category);
    entry.regions = regions;
    Ok(Some(entry))
}
