use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Character encoding of a dictionary file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextEncoding {
    Ascii,
    /// ISO-8859-1 with the Windows-1252 printable extensions in 0x80..0x9F.
    Latin1,
    Utf8,
}

impl TextEncoding {
    pub fn name(self) -> &'static str {
        match self {
            TextEncoding::Ascii => "ascii",
            TextEncoding::Latin1 => "latin-1",
            TextEncoding::Utf8 => "utf-8",
        }
    }

    /// Decode one line. `offset` is the byte offset of the line in the
    /// stream and is used for error reporting.
    pub fn decode(self, bytes: &[u8], offset: u64) -> Result<String> {
        match self {
            TextEncoding::Ascii => match bytes.iter().position(|b| !b.is_ascii()) {
                Some(i) => Err(Error::Encoding {
                    offset: offset + i as u64,
                    byte: bytes[i],
                    encoding: self.name(),
                }),
                None => Ok(String::from_utf8(bytes.to_vec()).expect("ascii is utf-8")),
            },
            TextEncoding::Latin1 => {
                // Bytes left undefined by Windows-1252.
                if let Some(i) = bytes
                    .iter()
                    .position(|b| matches!(b, 0x81 | 0x8D | 0x8F | 0x90 | 0x9D))
                {
                    return Err(Error::Encoding {
                        offset: offset + i as u64,
                        byte: bytes[i],
                        encoding: self.name(),
                    });
                }
                let (text, _) = encoding_rs::WINDOWS_1252.decode_without_bom_handling(bytes);
                Ok(text.into_owned())
            }
            TextEncoding::Utf8 => match std::str::from_utf8(bytes) {
                Ok(s) => Ok(s.to_owned()),
                Err(e) => {
                    let i = e.valid_up_to();
                    Err(Error::Encoding {
                        offset: offset + i as u64,
                        byte: bytes[i],
                        encoding: self.name(),
                    })
                }
            },
        }
    }
}

impl FromStr for TextEncoding {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "ascii" | "us-ascii" => Ok(TextEncoding::Ascii),
            "latin1" | "latin-1" | "iso8859-1" | "iso-8859-1" | "cp1252" | "windows-1252" => {
                Ok(TextEncoding::Latin1)
            }
            "utf8" | "utf-8" => Ok(TextEncoding::Utf8),
            other => Err(format!("unsupported encoding {other:?}")),
        }
    }
}

/// Raw line iterator that strips `\n` / `\r\n` and tracks line numbers and
/// byte offsets.
pub(crate) struct RawLines<R> {
    reader: R,
    buf: Vec<u8>,
    line: usize,
    offset: u64,
}

pub(crate) struct RawLine<'a> {
    pub number: usize,
    pub offset: u64,
    pub bytes: &'a [u8],
}

impl<R: BufRead> RawLines<R> {
    pub fn new(reader: R) -> Self {
        RawLines {
            reader,
            buf: Vec::new(),
            line: 0,
            offset: 0,
        }
    }

    pub fn next_line(&mut self) -> Result<Option<RawLine<'_>>> {
        self.buf.clear();
        let n = self.reader.read_until(b'\n', &mut self.buf)?;
        if n == 0 {
            return Ok(None);
        }
        let offset = self.offset;
        self.offset += n as u64;
        self.line += 1;
        let mut end = self.buf.len();
        while end > 0 && matches!(self.buf[end - 1], b'\n' | b'\r') {
            end -= 1;
        }
        Ok(Some(RawLine {
            number: self.line,
            offset,
            bytes: &self.buf[..end],
        }))
    }
}
