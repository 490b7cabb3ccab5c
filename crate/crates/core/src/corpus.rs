//! String collections read from plain-text or FASTA input.
//!
//! Payloads never carry the terminator; it is appended logically when the
//! BWT is built.

use crate::error::{Error, Result};

pub const DEFAULT_TERMINATOR: u8 = b'$';

/// An ordered, non-empty multiset of byte strings sharing one terminator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringCollection {
    strings: Vec<Vec<u8>>,
    terminator: u8,
}

impl StringCollection {
    pub fn new(strings: Vec<Vec<u8>>, terminator: u8) -> Result<Self> {
        if strings.is_empty() {
            return Err(Error::EmptyCollection);
        }
        for (index, s) in strings.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::EmptyPayload { index });
            }
            if s.contains(&terminator) {
                return Err(Error::TerminatorInPayload { line: index + 1, terminator });
            }
        }
        Ok(Self { strings, terminator })
    }

    pub fn strings(&self) -> &[Vec<u8>] {
        &self.strings
    }

    pub fn terminator(&self) -> u8 {
        self.terminator
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Number of BWT rows: every payload plus its terminator.
    pub fn total_len(&self) -> usize {
        self.strings.iter().map(|s| s.len() + 1).sum()
    }

    /// Payloads sorted, for multiset comparisons.
    pub fn sorted(&self) -> Vec<Vec<u8>> {
        let mut v = self.strings.clone();
        v.sort();
        v
    }

    /// One payload per line.
    pub fn to_plain(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.total_len());
        for s in &self.strings {
            out.extend_from_slice(s);
            out.push(b'\n');
        }
        out
    }
}

fn strip_cr(line: &[u8]) -> &[u8] {
    line.strip_suffix(b"\r").unwrap_or(line)
}

/// One payload per non-empty line. Lines are raw bytes, `\r\n` is accepted.
pub fn load_plain(text: &[u8], terminator: u8) -> Result<StringCollection> {
    let mut strings = Vec::new();
    for (i, line) in text.split(|&b| b == b'\n').enumerate() {
        let line = strip_cr(line);
        if line.is_empty() {
            continue;
        }
        if line.contains(&terminator) {
            return Err(Error::TerminatorInPayload { line: i + 1, terminator });
        }
        strings.push(line.to_vec());
    }
    if strings.is_empty() {
        return Err(Error::EmptyCollection);
    }
    Ok(StringCollection { strings, terminator })
}

/// One payload per FASTA record; headers are discarded and wrapped sequence
/// lines are concatenated.
pub fn load_fasta(text: &[u8], terminator: u8) -> Result<StringCollection> {
    let mut strings: Vec<Vec<u8>> = Vec::new();
    // line number of the current record's header
    let mut header_line = 0;
    for (i, line) in text.split(|&b| b == b'\n').enumerate() {
        let line = strip_cr(line);
        if line.first() == Some(&b'>') {
            if let Some(prev) = strings.last() {
                if prev.is_empty() {
                    return Err(Error::EmptyRecord { record: strings.len(), line: header_line });
                }
            }
            strings.push(Vec::new());
            header_line = i + 1;
            continue;
        }
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let Some(current) = strings.last_mut() else {
            return Err(Error::DataBeforeHeader { line: i + 1 });
        };
        if line.contains(&terminator) {
            return Err(Error::TerminatorInPayload { line: i + 1, terminator });
        }
        current.extend_from_slice(line);
    }
    match strings.last() {
        None => Err(Error::EmptyCollection),
        Some(last) if last.is_empty() => {
            Err(Error::EmptyRecord { record: strings.len(), line: header_line })
        }
        Some(_) => Ok(StringCollection { strings, terminator }),
    }
}
