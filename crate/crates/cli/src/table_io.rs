//! Text serialization of move tables.
//!
//! ```text
//! MIOV<TAB>1
//! runs<TAB>r<TAB>head<TAB>h<TAB>total<TAB>N
//! label<TAB>chr<TAB>len<TAB>ptr<TAB>off<TAB>succ     (r lines, memory order)
//! ```
//!
//! `chr` is one raw byte, so a tab or carriage return is a valid character.

use std::io::Write;

use miov_core::{MoveRow, MoveTable, RunId};
use thiserror::Error;

pub const MAGIC: &str = "MIOV";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Structure(#[from] miov_core::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

pub fn write_table(out: &mut impl Write, table: &MoveTable) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}\t{VERSION}")?;
    writeln!(out, "runs\t{}\thead\t{}\ttotal\t{}", table.n_runs(), table.head(), table.total())?;
    for (i, row) in table.rows().iter().enumerate() {
        write!(out, "{}\t", i + 1)?;
        out.write_all(&[row.chr])?;
        writeln!(out, "\t{}\t{}\t{}\t{}", row.len, row.ptr, row.off, row.succ)?;
    }
    Ok(())
}

pub fn serialize(table: &MoveTable) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 * table.n_runs() + 64);
    write_table(&mut out, table).expect("writing to a Vec cannot fail");
    out
}

fn fields(line: &[u8], n: usize, lineno: usize) -> Result<Vec<&str>, ParseError> {
    let text = std::str::from_utf8(line).map_err(|_| syntax(lineno, "not valid text"))?;
    let parts: Vec<&str> = text.split('\t').collect();
    if parts.len() != n {
        return Err(syntax(lineno, format!("expected {n} tab-separated fields, found {}", parts.len())));
    }
    Ok(parts)
}

fn number<T: std::str::FromStr>(field: &str, what: &str, lineno: usize) -> Result<T, ParseError> {
    field.parse().map_err(|_| syntax(lineno, format!("{what} `{field}` is not a number")))
}

fn parse_row(line: &[u8], lineno: usize, expected_label: usize) -> Result<MoveRow, ParseError> {
    let tab = line
        .iter()
        .position(|&b| b == b'\t')
        .ok_or_else(|| syntax(lineno, "missing fields"))?;
    let label_text = std::str::from_utf8(&line[..tab]).map_err(|_| syntax(lineno, "bad label"))?;
    let label: usize = number(label_text, "label", lineno)?;
    if label != expected_label {
        return Err(syntax(lineno, format!("label {label} out of order, expected {expected_label}")));
    }
    let rest = &line[tab + 1..];
    if rest.len() < 2 || rest[1] != b'\t' {
        return Err(syntax(lineno, "chr must be exactly one byte"));
    }
    let chr = rest[0];
    let f = fields(&rest[2..], 4, lineno)?;
    Ok(MoveRow {
        chr,
        len: number(f[0], "len", lineno)?,
        ptr: RunId(number(f[1], "ptr", lineno)?),
        off: number(f[2], "off", lineno)?,
        succ: RunId(number(f[3], "succ", lineno)?),
    })
}

pub fn parse(bytes: &[u8]) -> Result<MoveTable, ParseError> {
    let mut lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    if lines.last() == Some(&&b""[..]) {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(syntax(1, "empty input"));
    }
    let header = fields(lines[0], 2, 1)?;
    if header[0] != MAGIC {
        return Err(syntax(1, format!("expected `{MAGIC}` header")));
    }
    let version: u32 = number(header[1], "version", 1)?;
    if version != VERSION {
        return Err(syntax(1, format!("unsupported version {version}")));
    }
    let meta = lines.get(1).ok_or_else(|| syntax(2, "missing runs line"))?;
    let m = fields(meta, 6, 2)?;
    if m[0] != "runs" || m[2] != "head" || m[4] != "total" {
        return Err(syntax(2, "expected `runs <r> head <h> total <N>`"));
    }
    let runs: usize = number(m[1], "runs", 2)?;
    let head: u32 = number(m[3], "head", 2)?;
    let total: usize = number(m[5], "total", 2)?;
    if lines.len() - 2 != runs {
        return Err(syntax(2, format!("declares {runs} runs but {} rows follow", lines.len() - 2)));
    }
    let rows = lines[2..]
        .iter()
        .enumerate()
        .map(|(i, line)| parse_row(line, i + 3, i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MoveTable::new(rows, RunId(head), total)?)
}
