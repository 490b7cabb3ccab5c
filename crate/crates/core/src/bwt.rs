//! Multi-string BWT built from per-string cyclic rotations.
//!
//! Every string carries its own terminator and contributes `|s| + 1`
//! rotations. All rotations of all strings are sorted together, comparing
//! each one cyclically with the terminator as the smallest symbol; exact ties
//! fall back to `(string index, rotation start)`. Under this convention each
//! terminator row is ordered by the text that follows it, and every string
//! forms its own LF cycle.
//!
//! Rows are 1-based at every public interface.

use std::cmp::Ordering;

use crate::corpus::StringCollection;
use crate::error::{Error, Result};

/// Sort key of a byte: terminator first, then ascending byte value.
#[inline]
pub fn symbol_key(byte: u8, terminator: u8) -> u16 {
    if byte == terminator {
        0
    } else {
        byte as u16 + 1
    }
}

/// A rotation of `strings[string]` + terminator starting at `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rotation {
    pub string: usize,
    pub offset: usize,
}

/// Sorts every rotation of every string; position `i` of the result is BWT
/// row `i + 1`.
pub fn sort_rotations(collection: &StringCollection) -> Vec<Rotation> {
    let term = collection.terminator();
    let keyed: Vec<Vec<u16>> = collection
        .strings()
        .iter()
        .map(|s| {
            s.iter()
                .map(|&b| symbol_key(b, term))
                .chain(std::iter::once(0))
                .collect()
        })
        .collect();
    let max_len = collection.strings().iter().map(Vec::len).max().unwrap_or(0);
    let cap = 2 * max_len + 2;

    let mut rotations: Vec<Rotation> = keyed
        .iter()
        .enumerate()
        .flat_map(|(string, k)| (0..k.len()).map(move |offset| Rotation { string, offset }))
        .collect();

    let cyclic_cmp = |a: &Rotation, b: &Rotation| -> Ordering {
        let (sa, sb) = (&keyed[a.string], &keyed[b.string]);
        let (mut ia, mut ib) = (a.offset, b.offset);
        for _ in 0..cap {
            match sa[ia].cmp(&sb[ib]) {
                Ordering::Equal => {}
                ord => return ord,
            }
            ia += 1;
            if ia == sa.len() {
                ia = 0;
            }
            ib += 1;
            if ib == sb.len() {
                ib = 0;
            }
        }
        a.cmp(b)
    };
    rotations.sort_unstable_by(cyclic_cmp);
    rotations
}

/// The BWT column of a string collection plus the counts LF needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiBWT {
    chars: Vec<u8>,
    terminator: u8,
    n_strings: usize,
    counts: [usize; 256],
}

impl MultiBWT {
    /// Wraps an existing BWT column. The column is not checked for being a
    /// valid BWT; `n_strings` is the number of terminators in it.
    pub fn from_chars(chars: Vec<u8>, terminator: u8) -> Self {
        let mut counts = [0usize; 256];
        for &c in &chars {
            counts[c as usize] += 1;
        }
        let n_strings = counts[terminator as usize];
        Self { chars, terminator, n_strings, counts }
    }

    pub fn chars(&self) -> &[u8] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn terminator(&self) -> u8 {
        self.terminator
    }

    pub fn n_strings(&self) -> usize {
        self.n_strings
    }

    /// Symbols occurring in the BWT, in alphabet order.
    pub fn alphabet(&self) -> Vec<u8> {
        let mut symbols: Vec<u8> = (0..=255u8).filter(|&c| self.counts[c as usize] > 0).collect();
        symbols.sort_by_key(|&c| symbol_key(c, self.terminator));
        symbols
    }

    /// Number of BWT characters strictly smaller than `c` in alphabet order.
    pub fn c_array(&self, c: u8) -> usize {
        let key = symbol_key(c, self.terminator);
        (0..=255u8)
            .filter(|&d| symbol_key(d, self.terminator) < key)
            .map(|d| self.counts[d as usize])
            .sum()
    }

    /// LF by the definition: `C[BWT[row]] + rank(BWT[row], row)`, counting
    /// the rank directly over the prefix.
    pub fn naive_lf(&self, row: usize) -> Result<usize> {
        if row == 0 || row > self.len() {
            return Err(Error::RowOutOfRange { row, total: self.len() });
        }
        let c = self.chars[row - 1];
        let rank = self.chars[..row].iter().filter(|&&d| d == c).count();
        Ok(self.c_array(c) + rank)
    }

    /// LF of every row in one pass; entry `i` is `LF(i + 1)`.
    pub fn lf_all(&self) -> Vec<usize> {
        let mut next = [0usize; 256];
        for c in self.alphabet() {
            next[c as usize] = self.c_array(c);
        }
        self.chars
            .iter()
            .map(|&c| {
                next[c as usize] += 1;
                next[c as usize]
            })
            .collect()
    }

    /// Maximal runs of equal characters, in BWT order.
    pub fn run_length_encode(&self) -> Vec<(u8, usize)> {
        let mut runs: Vec<(u8, usize)> = Vec::new();
        for &c in &self.chars {
            match runs.last_mut() {
                Some((last, len)) if *last == c => *len += 1,
                _ => runs.push((c, 1)),
            }
        }
        runs
    }
}

/// Builds the BWT of `collection` by sorting rotations.
pub fn build_multibwt(collection: &StringCollection) -> MultiBWT {
    let rotations = sort_rotations(collection);
    bwt_from_rotations(collection, &rotations)
}

/// Reads the BWT column off an already sorted rotation list.
pub fn bwt_from_rotations(collection: &StringCollection, rotations: &[Rotation]) -> MultiBWT {
    let term = collection.terminator();
    let strings = collection.strings();
    let chars = rotations
        .iter()
        .map(|r| {
            let s = &strings[r.string];
            // last character of the rotation is the one before `offset`
            if r.offset == 0 {
                term
            } else {
                s[r.offset - 1]
            }
        })
        .collect();
    MultiBWT::from_chars(chars, term)
}
