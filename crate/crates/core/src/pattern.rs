//! The textual occupancy format shared by room-states, suite-states and shadows.
//!
//! A pattern is a run of cells, one per room. A cell is either a single digit
//! `0`-`9` or a bracketed count such as `[12]`. An optional `@k` suffix places
//! the first character at room `k` (default `0`). Emission writes counts of ten
//! or more in brackets so that every emitted pattern parses back to itself.

use std::fmt::Write;

use crate::error::{Error, Result};

/// Parses `text` into `(offset of first cell, counts)`, without trimming.
pub(crate) fn parse_cells(text: &str) -> Result<(i64, Vec<u32>)> {
    let text = text.trim();
    let (body, offset) = match text.split_once('@') {
        Some((body, off)) => {
            let off = off
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::MalformedState(format!("bad offset in {text:?}")))?;
            (body, off)
        }
        None => (text, 0),
    };

    let mut cells = Vec::with_capacity(body.len());
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        match c {
            '0'..='9' => cells.push(c as u32 - '0' as u32),
            '[' => {
                let mut digits = String::new();
                loop {
                    match chars.next() {
                        Some(']') => break,
                        Some(d) if d.is_ascii_digit() => digits.push(d),
                        _ => {
                            return Err(Error::MalformedState(format!(
                                "unterminated or non-numeric bracket in {text:?}"
                            )))
                        }
                    }
                }
                let count = digits
                    .parse::<u32>()
                    .map_err(|_| Error::MalformedState(format!("empty bracket in {text:?}")))?;
                cells.push(count);
            }
            other => {
                return Err(Error::MalformedState(format!(
                    "unexpected character {other:?} in {text:?}"
                )))
            }
        }
    }

    if cells.is_empty() {
        return Err(Error::MalformedState("empty pattern".into()));
    }
    Ok((offset, cells))
}

/// Drops zero cells at both ends, returning the shifted offset, or `None` if
/// every cell is zero.
pub(crate) fn trim(offset: i64, mut cells: Vec<u32>) -> Option<(i64, Vec<u32>)> {
    let first = cells.iter().position(|&c| c > 0)?;
    let last = cells.iter().rposition(|&c| c > 0)?;
    cells.truncate(last + 1);
    cells.drain(..first);
    Some((offset + first as i64, cells))
}

pub(crate) fn write_cells(out: &mut String, cells: &[u32]) {
    for &c in cells {
        if c < 10 {
            out.push(char::from(b'0' + c as u8));
        } else {
            let _ = write!(out, "[{c}]");
        }
    }
}

/// Cells followed by `@offset` when the offset is nonzero.
pub(crate) fn format_cells(offset: i64, cells: &[u32]) -> String {
    let mut out = String::with_capacity(cells.len() + 4);
    write_cells(&mut out, cells);
    if offset != 0 {
        let _ = write!(out, "@{offset}");
    }
    out
}
