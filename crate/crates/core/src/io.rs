//! Line-oriented set files.
//!
//! Hypercube sets:
//!
//! ```text
//! n=<levels> count=<size>
//! <base-3 embedding of element 0, decimal>
//! ...
//! ```
//!
//! Integer baselines use the header `integers count=<size>` followed by one
//! decimal integer per line. Writing then reading is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use crate::construction::{GroundSet, IntegerSet, PointSet};
use crate::model::{pow3, CoefficientVector};
use crate::{Error, Result};

/// A set read from disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetData {
    Hypercube(PointSet),
    Integers(IntegerSet),
}

impl SetData {
    pub fn kind(&self) -> &'static str {
        match self {
            SetData::Hypercube(_) => "hypercube",
            SetData::Integers(_) => "integers",
        }
    }
}

impl GroundSet for SetData {
    fn values(&self) -> &[i64] {
        match self {
            SetData::Hypercube(p) => p.values(),
            SetData::Integers(s) => s.values(),
        }
    }

    fn code_offset(&self) -> i64 {
        match self {
            SetData::Hypercube(p) => p.code_offset(),
            SetData::Integers(s) => s.code_offset(),
        }
    }
}

pub fn format_point_set(set: &PointSet) -> String {
    let mut out = format!("n={} count={}\n", set.levels(), set.len());
    for v in set.values() {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn format_integer_set(set: &IntegerSet) -> String {
    let mut out = format!("integers count={}\n", set.len());
    for v in set.values() {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn format_set(set: &SetData) -> String {
    match set {
        SetData::Hypercube(p) => format_point_set(p),
        SetData::Integers(s) => format_integer_set(s),
    }
}

fn header_field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    let tok = token.ok_or_else(|| Error::Parse { line: 1, msg: format!("missing {key}=") })?;
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::Parse { line: 1, msg: format!("expected {key}=<value>, got {tok:?}") })
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>()
        .map_err(|e| Error::Parse { line, msg: format!("{s:?}: {e}") })
}

/// Base-3 value back to its 0/1 coefficient vector.
fn decode_base3(mut value: u64, levels: usize, line: usize) -> Result<CoefficientVector> {
    if value >= pow3(levels) as u64 {
        return Err(Error::Parse { line, msg: format!("{value} exceeds 3^{levels}") });
    }
    let mut bits = 0u64;
    for j in 0..levels {
        match value % 3 {
            0 => {}
            1 => bits |= 1 << j,
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "element has a base-3 digit 2; not a hypercube point".into(),
                })
            }
        }
        value /= 3;
    }
    CoefficientVector::new(bits, levels)
}

pub fn parse_set(text: &str) -> Result<SetData> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let mut tokens = header.split_whitespace();
    let first = tokens.next();
    let (hypercube_levels, count) = if first == Some("integers") {
        (None, header_field(tokens.next(), "count")?)
    } else {
        let levels: usize = parse_num(header_field(first, "n")?, 1)?;
        (Some(levels), header_field(tokens.next(), "count")?)
    };
    let count: usize = parse_num(count, 1)?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse { line: 1, msg: format!("unexpected header token {extra:?}") });
    }
    let body: Vec<(usize, &str)> = lines
        .enumerate()
        .map(|(i, l)| (i + 2, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if body.len() != count {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header says {count} elements, found {}", body.len()),
        });
    }
    match hypercube_levels {
        Some(levels) => {
            if levels > crate::model::NATIVE_LEVEL_LIMIT {
                return Err(Error::Overflow { levels, limit: crate::model::NATIVE_LEVEL_LIMIT });
            }
            let elements = body
                .iter()
                .map(|&(line, l)| decode_base3(parse_num(l, line)?, levels, line))
                .collect::<Result<Vec<_>>>()?;
            Ok(SetData::Hypercube(PointSet::new(levels, elements)?))
        }
        None => {
            let values = body
                .iter()
                .map(|&(line, l)| parse_num::<i64>(l, line))
                .collect::<Result<Vec<_>>>()?;
            Ok(SetData::Integers(IntegerSet::new(values)?))
        }
    }
}

pub fn read_set(path: &Path) -> Result<SetData> {
    parse_set(&std::fs::read_to_string(path)?)
}

pub fn write_set(path: &Path, set: &SetData) -> Result<()> {
    std::fs::write(path, format_set(set))?;
    Ok(())
}
