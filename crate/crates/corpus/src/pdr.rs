//! The `.pdr` predicate-argument relation record format.
//!
//! `doc_id<TAB>kind<TAB>connective<TAB>label<TAB>arg1<TAB>arg2` with the
//! argument columns as comma-separated EDU indices (written ascending).

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::FormatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdtbKind {
    /// Connective present in the text.
    Explicit,
    /// Connective inserted by the annotator.
    Implicit,
}

impl fmt::Display for PdtbKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PdtbKind::Explicit => "explicit",
            PdtbKind::Implicit => "implicit",
        })
    }
}

impl FromStr for PdtbKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "explicit" => Ok(PdtbKind::Explicit),
            "implicit" => Ok(PdtbKind::Implicit),
            _ => Err(format!("unknown kind `{s}`")),
        }
    }
}

/// One predicate-argument relation over EDU index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdtbRelationRecord {
    pub doc_id: String,
    pub kind: PdtbKind,
    pub connective: String,
    pub label: String,
    pub arg1: BTreeSet<usize>,
    pub arg2: BTreeSet<usize>,
}

impl PdtbRelationRecord {
    pub fn new(
        doc_id: impl Into<String>,
        kind: PdtbKind,
        connective: impl Into<String>,
        label: impl Into<String>,
        arg1: impl IntoIterator<Item = usize>,
        arg2: impl IntoIterator<Item = usize>,
    ) -> Self {
        PdtbRelationRecord {
            doc_id: doc_id.into(),
            kind,
            connective: connective.into(),
            label: label.into(),
            arg1: arg1.into_iter().collect(),
            arg2: arg2.into_iter().collect(),
        }
    }
}

fn parse_arg(field: &str, line: usize, which: &str) -> Result<BTreeSet<usize>, FormatError> {
    if field.is_empty() {
        return Err(FormatError::syntax(line, format!("empty {which}")));
    }
    let mut set = BTreeSet::new();
    for part in field.split(',') {
        let index: usize = part.parse().map_err(|_| {
            FormatError::syntax(line, format!("bad EDU index `{part}` in {which}"))
        })?;
        if index == 0 {
            return Err(FormatError::syntax(line, format!("EDU index 0 in {which}")));
        }
        if !set.insert(index) {
            return Err(FormatError::syntax(
                line,
                format!("duplicate EDU index {index} in {which}"),
            ));
        }
    }
    Ok(set)
}

pub fn read_pdtb_records<R: BufRead>(reader: R) -> Result<Vec<PdtbRelationRecord>, FormatError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(FormatError::syntax(
                line_no,
                format!("expected 6 tab-separated fields, found {}", fields.len()),
            ));
        }
        for (idx, what) in [(0, "doc id"), (2, "connective"), (3, "label")] {
            if fields[idx].is_empty() {
                return Err(FormatError::syntax(line_no, format!("empty {what}")));
            }
        }
        let kind: PdtbKind = fields[1]
            .parse()
            .map_err(|msg: String| FormatError::syntax(line_no, msg))?;
        let arg1 = parse_arg(fields[4], line_no, "arg1")?;
        let arg2 = parse_arg(fields[5], line_no, "arg2")?;
        if arg1.intersection(&arg2).next().is_some() {
            return Err(FormatError::syntax(line_no, "arg1 and arg2 overlap"));
        }
        records.push(PdtbRelationRecord {
            doc_id: fields[0].to_string(),
            kind,
            connective: fields[2].to_string(),
            label: fields[3].to_string(),
            arg1,
            arg2,
        });
    }
    Ok(records)
}

fn arg_column(set: &BTreeSet<usize>) -> String {
    set.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_pdtb_records<W: Write>(
    records: &[PdtbRelationRecord],
    mut out: W,
) -> Result<(), FormatError> {
    for r in records {
        for (value, what) in [
            (r.doc_id.as_str(), "doc id"),
            (r.connective.as_str(), "connective"),
            (r.label.as_str(), "label"),
        ] {
            if value.is_empty() {
                return Err(FormatError::Unwritable(format!("empty {what}")));
            }
            if value.contains(['\t', '\n', '\r']) {
                return Err(FormatError::Unwritable(format!(
                    "{what} contains a tab or line break: {value:?}"
                )));
            }
        }
        if r.arg1.is_empty() || r.arg2.is_empty() {
            return Err(FormatError::Unwritable("empty argument set".into()));
        }
        if r.arg1.intersection(&r.arg2).next().is_some() {
            return Err(FormatError::Unwritable("overlapping argument sets".into()));
        }
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.doc_id,
            r.kind,
            r.connective,
            r.label,
            arg_column(&r.arg1),
            arg_column(&r.arg2)
        )?;
    }
    Ok(())
}
