//! The `.mkr` discourse marker rule format: `label<TAB>marker<TAB>left|right`.
//!
//! Rule order is significant: it breaks ties between equally long markers.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::FormatError;

/// Which EDU of an adjacent pair becomes the head when a marker fires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachSide {
    Left,
    Right,
}

impl fmt::Display for AttachSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttachSide::Left => "left",
            AttachSide::Right => "right",
        })
    }
}

impl FromStr for AttachSide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(AttachSide::Left),
            "right" => Ok(AttachSide::Right),
            _ => Err(format!("unknown attach side `{s}` (expected left|right)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerRule {
    pub label: String,
    pub marker: String,
    pub attach: AttachSide,
}

impl MarkerRule {
    pub fn new(label: impl Into<String>, marker: impl Into<String>, attach: AttachSide) -> Self {
        MarkerRule {
            label: label.into(),
            marker: marker.into(),
            attach,
        }
    }

    /// Marker length in characters, the tie-breaking key.
    pub fn marker_len(&self) -> usize {
        self.marker.chars().count()
    }
}

pub fn read_marker_rules<R: BufRead>(reader: R) -> Result<Vec<MarkerRule>, FormatError> {
    let mut rules = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(FormatError::syntax(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(FormatError::syntax(line_no, "empty label or marker"));
        }
        let attach: AttachSide = fields[2]
            .parse()
            .map_err(|msg: String| FormatError::syntax(line_no, msg))?;
        rules.push(MarkerRule::new(fields[0], fields[1], attach));
    }
    Ok(rules)
}

pub fn write_marker_rules<W: Write>(rules: &[MarkerRule], mut out: W) -> Result<(), FormatError> {
    for rule in rules {
        for value in [&rule.label, &rule.marker] {
            if value.is_empty() || value.contains(['\t', '\n', '\r']) {
                return Err(FormatError::Unwritable(format!(
                    "marker rule field not serializable: {value:?}"
                )));
            }
        }
        writeln!(out, "{}\t{}\t{}", rule.label, rule.marker, rule.attach)?;
    }
    Ok(())
}
