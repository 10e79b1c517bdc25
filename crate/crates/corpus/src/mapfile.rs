//! The `.map` relation mapping format: `scheme<TAB>original<TAB>unified`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use ddp_core::SchemeId;

use crate::error::FormatError;

/// Mapping from (scheme, original label) to a unified label. Preserves
/// file order for canonical re-serialization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationMapping {
    entries: Vec<(SchemeId, String, String)>,
    index: BTreeMap<(SchemeId, String), String>,
}

impl RelationMapping {
    pub fn new() -> Self {
        RelationMapping::default()
    }

    pub fn insert(
        &mut self,
        scheme: SchemeId,
        original: impl Into<String>,
        unified: impl Into<String>,
    ) -> Result<(), FormatError> {
        let original = original.into();
        let unified = unified.into();
        if self
            .index
            .insert((scheme, original.clone()), unified.clone())
            .is_some()
        {
            return Err(FormatError::Data(format!(
                "duplicate mapping for ({scheme}, {original})"
            )));
        }
        self.entries.push((scheme, original, unified));
        Ok(())
    }

    pub fn get(&self, scheme: SchemeId, original: &str) -> Option<&str> {
        self.index
            .get(&(scheme, original.to_string()))
            .map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(SchemeId, String, String)] {
        &self.entries
    }

    /// Distinct unified labels, sorted.
    pub fn unified_labels(&self) -> Vec<&str> {
        let mut labels: Vec<&str> = self.index.values().map(|s| s.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }
}

pub fn read_relation_mapping<R: BufRead>(reader: R) -> Result<RelationMapping, FormatError> {
    let mut mapping = RelationMapping::new();
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
        let scheme: SchemeId = fields[0]
            .parse()
            .map_err(|e| FormatError::syntax(line_no, format!("{e}")))?;
        if fields[1].is_empty() || fields[2].is_empty() {
            return Err(FormatError::syntax(line_no, "empty label"));
        }
        if mapping.get(scheme, fields[1]).is_some() {
            return Err(FormatError::DuplicateMapping {
                line: line_no,
                scheme: scheme.to_string(),
                original: fields[1].to_string(),
            });
        }
        mapping.insert(scheme, fields[1], fields[2])?;
    }
    Ok(mapping)
}

pub fn write_relation_mapping<W: Write>(
    mapping: &RelationMapping,
    mut out: W,
) -> Result<(), FormatError> {
    for (scheme, original, unified) in mapping.entries() {
        for value in [original, unified] {
            if value.is_empty() || value.contains(['\t', '\n', '\r']) {
                return Err(FormatError::Unwritable(format!(
                    "mapping label not serializable: {value:?}"
                )));
            }
        }
        writeln!(out, "{scheme}\t{original}\t{unified}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_entries() {
        let text = "SU\texample illustration\texplanation\nHIT\ttemporal.synchronous\ttemporal\n";
        let mapping = read_relation_mapping(text.as_bytes()).unwrap();
        assert_eq!(
            mapping.get(SchemeId::Su, "example illustration"),
            Some("explanation")
        );
        assert_eq!(
            mapping.get(SchemeId::Hit, "temporal.synchronous"),
            Some("temporal")
        );
        assert_eq!(mapping.get(SchemeId::Sci, "joint"), None);
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let text = "SU\tjoint\tjoint\nSU\tjoint\texplanation\n";
        assert!(matches!(
            read_relation_mapping(text.as_bytes()),
            Err(FormatError::DuplicateMapping { line: 2, .. })
        ));
    }

    #[test]
    fn round_trips_in_file_order() {
        let text = "SU\tb\tx\nSU\ta\ty\nHIT\ta\tz\n";
        let mapping = read_relation_mapping(text.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_relation_mapping(&mapping, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), text);
    }
}
