//! Batch application of manual corrections (`.fix` files).

use std::io::{BufRead, Write};

use ddp_core::{Confidence, DepDocument, Provenance, ROOT_LABEL, validate_tree};
use ddp_corpus::FormatError;

use crate::error::ConvertError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub doc_id: String,
    pub dependent: usize,
    pub new_head: usize,
    pub new_label: String,
}

/// Replaces the targeted edges, then re-validates. The whole batch is
/// atomic: any violation in the result rejects every correction and the
/// input document is returned untouched by the caller.
pub fn apply_corrections(
    doc: &DepDocument,
    corrections: &[Correction],
) -> Result<DepDocument, ConvertError> {
    let mut out = doc.clone();
    for c in corrections.iter().filter(|c| c.doc_id == doc.doc_id) {
        if c.dependent == 0 || c.dependent > out.n_edus() {
            return Err(ConvertError::MissingCorrectionTarget(c.dependent));
        }
        let edge = out.edge_mut(c.dependent);
        edge.head = c.new_head;
        edge.rel_original = c.new_label.clone();
        edge.rel_unified = if c.new_label == ROOT_LABEL {
            Some(ROOT_LABEL.to_string())
        } else {
            None
        };
        edge.provenance = Provenance::Annotated;
        edge.confidence = Confidence::High;
    }
    let report = validate_tree(&out);
    if !report.is_valid() {
        return Err(ConvertError::InvalidCorrection(report));
    }
    Ok(out)
}

pub fn read_corrections<R: BufRead>(reader: R) -> Result<Vec<Correction>, FormatError> {
    let mut corrections = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 || fields[3].is_empty() {
            return Err(FormatError::syntax(
                line_no,
                "expected `doc_id<TAB>dependent<TAB>new_head<TAB>new_label`",
            ));
        }
        let dependent: usize = fields[1]
            .parse()
            .map_err(|_| FormatError::syntax(line_no, format!("bad dependent `{}`", fields[1])))?;
        let new_head: usize = fields[2]
            .parse()
            .map_err(|_| FormatError::syntax(line_no, format!("bad head `{}`", fields[2])))?;
        corrections.push(Correction {
            doc_id: fields[0].to_string(),
            dependent,
            new_head,
            new_label: fields[3].to_string(),
        });
    }
    Ok(corrections)
}

pub fn write_corrections<W: Write>(
    corrections: &[Correction],
    mut out: W,
) -> Result<(), FormatError> {
    for c in corrections {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            c.doc_id, c.dependent, c.new_head, c.new_label
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddp_core::Edu;

    fn doc(heads: &[usize]) -> DepDocument {
        let n = heads.len();
        let edus = (1..=n).map(|i| Edu::new(i, format!("e{i}"))).collect();
        let labels: Vec<&str> = heads
            .iter()
            .map(|&h| if h == 0 { "root" } else { "joint" })
            .collect();
        DepDocument::from_heads("d", edus, heads, &labels).unwrap()
    }

    fn correction(dependent: usize, new_head: usize, label: &str) -> Correction {
        Correction {
            doc_id: "d".into(),
            dependent,
            new_head,
            new_label: label.into(),
        }
    }

    #[test]
    fn valid_correction_is_applied() {
        let out = apply_corrections(&doc(&[0, 1, 1]), &[correction(2, 3, "causality")]).unwrap();
        assert_eq!(out.head_of(2), 3);
        assert_eq!(out.edge(2).rel_original, "causality");
        assert_eq!(out.edge(2).provenance, Provenance::Annotated);
    }

    #[test]
    fn cycle_creating_batch_is_rejected() {
        let original = doc(&[0, 1, 2]);
        let err =
            apply_corrections(&original, &[correction(2, 3, "joint")]).unwrap_err();
        assert!(matches!(err, ConvertError::InvalidCorrection(_)), "{err}");
    }

    #[test]
    fn empty_batch_is_identity() {
        let original = doc(&[0, 1]);
        assert_eq!(apply_corrections(&original, &[]).unwrap(), original);
    }

    #[test]
    fn other_documents_are_ignored() {
        let original = doc(&[0, 1]);
        let foreign = Correction {
            doc_id: "other".into(),
            dependent: 9,
            new_head: 9,
            new_label: "x".into(),
        };
        assert_eq!(apply_corrections(&original, &[foreign]).unwrap(), original);
    }

    #[test]
    fn missing_target_is_an_error() {
        let err = apply_corrections(&doc(&[0, 1]), &[correction(7, 1, "joint")]).unwrap_err();
        assert!(matches!(err, ConvertError::MissingCorrectionTarget(7)));
    }

    #[test]
    fn fix_round_trip() {
        let fixes = vec![correction(2, 3, "causality"), correction(4, 0, "root")];
        let mut buf = Vec::new();
        write_corrections(&fixes, &mut buf).unwrap();
        assert_eq!(
            read_corrections(String::from_utf8(buf).unwrap().as_bytes()).unwrap(),
            fixes
        );
    }
}
