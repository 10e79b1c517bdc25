//! The `.ddep` dependency corpus format.
//!
//! ```text
//! # doc <doc_id>
//! index<TAB>text<TAB>head<TAB>rel_original<TAB>rel_unified<TAB>provenance<TAB>confidence
//! ```
//!
//! One row per EDU, documents separated by one blank line, absent unified
//! labels written as `_`.

use std::io::{BufRead, Write};

use ddp_core::{Confidence, DepDocument, DepEdge, Edu, Provenance, UNMAPPED_LABEL};

use crate::error::FormatError;

struct Row {
    line: usize,
    index: usize,
    text: String,
    head: usize,
    rel_original: String,
    rel_unified: Option<String>,
    provenance: Provenance,
    confidence: Confidence,
}

struct DocBuilder {
    doc_id: String,
    rows: Vec<Row>,
}

impl DocBuilder {
    fn finish(self) -> Result<DepDocument, FormatError> {
        let n = self.rows.len();
        let mut edus = Vec::with_capacity(n);
        let mut edges = Vec::with_capacity(n);
        for (pos, row) in self.rows.iter().enumerate() {
            if row.index != pos + 1 {
                return Err(FormatError::syntax(
                    row.line,
                    format!("expected EDU index {}, found {}", pos + 1, row.index),
                ));
            }
            if row.head > n {
                return Err(FormatError::HeadOutOfRange {
                    line: row.line,
                    head: row.head,
                    n_edus: n,
                });
            }
            edus.push(Edu::new(row.index, row.text.clone()));
            let mut edge = DepEdge::new(row.head, row.index, row.rel_original.clone())
                .with_provenance(row.provenance, row.confidence);
            edge.rel_unified = row.rel_unified.clone();
            edges.push(edge);
        }
        DepDocument::new(self.doc_id, edus, edges)
            .map_err(|e| FormatError::Data(format!("document assembly: {e}")))
    }
}

fn parse_row(line: &str, line_no: usize, seen: &mut Vec<usize>) -> Result<Row, FormatError> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 7 {
        return Err(FormatError::syntax(
            line_no,
            format!("expected 7 tab-separated fields, found {}", fields.len()),
        ));
    }
    let index: usize = fields[0]
        .parse()
        .map_err(|_| FormatError::syntax(line_no, format!("bad EDU index `{}`", fields[0])))?;
    if seen.contains(&index) {
        return Err(FormatError::DuplicateDependent {
            line: line_no,
            dependent: index,
        });
    }
    seen.push(index);
    if fields[1].is_empty() {
        return Err(FormatError::syntax(line_no, "empty EDU text"));
    }
    let head: usize = fields[2]
        .parse()
        .map_err(|_| FormatError::syntax(line_no, format!("bad head index `{}`", fields[2])))?;
    if fields[3].is_empty() {
        return Err(FormatError::syntax(line_no, "empty relation label"));
    }
    let rel_unified = match fields[4] {
        UNMAPPED_LABEL => None,
        "" => return Err(FormatError::syntax(line_no, "empty unified label field")),
        other => Some(other.to_string()),
    };
    let provenance: Provenance = fields[5]
        .parse()
        .map_err(|_| FormatError::syntax(line_no, format!("bad provenance `{}`", fields[5])))?;
    let confidence: Confidence = fields[6]
        .parse()
        .map_err(|_| FormatError::syntax(line_no, format!("bad confidence `{}`", fields[6])))?;
    Ok(Row {
        line: line_no,
        index,
        text: fields[1].to_string(),
        head,
        rel_original: fields[3].to_string(),
        rel_unified,
        provenance,
        confidence,
    })
}

pub fn read_dep_corpus<R: BufRead>(reader: R) -> Result<Vec<DepDocument>, FormatError> {
    let mut docs = Vec::new();
    let mut current: Option<DocBuilder> = None;
    let mut seen = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() {
            if let Some(builder) = current.take() {
                docs.push(builder.finish()?);
                seen.clear();
            }
        } else if let Some(doc_id) = line.strip_prefix("# doc ") {
            if let Some(builder) = current.take() {
                docs.push(builder.finish()?);
                seen.clear();
            }
            current = Some(DocBuilder {
                doc_id: doc_id.to_string(),
                rows: Vec::new(),
            });
        } else if line.starts_with('#') {
            continue;
        } else {
            let builder = current
                .as_mut()
                .ok_or_else(|| FormatError::syntax(line_no, "row outside of a document"))?;
            builder.rows.push(parse_row(&line, line_no, &mut seen)?);
        }
    }
    if let Some(builder) = current.take() {
        docs.push(builder.finish()?);
    }
    Ok(docs)
}

fn check_field(value: &str, what: &str) -> Result<(), FormatError> {
    if value.contains(['\t', '\n', '\r']) {
        return Err(FormatError::Unwritable(format!(
            "{what} contains a tab or line break: {value:?}"
        )));
    }
    Ok(())
}

pub fn write_dep_corpus<W: Write>(docs: &[DepDocument], mut out: W) -> Result<(), FormatError> {
    for doc in docs {
        check_field(&doc.doc_id, "doc id")?;
        writeln!(out, "# doc {}", doc.doc_id)?;
        for edu in doc.edus() {
            let edge = doc.edge(edu.index);
            check_field(&edu.text, "EDU text")?;
            if edu.text.is_empty() {
                return Err(FormatError::Unwritable("empty EDU text".into()));
            }
            check_field(&edge.rel_original, "relation label")?;
            let unified = edge.rel_unified.as_deref().unwrap_or(UNMAPPED_LABEL);
            check_field(unified, "unified label")?;
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                edu.index,
                edu.text,
                edge.head,
                edge.rel_original,
                unified,
                edge.provenance,
                edge.confidence
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn dep_corpus_to_string(docs: &[DepDocument]) -> Result<String, FormatError> {
    let mut buf = Vec::new();
    write_dep_corpus(docs, &mut buf)?;
    Ok(String::from_utf8(buf).expect("writer emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DepDocument {
        let edus = vec![Edu::new(1, "a"), Edu::new(2, "b")];
        let edges = vec![
            DepEdge::new(0, 1, "root").with_provenance(Provenance::Annotated, Confidence::High),
            DepEdge::new(1, 2, "joint").with_provenance(Provenance::Annotated, Confidence::High),
        ];
        DepDocument::new("d", edus, edges).unwrap()
    }

    #[test]
    fn serializes_header_rows_and_blank_line() {
        let text = dep_corpus_to_string(&[sample()]).unwrap();
        assert_eq!(
            text,
            "# doc d\n1\ta\t0\troot\t_\tannotated\thigh\n2\tb\t1\tjoint\t_\tannotated\thigh\n\n"
        );
        assert_eq!(text.lines().filter(|l| !l.is_empty()).count(), 3);
        assert!(text.ends_with("\n\n"));
    }

    #[test]
    fn empty_stream_is_empty_corpus() {
        assert!(read_dep_corpus("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn round_trips() {
        let docs = vec![sample()];
        let text = dep_corpus_to_string(&docs).unwrap();
        let back = read_dep_corpus(text.as_bytes()).unwrap();
        assert_eq!(back, docs);
        assert_eq!(dep_corpus_to_string(&back).unwrap(), text);
    }

    #[test]
    fn head_out_of_range_names_the_line() {
        let text = "# doc d\n1\ta\t5\troot\t_\tannotated\thigh\n2\tb\t1\tjoint\t_\tannotated\thigh\n";
        match read_dep_corpus(text.as_bytes()) {
            Err(FormatError::HeadOutOfRange { line, head, n_edus }) => {
                assert_eq!((line, head, n_edus), (2, 5, 2));
            }
            other => panic!("expected head-out-of-range, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_dependent_is_an_error() {
        let text = "# doc d\n1\ta\t0\troot\t_\tannotated\thigh\n1\ta\t0\troot\t_\tannotated\thigh\n";
        assert!(matches!(
            read_dep_corpus(text.as_bytes()),
            Err(FormatError::DuplicateDependent { line: 3, dependent: 1 })
        ));
    }

    #[test]
    fn malformed_row_names_the_line() {
        let text = "# doc d\n1\ta\t0\troot\n";
        match read_dep_corpus(text.as_bytes()) {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn comment_lines_are_skipped() {
        let text = "# a comment\n# doc d\n# another\n1\ta\t0\troot\t_\tconverted\thigh\n\n";
        let docs = read_dep_corpus(text.as_bytes()).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].n_edus(), 1);
    }
}
