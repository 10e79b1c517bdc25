//! Corpus-level statistics.

use std::collections::BTreeMap;

use ddp_core::{is_projective, DepDocument, LabelView};

use crate::error::FormatError;

#[derive(Debug, Clone)]
pub struct StatsOptions {
    /// Count root edges as relations. Off by default: the root edge is a
    /// representation convention, not an annotated relation.
    pub count_root: bool,
    pub label_view: LabelView,
}

impl Default for StatsOptions {
    fn default() -> Self {
        StatsOptions {
            count_root: false,
            label_view: LabelView::Original,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub n_docs: usize,
    pub n_relations: usize,
    pub avg_edus_per_doc: f64,
    pub avg_chars_per_doc: f64,
    /// Documents whose tree is valid and projective.
    pub n_projective_docs: usize,
    /// label -> (count, percentage of counted relations), most frequent first.
    pub relation_histogram: Vec<(String, usize, f64)>,
}

pub fn corpus_stats(docs: &[DepDocument], opts: &StatsOptions) -> CorpusStats {
    let n_docs = docs.len();
    let mut n_relations = 0usize;
    let mut total_edus = 0usize;
    let mut total_chars = 0usize;
    let mut n_projective_docs = 0usize;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();

    for doc in docs {
        total_edus += doc.n_edus();
        total_chars += doc.edus().iter().map(|e| e.char_len).sum::<usize>();
        if is_projective(doc).unwrap_or(false) {
            n_projective_docs += 1;
        }
        for edge in doc.edges() {
            if edge.head == 0 && !opts.count_root {
                continue;
            }
            n_relations += 1;
            *counts
                .entry(edge.label(opts.label_view).to_string())
                .or_insert(0) += 1;
        }
    }

    let mut relation_histogram: Vec<(String, usize, f64)> = counts
        .into_iter()
        .map(|(label, count)| {
            let pct = if n_relations == 0 {
                0.0
            } else {
                100.0 * count as f64 / n_relations as f64
            };
            (label, count, pct)
        })
        .collect();
    relation_histogram.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    CorpusStats {
        n_docs,
        n_relations,
        avg_edus_per_doc: if n_docs == 0 {
            0.0
        } else {
            total_edus as f64 / n_docs as f64
        },
        avg_chars_per_doc: if n_docs == 0 {
            0.0
        } else {
            total_chars as f64 / n_docs as f64
        },
        n_projective_docs,
        relation_histogram,
    }
}

impl CorpusStats {
    /// TSV rendering: scalar rows, then `label<TAB>count<TAB>percent` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n_docs\t{}\n", self.n_docs));
        out.push_str(&format!("n_relations\t{}\n", self.n_relations));
        out.push_str(&format!("avg_edus_per_doc\t{:.2}\n", self.avg_edus_per_doc));
        out.push_str(&format!(
            "avg_chars_per_doc\t{:.2}\n",
            self.avg_chars_per_doc
        ));
        out.push_str(&format!("n_projective_docs\t{}\n", self.n_projective_docs));
        out.push_str("# label\tcount\tpercent\n");
        for (label, count, pct) in &self.relation_histogram {
            out.push_str(&format!("{label}\t{count}\t{pct:.2}\n"));
        }
        out
    }
}

/// Percentages over a non-empty histogram must sum to 100 within rounding.
pub fn check_histogram(stats: &CorpusStats) -> Result<(), FormatError> {
    if stats.n_relations == 0 {
        return Ok(());
    }
    let sum: f64 = stats.relation_histogram.iter().map(|(_, _, p)| p).sum();
    if (sum - 100.0).abs() > 0.1 {
        return Err(FormatError::Data(format!(
            "histogram percentages sum to {sum}"
        )));
    }
    Ok(())
}
