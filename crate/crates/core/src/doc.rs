use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;

/// Reserved label of the edge attaching a document's top EDU to the
/// artificial root (index 0).
pub const ROOT_LABEL: &str = "root";

/// Serialized placeholder for an absent unified relation label.
pub const UNMAPPED_LABEL: &str = "_";

/// An elementary discourse unit: the minimal text span treated as a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edu {
    /// 1-based position in the document.
    pub index: usize,
    pub text: String,
    /// Number of characters (not bytes) in `text`.
    pub char_len: usize,
}

impl Edu {
    pub fn new(index: usize, text: impl Into<String>) -> Self {
        let text = text.into();
        let char_len = text.chars().count();
        Edu {
            index,
            text,
            char_len,
        }
    }
}

/// How an edge entered the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    /// Directly carried over from an original annotation record.
    Annotated,
    /// Added by rule-based complementation to close a gap.
    Complemented,
    /// Produced mechanically by a structure conversion.
    Converted,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Annotated => "annotated",
            Provenance::Complemented => "complemented",
            Provenance::Converted => "converted",
        })
    }
}

impl FromStr for Provenance {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "annotated" => Ok(Provenance::Annotated),
            "complemented" => Ok(Provenance::Complemented),
            "converted" => Ok(Provenance::Converted),
            _ => Err(CoreError::Malformed(format!("unknown provenance `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Confidence {
    High,
    /// Queued for manual review.
    Review,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::High => "high",
            Confidence::Review => "review",
        })
    }
}

impl FromStr for Confidence {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "high" => Ok(Confidence::High),
            "review" => Ok(Confidence::Review),
            _ => Err(CoreError::Malformed(format!("unknown confidence `{s}`"))),
        }
    }
}

/// Which relation label inventory to read from an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelView {
    Original,
    Unified,
}

impl fmt::Display for LabelView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelView::Original => "original",
            LabelView::Unified => "unified",
        })
    }
}

impl FromStr for LabelView {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "original" => Ok(LabelView::Original),
            "unified" => Ok(LabelView::Unified),
            _ => Err(CoreError::Malformed(format!("unknown label view `{s}`"))),
        }
    }
}

/// One head attachment. `head` 0 denotes the artificial root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepEdge {
    pub head: usize,
    pub dependent: usize,
    pub rel_original: String,
    pub rel_unified: Option<String>,
    pub provenance: Provenance,
    pub confidence: Confidence,
}

impl DepEdge {
    pub fn new(head: usize, dependent: usize, rel_original: impl Into<String>) -> Self {
        DepEdge {
            head,
            dependent,
            rel_original: rel_original.into(),
            rel_unified: None,
            provenance: Provenance::Converted,
            confidence: Confidence::High,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance, confidence: Confidence) -> Self {
        self.provenance = provenance;
        self.confidence = confidence;
        self
    }

    pub fn with_unified(mut self, unified: impl Into<String>) -> Self {
        self.rel_unified = Some(unified.into());
        self
    }

    /// The label under the given view; an absent unified label reads as `_`.
    pub fn label(&self, view: LabelView) -> &str {
        match view {
            LabelView::Original => &self.rel_original,
            LabelView::Unified => self.rel_unified.as_deref().unwrap_or(UNMAPPED_LABEL),
        }
    }
}

/// A document as an EDU sequence plus one labeled head per EDU.
///
/// Storage is a head sequence: `edges[i]` is the attachment of EDU `i + 1`,
/// so every EDU has exactly one head by construction. Heads are not
/// otherwise constrained here; [`crate::validate_tree`] reports cycles,
/// missing roots and the like as data.
#[derive(Debug, Clone, PartialEq)]
pub struct DepDocument {
    pub doc_id: String,
    edus: Vec<Edu>,
    edges: Vec<DepEdge>,
}

impl DepDocument {
    /// Builds a document, enforcing the head-sequence shape: EDU indices
    /// consecutive from 1, and exactly one edge per dependent.
    pub fn new(
        doc_id: impl Into<String>,
        edus: Vec<Edu>,
        mut edges: Vec<DepEdge>,
    ) -> Result<Self, CoreError> {
        if edus.len() != edges.len() {
            return Err(CoreError::Malformed(format!(
                "{} EDUs but {} edges",
                edus.len(),
                edges.len()
            )));
        }
        for (pos, edu) in edus.iter().enumerate() {
            if edu.index != pos + 1 {
                return Err(CoreError::Malformed(format!(
                    "EDU at position {} has index {}",
                    pos + 1,
                    edu.index
                )));
            }
        }
        edges.sort_by_key(|e| e.dependent);
        for (pos, edge) in edges.iter().enumerate() {
            if edge.dependent != pos + 1 {
                return Err(CoreError::Malformed(format!(
                    "expected exactly one edge per dependent, found dependent {} at position {}",
                    edge.dependent,
                    pos + 1
                )));
            }
        }
        Ok(DepDocument {
            doc_id: doc_id.into(),
            edus,
            edges,
        })
    }

    /// Builds a document from parallel head/label sequences. Convenience
    /// for converters, decoders and tests.
    pub fn from_heads(
        doc_id: impl Into<String>,
        edus: Vec<Edu>,
        heads: &[usize],
        labels: &[&str],
    ) -> Result<Self, CoreError> {
        let edges = heads
            .iter()
            .zip(labels)
            .enumerate()
            .map(|(i, (&h, &l))| DepEdge::new(h, i + 1, l))
            .collect();
        DepDocument::new(doc_id, edus, edges)
    }

    pub fn n_edus(&self) -> usize {
        self.edus.len()
    }

    pub fn edus(&self) -> &[Edu] {
        &self.edus
    }

    /// The EDU with 1-based index `i`. Panics if out of range.
    pub fn edu(&self, i: usize) -> &Edu {
        &self.edus[i - 1]
    }

    pub fn edges(&self) -> &[DepEdge] {
        &self.edges
    }

    /// The attachment of dependent `d` (1-based). Panics if out of range.
    pub fn edge(&self, d: usize) -> &DepEdge {
        &self.edges[d - 1]
    }

    pub fn edge_mut(&mut self, d: usize) -> &mut DepEdge {
        &mut self.edges[d - 1]
    }

    pub fn head_of(&self, d: usize) -> usize {
        self.edges[d - 1].head
    }

    pub fn label_of(&self, d: usize, view: LabelView) -> &str {
        self.edges[d - 1].label(view)
    }

    /// Head indices ordered by dependent, `heads()[i]` is the head of EDU `i + 1`.
    pub fn heads(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.head).collect()
    }

    /// Dependents of the artificial root.
    pub fn root_children(&self) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.head == 0)
            .map(|e| e.dependent)
            .collect()
    }

    /// Children lists indexed 0..=n (0 is the artificial root). Heads out
    /// of range are ignored.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let n = self.n_edus();
        let mut children = vec![Vec::new(); n + 1];
        for edge in &self.edges {
            if edge.head <= n && edge.head != edge.dependent {
                children[edge.head].push(edge.dependent);
            }
        }
        children
    }
}
