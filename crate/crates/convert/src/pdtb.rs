//! Conversion of predicate-argument relation records into a complete
//! dependency tree: complement inside each argument span, attach the span
//! roots to each other, then link whatever fragments remain.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::str::FromStr;

use ddp_core::{Confidence, DepDocument, DepEdge, Edu, Provenance, ROOT_LABEL};
use ddp_corpus::{FormatError, MarkerRule, PdtbRelationRecord};

use crate::complement::{merge_units, Attach, ReviewItem, ReviewReason, TreeState};
use crate::error::ConvertError;

/// Which argument's subtree root becomes the head of a record edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgSide {
    Arg1,
    Arg2,
}

impl FromStr for ArgSide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arg1" => Ok(ArgSide::Arg1),
            "arg2" => Ok(ArgSide::Arg2),
            _ => Err(format!("unknown argument side `{s}` (expected arg1|arg2)")),
        }
    }
}

/// Per-label head-direction overrides. The default (head = ARG1's root)
/// applies to every label without an entry; this table ships empty.
#[derive(Debug, Clone, Default)]
pub struct HeadOverrideTable {
    map: BTreeMap<String, ArgSide>,
}

impl HeadOverrideTable {
    pub fn new() -> Self {
        HeadOverrideTable::default()
    }

    pub fn set(&mut self, label: impl Into<String>, side: ArgSide) {
        self.map.insert(label.into(), side);
    }

    pub fn side_for(&self, label: &str) -> ArgSide {
        self.map.get(label).copied().unwrap_or(ArgSide::Arg1)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Reads `label<TAB>arg1|arg2` lines.
pub fn read_head_overrides<R: BufRead>(reader: R) -> Result<HeadOverrideTable, FormatError> {
    let mut table = HeadOverrideTable::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 || fields[0].is_empty() {
            return Err(FormatError::syntax(line_no, "expected `label<TAB>arg1|arg2`"));
        }
        let side: ArgSide = fields[1]
            .parse()
            .map_err(|msg: String| FormatError::syntax(line_no, msg))?;
        table.set(fields[0], side);
    }
    Ok(table)
}

/// The topmost node of `member`'s chain that stays inside `span`.
fn root_within_span(state: &TreeState, span: &BTreeSet<usize>, member: usize) -> usize {
    let mut cur = member;
    loop {
        match state.head_of(cur) {
            Some(h) if span.contains(&h) => cur = h,
            _ => return cur,
        }
    }
}

/// Merges an argument span into a single subtree under the current state
/// and returns its root. Roots of span fragments are linked in document
/// order by the complement rules.
fn complement_span(
    doc_id: &str,
    edus: &[Edu],
    span: &BTreeSet<usize>,
    rules: &[MarkerRule],
    state: &mut TreeState,
    items: &mut Vec<ReviewItem>,
) -> Result<usize, ConvertError> {
    let mut roots = Vec::new();
    for &member in span {
        let root = root_within_span(state, span, member);
        if !roots.contains(&root) {
            roots.push(root);
        }
    }
    // Document order of fragments = order of first member, which the
    // sorted span iteration already provides.
    let text_of = |i: usize| edus[i - 1].text.clone();
    merge_units(doc_id, &text_of, &roots, rules, state, items)
}

/// Builds a complete dependency document from relation records.
///
/// Records for other documents are ignored. Edges derived from records are
/// `annotated`; rule-based completions are `complemented`; every fallback
/// or overridden decision lands in the returned review queue. Conflicting
/// records (a second head for the same EDU, or a cycle) are errors.
pub fn pdtb_to_dep(
    doc_id: &str,
    edus: Vec<Edu>,
    records: &[PdtbRelationRecord],
    rules: &[MarkerRule],
    overrides: &HeadOverrideTable,
) -> Result<(DepDocument, Vec<ReviewItem>), ConvertError> {
    let n = edus.len();
    if n == 0 {
        return Err(ConvertError::EmptyDocument);
    }
    let mut state = TreeState::new(n);
    let mut items = Vec::new();

    for record in records.iter().filter(|r| r.doc_id == doc_id) {
        for arg in [&record.arg1, &record.arg2] {
            if arg.is_empty() {
                return Err(ConvertError::EmptyDocument);
            }
            for &member in arg {
                if member == 0 || member > n {
                    return Err(ConvertError::IndexOutOfRange(member));
                }
            }
        }
        let root1 = complement_span(doc_id, &edus, &record.arg1, rules, &mut state, &mut items)?;
        let root2 = complement_span(doc_id, &edus, &record.arg2, rules, &mut state, &mut items)?;

        let side = overrides.side_for(&record.label);
        let (head, dependent, confidence) = match side {
            ArgSide::Arg1 => (root1, root2, Confidence::High),
            ArgSide::Arg2 => (root2, root1, Confidence::Review),
        };
        let edge = DepEdge::new(head, dependent, record.label.clone())
            .with_provenance(Provenance::Annotated, confidence);
        if side == ArgSide::Arg2 {
            items.push(ReviewItem {
                doc_id: doc_id.to_string(),
                edge: edge.clone(),
                reason: ReviewReason::HeadDirectionDefault,
                suggestion: record.label.clone(),
            });
        }
        state.attach(edge)?;
    }

    // Remaining fragments, in document order of their leftmost EDU.
    let mut leftmost: BTreeMap<usize, usize> = BTreeMap::new();
    let all: BTreeSet<usize> = (1..=n).collect();
    for member in 1..=n {
        let root = root_within_span(&state, &all, member);
        let entry = leftmost.entry(root).or_insert(member);
        *entry = (*entry).min(member);
    }
    let mut fragments: Vec<(usize, usize)> = leftmost.into_iter().collect();
    fragments.sort_by_key(|&(_, first)| first);
    let roots: Vec<usize> = fragments.into_iter().map(|(root, _)| root).collect();

    let text_of = |i: usize| edus[i - 1].text.clone();
    let top = merge_units(doc_id, &text_of, &roots, rules, &mut state, &mut items)?;
    match state.attach(DepEdge::new(0, top, ROOT_LABEL)) {
        Ok(Attach::Added) => {}
        Ok(Attach::Duplicate) => unreachable!("root edge is attached once"),
        Err(e) => return Err(e),
    }

    let edges: Vec<DepEdge> = state
        .into_edges()
        .into_iter()
        .flatten()
        .collect();
    debug_assert_eq!(edges.len(), n);
    let doc = DepDocument::new(doc_id, edus, edges)?;
    Ok((doc, items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddp_core::{validate_tree, LabelView};
    use ddp_corpus::PdtbKind;

    fn edus(texts: &[&str]) -> Vec<Edu> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| Edu::new(i + 1, *t))
            .collect()
    }

    fn record(label: &str, arg1: &[usize], arg2: &[usize]) -> PdtbRelationRecord {
        PdtbRelationRecord::new(
            "d",
            PdtbKind::Explicit,
            "conn",
            label,
            arg1.iter().copied(),
            arg2.iter().copied(),
        )
    }

    fn edge_view(doc: &DepDocument) -> Vec<(usize, usize, String, Provenance)> {
        (1..=doc.n_edus())
            .map(|d| {
                let e = doc.edge(d);
                (
                    d,
                    e.head,
                    e.label(LabelView::Original).to_string(),
                    e.provenance,
                )
            })
            .collect()
    }

    #[test]
    fn two_edus_one_record_empty_queue() {
        let (doc, items) = pdtb_to_dep(
            "d",
            edus(&["甲", "乙"]),
            &[record("joint", &[1], &[2])],
            &[],
            &HeadOverrideTable::new(),
        )
        .unwrap();
        assert_eq!(
            edge_view(&doc),
            vec![
                (1, 0, "root".into(), Provenance::Converted),
                (2, 1, "joint".into(), Provenance::Annotated),
            ]
        );
        assert!(items.is_empty());
    }

    #[test]
    fn gap_edu_is_complemented_and_queued() {
        let (doc, items) = pdtb_to_dep(
            "d",
            edus(&["甲", "乙", "丙"]),
            &[record("causality", &[1], &[3])],
            &[],
            &HeadOverrideTable::new(),
        )
        .unwrap();
        assert_eq!(
            edge_view(&doc),
            vec![
                (1, 0, "root".into(), Provenance::Converted),
                (2, 1, "joint".into(), Provenance::Complemented),
                (3, 1, "causality".into(), Provenance::Annotated),
            ]
        );
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].reason, ReviewReason::NoMarkerMatch);
        assert!(validate_tree(&doc).is_valid());
    }

    #[test]
    fn conflicting_heads_are_an_error() {
        let err = pdtb_to_dep(
            "d",
            edus(&["甲", "乙", "丙"]),
            &[record("a", &[1], &[2]), record("b", &[3], &[2])],
            &[],
            &HeadOverrideTable::new(),
        )
        .unwrap_err();
        assert!(matches!(err, ConvertError::ConflictingHeads { edu: 2 }));
    }

    #[test]
    fn record_cycle_is_an_error() {
        let err = pdtb_to_dep(
            "d",
            edus(&["甲", "乙"]),
            &[record("a", &[1], &[2]), record("b", &[2], &[1])],
            &[],
            &HeadOverrideTable::new(),
        )
        .unwrap_err();
        match err {
            ConvertError::RecordCycle { edus } => assert_eq!(edus, vec![1, 2]),
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_records_are_skipped() {
        let (doc, _) = pdtb_to_dep(
            "d",
            edus(&["甲", "乙"]),
            &[record("joint", &[1], &[2]), record("joint", &[1], &[2])],
            &[],
            &HeadOverrideTable::new(),
        )
        .unwrap();
        assert!(validate_tree(&doc).is_valid());
    }

    #[test]
    fn spans_are_complemented_before_attachment() {
        let rules = vec![MarkerRule::new(
            "temporal",
            "后",
            ddp_corpus::AttachSide::Left,
        )];
        let (doc, items) = pdtb_to_dep(
            "d",
            edus(&["先做", "后想", "再说", "结束"]),
            &[record("causality", &[1, 2], &[3, 4])],
            &rules,
            &HeadOverrideTable::new(),
        )
        .unwrap();
        // Span {1,2}: "后" fires, 1 heads 2. Span {3,4}: fallback, 3 heads 4.
        // Record: root(arg2)=3 attaches under root(arg1)=1.
        assert_eq!(
            edge_view(&doc),
            vec![
                (1, 0, "root".into(), Provenance::Converted),
                (2, 1, "temporal".into(), Provenance::Complemented),
                (3, 1, "causality".into(), Provenance::Annotated),
                (4, 3, "joint".into(), Provenance::Complemented),
            ]
        );
        assert_eq!(items.len(), 1);
    }

    #[test]
    fn override_flips_direction_and_queues_review() {
        let mut overrides = HeadOverrideTable::new();
        overrides.set("causality", ArgSide::Arg2);
        let (doc, items) = pdtb_to_dep(
            "d",
            edus(&["甲", "乙"]),
            &[record("causality", &[1], &[2])],
            &[],
            &overrides,
        )
        .unwrap();
        assert_eq!(doc.head_of(1), 2);
        assert_eq!(doc.head_of(2), 0);
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].reason, ReviewReason::HeadDirectionDefault);
    }

    #[test]
    fn no_records_yields_pure_complementation() {
        let (doc, items) = pdtb_to_dep(
            "d",
            edus(&["一", "二", "三"]),
            &[],
            &[],
            &HeadOverrideTable::new(),
        )
        .unwrap();
        assert!(validate_tree(&doc).is_valid());
        assert_eq!(doc.heads(), vec![0, 1, 2]);
        assert_eq!(items.len(), 2);
    }

    #[test]
    fn out_of_range_record_is_an_error() {
        let err = pdtb_to_dep(
            "d",
            edus(&["甲"]),
            &[record("x", &[1], &[9])],
            &[],
            &HeadOverrideTable::new(),
        )
        .unwrap_err();
        assert!(matches!(err, ConvertError::IndexOutOfRange(9)));
    }
}
