//! Rule-based completion of missing structure over adjacent units, and the
//! review queue (`.rvq`) that records every low-confidence decision.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use ddp_core::{Confidence, DepEdge, Edu, Provenance};
use ddp_corpus::{AttachSide, FormatError, MarkerRule};

use crate::error::ConvertError;

/// Why an automatically added edge needs a manual look.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReviewReason {
    /// No marker rule matched; the fallback relation was used.
    NoMarkerMatch,
    /// Several equally long markers matched with different outcomes.
    AmbiguousMarker,
    /// The configured head-direction override flipped the default.
    HeadDirectionDefault,
}

impl fmt::Display for ReviewReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReviewReason::NoMarkerMatch => "no_marker_match",
            ReviewReason::AmbiguousMarker => "ambiguous_marker",
            ReviewReason::HeadDirectionDefault => "head_direction_default",
        })
    }
}

impl FromStr for ReviewReason {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "no_marker_match" => Ok(ReviewReason::NoMarkerMatch),
            "ambiguous_marker" => Ok(ReviewReason::AmbiguousMarker),
            "head_direction_default" => Ok(ReviewReason::HeadDirectionDefault),
            _ => Err(format!("unknown review reason `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReviewItem {
    pub doc_id: String,
    pub edge: DepEdge,
    pub reason: ReviewReason,
    pub suggestion: String,
}

/// The fallback relation for unmatched adjacent pairs: the majority class
/// across all corpus distributions.
pub(crate) const FALLBACK_LABEL: &str = "joint";

/// Mutable head assignment during conversion, 1-based like EDU indices.
pub(crate) struct TreeState {
    heads: Vec<Option<DepEdge>>,
}

pub(crate) enum Attach {
    Added,
    Duplicate,
}

impl TreeState {
    pub(crate) fn new(n: usize) -> Self {
        TreeState {
            heads: vec![None; n + 1],
        }
    }

    pub(crate) fn n(&self) -> usize {
        self.heads.len() - 1
    }

    pub(crate) fn head_of(&self, d: usize) -> Option<usize> {
        self.heads[d].as_ref().map(|e| e.head)
    }

    pub(crate) fn edge_of(&self, d: usize) -> Option<&DepEdge> {
        self.heads[d].as_ref()
    }

    /// Attaches `dependent` under `head`, refusing second heads and cycles.
    /// An exact repeat of an existing edge is reported as a duplicate, not
    /// an error.
    pub(crate) fn attach(&mut self, edge: DepEdge) -> Result<Attach, ConvertError> {
        let (head, dependent) = (edge.head, edge.dependent);
        if let Some(existing) = &self.heads[dependent] {
            if existing.head == head && existing.rel_original == edge.rel_original {
                return Ok(Attach::Duplicate);
            }
            return Err(ConvertError::ConflictingHeads { edu: dependent });
        }
        // Walking up from the head must not reach the dependent.
        let mut chain = vec![dependent];
        let mut cur = head;
        while cur != 0 {
            if cur == dependent {
                chain.sort_unstable();
                return Err(ConvertError::RecordCycle { edus: chain });
            }
            chain.push(cur);
            cur = match self.head_of(cur) {
                Some(h) => h,
                None => break,
            };
        }
        self.heads[dependent] = Some(edge);
        Ok(Attach::Added)
    }

    pub(crate) fn into_edges(self) -> Vec<Option<DepEdge>> {
        self.heads
    }
}

struct RuleMatch<'a> {
    rule: &'a MarkerRule,
    ambiguous: bool,
}

/// Longest marker occurring in either text wins; file order breaks length
/// ties. A tie between rules that disagree on label or direction is
/// flagged ambiguous.
fn match_rules<'a>(rules: &'a [MarkerRule], left: &str, right: &str) -> Option<RuleMatch<'a>> {
    let mut candidates: Vec<&MarkerRule> = rules
        .iter()
        .filter(|r| left.contains(&r.marker) || right.contains(&r.marker))
        .collect();
    if candidates.is_empty() {
        return None;
    }
    candidates.sort_by_key(|r| std::cmp::Reverse(r.marker_len()));
    let chosen = candidates[0];
    let ambiguous = candidates[1..]
        .iter()
        .take_while(|r| r.marker_len() == chosen.marker_len())
        .any(|r| r.label != chosen.label || r.attach != chosen.attach);
    Some(RuleMatch {
        rule: chosen,
        ambiguous,
    })
}

/// Left-to-right merge of `units` (EDU indices in document order) into one
/// subtree. Total: every pair gets an edge, matched by rule or by the
/// fallback. Returns the merged root.
pub(crate) fn merge_units(
    doc_id: &str,
    text_of: &dyn Fn(usize) -> String,
    units: &[usize],
    rules: &[MarkerRule],
    state: &mut TreeState,
    items: &mut Vec<ReviewItem>,
) -> Result<usize, ConvertError> {
    let mut root = units[0];
    for window in units.windows(2) {
        let (left, right) = (window[0], window[1]);
        let left_text = text_of(left);
        let right_text = text_of(right);
        match match_rules(rules, &left_text, &right_text) {
            Some(m) => {
                let confidence = if m.ambiguous {
                    Confidence::Review
                } else {
                    Confidence::High
                };
                let edge = match m.rule.attach {
                    // The fresh right unit can always take a head.
                    AttachSide::Left => DepEdge::new(left, right, m.rule.label.clone()),
                    // The right unit dominates: the merged root moves under it.
                    AttachSide::Right => {
                        let e = DepEdge::new(right, root, m.rule.label.clone());
                        root = right;
                        e
                    }
                }
                .with_provenance(Provenance::Complemented, confidence);
                if m.ambiguous {
                    items.push(ReviewItem {
                        doc_id: doc_id.to_string(),
                        edge: edge.clone(),
                        reason: ReviewReason::AmbiguousMarker,
                        suggestion: m.rule.label.clone(),
                    });
                }
                state.attach(edge)?;
            }
            None => {
                let edge = DepEdge::new(left, right, FALLBACK_LABEL)
                    .with_provenance(Provenance::Complemented, Confidence::Review);
                items.push(ReviewItem {
                    doc_id: doc_id.to_string(),
                    edge: edge.clone(),
                    reason: ReviewReason::NoMarkerMatch,
                    suggestion: FALLBACK_LABEL.to_string(),
                });
                state.attach(edge)?;
            }
        }
    }
    Ok(root)
}

/// Links a contiguous EDU range into a single subtree by scanning adjacent
/// pairs against the marker rules. Unmatched pairs fall back to the
/// majority relation with the left EDU as head and are queued for review.
pub fn complement_subtree(
    doc_id: &str,
    edus: &[Edu],
    rules: &[MarkerRule],
) -> (Vec<DepEdge>, Vec<ReviewItem>) {
    if edus.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let max_index = edus.iter().map(|e| e.index).max().unwrap();
    let mut state = TreeState::new(max_index);
    let mut items = Vec::new();
    let units: Vec<usize> = edus.iter().map(|e| e.index).collect();
    let text_of = |i: usize| -> String {
        edus.iter()
            .find(|e| e.index == i)
            .map(|e| e.text.clone())
            .unwrap_or_default()
    };
    merge_units(doc_id, &text_of, &units, rules, &mut state, &mut items)
        .expect("fresh state cannot conflict");
    let edges = state
        .into_edges()
        .into_iter()
        .flatten()
        .collect();
    (edges, items)
}

pub fn read_review_queue<R: BufRead>(reader: R) -> Result<Vec<ReviewItem>, FormatError> {
    let mut items = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(FormatError::syntax(
                line_no,
                format!("expected 5 tab-separated fields, found {}", fields.len()),
            ));
        }
        let dependent: usize = fields[1]
            .parse()
            .map_err(|_| FormatError::syntax(line_no, format!("bad dependent `{}`", fields[1])))?;
        let head: usize = fields[2]
            .parse()
            .map_err(|_| FormatError::syntax(line_no, format!("bad head `{}`", fields[2])))?;
        let reason: ReviewReason = fields[4]
            .parse()
            .map_err(|msg: String| FormatError::syntax(line_no, msg))?;
        items.push(ReviewItem {
            doc_id: fields[0].to_string(),
            edge: DepEdge::new(head, dependent, fields[3])
                .with_provenance(Provenance::Complemented, Confidence::Review),
            reason,
            suggestion: fields[3].to_string(),
        });
    }
    Ok(items)
}

pub fn write_review_queue<W: Write>(items: &[ReviewItem], mut out: W) -> Result<(), FormatError> {
    for item in items {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            item.doc_id, item.edge.dependent, item.edge.head, item.suggestion, item.reason
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(label: &str, marker: &str, attach: AttachSide) -> MarkerRule {
        MarkerRule::new(label, marker, attach)
    }

    fn edus(texts: &[&str]) -> Vec<Edu> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| Edu::new(i + 1, *t))
            .collect()
    }

    #[test]
    fn single_edu_range_is_empty() {
        let (edges, items) = complement_subtree("d", &edus(&["只有一个"]), &[]);
        assert!(edges.is_empty());
        assert!(items.is_empty());
    }

    #[test]
    fn marker_fixes_label_and_direction() {
        let rules = vec![rule("temporal", "后", AttachSide::Left)];
        let (edges, items) = complement_subtree("d", &edus(&["第一句", "随后第二句"]), &rules);
        assert_eq!(edges, vec![
            DepEdge::new(1, 2, "temporal")
                .with_provenance(Provenance::Complemented, Confidence::High)
        ]);
        assert!(items.is_empty());
    }

    #[test]
    fn unmatched_pair_falls_back_to_joint_with_review() {
        let (edges, items) = complement_subtree("d", &edus(&["甲", "乙"]), &[]);
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].head, 1);
        assert_eq!(edges[0].dependent, 2);
        assert_eq!(edges[0].rel_original, "joint");
        assert_eq!(edges[0].confidence, Confidence::Review);
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].reason, ReviewReason::NoMarkerMatch);
        assert_eq!(items[0].suggestion, "joint");
    }

    #[test]
    fn right_attachment_moves_the_merged_root() {
        // "因为" makes the second EDU head its left context; the third EDU
        // then attaches under the new root by fallback.
        let rules = vec![rule("causality", "因为", AttachSide::Right)];
        let (edges, items) =
            complement_subtree("d", &edus(&["因为下雨", "没去", "再说一句"]), &rules);
        let mut by_dep: Vec<(usize, usize, &str)> = edges
            .iter()
            .map(|e| (e.dependent, e.head, e.rel_original.as_str()))
            .collect();
        by_dep.sort();
        assert_eq!(by_dep, vec![(1, 2, "causality"), (3, 2, "joint")]);
        assert_eq!(items.len(), 1);
    }

    #[test]
    fn longest_marker_wins() {
        let rules = vec![
            rule("temporal", "前", AttachSide::Left),
            rule("background", "目前", AttachSide::Right),
        ];
        let (edges, items) = complement_subtree("d", &edus(&["目前情况", "良好"]), &rules);
        assert_eq!(edges[0].rel_original, "background");
        assert_eq!(edges[0].head, 2);
        assert!(items.is_empty());
    }

    #[test]
    fn equal_length_disagreeing_markers_are_ambiguous() {
        let rules = vec![
            rule("temporal", "时", AttachSide::Left),
            rule("causality", "故", AttachSide::Right),
        ];
        let (edges, items) = complement_subtree("d", &edus(&["当时", "故而"]), &rules);
        // File order picks the first rule.
        assert_eq!(edges[0].rel_original, "temporal");
        assert_eq!(edges[0].confidence, Confidence::Review);
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].reason, ReviewReason::AmbiguousMarker);
    }

    #[test]
    fn chains_of_fallbacks_form_a_left_headed_chain() {
        let (edges, items) = complement_subtree("d", &edus(&["一", "二", "三", "四"]), &[]);
        let heads: Vec<(usize, usize)> = edges.iter().map(|e| (e.dependent, e.head)).collect();
        assert_eq!(heads, vec![(2, 1), (3, 2), (4, 3)]);
        assert_eq!(items.len(), 3);
    }

    #[test]
    fn review_queue_round_trips() {
        let (_, items) = complement_subtree("d", &edus(&["甲", "乙"]), &[]);
        let mut buf = Vec::new();
        write_review_queue(&items, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "d\t2\t1\tjoint\tno_marker_match\n");
        let back = read_review_queue(text.as_bytes()).unwrap();
        assert_eq!(back, items);
    }
}
