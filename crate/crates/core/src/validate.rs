use std::fmt;

use crate::doc::DepDocument;

/// Tunable validation strictness.
#[derive(Debug, Clone)]
pub struct ValidationPolicy {
    /// Require exactly one dependent of the artificial root. Multi-rooted
    /// analyses are reported, not rejected, when this is off.
    pub single_root_child: bool,
}

impl Default for ValidationPolicy {
    fn default() -> Self {
        ValidationPolicy {
            single_root_child: true,
        }
    }
}

/// One violated invariant, with the offending EDU where applicable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyText { edu: usize },
    SelfHead { edu: usize },
    HeadOutOfRange { edu: usize, head: usize },
    NoRootEdge,
    MultipleRootChildren { edus: Vec<usize> },
    Cycle { edus: Vec<usize> },
    Unreachable { edu: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyText { edu } => write!(f, "EDU {edu}: empty text"),
            Violation::SelfHead { edu } => write!(f, "EDU {edu}: is its own head"),
            Violation::HeadOutOfRange { edu, head } => {
                write!(f, "EDU {edu}: head {head} out of range")
            }
            Violation::NoRootEdge => write!(f, "no root edge"),
            Violation::MultipleRootChildren { edus } => {
                write!(f, "multiple root children: {edus:?}")
            }
            Violation::Cycle { edus } => write!(f, "cycle: {edus:?}"),
            Violation::Unreachable { edu } => write!(f, "EDU {edu}: unreachable from root"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_cycle(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Cycle { .. } | Violation::SelfHead { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "0 violations");
        }
        write!(f, "{} violations:", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Checks every tree invariant under the default policy. Total: malformed
/// structure comes back as report entries, never as a failure.
pub fn validate_tree(doc: &DepDocument) -> ValidationReport {
    validate_tree_with(doc, &ValidationPolicy::default())
}

pub fn validate_tree_with(doc: &DepDocument, policy: &ValidationPolicy) -> ValidationReport {
    let n = doc.n_edus();
    let mut violations = Vec::new();

    for edu in doc.edus() {
        if edu.text.is_empty() {
            violations.push(Violation::EmptyText { edu: edu.index });
        }
    }

    // `usable[d]` records whether d's head can be followed when walking up.
    let mut usable = vec![false; n + 1];
    for edge in doc.edges() {
        if edge.head == edge.dependent {
            violations.push(Violation::SelfHead { edu: edge.dependent });
        } else if edge.head > n {
            violations.push(Violation::HeadOutOfRange {
                edu: edge.dependent,
                head: edge.head,
            });
        } else {
            usable[edge.dependent] = true;
        }
    }

    let root_children: Vec<usize> = doc
        .edges()
        .iter()
        .filter(|e| e.head == 0 && e.dependent != 0)
        .map(|e| e.dependent)
        .collect();
    if root_children.is_empty() && n > 0 {
        violations.push(Violation::NoRootEdge);
    } else if root_children.len() > 1 && policy.single_root_child {
        violations.push(Violation::MultipleRootChildren {
            edus: root_children,
        });
    }

    // Walk head chains. 0 = unseen, 1 = on current walk, 2 = reaches root,
    // 3 = does not reach root.
    let mut state = vec![0u8; n + 1];
    state[0] = 2;
    let mut in_cycle = vec![false; n + 1];
    for start in 1..=n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        let outcome = loop {
            if !usable[cur] {
                break 3;
            }
            state[cur] = 1;
            path.push(cur);
            let head = doc.head_of(cur);
            match state[head] {
                0 => cur = head,
                1 => {
                    // Found a new cycle: the tail of `path` from `head` on.
                    let pos = path.iter().position(|&x| x == head).unwrap();
                    let mut cycle = path[pos..].to_vec();
                    cycle.sort_unstable();
                    for &m in &cycle {
                        in_cycle[m] = true;
                    }
                    violations.push(Violation::Cycle { edus: cycle });
                    break 3;
                }
                2 => break 2,
                _ => break 3,
            }
        };
        for d in path {
            state[d] = outcome;
        }
        if state[start] == 0 {
            state[start] = outcome;
        }
    }
    for d in 1..=n {
        if state[d] == 3 && !in_cycle[d] {
            violations.push(Violation::Unreachable { edu: d });
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{DepDocument, Edu};

    fn doc(heads: &[usize]) -> DepDocument {
        let n = heads.len();
        let edus = (1..=n).map(|i| Edu::new(i, format!("e{i}"))).collect();
        let labels: Vec<&str> = heads.iter().map(|&h| if h == 0 { "root" } else { "joint" }).collect();
        DepDocument::from_heads("d", edus, heads, &labels).unwrap()
    }

    #[test]
    fn chain_is_valid() {
        assert!(validate_tree(&doc(&[0, 1, 2])).is_valid());
    }

    #[test]
    fn multiple_root_children_depend_on_policy() {
        let d = doc(&[0, 0]);
        let strict = validate_tree(&d);
        assert_eq!(
            strict.violations(),
            &[Violation::MultipleRootChildren { edus: vec![1, 2] }]
        );
        let lax = validate_tree_with(
            &d,
            &ValidationPolicy {
                single_root_child: false,
            },
        );
        assert!(lax.is_valid());
    }

    #[test]
    fn two_cycle_reports_missing_root_and_cycle() {
        let report = validate_tree(&doc(&[2, 1]));
        assert!(report.violations().contains(&Violation::NoRootEdge));
        assert!(report
            .violations()
            .contains(&Violation::Cycle { edus: vec![1, 2] }));
        assert_eq!(report.len(), 2);
    }

    #[test]
    fn node_feeding_a_cycle_is_unreachable() {
        // 1 hangs off the 2<->3 cycle.
        let report = validate_tree(&doc(&[2, 3, 2]));
        assert!(report
            .violations()
            .contains(&Violation::Cycle { edus: vec![2, 3] }));
        assert!(report
            .violations()
            .contains(&Violation::Unreachable { edu: 1 }));
    }

    #[test]
    fn out_of_range_and_self_heads_are_reported() {
        let report = validate_tree(&doc(&[0, 5, 3]));
        assert!(report
            .violations()
            .contains(&Violation::HeadOutOfRange { edu: 2, head: 5 }));
        assert!(report.violations().contains(&Violation::SelfHead { edu: 3 }));
    }

    #[test]
    fn empty_text_is_reported() {
        let edus = vec![Edu::new(1, "")];
        let d = DepDocument::from_heads("d", edus, &[0], &["root"]).unwrap();
        assert_eq!(
            validate_tree(&d).violations(),
            &[Violation::EmptyText { edu: 1 }]
        );
    }
}
