use std::collections::BTreeSet;

use crate::doc::DepDocument;
use crate::error::CoreError;
use crate::validate::{validate_tree_with, ValidationPolicy};

/// Structural validity, ignoring the single-root-child policy. The tree
/// queries below are meaningful for multi-rooted analyses too.
fn ensure_structure(doc: &DepDocument) -> Result<(), CoreError> {
    let report = validate_tree_with(
        doc,
        &ValidationPolicy {
            single_root_child: false,
        },
    );
    if report.is_valid() {
        Ok(())
    } else {
        Err(CoreError::InvalidTree(report))
    }
}

/// True iff no two edges cross when EDUs are laid out in document order
/// with the root at position 0. Checked as subtree-yield contiguity, which
/// is equivalent for head sequences rooted at the left edge.
pub fn is_projective(doc: &DepDocument) -> Result<bool, CoreError> {
    ensure_structure(doc)?;
    let n = doc.n_edus();
    let children = doc.children();
    for top in 1..=n {
        let mut min = top;
        let mut max = top;
        let mut count = 0usize;
        let mut stack = vec![top];
        while let Some(x) = stack.pop() {
            count += 1;
            min = min.min(x);
            max = max.max(x);
            stack.extend_from_slice(&children[x]);
        }
        if max - min + 1 != count {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique member of `edu_set` whose head lies outside the set (the
/// artificial root counts as outside).
pub fn subtree_root(doc: &DepDocument, edu_set: &BTreeSet<usize>) -> Result<usize, CoreError> {
    if edu_set.is_empty() {
        return Err(CoreError::EmptyEduSet);
    }
    let n = doc.n_edus();
    let mut root = None;
    for &member in edu_set {
        if member == 0 || member > n {
            return Err(CoreError::IndexOutOfRange(member));
        }
        if !edu_set.contains(&doc.head_of(member)) {
            if root.is_some() {
                return Err(CoreError::NotASubtree);
            }
            root = Some(member);
        }
    }
    root.ok_or(CoreError::NotASubtree)
}

/// Position of one EDU within its tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeFeatures {
    /// Edge count from the artificial root.
    pub depth: usize,
    /// Other dependents of the same head.
    pub sibling_count: usize,
    /// Dependents of this EDU.
    pub child_count: usize,
    /// Signed `dependent - head` in EDU positions.
    pub head_distance: isize,
}

pub fn tree_features(doc: &DepDocument, dependent: usize) -> Result<TreeFeatures, CoreError> {
    ensure_structure(doc)?;
    let n = doc.n_edus();
    if dependent == 0 || dependent > n {
        return Err(CoreError::IndexOutOfRange(dependent));
    }
    let children = doc.children();
    let head = doc.head_of(dependent);
    let mut depth = 0;
    let mut cur = dependent;
    while cur != 0 {
        depth += 1;
        cur = doc.head_of(cur);
    }
    Ok(TreeFeatures {
        depth,
        sibling_count: children[head].len() - 1,
        child_count: children[dependent].len(),
        head_distance: dependent as isize - head as isize,
    })
}
