//! Lift-based projectivization for non-projective gold trees.

use ddp_core::{is_projective, DepDocument};

use crate::error::ParseError;

/// Reattaches the dependent of the shortest non-projective arc to its
/// grandparent until the tree is projective. Labels are preserved and a
/// projective input comes back unchanged.
pub fn projectivize(doc: &DepDocument) -> Result<DepDocument, ParseError> {
    let mut out = doc.clone();
    // Each lift moves a whole subtree up one level, so total depth
    // strictly decreases and the loop terminates.
    loop {
        if is_projective(&out)? {
            return Ok(out);
        }
        let (_, dependent) = shortest_violating_arc(&out).expect("non-projective tree has one");
        let head = out.head_of(dependent);
        let grandparent = out.head_of(head);
        out.edge_mut(dependent).head = grandparent;
    }
}

/// The violating arc with the smallest span (ties to the smaller
/// dependent): some EDU strictly between head and dependent is not a
/// descendant of the head.
fn shortest_violating_arc(doc: &DepDocument) -> Option<(usize, usize)> {
    let n = doc.n_edus();
    let children = doc.children();
    let mut best: Option<(usize, usize)> = None; // (span, dependent)
    for d in 1..=n {
        let h = doc.head_of(d);
        if h == 0 {
            continue;
        }
        let (lo, hi) = (h.min(d), h.max(d));
        if hi - lo < 2 {
            continue;
        }
        let mut inside = vec![false; n + 1];
        let mut stack = vec![h];
        while let Some(x) = stack.pop() {
            inside[x] = true;
            stack.extend_from_slice(&children[x]);
        }
        if (lo + 1..hi).any(|between| !inside[between]) {
            let span = hi - lo;
            if best.map_or(true, |(s, bd)| (span, d) < (s, bd)) {
                best = Some((span, d));
            }
        }
    }
    best.map(|(span, d)| (span, d))
}
