//! Head percolation from constituency trees to dependencies.

use ddp_core::{DepDocument, DepEdge, Edu, ROOT_LABEL};
use ddp_corpus::{Nuclearity, RstNode, RstTree};

use crate::error::ConvertError;

/// Converts a constituency discourse tree into a dependency document.
///
/// The head EDU of an internal node is the head of its leftmost nucleus
/// child; every other child's head EDU attaches to it under the node's
/// relation label. The root node's head EDU attaches to the artificial
/// root. The result is always a valid projective tree over the same EDUs.
pub fn rst_to_dep(tree: &RstTree) -> Result<DepDocument, ConvertError> {
    tree.validate().map_err(ConvertError::InvalidRstTree)?;

    let mut edges = Vec::new();
    let top = percolate(&tree.root, &mut edges);
    edges.push(DepEdge::new(0, top, ROOT_LABEL));

    let edus: Vec<Edu> = tree
        .root
        .leaves()
        .into_iter()
        .map(|(index, text)| Edu::new(index, text))
        .collect();
    Ok(DepDocument::new(tree.doc_id.clone(), edus, edges)?)
}

/// Returns the node's head EDU and appends the attachments it induces.
fn percolate(node: &RstNode, edges: &mut Vec<DepEdge>) -> usize {
    match node {
        RstNode::Leaf { index, .. } => *index,
        RstNode::Internal { label, children } => {
            let child_heads: Vec<usize> = children
                .iter()
                .map(|(_, child)| percolate(child, edges))
                .collect();
            let head = children
                .iter()
                .zip(&child_heads)
                .find(|((nuclearity, _), _)| *nuclearity == Nuclearity::Nucleus)
                .map(|(_, &h)| h)
                .expect("validated internal node has a nucleus");
            for &child_head in &child_heads {
                if child_head != head {
                    edges.push(DepEdge::new(head, child_head, label.clone()));
                }
            }
            head
        }
    }
}
