//! Projection of scheme-specific relation labels onto the unified set.

use ddp_core::{DepDocument, SchemeId, ROOT_LABEL};
use ddp_corpus::RelationMapping;

use crate::error::ConvertError;

/// Fills `rel_unified` on every edge from `mapping`, keyed by the corpus
/// scheme. Root edges keep `root`. In strict mode an unmapped label is an
/// error; otherwise it is left unmapped and counted.
///
/// Idempotent: the unified label is recomputed from `rel_original`, so
/// mapping twice equals mapping once.
pub fn map_relations(
    docs: Vec<DepDocument>,
    scheme: SchemeId,
    mapping: &RelationMapping,
    strict: bool,
) -> Result<(Vec<DepDocument>, usize), ConvertError> {
    let mut misses = 0usize;
    let mut out = Vec::with_capacity(docs.len());
    for mut doc in docs {
        for d in 1..=doc.n_edus() {
            let edge = doc.edge(d);
            if edge.head == 0 || edge.rel_original == ROOT_LABEL {
                doc.edge_mut(d).rel_unified = Some(ROOT_LABEL.to_string());
                continue;
            }
            match mapping.get(scheme, &edge.rel_original) {
                Some(unified) => {
                    let unified = unified.to_string();
                    doc.edge_mut(d).rel_unified = Some(unified);
                }
                None if strict => {
                    return Err(ConvertError::MissingMapping {
                        scheme,
                        label: edge.rel_original.clone(),
                    });
                }
                None => {
                    misses += 1;
                    doc.edge_mut(d).rel_unified = None;
                }
            }
        }
        out.push(doc);
    }
    Ok((out, misses))
}
