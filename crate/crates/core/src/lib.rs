//! Core data model for dependency discourse structure: EDUs, labeled
//! head-sequence trees over them, validation of tree invariants, and
//! structural queries (projectivity, subtree roots, tree features).

mod doc;
mod error;
mod scheme;
mod tree;
mod validate;

pub use doc::{
    Confidence, DepDocument, DepEdge, Edu, LabelView, Provenance, ROOT_LABEL, UNMAPPED_LABEL,
};
pub use error::CoreError;
pub use scheme::{RelationScheme, SchemeId};
pub use tree::{is_projective, subtree_root, tree_features, TreeFeatures};
pub use validate::{validate_tree, validate_tree_with, ValidationPolicy, ValidationReport, Violation};
