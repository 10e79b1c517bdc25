//! Converters that turn heterogeneous discourse annotations into dependency
//! documents: head percolation for constituency trees, subtree completion
//! for predicate-argument records, relation mapping onto a unified label
//! set, and file-based review/correction plumbing.

mod complement;
mod corrections;
mod error;
mod mapping;
mod pdtb;
mod rst;
mod splits;

pub use complement::{
    complement_subtree, read_review_queue, write_review_queue, ReviewItem, ReviewReason,
};
pub use corrections::{apply_corrections, read_corrections, write_corrections, Correction};
pub use error::ConvertError;
pub use mapping::map_relations;
pub use pdtb::{pdtb_to_dep, read_head_overrides, ArgSide, HeadOverrideTable};
pub use rst::rst_to_dep;
pub use splits::{apply_edu_splits, read_edu_splits, write_edu_splits, EduSplitRecord};
