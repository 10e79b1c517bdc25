//! File formats and corpus-level operations for dependency discourse data.
//!
//! All formats are UTF-8, LF-terminated, tab-separated where columnar, with
//! `#` starting comment or header lines. Writers emit a canonical byte form
//! that reading reproduces exactly.

mod ddep;
mod error;
mod mapfile;
mod mkr;
mod pdr;
mod rsx;
mod split;
mod stats;

pub use ddep::{dep_corpus_to_string, read_dep_corpus, write_dep_corpus};
pub use error::FormatError;
pub use mapfile::{read_relation_mapping, write_relation_mapping, RelationMapping};
pub use mkr::{read_marker_rules, write_marker_rules, AttachSide, MarkerRule};
pub use pdr::{read_pdtb_records, write_pdtb_records, PdtbKind, PdtbRelationRecord};
pub use rsx::{read_rst_trees, rst_trees_to_string, write_rst_trees, Nuclearity, RstNode, RstTree};
pub use split::split_corpus;
pub use stats::{corpus_stats, CorpusStats, StatsOptions};
