//! Ryser designs: construction by complementation, invariant checking,
//! arithmetic parameter scans and small exhaustive searches.
//!
//! All arithmetic is exact (`i64` and `Ratio<i64>`). Structures are limited
//! to 128 points so a block fits in one `u128`.

pub mod canon;
pub mod catalog;
pub mod cli;
pub mod complementation;
pub mod design;
pub mod exec;
pub mod feasibility;
pub mod format;
pub mod invariants;
pub mod pointset;
pub mod search;

pub use complementation::{complement, type1_witness, verify_complement_properties};
pub use design::{classify, DesignClass, IncidenceStructure};
pub use exec::Execution;
pub use feasibility::{apply_rules, enumerate_tuples, scan_report, ParameterTuple, Verdict};
pub use format::{parse_design, write_design};
pub use invariants::{ryser_invariants, verify_design, RyserInvariants};
pub use pointset::PointSet;
pub use search::{search_designs, search_type2, SearchResult, SearchSpec};
