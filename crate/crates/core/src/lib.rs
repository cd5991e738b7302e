//! Graphcodes of two-parameter persistence modules over F2.

pub mod builder;
pub mod column;
pub mod grade;
pub mod graphcode;
pub mod interval;
pub mod isomorphism;
pub mod io;
pub mod oracle;
pub mod present;
pub mod presentation;
pub mod random;
mod union_find;

pub use builder::{build_graphcode, build_graphcode_with_stats, reduce_slice, BuildMode, BuildStats};
pub use column::{add_columns, pivot, F2Column};
pub use grade::{bar_order, entangled, Bar, Bigrade};
pub use graphcode::{Graphcode, GraphcodeError};
pub use interval::{
    decide_interval_decomposition, eta_from_graphcode, normal_form_check, DecisionResult, EtaSequence, StaircaseInterval,
};
pub use isomorphism::label_isomorphic;
pub use presentation::{Presentation, PresentationError, Relation};
