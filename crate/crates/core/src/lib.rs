//! Belief functions of the transferable belief model.
//!
//! Mass functions here may put positive mass on the empty set. That mass is
//! the conflict carried by the evidence, and conditioning and combination add
//! to it instead of renormalizing it away. [`fusion::normalize`] is provided
//! for comparison with the normalized rule.

pub mod corpus;
pub mod error;
pub mod frame;
pub mod fusion;
pub mod lattice;
pub mod massfn;

pub use corpus::{ConflictReport, EventKind, EvidenceItem, EvidentialCorpus, HistoryEntry, LeaveOneOut};
pub use error::{Error, Result};
pub use frame::{Frame, Partition, Subset, MAX_WORLDS};
pub use fusion::{
    combine_all, combine_commonality, combine_conjunctive, combine_focal_pairs, coarsen, condition,
    discount, mixture, normalize, pignistic, Pignistic,
};
pub use massfn::{BeliefView, CommonalityView, MassFunction};
