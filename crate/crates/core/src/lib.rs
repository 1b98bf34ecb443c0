//! Extensions of partial order-preserving maps between finite posets and
//! the constructions built on them: Darboux sets, completions, automorphism
//! groups, exact real cuts, filter limits and Darboux integration.

pub mod analysis;
pub mod completion;
pub mod cut;
pub mod error;
pub mod extension;
pub mod poset;
pub mod rational;
pub mod report;

pub use analysis::{FunctionSpec, OracleFunction, RangeFunction, Sequence, Span, StepFunction};
pub use completion::{darboux_completion, macneille_cuts, AutomorphismGroup, CompletionResult, SetLattice};
pub use cut::{CutBudget, Enclosure, Location, RationalCut};
pub use error::{Error, Result};
pub use extension::{lower_extension, upper_extension, ExtensionPair, PartialMonotoneMap};
pub use poset::{BitSet, FinitePoset, MonotoneMap};
pub use rational::{Extended, Rational};
pub use report::AuditReport;
