//! Event structures with asymmetric conflict and with flow relations:
//! configuration semantics, history preserving bisimilarity, and
//! behaviour-preserving reduction by folding same-label events.
//!
//! The crate models three variants. Prime structures pair a causal order
//! with symmetric hereditary conflict. The asymmetric variant replaces
//! conflict by directed arrows (`a -> b`: b disables a, equivalently a
//! precedes b wherever both occur). The flow variant replaces causality by
//! an intransitive relation of possible direct causes, giving disjunctive
//! causality. Prime structures embed into both.
//!
//! On top of the data model sit configuration enumeration, an equivalence
//! checker for history preserving bisimilarity, fold gates and fold
//! constructions for the two expressive variants, and a reducer that
//! iterates folds to irreducible forms (which are not unique in general).

pub mod aes;
pub mod aes_fold;
pub mod doc;
pub mod dot;
pub mod error;
pub mod events;
pub mod fes;
pub mod fes_fold;
pub mod gen;
pub mod hpbisim;
pub mod iso;
pub mod par;
pub mod pes;
pub mod reduce;
pub mod semantics;
pub mod structure;
pub mod validate;

pub use aes::Aes;
pub use aes_fold::{fold_aes, is_combinable_aes, AesFoldingPlan, FoldingMap, HistoryMatch};
pub use error::{Error, Result};
pub use events::{EventSet, Events, Relation};
pub use fes::Fes;
pub use fes_fold::{fold_fes, is_combinable_fes, FesFoldingPlan};
pub use gen::{generate_random_pes, GenParams};
pub use hpbisim::{hp_bisimilar, pomset_isos, HpWitness, PomsetIso};
pub use iso::{canonical_hash, canonical_key, isomorphic};
pub use pes::Pes;
pub use reduce::{all_minimal_forms, enumerate_candidates, minimize, MinimalForms, Strategy};
pub use semantics::{configurations, extends, ConfigFamily, DEFAULT_CAP};
pub use structure::{EventStructure, Kind};
pub use validate::{ValidationReport, Violation};
