//! Finite partial algebras of propositions and their axiom checkers.

pub mod checks;
pub mod fixtures;
pub mod order;
mod report;
mod structure;

pub use checks::{
    check_atomistic, check_coherence_law, check_compatible, check_effect_algebra, check_lattice_and_boolean,
    check_orthoposet, classify, find_atoms, Classification, CoherenceReport, CompatibilityWitness, LatticeReport,
};
pub use order::OrderRelation;
pub use report::{all_pass, AxiomReport, CheckOptions, Scope};
pub use structure::{EffectStructure, Factorization, OplusRule, StructureKind};
pub(crate) use structure::minimal_events_owned;
