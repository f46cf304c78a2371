//! Propositional structures of k-box no-signaling models.
//!
//! A box takes one of finitely many inputs and answers with one of finitely
//! many outcomes. Its propositions "input `a` yields an outcome in `A`" are
//! subsets of a finite phase space, and products of such boxes generate
//! concrete effect algebras and orthomodular posets over the product space.
//! This crate builds those structures, checks their axioms, and analyzes
//! their states with exact rational linear programming.
//!
//! ```
//! use boxlogic::boxes::{BoxSpec, Scenario};
//! use boxlogic::product::{generate, GenerationKind};
//!
//! let two_boxes = Scenario::homogeneous(&BoxSpec::binary(), 2);
//! let (s, report) = generate(&two_boxes, GenerationKind::EffectAlgebra, &Default::default()).unwrap();
//! assert_eq!(s.atoms().len(), 16);
//! assert_eq!(report.element_count, s.len());
//! ```

pub mod algebra;
pub mod boxes;
pub mod cache;
pub mod cli;
pub mod error;
pub mod lo;
pub mod mask;
pub mod product;
pub mod rational;
pub mod states;

pub use algebra::{EffectStructure, StructureKind};
pub use boxes::{BoxSpec, Scenario};
pub use error::{Error, Result};
pub use mask::{Mask, Proposition};
