//! PR-states, states on generated structures, and the exact LP engine.

mod diagnostics;
mod logic;
pub mod lp;
mod polytope;
mod pr;
mod sampling;

pub use logic::{
    check_order_determining, classical_states, logic_state_to_pr, pr_to_logic_state, verify_state, LogicState,
    OrderDeterminationReport, StateSpace,
};
pub use polytope::{build_state_polytope, maximize_linear, LpSolution, PolytopeKind, StatePolytope};
pub use pr::{no_signaling_rows, normalization_rows, ContextJson, PRState, PrJson, Row};
pub use sampling::{pr_box, random_no_signaling};
pub use diagnostics::{compare_definedness, product_state_extension, DefinednessReport};
