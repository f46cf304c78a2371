//! Box products: product atoms over `Γ_1 × ⋯ × Γ_k` and the structures
//! they generate.
//!
//! Cells of a product are indexed in mixed radix with box 1 slowest, so a
//! nested product `(Γ_1 × Γ_2) × Γ_3` and the flat `Γ_1 × Γ_2 × Γ_3` share
//! the same cell numbering.

mod associativity;
mod closure;
mod decompose;
mod localized;

pub use associativity::{check_product_associativity, AssociativityReport};
pub use closure::{
    generate, generate_effect_algebra, generate_from_atoms, generate_orthoposet, ClosureStrategy,
    GenerationKind, GenerationOptions, GenerationReport, DEFAULT_MAX_ELEMENTS,
};
pub use decompose::DecompositionOracle;
pub use localized::{localized_elements, localized_indices};

use crate::algebra::{EffectStructure, Factorization};
use crate::boxes::Scenario;
use crate::error::{Error, Result};
use crate::mask::{Mask, MAX_CELLS};

/// `[a_1α_1 … a_kα_k]`: one `(input, outcome)` per box and its cell set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductAtom {
    pub per_box: Vec<(usize, usize)>,
    pub realization: Mask,
}

/// `A × B` as a cell set over `|A| · |B|` cells.
pub fn kron(a: &Mask, b: &Mask) -> Mask {
    let (na, nb) = (a.universe(), b.universe());
    let mut out = Mask::empty(na * nb);
    for i in a.iter() {
        for j in b.iter() {
            out.insert(i * nb + j);
        }
    }
    out
}

/// Factorization of `S_1 ⊠ ⋯ ⊠ S_m`: the scenarios are concatenated and
/// every event is the product of one event per factor.
pub fn product_factorization(boxes: &[&EffectStructure]) -> Result<Factorization> {
    if boxes.is_empty() {
        return Err(Error::Domain("a product needs at least one factor".into()));
    }
    let mut scenario = Vec::new();
    let mut factor_cells = Vec::new();
    let mut events = vec![Mask::full(1)];
    let mut cells = 1usize;
    for b in boxes {
        let f = b
            .factorization()
            .ok_or_else(|| Error::Structural("factor has no recorded box structure".into()))?;
        cells = cells
            .checked_mul(f.cells())
            .filter(|&c| c <= MAX_CELLS)
            .ok_or_else(|| Error::Resource {
                what: "phase-space cell",
                cap: MAX_CELLS,
                reached: cells.saturating_mul(f.cells()),
            })?;
        scenario.extend(f.scenario.boxes.iter().cloned());
        factor_cells.extend(&f.factor_cells);
        events = events
            .iter()
            .flat_map(|e| f.events.iter().map(move |g| kron(e, g)))
            .collect();
    }
    Ok(Factorization {
        scenario: Scenario::new(scenario),
        factor_cells,
        events,
    })
}

/// Factorization of the product of the one-box logics of a scenario.
pub fn scenario_factorization(sc: &Scenario) -> Result<Factorization> {
    let logics = sc
        .boxes
        .iter()
        .map(crate::boxes::build_one_box_logic)
        .collect::<Result<Vec<_>>>()?;
    product_factorization(&logics.iter().collect::<Vec<_>>())
}

/// Every product atom of a factorization, in event order.
pub fn product_atoms(f: &Factorization) -> Vec<ProductAtom> {
    f.events
        .iter()
        .enumerate()
        .map(|(e, m)| ProductAtom {
            per_box: f.scenario.event_label(e),
            realization: m.clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{build_one_box_logic, BoxProposition, BoxSpec};

    #[test]
    fn kron_is_cylinder_product() {
        let spec = BoxSpec::binary();
        let space = spec.phase_space();
        let x0 = BoxProposition::atom(0, 0).realization(&space);
        let y1 = BoxProposition::atom(1, 1).realization(&space);
        let m = kron(&x0, &y1);
        assert_eq!(m.universe(), 16);
        assert_eq!(m.count(), 4);
        for c in 0..16 {
            assert_eq!(m.contains(c), x0.contains(c / 4) && y1.contains(c % 4));
        }
    }

    #[test]
    fn product_event_labels_follow_scenario() {
        let b = build_one_box_logic(&BoxSpec::binary()).unwrap();
        let f = product_factorization(&[&b, &b, &b]).unwrap();
        assert_eq!(f.events.len(), 64);
        assert_eq!(f.cells(), 64);
        let atoms = product_atoms(&f);
        let e = f.scenario.parse_event("x1y1y0").unwrap();
        assert_eq!(atoms[e].per_box, vec![(0, 1), (1, 1), (1, 0)]);
        // every context partitions the cells
        for ctx in 0..f.scenario.context_count() {
            let inputs = f.scenario.context_inputs(ctx);
            let mut acc = Mask::empty(64);
            for ev in f.scenario.context_events(&inputs) {
                assert!(acc.is_disjoint(&f.events[ev]));
                acc.union_with(&f.events[ev]);
            }
            assert!(acc.is_full());
        }
    }
}
