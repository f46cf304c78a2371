//! Small hand-built structures used as reference points.

use super::{EffectStructure, StructureKind};
use crate::mask::Mask;

/// Even-cardinality subsets of `{0, .., 2n-1}` ordered by inclusion.
/// Boolean for `n = 1` (just `{∅, Ω}`), an orthomodular lattice but not Boolean for `n = 2`.
pub fn even_subsets(n: usize) -> EffectStructure {
    let cells = 2 * n;
    assert!(cells <= 20, "even_subsets is meant for small n");
    let masks = (0u32..1 << cells)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| Mask::from_cells(cells, (0..cells).filter(|c| m >> c & 1 == 1)));
    EffectStructure::concrete(cells, masks, StructureKind::Logic).expect("bounds are even subsets")
}

/// `{0, 1}` over a single cell.
pub fn trivial() -> EffectStructure {
    EffectStructure::concrete(1, [Mask::empty(1), Mask::full(1)], StructureKind::Logic).expect("bounds present")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(even_subsets(1).len(), 2);
        assert_eq!(even_subsets(2).len(), 8);
        assert_eq!(even_subsets(3).len(), 32);
        assert_eq!(even_subsets(2).atoms().len(), 6);
    }
}
