use serde::{Deserialize, Serialize};

use super::closure::{generate_effect_algebra, GenerationOptions};
use crate::algebra::EffectStructure;
use crate::boxes::PhaseSpace;
use crate::error::{Error, Result};
use crate::mask::Mask;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociativityReport {
    pub pass: bool,
    pub left_elements: usize,
    pub right_elements: usize,
}

/// Compares `(b1 ⊠ b2) ⊠ b3` with `b1 ⊠ (b2 ⊠ b3)` after mapping both
/// nested cell indexings onto flat coordinates of `Γ_1 × Γ_2 × Γ_3`.
pub fn check_product_associativity(
    b1: &EffectStructure,
    b2: &EffectStructure,
    b3: &EffectStructure,
    opts: &GenerationOptions,
) -> Result<AssociativityReport> {
    let (n1, n2, n3) = (b1.cells(), b2.cells(), b3.cells());
    let (b12, _) = generate_effect_algebra(&[b1, b2], opts)?;
    let (left, _) = generate_effect_algebra(&[&b12, b3], opts)?;
    drop(b12);
    let (b23, _) = generate_effect_algebra(&[b2, b3], opts)?;
    let (right, _) = generate_effect_algebra(&[b1, &b23], opts)?;

    let flat = PhaseSpace::new(vec![n1, n2, n3]);
    let outer_l = PhaseSpace::new(vec![n1 * n2, n3]);
    let inner_l = PhaseSpace::new(vec![n1, n2]);
    let outer_r = PhaseSpace::new(vec![n1, n2 * n3]);
    let inner_r = PhaseSpace::new(vec![n2, n3]);
    let map_l: Vec<usize> = (0..flat.size())
        .map(|c| {
            let [c12, c3] = outer_l.coords(c)[..] else { unreachable!() };
            let [c1, c2] = inner_l.coords(c12)[..] else { unreachable!() };
            flat.index(&[c1, c2, c3])
        })
        .collect();
    let map_r: Vec<usize> = (0..flat.size())
        .map(|c| {
            let [c1, c23] = outer_r.coords(c)[..] else { unreachable!() };
            let [c2, c3] = inner_r.coords(c23)[..] else { unreachable!() };
            flat.index(&[c1, c2, c3])
        })
        .collect();
    let reindex = |s: &EffectStructure, map: &[usize]| -> Result<Vec<Mask>> {
        if s.cells() != flat.size() {
            return Err(Error::Internal("product has an unexpected cell count".into()));
        }
        let mut v: Vec<Mask> = s
            .elements()
            .iter()
            .map(|m| Mask::from_cells(flat.size(), m.iter().map(|c| map[c])))
            .collect();
        v.sort_unstable();
        Ok(v)
    };
    let l = reindex(&left, &map_l)?;
    drop(left);
    let r = reindex(&right, &map_r)?;
    Ok(AssociativityReport {
        pass: l == r,
        left_elements: l.len(),
        right_elements: r.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{build_one_box_logic, BoxSpec};

    #[test]
    fn degenerate_boxes() {
        let d = build_one_box_logic(&BoxSpec::with_outcome_counts(&[1]).unwrap()).unwrap();
        let rep = check_product_associativity(&d, &d, &d, &Default::default()).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.left_elements, 2);
    }

    #[test]
    fn small_mixed_boxes() {
        let b = build_one_box_logic(&BoxSpec::binary()).unwrap();
        let t = build_one_box_logic(&BoxSpec::with_outcome_counts(&[2, 3]).unwrap()).unwrap();
        let one = build_one_box_logic(&BoxSpec::with_outcome_counts(&[2]).unwrap()).unwrap();
        let rep = check_product_associativity(&b, &t, &one, &Default::default()).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.left_elements, rep.right_elements);
    }
}
