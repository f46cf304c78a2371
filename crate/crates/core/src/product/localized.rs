use std::collections::BTreeSet;

use super::kron;
use crate::algebra::EffectStructure;
use crate::boxes::build_one_box_logic;
use crate::error::{Error, Result};
use crate::mask::Mask;

/// Elements of `s` of the form `X_1 × ⋯ × X_k` with `X_i = Γ_i` outside
/// `box_subset` and `X_i` a one-box proposition inside it. Ascending; always
/// contains 0 and 1.
pub fn localized_elements(s: &EffectStructure, box_subset: &[usize]) -> Result<Vec<Mask>> {
    let f = s
        .factorization()
        .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
    if let Some(&bad) = box_subset.iter().find(|&&i| i >= f.boxes()) {
        return Err(Error::Domain(format!("box {bad} out of range for {} boxes", f.boxes())));
    }
    let mut factors: Vec<Vec<Mask>> = Vec::with_capacity(f.boxes());
    for (i, spec) in f.scenario.boxes.iter().enumerate() {
        if box_subset.contains(&i) {
            factors.push(build_one_box_logic(spec)?.elements().to_vec());
        } else {
            factors.push(vec![Mask::full(f.factor_cells[i])]);
        }
    }
    let mut products = vec![Mask::full(1)];
    for fs in &factors {
        products = products
            .iter()
            .flat_map(|p| fs.iter().map(move |x| kron(p, x)))
            .collect();
    }
    let mut out: BTreeSet<Mask> = products.into_iter().filter(|m| s.contains(m)).collect();
    out.insert(Mask::empty(s.cells()));
    Ok(out.into_iter().collect())
}

/// [`localized_elements`] as element indices.
pub fn localized_indices(s: &EffectStructure, box_subset: &[usize]) -> Result<Vec<usize>> {
    Ok(localized_elements(s, box_subset)?
        .iter()
        .map(|m| s.index_of(m).expect("filtered to elements"))
        .collect())
}
