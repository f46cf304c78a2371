//! Propositions that only concern some of the boxes, in both three-box
//! constructions.
//!
//! `cargo run --release --example localized`

use boxlogic::product::{generate, localized_elements, GenerationKind};
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    let sc = Scenario::homogeneous(&BoxSpec::binary(), 3);
    let (ea, _) = generate(&sc, GenerationKind::EffectAlgebra, &Default::default())?;
    let (omp, _) = generate(&sc, GenerationKind::Orthoposet, &Default::default())?;
    for boxes in [vec![0], vec![1, 2], vec![0, 2], vec![0, 1, 2]] {
        let a = localized_elements(&ea, &boxes)?;
        let b = localized_elements(&omp, &boxes)?;
        println!("boxes {boxes:?}: {} localized elements, same in both: {}", a.len(), a == b);
    }
    Ok(())
}
