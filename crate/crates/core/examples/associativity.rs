//! `(A ⊠ B) ⊠ C` against `A ⊠ (B ⊠ C)`.
//!
//! Three binary boxes by default; pass `ternary` to make the third box
//! answer both inputs with three outcomes (about two million elements).

use std::time::Instant;

use boxlogic::boxes::build_one_box_logic;
use boxlogic::product::{check_product_associativity, GenerationOptions};
use boxlogic::BoxSpec;

fn main() -> boxlogic::Result<()> {
    let ternary = std::env::args().any(|a| a == "ternary");
    let b = build_one_box_logic(&BoxSpec::binary())?;
    let c = if ternary {
        build_one_box_logic(&BoxSpec::with_outcome_counts(&[3, 3])?)?
    } else {
        build_one_box_logic(&BoxSpec::binary())?
    };
    let opts = GenerationOptions { max_elements: 4_000_000, ..Default::default() };
    let start = Instant::now();
    let r = check_product_associativity(&b, &b, &c, &opts)?;
    println!(
        "associative: {} ({} and {} elements, {:.1?})",
        r.pass,
        r.left_elements,
        r.right_elements,
        start.elapsed()
    );
    Ok(())
}
