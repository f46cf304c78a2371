//! The propositions of a single box and their structure.
//!
//! `cargo run --example one_box_logic -- 3 2` builds a box with a ternary
//! and a binary input; without arguments both inputs are binary.

use boxlogic::algebra::{check_lattice_and_boolean, check_orthoposet, CheckOptions};
use boxlogic::boxes::build_one_box_logic;
use boxlogic::BoxSpec;

fn main() -> boxlogic::Result<()> {
    let counts: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let spec = if counts.is_empty() { BoxSpec::binary() } else { BoxSpec::with_outcome_counts(&counts)? };
    let logic = build_one_box_logic(&spec)?;
    let width = logic.cells();

    println!("{} cells, {} elements, {} atoms", width, logic.len(), logic.atoms().len());
    for (i, m) in logic.elements().iter().enumerate() {
        let bits: String = (0..width).map(|c| if m.contains(c) { '1' } else { '.' }).collect();
        let tag = if logic.atoms().contains(&i) { "  atom" } else { "" };
        println!("  {i:>3}  {bits}{tag}");
    }

    let opts = CheckOptions::default();
    for r in check_orthoposet(&logic, &opts) {
        println!("{}: {}", r.axiom, if r.pass { "ok" } else { "fails" });
    }
    let lat = check_lattice_and_boolean(&logic, &opts);
    println!("lattice: {}, boolean: {}", lat.is_lattice, lat.is_boolean);
    Ok(())
}
