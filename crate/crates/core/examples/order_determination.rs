//! Compares the order of each effect algebra with the order induced by
//! its point-mass states.
//!
//! `cargo run --release --example order_determination`

use boxlogic::product::{generate, GenerationKind};
use boxlogic::states::{check_order_determining, classical_states};
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    for k in 1..=3 {
        let sc = Scenario::homogeneous(&BoxSpec::binary(), k);
        let (s, _) = generate(&sc, GenerationKind::EffectAlgebra, &Default::default())?;
        let r = check_order_determining(&s, &classical_states(&s))?;
        print!("k={k}: {} elements, {} states, distinguishing {}, ", s.len(), r.states, r.distinguishing);
        if r.pass {
            println!("order determining");
            continue;
        }
        let (p, q) = (r.witness[0], r.witness[1]);
        let rest = s.element(q).difference(s.element(p));
        println!("not order determining");
        println!(
            "  p = {} ({} cells) is inside q = {} ({} cells), but q \\ p is {}decomposable",
            s.element(p).to_hex(),
            s.element(p).count(),
            s.element(q).to_hex(),
            s.element(q).count(),
            if s.oracle().is_decomposable(&rest) { "" } else { "not " }
        );
    }
    Ok(())
}
