//! Two side questions about the three-box effect algebra: whether its sum
//! rule agrees with "bounded by 1 in every state", and whether products of
//! one-box states extend to the orthoposet.
//!
//! `cargo run --release --example diagnostics -- 3000`

use boxlogic::product::{generate, GenerationKind};
use boxlogic::rational::frac;
use boxlogic::states::{compare_definedness, product_state_extension, PRState, StatePolytope};
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    let limit: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3000);
    let sc = Scenario::homogeneous(&BoxSpec::binary(), 3);
    let (ea, _) = generate(&sc, GenerationKind::EffectAlgebra, &Default::default())?;
    let r = compare_definedness(&ea, limit)?;
    println!(
        "{} disjoint pairs examined{}: {} agree, {} defined only by the rule, {} only operationally",
        r.pairs,
        if r.complete { " (all)" } else { "" },
        r.agree,
        r.rule_only.len(),
        r.operational_only.len()
    );

    let (omp, _) = generate(&sc, GenerationKind::Orthoposet, &Default::default())?;
    let poly = StatePolytope::additivity(&omp)?;
    let one = Scenario::homogeneous(&BoxSpec::binary(), 1);
    let biased = PRState::from_fn(one.clone(), |_, o| if o[0] == 0 { frac(1, 3) } else { frac(2, 3) })?;
    let factors = [PRState::uniform(one.clone()), PRState::deterministic(one, &[2]), biased];
    let ext = product_state_extension(&omp, &poly, &factors)?;
    println!("product of three one-box states extends: {}", ext.is_some());
    Ok(())
}
