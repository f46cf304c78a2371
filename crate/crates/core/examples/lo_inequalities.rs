//! Every maximal family of mutually exclusive events of three binary boxes,
//! bounded once over the no-signaling polytope and once over the states of
//! the orthoposet.
//!
//! `cargo run --release --example lo_inequalities`

use std::collections::BTreeMap;

use boxlogic::lo::{check_lo_violations, enumerate_lo_inequalities, CliqueOptions, OrthogonalityGraph};
use boxlogic::product::{generate, GenerationKind};
use boxlogic::rational;
use boxlogic::states::StatePolytope;
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    let sc = Scenario::homogeneous(&BoxSpec::binary(), 3);
    let g = OrthogonalityGraph::new(&sc)?;
    let ineqs = enumerate_lo_inequalities(&g, &CliqueOptions::default())?;
    println!("{} events, {} orthogonal pairs, {} maximal cliques", g.len(), g.edge_count(), ineqs.len());

    let (ea, _) = generate(&sc, GenerationKind::EffectAlgebra, &Default::default())?;
    let ns = check_lo_violations(&ea, &StatePolytope::no_signaling(&sc), ineqs.clone())?;
    let mut by_value: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for e in &ns.entries {
        let slot = by_value.entry(rational::to_string(&e.lp_max)).or_default();
        slot.0 += 1;
        slot.1 += usize::from(!e.sum_defined);
    }
    println!("no-signaling bounds:");
    for (v, (n, undefined)) in &by_value {
        println!("  {v:>5}: {n} cliques, {undefined} of them without a sum in the effect algebra");
    }

    let (omp, _) = generate(&sc, GenerationKind::Orthoposet, &Default::default())?;
    let poly = StatePolytope::additivity(&omp)?;
    println!("orthoposet states: {} variables, rank {}", poly.vars, poly.rank());
    let r = check_lo_violations(&omp, &poly, ineqs)?;
    println!("  {} violations, largest value {}", r.violations, rational::to_string(&r.max_lp));
    Ok(())
}
