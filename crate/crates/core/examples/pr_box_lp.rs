//! Maximizes four mutually exclusive events over the three-box
//! no-signaling polytope, prints the optimal table as JSON and maps it to
//! a state on the effect algebra and back.

use boxlogic::product::{generate, GenerationKind};
use boxlogic::rational;
use boxlogic::states::{verify_state, PRState, StatePolytope, StateSpace};
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    let sc = Scenario::homogeneous(&BoxSpec::binary(), 3);
    let events: Vec<usize> = ["x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"]
        .iter()
        .map(|n| sc.parse_event(n).unwrap())
        .collect();

    let polytope = StatePolytope::no_signaling(&sc);
    println!("{} variables, rank {}", polytope.vars, polytope.rank());
    let sol = polytope.maximize_sum(&events)?;
    println!("maximum: {}", rational::to_string(&sol.optimum));

    let table = PRState::new(sc.clone(), sol.argmax.atom_values)?;
    println!("{}", serde_json::to_string_pretty(&table.to_json())?);

    let (s, _) = generate(&sc, GenerationKind::EffectAlgebra, &Default::default())?;
    let space = StateSpace::new(&s)?;
    let rho = space.pr_to_logic_state(&table)?;
    println!("state on {} elements: {}", s.len(), if verify_state(&s, &rho, 0).pass { "valid" } else { "invalid" });
    assert_eq!(space.logic_state_to_pr(&rho)?, table);
    println!("round trip restores the table");
    Ok(())
}
