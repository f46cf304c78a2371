//! Checks `n` independent copies of a three-box state against every
//! LO inequality of the `3n`-box scenario.
//!
//! `cargo run --release --example lo_copies -- 2`

use boxlogic::lo::check_lo_copies;
use boxlogic::rational;
use boxlogic::states::{PRState, StatePolytope};
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let sc = Scenario::homogeneous(&BoxSpec::binary(), 3);
    let events: Vec<usize> = ["x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"]
        .iter()
        .map(|e| sc.parse_event(e).unwrap())
        .collect();
    let sol = StatePolytope::no_signaling(&sc).maximize_sum(&events)?;
    let p = PRState::new(sc.clone(), sol.argmax.atom_values)?;

    for (name, state) in [("optimal table", p), ("uniform table", PRState::uniform(sc))] {
        for copies in 1..=n {
            let r = check_lo_copies(&state, copies, &Default::default())?;
            println!(
                "{name}, {copies} cop{}: {} boxes, max {} ({} search nodes){}",
                if copies == 1 { "y" } else { "ies" },
                r.boxes,
                rational::to_string(&r.max_value),
                r.nodes,
                if r.violated { ", violated" } else { "" }
            );
        }
    }
    Ok(())
}
