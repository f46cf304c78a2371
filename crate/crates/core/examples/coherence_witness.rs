//! Three binary boxes: four events that are pairwise summable although
//! their total sum does not exist.

use boxlogic::algebra::{check_coherence_law, CheckOptions};
use boxlogic::product::{generate, GenerationKind};
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    let sc = Scenario::homogeneous(&BoxSpec::binary(), 3);
    let (s, _) = generate(&sc, GenerationKind::EffectAlgebra, &Default::default())?;
    let events = s.event_elements().expect("generated from boxes");
    let el = |name: &str| events[sc.parse_event(name).unwrap()];
    let family = ["x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"];
    let [a, b, c, d] = family.map(el);

    let show = |names: &[&str], xs: &[usize]| {
        let sum = s.sum(xs).map_or("undefined".to_string(), |r| format!("{} cells", s.element(r).count()));
        println!("  {:<32} {sum}", names.join(" + "));
    };
    show(&family[..3], &[a, b, c]);
    show(&family[2..], &[c, d]);
    show(&[family[0], family[1], family[3]], &[a, b, d]);
    show(&family, &[a, b, c, d]);

    let report = check_coherence_law(&s, &CheckOptions::default());
    println!(
        "coherence law: {} ({} minimal failing families of size {})",
        if report.pass { "holds" } else { "fails" },
        report.minimal_witnesses.len(),
        report.witness.len()
    );
    let names: Vec<String> = report
        .witness
        .iter()
        .map(|&p| events.iter().position(|&e| e == p).map_or(p.to_string(), |e| sc.event_name(e)))
        .collect();
    println!("least witness: {}", names.join(", "));
    Ok(())
}
