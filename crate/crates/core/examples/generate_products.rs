//! Generates the effect algebra and the orthoposet of `k` binary boxes,
//! writes both to a cache directory and reads them back.
//!
//! `cargo run --release --example generate_products -- 3`

use std::time::Instant;

use boxlogic::cache;
use boxlogic::product::{generate, GenerationKind};
use boxlogic::{BoxSpec, Scenario};

fn main() -> boxlogic::Result<()> {
    let k: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let sc = Scenario::homogeneous(&BoxSpec::binary(), k);
    let dir = std::env::temp_dir().join("boxlogic-example-cache");
    std::fs::create_dir_all(&dir)?;

    for kind in [GenerationKind::EffectAlgebra, GenerationKind::Orthoposet] {
        let (s, report) = generate(&sc, kind, &Default::default())?;
        println!(
            "{kind:?}: {} elements, {} atoms, {} rounds, {:?}",
            report.element_count, report.atom_count, report.closure_rounds, report.wall_time
        );
        let path = cache::cache_path(&dir, &sc, s.kind());
        cache::save(&s, &path)?;
        let start = Instant::now();
        let (back, header) = cache::load(&path)?;
        assert_eq!(back.elements(), s.elements());
        println!("  cached at {} ({} elements reloaded in {:?})", path.display(), header.elements, start.elapsed());
    }
    Ok(())
}
