//! Even-cardinality subsets of `{1, .., 2n}`: Boolean for `n = 1`, an
//! orthomodular lattice that is not Boolean for `n = 2`.

use boxlogic::algebra::{classify, fixtures, CheckOptions};

fn main() -> boxlogic::Result<()> {
    for n in 1..=3 {
        let s = fixtures::even_subsets(n);
        let c = classify(&s, &CheckOptions::default())?;
        println!(
            "n={n}: {} elements, {} atoms, OMP {}, OML {}, Boolean {}",
            s.len(),
            s.atoms().len(),
            c.is_omp,
            c.is_oml,
            c.is_boolean
        );
    }
    Ok(())
}
