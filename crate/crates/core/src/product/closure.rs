use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::{product_factorization, DecompositionOracle};
use crate::algebra::{EffectStructure, Factorization, StructureKind};
use crate::boxes::{build_one_box_logic, Scenario};
use crate::error::{Error, Result};
use crate::mask::Mask;

pub const DEFAULT_MAX_ELEMENTS: usize = 1_000_000;

/// Which closure rule to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerationKind {
    /// `p ⊕ q = p ∪ q` when disjoint and the complement of the union
    /// decomposes into disjoint atoms.
    EffectAlgebra,
    /// Closure under complement and unions of disjoint members.
    Orthoposet,
}

/// How the effect-algebra closure is explored. Both reach the same set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureStrategy {
    /// Extend each new element by one atom at a time.
    #[default]
    AtomExtension,
    /// Combine each new element with every element found so far.
    AllPairs,
}

#[derive(Debug, Clone)]
pub struct GenerationOptions {
    pub strategy: ClosureStrategy,
    pub parallel: bool,
    pub max_elements: usize,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        GenerationOptions {
            strategy: ClosureStrategy::AtomExtension,
            parallel: true,
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub element_count: usize,
    pub atom_count: usize,
    pub closure_rounds: usize,
    #[serde(with = "millis")]
    pub wall_time: Duration,
    pub structure_kind: GenerationKind,
}

mod millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// `𝔅_1 ⊠ ⋯ ⊠ 𝔅_m` under the decomposable-complement sum.
pub fn generate_effect_algebra(
    boxes: &[&EffectStructure],
    opts: &GenerationOptions,
) -> Result<(EffectStructure, GenerationReport)> {
    generate_product(boxes, GenerationKind::EffectAlgebra, opts)
}

/// The concrete orthoposet generated by the product atoms.
pub fn generate_orthoposet(
    boxes: &[&EffectStructure],
    opts: &GenerationOptions,
) -> Result<(EffectStructure, GenerationReport)> {
    generate_product(boxes, GenerationKind::Orthoposet, opts)
}

/// Builds the one-box logics of a scenario and closes their product.
pub fn generate(
    scenario: &Scenario,
    kind: GenerationKind,
    opts: &GenerationOptions,
) -> Result<(EffectStructure, GenerationReport)> {
    let logics = scenario
        .boxes
        .iter()
        .map(build_one_box_logic)
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&EffectStructure> = logics.iter().collect();
    generate_product(&refs, kind, opts)
}

fn generate_product(
    boxes: &[&EffectStructure],
    kind: GenerationKind,
    opts: &GenerationOptions,
) -> Result<(EffectStructure, GenerationReport)> {
    let f = product_factorization(boxes)?;
    let cells = f.cells();
    let generators: Vec<Mask> = f.events.clone();
    generate_inner(cells, &generators, kind, opts, Some(Arc::new(f)))
}

/// Closes an explicit generating set over `cells` cells. The atoms of the
/// result are the generators minimal among the generators.
pub fn generate_from_atoms(
    cells: usize,
    generators: &[Mask],
    kind: GenerationKind,
    opts: &GenerationOptions,
) -> Result<(EffectStructure, GenerationReport)> {
    generate_inner(cells, generators, kind, opts, None)
}

fn generate_inner(
    cells: usize,
    generators: &[Mask],
    kind: GenerationKind,
    opts: &GenerationOptions,
    factorization: Option<Arc<Factorization>>,
) -> Result<(EffectStructure, GenerationReport)> {
    let start = Instant::now();
    if let Some(bad) = generators.iter().find(|m| m.universe() != cells) {
        return Err(Error::Domain(format!(
            "generator over {} cells in a {cells}-cell space",
            bad.universe()
        )));
    }
    let atoms: Vec<Mask> = crate::algebra::minimal_events_owned(generators);
    let (mut elements, rounds) = match kind {
        GenerationKind::EffectAlgebra => {
            let oracle = DecompositionOracle::new(atoms.clone());
            match opts.strategy {
                ClosureStrategy::AtomExtension => atom_extension(cells, &atoms, &oracle, opts)?,
                ClosureStrategy::AllPairs => all_pairs(cells, generators, &oracle, opts)?,
            }
        }
        GenerationKind::Orthoposet => orthoposet_closure(cells, generators, opts)?,
    };
    elements.par_sort_unstable();
    let structure_kind = match kind {
        GenerationKind::EffectAlgebra => StructureKind::EffectAlgebra,
        GenerationKind::Orthoposet => StructureKind::Orthoposet,
    };
    let s = match kind {
        GenerationKind::EffectAlgebra => {
            let idx = |m: &Mask| elements.binary_search(m).expect("atoms are elements");
            let atom_idx = atoms.iter().map(idx).collect();
            EffectStructure::concrete_sorted(cells, elements, atom_idx, structure_kind, factorization)?
        }
        GenerationKind::Orthoposet => {
            let atom_idx = minimal_members(&elements);
            EffectStructure::concrete_sorted(cells, elements, atom_idx, structure_kind, factorization)?
        }
    };
    let report = GenerationReport {
        element_count: s.len(),
        atom_count: s.atoms().len(),
        closure_rounds: rounds,
        wall_time: start.elapsed(),
        structure_kind: kind,
    };
    Ok((s, report))
}

fn check_cap(count: usize, opts: &GenerationOptions) -> Result<()> {
    if count > opts.max_elements {
        return Err(Error::Resource {
            what: "element",
            cap: opts.max_elements,
            reached: count,
        });
    }
    Ok(())
}

/// Runs `f` over the frontier, in parallel when asked, and returns the new
/// candidates sorted and deduplicated so the outcome never depends on
/// scheduling.
fn expand<F>(frontier: &[Mask], parallel: bool, f: F) -> Vec<Mask>
where
    F: Fn(&Mask) -> Vec<Mask> + Sync + Send,
{
    let mut out: Vec<Mask> = if parallel {
        frontier.par_iter().flat_map_iter(&f).collect()
    } else {
        frontier.iter().flat_map(&f).collect()
    };
    out.par_sort_unstable();
    out.dedup();
    out
}

fn atom_extension(
    cells: usize,
    atoms: &[Mask],
    oracle: &DecompositionOracle,
    opts: &GenerationOptions,
) -> Result<(Vec<Mask>, usize)> {
    let full = Mask::full(cells);
    let mut seen: FxHashSet<Mask> = FxHashSet::default();
    seen.insert(Mask::empty(cells));
    let mut list = vec![Mask::empty(cells)];
    let mut frontier = list.clone();
    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        let new = expand(&frontier, opts.parallel, |x| {
            atoms
                .iter()
                .filter(|a| a.is_disjoint(x))
                .map(|a| x.union(a))
                .filter(|y| !seen.contains(y) && oracle.is_decomposable(&full.difference(y)))
                .collect()
        });
        for y in &new {
            seen.insert(y.clone());
        }
        list.extend(new.iter().cloned());
        check_cap(list.len(), opts)?;
        frontier = new;
    }
    Ok((list, rounds))
}

fn all_pairs(
    cells: usize,
    generators: &[Mask],
    oracle: &DecompositionOracle,
    opts: &GenerationOptions,
) -> Result<(Vec<Mask>, usize)> {
    let full = Mask::full(cells);
    let mut seen: FxHashSet<Mask> = FxHashSet::default();
    let mut list = Vec::new();
    for m in std::iter::once(Mask::empty(cells)).chain(generators.iter().cloned()) {
        if seen.insert(m.clone()) {
            list.push(m);
        }
    }
    let mut done = 0;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let n = list.len();
        let snapshot = &list[..n];
        let idx: Vec<usize> = (done..n).collect();
        let fresh: Vec<Mask> = {
            let pair = |&i: &usize| -> Vec<Mask> {
                let p = &snapshot[i];
                snapshot[..=i]
                    .iter()
                    .filter(|q| p.is_disjoint(q))
                    .map(|q| p.union(q))
                    .filter(|u| !seen.contains(u) && oracle.is_decomposable(&full.difference(u)))
                    .collect()
            };
            let mut v: Vec<Mask> = if opts.parallel {
                idx.par_iter().flat_map_iter(pair).collect()
            } else {
                idx.iter().flat_map(pair).collect()
            };
            v.par_sort_unstable();
            v.dedup();
            v
        };
        done = n;
        if fresh.is_empty() {
            break;
        }
        for m in &fresh {
            seen.insert(m.clone());
        }
        list.extend(fresh);
        check_cap(list.len(), opts)?;
    }
    Ok((list, rounds))
}

fn orthoposet_closure(cells: usize, generators: &[Mask], opts: &GenerationOptions) -> Result<(Vec<Mask>, usize)> {
    let w = cells.div_ceil(64);
    let mut seen: FxHashSet<Mask> = FxHashSet::default();
    let mut list = Vec::new();
    let mut arena: Vec<u64> = Vec::new();
    let push = |m: Mask, list: &mut Vec<Mask>, arena: &mut Vec<u64>, seen: &mut FxHashSet<Mask>| {
        if seen.insert(m.clone()) {
            arena.extend_from_slice(m.words());
            list.push(m);
        }
    };
    for m in std::iter::once(Mask::empty(cells)).chain(generators.iter().cloned()) {
        push(m, &mut list, &mut arena, &mut seen);
    }
    let mut done = 0;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let n = list.len();
        let idx: Vec<usize> = (0..n).collect();
        let arena_ref = &arena;
        let list_ref = &list;
        let seen_ref = &seen;
        let work = |&i: &usize| -> Vec<Mask> {
            let mut out = Vec::new();
            let p = &list_ref[i];
            let c = p.complement();
            if !seen_ref.contains(&c) {
                out.push(c);
            }
            if i >= done {
                let pw = &arena_ref[i * w..(i + 1) * w];
                for j in 0..i {
                    let qw = &arena_ref[j * w..(j + 1) * w];
                    if pw.iter().zip(qw).all(|(a, b)| a & b == 0) {
                        let u = p.union(&list_ref[j]);
                        if !seen_ref.contains(&u) {
                            out.push(u);
                        }
                    }
                }
            }
            out
        };
        let mut fresh: Vec<Mask> = if opts.parallel {
            idx.par_iter().flat_map_iter(work).collect()
        } else {
            idx.iter().flat_map(work).collect()
        };
        fresh.par_sort_unstable();
        fresh.dedup();
        done = n;
        if fresh.is_empty() {
            break;
        }
        for m in fresh {
            push(m, &mut list, &mut arena, &mut seen);
        }
        check_cap(list.len(), opts)?;
    }
    Ok((list, rounds))
}

/// Minimal nonzero members of a sorted family closed under complement and
/// disjoint unions, where the order is plain inclusion.
fn minimal_members(sorted: &[Mask]) -> Vec<usize> {
    let mut by_size: Vec<usize> = (0..sorted.len()).filter(|&i| !sorted[i].is_empty()).collect();
    by_size.sort_by_key(|&i| (sorted[i].count(), i));
    let mut atoms: Vec<usize> = Vec::new();
    for &i in &by_size {
        // Anything strictly below a non-atom sits above some atom, and atoms
        // are visited first, so checking the atoms found so far suffices.
        if !atoms.iter().any(|&a| sorted[a].is_subset(&sorted[i])) {
            atoms.push(i);
        }
    }
    atoms.sort_unstable();
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxSpec;

    fn binary(k: usize) -> Scenario {
        Scenario::homogeneous(&BoxSpec::binary(), k)
    }

    #[test]
    fn one_box_closure_is_idempotent() {
        let (s, rep) = generate(&binary(1), GenerationKind::EffectAlgebra, &Default::default()).unwrap();
        assert_eq!((s.len(), s.atoms().len()), (6, 4));
        assert_eq!(rep.element_count, 6);
        let logic = build_one_box_logic(&BoxSpec::binary()).unwrap();
        assert_eq!(s.elements(), logic.elements());
        let (o, _) = generate(&binary(1), GenerationKind::Orthoposet, &Default::default()).unwrap();
        assert_eq!(o.elements(), s.elements());
    }

    #[test]
    fn two_boxes_both_closures_agree() {
        let opts = GenerationOptions::default();
        let (e, _) = generate(&binary(2), GenerationKind::EffectAlgebra, &opts).unwrap();
        let (o, _) = generate(&binary(2), GenerationKind::Orthoposet, &opts).unwrap();
        assert_eq!(e.len(), 82);
        assert_eq!(e.atoms().len(), 16);
        assert_eq!(e.elements(), o.elements());
        let pairs = GenerationOptions {
            strategy: ClosureStrategy::AllPairs,
            ..opts
        };
        let (p, _) = generate(&binary(2), GenerationKind::EffectAlgebra, &pairs).unwrap();
        assert_eq!(p.elements(), e.elements());
    }

    #[test]
    fn cap_is_reported() {
        let opts = GenerationOptions {
            max_elements: 50,
            ..Default::default()
        };
        let err = generate(&binary(2), GenerationKind::EffectAlgebra, &opts).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: 50, .. }));
    }

    #[test]
    fn minimal_members_on_even_sets() {
        let fam = crate::algebra::fixtures::even_subsets(2);
        assert_eq!(minimal_members(fam.elements()).len(), 6);
    }
}
