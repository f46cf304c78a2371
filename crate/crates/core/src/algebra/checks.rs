//! Axiom checkers for effect algebras, orthomodular posets and lattices.
//!
//! Every checker reports the lexicographically least witness (in canonical
//! element order) among the tuples it visits. Quantifiers over pairs and
//! triples are exhaustive below the limits in [`CheckOptions`] and fall back
//! to seeded sampling above them; the report's `scope` says which happened.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::order::{self, OrderRelation};
use super::report::{AxiomReport, CheckOptions, Scope};
use super::EffectStructure;
use crate::error::{Error, Result};
use crate::mask::Mask;

/// Minimal nonzero elements under ≤, ascending.
pub fn minimal_nonzero(s: &EffectStructure) -> Vec<usize> {
    let z = s.zero();
    if s.is_concrete() {
        // If q ≤ p then p ⊖ q ≤ p too, so a proper nonzero lower bound
        // exists iff one exists with at most half of p's cells.
        let mut by_size: Vec<usize> = (0..s.len()).filter(|&i| i != z).collect();
        by_size.sort_by_key(|&i| (s.element(i).count(), i));
        (0..s.len())
            .filter(|&p| p != z)
            .filter(|&p| {
                let half = s.element(p).count() / 2;
                !by_size
                    .iter()
                    .take_while(|&&q| s.element(q).count() <= half)
                    .any(|&q| q != p && s.leq(q, p))
            })
            .collect()
    } else {
        (0..s.len())
            .filter(|&p| p != z)
            .filter(|&p| !(0..s.len()).any(|q| q != z && q != p && s.leq(q, p)))
            .collect()
    }
}

/// Atoms: the minimal nonzero elements.
pub fn find_atoms(s: &EffectStructure) -> Vec<usize> {
    minimal_nonzero(s)
}

/// Every element is a ⊕-sum of atoms. Reachability from 0 by adding one atom
/// at a time; witness is the least unreachable element.
pub fn check_atomistic(s: &EffectStructure) -> AxiomReport {
    let atoms = find_atoms(s);
    let mut seen = vec![false; s.len()];
    seen[s.zero()] = true;
    let mut stack = vec![s.zero()];
    while let Some(x) = stack.pop() {
        for &a in &atoms {
            if let Some(y) = s.oplus(x, a) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    let witness = seen.iter().position(|&v| !v).map(|p| vec![p]);
    AxiomReport::exhaustive("atomistic", witness)
}

fn structural_check(s: &EffectStructure) -> Result<()> {
    for p in 0..s.len() {
        let c = s
            .complement(p)
            .ok_or_else(|| Error::Structural(format!("element {p} has no complement")))?;
        if s.complement(c) != Some(p) {
            return Err(Error::Structural(format!("complement is not involutive at element {p}")));
        }
    }
    if s.complement(s.zero()) != Some(s.one()) {
        return Err(Error::Structural("complement of 0 is not 1".into()));
    }
    Ok(())
}

fn rng(opts: &CheckOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn e1_holds(s: &EffectStructure, p: usize, q: usize) -> bool {
    s.oplus(p, q) == s.oplus(q, p)
}

fn e2_holds(s: &EffectStructure, p: usize, q: usize, r: usize) -> bool {
    let Some(qr) = s.oplus(q, r) else { return true };
    let Some(lhs) = s.oplus(p, qr) else { return true };
    s.oplus(p, q).and_then(|pq| s.oplus(pq, r)) == Some(lhs)
}

/// Random triple `(p, q, r)` with `p ⊕ (q ⊕ r)` likely defined: the certificate
/// atoms of a random element split into three groups.
fn sample_split(s: &EffectStructure, g: &mut ChaCha8Rng) -> Option<(usize, usize, usize)> {
    let t = g.gen_range(0..s.len());
    let cert = s.certificate(t)?;
    let mut groups = [Vec::new(), Vec::new(), Vec::new()];
    for pos in cert {
        groups[g.gen_range(0..3)].push(s.atoms()[pos]);
    }
    let [p, q, r] = groups.map(|g| s.sum(&g));
    Some((p?, q?, r?))
}

/// E1–E4. Fails with a structural error before any axiom if the complement
/// map is missing or not involutive.
pub fn check_effect_algebra(s: &EffectStructure, opts: &CheckOptions) -> Result<Vec<AxiomReport>> {
    structural_check(s)?;
    let n = s.len();

    let e1 = if n <= opts.pair_limit {
        let w = (0..n).find_map(|p| (0..n).find(|&q| !e1_holds(s, p, q)).map(|q| vec![p, q]));
        AxiomReport::exhaustive("E1", w)
    } else {
        let mut g = rng(opts, 1);
        let mut w: Option<Vec<usize>> = None;
        for _ in 0..opts.samples {
            let (p, q) = (g.gen_range(0..n), g.gen_range(0..n));
            if !e1_holds(s, p, q) {
                w = w.min(Some(vec![p, q])).or(Some(vec![p, q]));
            }
        }
        AxiomReport::sampled("E1", w, opts.samples)
    };

    let e2 = if n <= opts.triple_limit {
        let mut w = None;
        'outer: for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if !e2_holds(s, p, q, r) {
                        w = Some(vec![p, q, r]);
                        break 'outer;
                    }
                }
            }
        }
        AxiomReport::exhaustive("E2", w)
    } else {
        let mut g = rng(opts, 2);
        let mut w: Option<Vec<usize>> = None;
        let mut note = |t: Vec<usize>| {
            if w.as_ref().is_none_or(|cur| t < *cur) {
                w = Some(t);
            }
        };
        // Atom triples are exhaustive even in the sampled regime.
        let atoms = s.atoms();
        if atoms.len() <= 256 {
            for &p in atoms {
                for &q in atoms {
                    for &r in atoms {
                        if !e2_holds(s, p, q, r) {
                            note(vec![p, q, r]);
                        }
                    }
                }
            }
        }
        for _ in 0..opts.samples {
            let (p, q, r) = if g.gen_bool(0.5) {
                match sample_split(s, &mut g) {
                    Some(t) => t,
                    None => continue,
                }
            } else {
                (g.gen_range(0..n), g.gen_range(0..n), g.gen_range(0..n))
            };
            if !e2_holds(s, p, q, r) {
                note(vec![p, q, r]);
            }
        }
        AxiomReport::sampled("E2", w, opts.samples)
    };

    let e3 = (0..n).find(|&p| s.solutions(p, s.one()).len() != 1).map(|p| vec![p]);
    let e4 = (0..n)
        .find(|&p| p != s.zero() && s.oplus(p, s.one()).is_some())
        .map(|p| vec![p, s.one()]);

    Ok(vec![
        e1,
        e2,
        AxiomReport::exhaustive("E3", e3),
        AxiomReport::exhaustive("E4", e4),
    ])
}

/// Result of the coherence-law search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub axiom: String,
    pub pass: bool,
    /// Least failing family of minimum size, as ascending element indices.
    pub witness: Vec<usize>,
    /// Every failing family of that minimum size found by the atom sweep.
    pub minimal_witnesses: Vec<Vec<usize>>,
    /// Cardinality bound of the element-family search.
    pub bound: usize,
    /// Whether every clique of mutually orthogonal atoms was visited.
    pub atom_sweep_complete: bool,
    /// Whether families of arbitrary elements (not only atoms) were searched.
    pub element_families_searched: bool,
    pub families_checked: usize,
    pub scope: Scope,
}

/// Cap on the number of atom cliques visited by the coherence sweep.
const ATOM_CLIQUE_CAP: usize = 20_000_000;

/// Sum of `family` is undefined although the members are mutually
/// orthogonal. Searches every clique of ⊕-orthogonal atoms (extending a
/// clique only while its sum is defined) and, on structures with at most
/// `family_limit` elements, every orthogonal element family up to
/// `family_bound` members.
pub fn check_coherence_law(s: &EffectStructure, opts: &CheckOptions) -> CoherenceReport {
    let mut atoms: Vec<usize> = s.atoms().to_vec();
    atoms.sort_unstable();
    let mut failures: Vec<Vec<usize>> = Vec::new();
    let mut checked = 0usize;
    let mut complete = true;

    // Atom sweep: DFS over cliques in lexicographic order.
    let m = atoms.len();
    let adj: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && s.orthogonal(atoms[i], atoms[j])).collect())
        .collect();
    let mut stack: Vec<(Vec<usize>, usize, usize)> = (0..m).rev().map(|i| (vec![i], atoms[i], i + 1)).collect();
    while let Some((clique, sum, _)) = stack.pop() {
        checked += 1;
        if checked > ATOM_CLIQUE_CAP {
            complete = false;
            break;
        }
        let last = *clique.last().unwrap();
        for j in (last + 1..m).rev() {
            if clique.iter().all(|&i| adj[i][j]) {
                let mut next = clique.clone();
                next.push(j);
                match s.oplus(sum, atoms[j]) {
                    Some(t) => stack.push((next, t, j + 1)),
                    None => {
                        checked += 1;
                        failures.push(next.iter().map(|&i| atoms[i]).collect());
                    }
                }
            }
        }
    }

    // Element families, for small structures.
    let searched = s.len() <= opts.family_limit;
    if searched {
        let nz: Vec<usize> = (0..s.len()).filter(|&p| p != s.zero()).collect();
        let mut family = Vec::new();
        element_families(s, &nz, 0, &mut family, s.zero(), opts.family_bound, &mut failures, &mut checked);
    }

    failures.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    failures.dedup();
    let min = failures.first().map(Vec::len);
    let minimal: Vec<Vec<usize>> = failures.iter().take_while(|f| Some(f.len()) == min).cloned().collect();
    CoherenceReport {
        axiom: "coherence".into(),
        pass: failures.is_empty(),
        witness: minimal.first().cloned().unwrap_or_default(),
        minimal_witnesses: minimal,
        bound: opts.family_bound,
        atom_sweep_complete: complete,
        element_families_searched: searched,
        families_checked: checked,
        scope: if complete { Scope::Exhaustive } else { Scope::Sampled },
    }
}

#[allow(clippy::too_many_arguments)]
fn element_families(
    s: &EffectStructure,
    nz: &[usize],
    from: usize,
    family: &mut Vec<usize>,
    sum: usize,
    bound: usize,
    failures: &mut Vec<Vec<usize>>,
    checked: &mut usize,
) {
    if family.len() == bound {
        return;
    }
    for i in from..nz.len() {
        let p = nz[i];
        if !family.iter().all(|&q| s.orthogonal(q, p)) {
            continue;
        }
        family.push(p);
        *checked += 1;
        match s.oplus(sum, p) {
            Some(t) => element_families(s, nz, i + 1, family, t, bound, failures, checked),
            None => {
                if family.len() >= 2 {
                    failures.push(family.clone());
                }
            }
        }
        family.pop();
    }
}

/// Pairwise order-orthogonal families of atoms of size `2..=bound`, in
/// (size, lexicographic) order, plus element families when the structure
/// has at most `family_limit` elements.
fn l4_families(s: &EffectStructure, opts: &CheckOptions) -> Vec<Vec<usize>> {
    let mut pool: Vec<usize> = if s.len() <= opts.family_limit {
        (0..s.len()).filter(|&p| p != s.zero()).collect()
    } else {
        s.atoms().to_vec()
    };
    pool.sort_unstable();
    let m = pool.len();
    let adj: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && order::order_orthogonal(s, pool[i], pool[j])).collect())
        .collect();
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    for _ in 2..=opts.family_bound {
        let mut next = Vec::new();
        for c in &level {
            let last = *c.last().unwrap();
            for j in last + 1..m {
                if c.iter().all(|&i| adj[i][j]) {
                    let mut d = c.clone();
                    d.push(j);
                    next.push(d);
                }
            }
        }
        out.extend(next.iter().map(|c| c.iter().map(|&i| pool[i]).collect::<Vec<_>>()));
        level = next;
    }
    out
}

/// Upper-bound bitsets per element, restricted to concrete structures:
/// `up[p]` = every `u` with `p ≤ u`.
struct UpSets {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl UpSets {
    fn for_elements(s: &EffectStructure, elems: &[usize]) -> Self {
        let words = s.len().div_ceil(64);
        let rows = elems
            .iter()
            .map(|&p| {
                let mut row = vec![0u64; words];
                for u in 0..s.len() {
                    if s.leq(p, u) {
                        row[u / 64] |= 1 << (u % 64);
                    }
                }
                row
            })
            .collect();
        UpSets { words, rows }
    }
}

fn concrete_sup(s: &EffectStructure, ub: &[u64]) -> Option<usize> {
    let mut cand = s.element(s.one()).clone();
    let mut members = Vec::new();
    for (i, &w) in ub.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let u = i * 64 + w.trailing_zeros() as usize;
            w &= w - 1;
            cand = cand.intersection(s.element(u));
            members.push(u);
        }
    }
    let m = s.index_of(&cand)?;
    (ub[m / 64] >> (m % 64) & 1 == 1 && members.iter().all(|&u| s.leq(m, u))).then_some(m)
}

/// L1–L5. L4 is checked on the families described in [`l4_families`];
/// L2 and L5 exhaustively or by sampling depending on the limits.
pub fn check_orthoposet(s: &EffectStructure, opts: &CheckOptions) -> Vec<AxiomReport> {
    let n = s.len();
    let (z, one) = (s.zero(), s.one());

    let l1 = (0..n)
        .find(|&p| !s.leq(z, p) || !s.leq(p, one))
        .map(|p| vec![p]);

    let comp = |p: usize| s.complement(p);
    let l2_fails = |p: usize, q: usize| {
        s.leq(p, q)
            && match (comp(p), comp(q)) {
                (Some(pc), Some(qc)) => !s.leq(qc, pc),
                _ => true,
            }
    };
    let l2 = if n <= opts.pair_limit {
        let w = (0..n).find_map(|p| (0..n).find(|&q| l2_fails(p, q)).map(|q| vec![p, q]));
        AxiomReport::exhaustive("L2", w)
    } else {
        let mut g = rng(opts, 3);
        let mut w: Option<Vec<usize>> = None;
        for _ in 0..opts.samples {
            let (p, q) = (g.gen_range(0..n), g.gen_range(0..n));
            if l2_fails(p, q) && w.as_ref().is_none_or(|c| vec![p, q] < *c) {
                w = Some(vec![p, q]);
            }
        }
        AxiomReport::sampled("L2", w, opts.samples)
    };

    let l3 = (0..n)
        .find(|&p| comp(p).and_then(comp) != Some(p))
        .map(|p| vec![p]);

    // L4: first failing family in (size, lexicographic) order.
    let families = l4_families(s, opts);
    let l4 = if s.is_concrete() {
        let mut base: Vec<usize> = families.iter().flatten().copied().collect();
        base.sort_unstable();
        base.dedup();
        let ups = UpSets::for_elements(s, &base);
        let row = |p: usize| &ups.rows[base.binary_search(&p).unwrap()];
        families
            .iter()
            .find(|f| {
                let mut ub = row(f[0]).clone();
                for &p in &f[1..] {
                    for (a, b) in ub.iter_mut().zip(row(p)) {
                        *a &= b;
                    }
                }
                debug_assert_eq!(ub.len(), ups.words);
                concrete_sup(s, &ub).is_none()
            })
            .cloned()
    } else {
        families.iter().find(|f| order::supremum(s, f).is_none()).cloned()
    };

    let l5_fails = |p: usize, q: usize| -> bool {
        let Some(pc) = comp(p) else { return true };
        let Some(m) = order::infimum(s, &[q, pc]) else { return true };
        order::supremum(s, &[p, m]) != Some(q)
    };
    let l5 = if n <= opts.orthomodular_limit {
        let rel = OrderRelation::new(s);
        let l5_fast = |p: usize, q: usize| -> bool {
            let Some(pc) = comp(p) else { return true };
            let Some(m) = rel.meet(q, pc) else { return true };
            rel.join(p, m) != Some(q)
        };
        let w = (0..n).find_map(|p| (0..n).find(|&q| rel.leq(p, q) && l5_fast(p, q)).map(|q| vec![p, q]));
        AxiomReport::exhaustive("L5", w)
    } else {
        let mut g = rng(opts, 5);
        let rounds = (opts.samples / 10).max(1);
        let mut w: Option<Vec<usize>> = None;
        for _ in 0..rounds {
            let q = g.gen_range(0..n);
            let Some(p) = random_lower(s, q, &mut g) else { continue };
            if l5_fails(p, q) && w.as_ref().is_none_or(|c| vec![p, q] < *c) {
                w = Some(vec![p, q]);
            }
        }
        AxiomReport::sampled("L5", w, rounds)
    };

    vec![
        AxiomReport::exhaustive("L1", l1),
        l2,
        AxiomReport::exhaustive("L3", l3),
        AxiomReport::exhaustive("L4", l4),
        l5,
    ]
}

/// A random `p ≤ q`: the sum of a random subset of `q`'s certificate atoms
/// when that is an element below `q`, else a uniformly chosen lower bound.
fn random_lower(s: &EffectStructure, q: usize, g: &mut ChaCha8Rng) -> Option<usize> {
    if let Some(cert) = s.certificate(q) {
        let mut picks: Vec<usize> = cert.iter().filter(|_| g.gen_bool(0.5)).map(|&a| s.atoms()[a]).collect();
        picks.shuffle(g);
        if let Some(p) = s.sum(&picks) {
            if s.leq(p, q) {
                return Some(p);
            }
        }
    }
    let lower = order::lower_bounds(s, &[q]);
    lower.choose(g).copied()
}

/// Lattice and Boolean classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub is_lattice: bool,
    pub is_boolean: bool,
    /// Pair without a supremum.
    pub lattice_witness: Vec<usize>,
    /// Triple `(a, b, c)` violating `a ∨ (b ∧ c) = (a ∨ b) ∧ (a ∨ c)`.
    pub distributive_witness: Vec<usize>,
    pub lattice_scope: Scope,
    pub distributive_scope: Scope,
}

type BinOp<'a> = Box<dyn Fn(usize, usize) -> Option<usize> + 'a>;

pub fn check_lattice_and_boolean(s: &EffectStructure, opts: &CheckOptions) -> LatticeReport {
    let n = s.len();
    let mut g = rng(opts, 7);
    let (lattice_witness, lattice_scope, join, meet): (Option<Vec<usize>>, Scope, BinOp, BinOp) =
        if n <= opts.lattice_limit {
            let rel = OrderRelation::new(s);
            let w = (0..n).find_map(|p| (p + 1..n).find(|&q| rel.join(p, q).is_none()).map(|q| vec![p, q]));
            let rel2 = rel.clone();
            (
                w,
                Scope::Exhaustive,
                Box::new(move |p, q| rel.join(p, q)),
                Box::new(move |p, q| rel2.meet(p, q)),
            )
        } else {
            let mut w: Option<Vec<usize>> = None;
            for _ in 0..opts.samples / 10 {
                let (mut p, mut q) = (g.gen_range(0..n), g.gen_range(0..n));
                if p > q {
                    std::mem::swap(&mut p, &mut q);
                }
                if order::supremum(s, &[p, q]).is_none() && w.as_ref().is_none_or(|c| vec![p, q] < *c) {
                    w = Some(vec![p, q]);
                }
            }
            (
                w,
                Scope::Sampled,
                Box::new(|p, q| order::supremum(s, &[p, q])),
                Box::new(|p, q| order::infimum(s, &[p, q])),
            )
        };
    let is_lattice = lattice_witness.is_none();

    let distributive_fails = |a: usize, b: usize, c: usize| -> bool {
        let lhs = meet(b, c).and_then(|bc| join(a, bc));
        let rhs = match (join(a, b), join(a, c)) {
            (Some(x), Some(y)) => meet(x, y),
            _ => None,
        };
        lhs.is_none() || lhs != rhs
    };
    let (distributive_witness, distributive_scope) = if !is_lattice {
        (None, lattice_scope)
    } else if n <= opts.distributive_limit {
        let mut w = None;
        'outer: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if distributive_fails(a, b, c) {
                        w = Some(vec![a, b, c]);
                        break 'outer;
                    }
                }
            }
        }
        (w, Scope::Exhaustive)
    } else {
        let mut w: Option<Vec<usize>> = None;
        for _ in 0..opts.samples {
            let t = vec![g.gen_range(0..n), g.gen_range(0..n), g.gen_range(0..n)];
            if distributive_fails(t[0], t[1], t[2]) && w.as_ref().is_none_or(|c| t < *c) {
                w = Some(t);
            }
        }
        (w, Scope::Sampled)
    };

    LatticeReport {
        is_lattice,
        is_boolean: is_lattice && distributive_witness.is_none(),
        lattice_witness: lattice_witness.unwrap_or_default(),
        distributive_witness: distributive_witness.unwrap_or_default(),
        lattice_scope,
        distributive_scope,
    }
}

/// `p = p' ⊕ r`, `q = q' ⊕ r` with `p' ⊕ q' ⊕ r` defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityWitness {
    pub p1: usize,
    pub q1: usize,
    pub r: usize,
}

/// Compatibility of two elements given by their masks. Tries `r = p ∩ q`
/// first, then every common lower bound in ascending order.
pub fn check_compatible(s: &EffectStructure, p: &Mask, q: &Mask) -> Result<Option<CompatibilityWitness>> {
    let pi = s.index_of(p).ok_or_else(|| Error::Domain("first proposition is not an element".into()))?;
    let qi = s.index_of(q).ok_or_else(|| Error::Domain("second proposition is not an element".into()))?;
    Ok(compatible_indices(s, pi, qi))
}

pub fn compatible_indices(s: &EffectStructure, p: usize, q: usize) -> Option<CompatibilityWitness> {
    let try_r = |r: usize| -> Option<CompatibilityWitness> {
        for p1 in s.solutions(r, p) {
            for q1 in s.solutions(r, q) {
                if s.sum(&[p1, q1, r]).is_some() {
                    return Some(CompatibilityWitness { p1, q1, r });
                }
            }
        }
        None
    };
    if s.is_concrete() {
        if let Some(r) = s.index_of(&s.element(p).intersection(s.element(q))) {
            if let Some(w) = try_r(r) {
                return Some(w);
            }
        }
    }
    order::lower_bounds(s, &[p, q]).into_iter().find_map(try_r)
}

/// Computed kind flags of a structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_effect_algebra: bool,
    pub satisfies_coherence: bool,
    pub is_omp: bool,
    pub is_oml: bool,
    pub is_boolean: bool,
}

pub fn classify(s: &EffectStructure, opts: &CheckOptions) -> Result<Classification> {
    let ea = super::report::all_pass(&check_effect_algebra(s, opts)?);
    let coherent = check_coherence_law(s, opts).pass;
    let omp = super::report::all_pass(&check_orthoposet(s, opts));
    let lat = if omp {
        check_lattice_and_boolean(s, opts)
    } else {
        LatticeReport {
            is_lattice: false,
            is_boolean: false,
            lattice_witness: Vec::new(),
            distributive_witness: Vec::new(),
            lattice_scope: Scope::Exhaustive,
            distributive_scope: Scope::Exhaustive,
        }
    };
    Ok(Classification {
        is_effect_algebra: ea,
        satisfies_coherence: coherent,
        is_omp: omp,
        is_oml: omp && lat.is_lattice,
        is_boolean: omp && lat.is_boolean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fixtures, StructureKind};
    use crate::boxes::{build_one_box_logic, BoxSpec};

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    #[test]
    fn one_box_binary_is_an_oml() {
        let s = build_one_box_logic(&BoxSpec::binary()).unwrap();
        assert!(check_effect_algebra(&s, &opts()).unwrap().iter().all(|r| r.pass));
        assert!(check_orthoposet(&s, &opts()).iter().all(|r| r.pass));
        assert!(check_coherence_law(&s, &opts()).pass);
        let lat = check_lattice_and_boolean(&s, &opts());
        assert!(lat.is_lattice && !lat.is_boolean);
        assert!(check_atomistic(&s).pass);
    }

    #[test]
    fn trivial_structure() {
        let s = fixtures::trivial();
        assert_eq!(s.len(), 2);
        assert_eq!(find_atoms(&s), vec![s.one()]);
        assert!(check_effect_algebra(&s, &opts()).unwrap().iter().all(|r| r.pass));
        let c = check_coherence_law(&s, &opts());
        assert!(c.pass && c.atom_sweep_complete);
        assert!(check_lattice_and_boolean(&s, &opts()).is_boolean);
    }

    #[test]
    fn missing_complement_is_structural() {
        let cells = 3;
        let masks = [Mask::empty(cells), Mask::full(cells), Mask::from_cells(cells, [0])];
        let s = EffectStructure::concrete(cells, masks, StructureKind::Logic).unwrap();
        assert!(matches!(check_effect_algebra(&s, &opts()), Err(Error::Structural(_))));
    }

    #[test]
    fn even_subsets_classification() {
        let b = fixtures::even_subsets(1);
        assert_eq!(b.len(), 2);
        assert!(check_lattice_and_boolean(&b, &opts()).is_boolean);
        let l = fixtures::even_subsets(2);
        assert_eq!(l.len(), 8);
        assert!(check_orthoposet(&l, &opts()).iter().all(|r| r.pass));
        let rep = check_lattice_and_boolean(&l, &opts());
        assert!(rep.is_lattice);
        assert!(!rep.is_boolean);
        assert_eq!(rep.distributive_witness.len(), 3);
    }

    #[test]
    fn compatibility() {
        let s = build_one_box_logic(&BoxSpec::binary()).unwrap();
        let a = s.atoms().to_vec();
        let x0 = s.element(a[0]).clone();
        let y0 = s.element(a[2]).clone();
        let w = check_compatible(&s, &x0, &x0).unwrap().unwrap();
        assert_eq!((w.p1, w.q1, w.r), (s.zero(), s.zero(), a[0]));
        assert!(check_compatible(&s, &x0, &y0).unwrap().is_none());
        assert!(matches!(
            check_compatible(&s, &Mask::from_cells(4, [0]), &x0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn table_structure_matches_concrete_copy() {
        // The four-element Boolean algebra {0, a, b, 1} by table.
        let sums = [
            (0, 0, 0),
            (0, 1, 1),
            (1, 0, 1),
            (0, 2, 2),
            (2, 0, 2),
            (0, 3, 3),
            (3, 0, 3),
            (1, 2, 3),
            (2, 1, 3),
        ];
        let t = EffectStructure::from_table(4, 0, 3, &sums).unwrap();
        assert_eq!(find_atoms(&t), vec![1, 2]);
        assert!(check_effect_algebra(&t, &opts()).unwrap().iter().all(|r| r.pass));
        assert!(check_orthoposet(&t, &opts()).iter().all(|r| r.pass));
        assert!(check_lattice_and_boolean(&t, &opts()).is_boolean);
        assert!(check_atomistic(&t).pass);
        // dropping commutativity breaks E1
        let broken: Vec<_> = sums.iter().copied().filter(|&t| t != (2, 0, 2)).collect();
        let broken = EffectStructure::from_table(4, 0, 3, &broken).unwrap();
        let e1 = &check_effect_algebra(&broken, &opts()).unwrap()[0];
        assert!(!e1.pass);
        assert_eq!(e1.witness, vec![0, 2]);
    }

    #[test]
    fn even_subsets_satisfy_coherence() {
        let s = fixtures::even_subsets(2);
        let c = check_coherence_law(&s, &opts());
        assert!(c.pass && c.element_families_searched);
    }
}
