use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::boxes::Scenario;
use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::product::DecompositionOracle;

/// How the partial sum of two elements is determined.
#[derive(Debug, Clone)]
pub enum OplusRule {
    /// `p ⊕ q = p ∪ q` whenever the masks are disjoint and the union is an
    /// element. This is the rule of every concrete structure built here.
    DisjointUnion,
    /// An explicit table of defined sums, keyed by ordered element pairs.
    /// Used for abstract (non set-represented) structures.
    Table(FxHashMap<(u32, u32), u32>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    /// A hand-built concrete logic (one-box logics, fixtures).
    Logic,
    /// Closure under the decomposable-complement sum.
    EffectAlgebra,
    /// Closure under complements and disjoint unions.
    Orthoposet,
    /// Table-defined structure without a set representation.
    Abstract,
}

/// Box-level provenance of a generated structure.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub scenario: Scenario,
    /// `|Γ_i|` for every box, in box order.
    pub factor_cells: Vec<usize>,
    /// Realization of every event, indexed like [`Scenario::event_count`].
    pub events: Vec<Mask>,
}

impl Factorization {
    pub fn boxes(&self) -> usize {
        self.factor_cells.len()
    }

    pub fn cells(&self) -> usize {
        self.factor_cells.iter().product()
    }
}

/// A finite set of propositions with a partial sum, bounds and complement.
///
/// Elements are kept in canonical order: ascending by mask read as an
/// unsigned integer. Indices into [`elements`](Self::elements) are the
/// currency of every checker and report.
#[derive(Debug)]
pub struct EffectStructure {
    cells: usize,
    elements: Vec<Mask>,
    index: FxHashMap<Mask, u32>,
    atoms: Vec<usize>,
    complement: Vec<Option<usize>>,
    rule: OplusRule,
    zero: usize,
    one: usize,
    kind: StructureKind,
    factorization: Option<Arc<Factorization>>,
    oracle: OnceLock<DecompositionOracle>,
}

impl EffectStructure {
    /// Builds a concrete structure from a family of subsets of a `cells`-element
    /// set. The family must contain the empty and the full set; atoms are
    /// computed as the minimal nonzero elements.
    pub fn concrete<I>(cells: usize, masks: I, kind: StructureKind) -> Result<Self>
    where
        I: IntoIterator<Item = Mask>,
    {
        let mut elements: Vec<Mask> = masks.into_iter().collect();
        if let Some(bad) = elements.iter().find(|m| m.universe() != cells) {
            return Err(Error::Structural(format!(
                "mask over {} cells in a structure over {cells}",
                bad.universe()
            )));
        }
        elements.sort_unstable();
        elements.dedup();
        let mut s = Self::assemble(cells, elements, OplusRule::DisjointUnion, kind)?;
        s.atoms = super::checks::minimal_nonzero(&s);
        Ok(s)
    }

    /// Like [`concrete`](Self::concrete) for callers that already hold the
    /// canonical (sorted, deduplicated) element list and know the atoms.
    pub(crate) fn concrete_sorted(
        cells: usize,
        elements: Vec<Mask>,
        atoms: Vec<usize>,
        kind: StructureKind,
        factorization: Option<Arc<Factorization>>,
    ) -> Result<Self> {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let mut s = Self::assemble(cells, elements, OplusRule::DisjointUnion, kind)?;
        s.atoms = atoms;
        s.factorization = factorization;
        Ok(s)
    }

    /// Builds an abstract structure on `n` elements from an explicit sum
    /// table. Element `i` is represented by the singleton mask `{i}`, so the
    /// canonical order is the index order. `sums` lists `(p, q, p ⊕ q)`;
    /// commutativity is *not* filled in automatically.
    pub fn from_table(n: usize, zero: usize, one: usize, sums: &[(usize, usize, usize)]) -> Result<Self> {
        if zero >= n || one >= n {
            return Err(Error::Structural("bounds outside the element range".into()));
        }
        let elements: Vec<Mask> = (0..n).map(|i| Mask::from_cells(n, [i])).collect();
        let mut table = FxHashMap::default();
        for &(p, q, r) in sums {
            if p >= n || q >= n || r >= n {
                return Err(Error::Structural(format!("sum ({p}, {q}, {r}) out of range")));
            }
            table.insert((p as u32, q as u32), r as u32);
        }
        let index = elements.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut s = EffectStructure {
            cells: n,
            elements,
            index,
            atoms: Vec::new(),
            complement: Vec::new(),
            rule: OplusRule::Table(table),
            zero,
            one,
            kind: StructureKind::Abstract,
            factorization: None,
            oracle: OnceLock::new(),
        };
        s.complement = (0..n)
            .map(|p| s.solutions(p, one).into_iter().next())
            .collect();
        s.atoms = super::checks::minimal_nonzero(&s);
        Ok(s)
    }

    fn assemble(cells: usize, elements: Vec<Mask>, rule: OplusRule, kind: StructureKind) -> Result<Self> {
        let index: FxHashMap<Mask, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let zero = *index
            .get(&Mask::empty(cells))
            .ok_or_else(|| Error::Structural("empty set is not an element".into()))? as usize;
        let one = *index
            .get(&Mask::full(cells))
            .ok_or_else(|| Error::Structural("full set is not an element".into()))? as usize;
        let complement = elements
            .iter()
            .map(|m| index.get(&m.complement()).map(|&i| i as usize))
            .collect();
        Ok(EffectStructure {
            cells,
            elements,
            index,
            atoms: Vec::new(),
            complement,
            rule,
            zero,
            one,
            kind,
            factorization: None,
            oracle: OnceLock::new(),
        })
    }

    /// Records box-level provenance and reorders the atoms to event order:
    /// the atoms become the distinct event masks that are minimal among
    /// the event masks.
    pub(crate) fn with_factorization(mut self, f: Arc<Factorization>) -> Result<Self> {
        let atoms = minimal_events(&f.events)
            .into_iter()
            .map(|m| {
                self.index_of(m)
                    .ok_or_else(|| Error::Structural("an event is not an element".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.atoms = atoms;
        self.factorization = Some(f);
        self.oracle = OnceLock::new();
        Ok(self)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mask] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Mask {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Mask) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    pub fn contains(&self, m: &Mask) -> bool {
        self.index.contains_key(m)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    /// Atom element indices. For generated structures these follow the
    /// event order of the factorization; otherwise canonical order.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn complement(&self, p: usize) -> Option<usize> {
        self.complement[p]
    }

    pub fn rule(&self) -> &OplusRule {
        &self.rule
    }

    pub fn is_concrete(&self) -> bool {
        matches!(self.rule, OplusRule::DisjointUnion)
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn factorization(&self) -> Option<&Factorization> {
        self.factorization.as_deref()
    }

    /// `p ⊕ q`, if defined.
    #[inline]
    pub fn oplus(&self, p: usize, q: usize) -> Option<usize> {
        match &self.rule {
            OplusRule::DisjointUnion => {
                let (a, b) = (&self.elements[p], &self.elements[q]);
                if a.is_disjoint(b) {
                    self.index_of(&a.union(b))
                } else {
                    None
                }
            }
            OplusRule::Table(t) => t.get(&(p as u32, q as u32)).map(|&r| r as usize),
        }
    }

    #[inline]
    pub fn orthogonal(&self, p: usize, q: usize) -> bool {
        self.oplus(p, q).is_some()
    }

    /// Left-to-right ⊕-sum of a family; `None` as soon as a partial sum is
    /// undefined. The empty family sums to 0.
    pub fn sum(&self, family: &[usize]) -> Option<usize> {
        family.iter().try_fold(self.zero, |acc, &x| self.oplus(acc, x))
    }

    /// Every `r` with `p ⊕ r = target`.
    pub fn solutions(&self, p: usize, target: usize) -> Vec<usize> {
        match &self.rule {
            OplusRule::DisjointUnion => {
                let (a, t) = (&self.elements[p], &self.elements[target]);
                if !a.is_subset(t) {
                    return Vec::new();
                }
                self.index_of(&t.difference(a))
                    .filter(|&r| self.oplus(p, r) == Some(target))
                    .into_iter()
                    .collect()
            }
            OplusRule::Table(t) => {
                let mut out: Vec<usize> = t
                    .iter()
                    .filter(|(&(a, _), &s)| a as usize == p && s as usize == target)
                    .map(|(&(_, b), _)| b as usize)
                    .collect();
                out.sort_unstable();
                out
            }
        }
    }

    /// `p ≤ q` iff `q = p ⊕ r` for some element `r`.
    #[inline]
    pub fn leq(&self, p: usize, q: usize) -> bool {
        match &self.rule {
            OplusRule::DisjointUnion => {
                let (a, b) = (&self.elements[p], &self.elements[q]);
                a.is_subset(b)
                    && self
                        .index_of(&b.difference(a))
                        .is_some_and(|r| self.oplus(p, r) == Some(q))
            }
            OplusRule::Table(_) => !self.solutions(p, q).is_empty(),
        }
    }

    /// Exact-cover oracle over the atom masks, built on first use.
    pub fn oracle(&self) -> &DecompositionOracle {
        self.oracle.get_or_init(|| {
            DecompositionOracle::new(self.atoms.iter().map(|&a| self.elements[a].clone()).collect())
        })
    }

    /// Positions in [`atoms`](Self::atoms) of a disjoint atom cover of
    /// element `p`, if one exists.
    pub fn certificate(&self, p: usize) -> Option<Vec<usize>> {
        if !self.is_concrete() {
            return None;
        }
        self.oracle().decompose(&self.elements[p])
    }

    /// Event index → element index, for generated structures.
    pub fn event_elements(&self) -> Option<Vec<usize>> {
        let f = self.factorization.as_ref()?;
        f.events.iter().map(|m| self.index_of(m)).collect()
    }
}

/// Distinct masks of `events` that contain no other event mask, in event order.
pub(crate) fn minimal_events(events: &[Mask]) -> Vec<&Mask> {
    let mut out: Vec<&Mask> = Vec::new();
    for e in events {
        if e.is_empty() || out.contains(&e) {
            continue;
        }
        if events.iter().any(|f| !f.is_empty() && f != e && f.is_subset(e)) {
            continue;
        }
        out.push(e);
    }
    out
}

pub(crate) fn minimal_events_owned(events: &[Mask]) -> Vec<Mask> {
    minimal_events(events).into_iter().cloned().collect()
}
