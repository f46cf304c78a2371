//! Single boxes: input/outcome specifications, the phase space of
//! deterministic assignments, and the one-box concrete logic.
//!
//! A box with inputs `1..N` and outcome sets `U_1..U_N` has phase space
//! `Γ = U_1 × ⋯ × U_N`. A cell is one deterministic answer per input; the
//! proposition "input `a` yields an outcome in `A`" is the cylinder
//! `{γ ∈ Γ : γ_a ∈ A}`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{EffectStructure, Factorization, StructureKind};
use crate::error::{Error, Result};
use crate::mask::{Mask, MAX_CELLS};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InputSpec {
    pub name: String,
    pub outcomes: Vec<String>,
}

/// Inputs of one box and the outcome labels each input can produce.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxSpec {
    pub inputs: Vec<InputSpec>,
}

impl BoxSpec {
    pub fn new(inputs: Vec<InputSpec>) -> Result<Self> {
        let spec = BoxSpec { inputs };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a spec from outcome counts; inputs are named `x, y, z, w, i4, ..`
    /// and outcomes `0, 1, ..`.
    pub fn with_outcome_counts(counts: &[usize]) -> Result<Self> {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        let inputs = counts
            .iter()
            .enumerate()
            .map(|(i, &n)| InputSpec {
                name: NAMES.get(i).map_or_else(|| format!("i{i}"), |s| s.to_string()),
                outcomes: (0..n).map(|o| o.to_string()).collect(),
            })
            .collect();
        Self::new(inputs)
    }

    /// Two inputs `x`, `y`, each with outcomes `0`, `1`.
    pub fn binary() -> Self {
        Self::with_outcome_counts(&[2, 2]).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: BoxSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::InvalidSpec("a box needs at least one input".into()));
        }
        let mut names = HashSet::new();
        for input in &self.inputs {
            if !names.insert(&input.name) {
                return Err(Error::InvalidSpec(format!("duplicate input name {:?}", input.name)));
            }
            if input.outcomes.is_empty() {
                return Err(Error::InvalidSpec(format!("input {:?} has no outcomes", input.name)));
            }
            let distinct: HashSet<_> = input.outcomes.iter().collect();
            if distinct.len() != input.outcomes.len() {
                return Err(Error::InvalidSpec(format!("input {:?} repeats an outcome label", input.name)));
            }
            if input.outcomes.len() > 16 {
                return Err(Error::InvalidSpec(format!(
                    "input {:?} has {} outcomes; at most 16 are supported",
                    input.name,
                    input.outcomes.len()
                )));
            }
        }
        let cells = self
            .inputs
            .iter()
            .try_fold(1usize, |acc, i| acc.checked_mul(i.outcomes.len()))
            .filter(|&c| c <= MAX_CELLS);
        if cells.is_none() {
            return Err(Error::InvalidSpec(format!("phase space exceeds {MAX_CELLS} cells")));
        }
        Ok(())
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn outcome_count(&self, input: usize) -> usize {
        self.inputs[input].outcomes.len()
    }

    /// `Σ_a |U_a|`: the number of one-box atoms `[aα]`.
    pub fn atom_count(&self) -> usize {
        self.inputs.iter().map(|i| i.outcomes.len()).sum()
    }

    /// Position of `[aα]` among the atoms, ordered by input then outcome.
    pub fn atom_position(&self, input: usize, outcome: usize) -> usize {
        self.inputs[..input].iter().map(|i| i.outcomes.len()).sum::<usize>() + outcome
    }

    /// Inverse of [`atom_position`](Self::atom_position).
    pub fn atom_label(&self, mut pos: usize) -> (usize, usize) {
        for (a, input) in self.inputs.iter().enumerate() {
            if pos < input.outcomes.len() {
                return (a, pos);
            }
            pos -= input.outcomes.len();
        }
        panic!("atom position out of range")
    }

    pub fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::new(self.inputs.iter().map(|i| i.outcomes.len()).collect())
    }
}

/// `Γ = U_1 × ⋯ × U_N`, indexed lexicographically with input 1 slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSpace {
    radices: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl PhaseSpace {
    pub fn new(radices: Vec<usize>) -> Self {
        let mut strides = vec![1; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        let size = radices.iter().product();
        PhaseSpace { radices, strides, size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.radices.len());
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn coords(&self, index: usize) -> Vec<usize> {
        self.radices
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| (index / s) % r)
            .collect()
    }

    #[inline]
    pub fn coord(&self, index: usize, axis: usize) -> usize {
        (index / self.strides[axis]) % self.radices[axis]
    }
}

/// `[a ∈ A]`: "does input `a` yield an outcome in `A`?"
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxProposition {
    pub input: usize,
    /// Outcome indices, sorted and distinct.
    pub outcomes: Vec<usize>,
}

impl BoxProposition {
    pub fn new(input: usize, outcomes: impl IntoIterator<Item = usize>) -> Self {
        let mut outcomes: Vec<usize> = outcomes.into_iter().collect();
        outcomes.sort_unstable();
        outcomes.dedup();
        BoxProposition { input, outcomes }
    }

    /// `[aα]`.
    pub fn atom(input: usize, outcome: usize) -> Self {
        BoxProposition {
            input,
            outcomes: vec![outcome],
        }
    }

    /// The cylinder `{γ : γ_a ∈ A}`.
    pub fn realization(&self, space: &PhaseSpace) -> Mask {
        Mask::from_cells(
            space.size(),
            (0..space.size()).filter(|&c| self.outcomes.binary_search(&space.coord(c, self.input)).is_ok()),
        )
    }
}

/// `[a∈A] ≤ [b∈B]` iff `B = U_b`, or `A = ∅`, or `a = b` and `A ⊆ B`.
pub fn proposition_order(spec: &BoxSpec, p: &BoxProposition, q: &BoxProposition) -> bool {
    q.outcomes.len() == spec.outcome_count(q.input)
        || p.outcomes.is_empty()
        || (p.input == q.input && p.outcomes.iter().all(|o| q.outcomes.binary_search(o).is_ok()))
}

/// The concrete logic of one box: every `[a ∈ A]` realized in `Γ`.
pub fn build_one_box_logic(spec: &BoxSpec) -> Result<EffectStructure> {
    spec.validate()?;
    let space = spec.phase_space();
    let mut masks = vec![Mask::empty(space.size()), Mask::full(space.size())];
    for a in 0..spec.num_inputs() {
        let n = spec.outcome_count(a);
        for subset in 0u32..(1 << n) {
            let prop = BoxProposition::new(a, (0..n).filter(|o| subset >> o & 1 == 1));
            masks.push(prop.realization(&space));
        }
    }
    let structure = EffectStructure::concrete(space.size(), masks, StructureKind::Logic)?;
    let scenario = Scenario::new(vec![spec.clone()]);
    let events = (0..spec.atom_count())
        .map(|pos| {
            let (a, o) = spec.atom_label(pos);
            BoxProposition::atom(a, o).realization(&space)
        })
        .collect();
    let factorization = Factorization {
        scenario,
        factor_cells: vec![space.size()],
        events,
    };
    structure.with_factorization(Arc::new(factorization))
}

/// `k` boxes side by side: the index bookkeeping for events and contexts.
///
/// An event picks one `(input, outcome)` per box; events are ordered
/// lexicographically by per-box atom position with box 1 slowest. A context
/// is a tuple of inputs, ordered the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub boxes: Vec<BoxSpec>,
}

impl Scenario {
    pub fn new(boxes: Vec<BoxSpec>) -> Self {
        Scenario { boxes }
    }

    /// `k` copies of one box.
    pub fn homogeneous(spec: &BoxSpec, k: usize) -> Self {
        Scenario::new(vec![spec.clone(); k])
    }

    /// This scenario repeated `n` times, box order preserved within each copy.
    pub fn copies(&self, n: usize) -> Self {
        Scenario::new((0..n).flat_map(|_| self.boxes.iter().cloned()).collect())
    }

    pub fn k(&self) -> usize {
        self.boxes.len()
    }

    pub fn event_count(&self) -> usize {
        self.boxes.iter().map(BoxSpec::atom_count).product()
    }

    pub fn context_count(&self) -> usize {
        self.boxes.iter().map(BoxSpec::num_inputs).product()
    }

    /// `(input, outcome)` per box for an event index.
    pub fn event_label(&self, mut event: usize) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); self.k()];
        for (i, b) in self.boxes.iter().enumerate().rev() {
            let n = b.atom_count();
            out[i] = b.atom_label(event % n);
            event /= n;
        }
        out
    }

    pub fn event_index(&self, label: &[(usize, usize)]) -> usize {
        debug_assert_eq!(label.len(), self.k());
        self.boxes
            .iter()
            .zip(label)
            .fold(0, |acc, (b, &(a, o))| acc * b.atom_count() + b.atom_position(a, o))
    }

    pub fn context_inputs(&self, mut ctx: usize) -> Vec<usize> {
        let mut out = vec![0; self.k()];
        for (i, b) in self.boxes.iter().enumerate().rev() {
            out[i] = ctx % b.num_inputs();
            ctx /= b.num_inputs();
        }
        out
    }

    pub fn context_index(&self, inputs: &[usize]) -> usize {
        self.boxes
            .iter()
            .zip(inputs)
            .fold(0, |acc, (b, &a)| acc * b.num_inputs() + a)
    }

    /// Events of a context, outcome tuples in lexicographic order.
    pub fn context_events(&self, inputs: &[usize]) -> Vec<usize> {
        let mut events = vec![Vec::with_capacity(self.k())];
        for (b, &a) in self.boxes.iter().zip(inputs) {
            let n = b.outcome_count(a);
            events = events
                .into_iter()
                .flat_map(|prefix| {
                    (0..n).map(move |o| {
                        let mut p = prefix.clone();
                        p.push((a, o));
                        p
                    })
                })
                .collect();
        }
        events.iter().map(|l| self.event_index(l)).collect()
    }

    /// Human-readable event name: input name followed by outcome label, per box.
    pub fn event_name(&self, event: usize) -> String {
        self.event_label(event)
            .iter()
            .zip(&self.boxes)
            .map(|(&(a, o), b)| format!("{}{}", b.inputs[a].name, b.inputs[a].outcomes[o]))
            .collect()
    }

    /// Parses an event name produced by [`event_name`](Self::event_name).
    pub fn parse_event(&self, name: &str) -> Option<usize> {
        fn go(s: &Scenario, rest: &str, i: usize, acc: &mut Vec<(usize, usize)>) -> bool {
            if i == s.k() {
                return rest.is_empty();
            }
            for (a, input) in s.boxes[i].inputs.iter().enumerate() {
                for (o, label) in input.outcomes.iter().enumerate() {
                    let token = format!("{}{}", input.name, label);
                    if let Some(tail) = rest.strip_prefix(token.as_str()) {
                        acc.push((a, o));
                        if go(s, tail, i + 1, acc) {
                            return true;
                        }
                        acc.pop();
                    }
                }
            }
            false
        }
        let mut label = Vec::new();
        go(self, name, 0, &mut label).then(|| self.event_index(&label))
    }

    /// Deterministic digest of the scenario, used to key structure caches.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("scenario serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_logic_has_six_elements() {
        let s = build_one_box_logic(&BoxSpec::binary()).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.atoms().len(), 4);
        let space = BoxSpec::binary().phase_space();
        let names: Vec<Mask> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(a, o)| BoxProposition::atom(a, o).realization(&space))
            .collect();
        let atoms: Vec<Mask> = s.atoms().iter().map(|&i| s.element(i).clone()).collect();
        assert_eq!(atoms, names);
    }

    #[test]
    fn single_input_binary_is_four_element_boolean() {
        let s = build_one_box_logic(&BoxSpec::with_outcome_counts(&[2]).unwrap()).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn three_binary_inputs_give_eight_elements() {
        let spec = BoxSpec::with_outcome_counts(&[2, 2, 2]).unwrap();
        let s = build_one_box_logic(&spec).unwrap();
        assert_eq!(spec.phase_space().size(), 8);
        // brute force: distinct nontrivial cylinders plus the bounds
        let space = spec.phase_space();
        let mut seen = HashSet::new();
        for a in 0..3 {
            for o in 0..2 {
                seen.insert(BoxProposition::atom(a, o).realization(&space));
            }
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(s.len(), seen.len() + 2);
    }

    #[test]
    fn uneven_outcome_counts() {
        let spec = BoxSpec::with_outcome_counts(&[2, 3]).unwrap();
        let s = build_one_box_logic(&spec).unwrap();
        // nontrivial: x has 2 proper nonempty subsets, y has 6
        assert_eq!(s.len(), 2 + 2 + 6);
        assert_eq!(s.atoms().len(), 5);
    }

    #[test]
    fn order_table() {
        let spec = BoxSpec::binary();
        let x0 = BoxProposition::atom(0, 0);
        let y0 = BoxProposition::atom(1, 0);
        let x_all = BoxProposition::new(0, [0, 1]);
        let null = BoxProposition::new(1, []);
        assert!(proposition_order(&spec, &x0, &x_all));
        assert!(proposition_order(&spec, &null, &x0));
        assert!(!proposition_order(&spec, &x0, &y0));
        // agrees with mask inclusion on the four cells
        let space = spec.phase_space();
        assert!(!x0.realization(&space).is_subset(&y0.realization(&space)));
    }

    #[test]
    fn order_agrees_with_inclusion_exhaustively() {
        let spec = BoxSpec::with_outcome_counts(&[2, 3, 1]).unwrap();
        let space = spec.phase_space();
        let mut props = Vec::new();
        for a in 0..spec.num_inputs() {
            let n = spec.outcome_count(a);
            for subset in 0u32..(1 << n) {
                props.push(BoxProposition::new(a, (0..n).filter(|o| subset >> o & 1 == 1)));
            }
        }
        for p in &props {
            for q in &props {
                assert_eq!(
                    proposition_order(&spec, p, q),
                    p.realization(&space).is_subset(&q.realization(&space)),
                    "{p:?} vs {q:?}"
                );
            }
        }
    }

    #[test]
    fn complement_pairs_sum_to_one() {
        let spec = BoxSpec::with_outcome_counts(&[3, 2]).unwrap();
        let s = build_one_box_logic(&spec).unwrap();
        let space = spec.phase_space();
        for a in 0..2 {
            let n = spec.outcome_count(a);
            for subset in 0u32..(1 << n) {
                let p = BoxProposition::new(a, (0..n).filter(|o| subset >> o & 1 == 1));
                let q = BoxProposition::new(a, (0..n).filter(|o| subset >> o & 1 == 0));
                let (pi, qi) = (
                    s.index_of(&p.realization(&space)).unwrap(),
                    s.index_of(&q.realization(&space)).unwrap(),
                );
                assert_eq!(s.oplus(pi, qi), Some(s.one()));
                // [a∈A] is the sum of its atoms
                let atoms: Vec<usize> = p
                    .outcomes
                    .iter()
                    .map(|&o| s.index_of(&BoxProposition::atom(a, o).realization(&space)).unwrap())
                    .collect();
                assert_eq!(s.sum(&atoms), Some(pi));
            }
        }
    }

    #[test]
    fn nontrivial_realizations_are_injective() {
        let spec = BoxSpec::with_outcome_counts(&[3, 3, 2]).unwrap();
        let space = spec.phase_space();
        let mut seen = HashSet::new();
        for a in 0..3 {
            let n = spec.outcome_count(a);
            for subset in 1u32..((1 << n) - 1) {
                let p = BoxProposition::new(a, (0..n).filter(|o| subset >> o & 1 == 1));
                assert!(seen.insert(p.realization(&space)));
            }
        }
    }

    #[test]
    fn scenario_indexing_round_trips() {
        let sc = Scenario::new(vec![BoxSpec::binary(), BoxSpec::with_outcome_counts(&[3, 2, 2]).unwrap()]);
        assert_eq!(sc.event_count(), 4 * 7);
        for e in 0..sc.event_count() {
            assert_eq!(sc.event_index(&sc.event_label(e)), e);
            assert_eq!(sc.parse_event(&sc.event_name(e)), Some(e));
        }
        for c in 0..sc.context_count() {
            assert_eq!(sc.context_index(&sc.context_inputs(c)), c);
        }
        assert_eq!(Scenario::homogeneous(&BoxSpec::binary(), 3).parse_event("x0x1y1"), Some(4 + 3));
    }

    #[test]
    fn spec_json_and_validation() {
        let spec = BoxSpec::from_json(r#"{"inputs":[{"name":"x","outcomes":["0","1"]},{"name":"y","outcomes":["0","1"]}]}"#).unwrap();
        assert_eq!(spec, BoxSpec::binary());
        assert!(BoxSpec::from_json(r#"{"inputs":[]}"#).is_err());
        assert!(BoxSpec::from_json(r#"{"inputs":[{"name":"x","outcomes":[]}]}"#).is_err());
        assert!(BoxSpec::from_json(r#"{"inputs":[{"name":"x","outcomes":["a","a"]}]}"#).is_err());
    }
}
