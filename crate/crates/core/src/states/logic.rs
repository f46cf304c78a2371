use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::pr::PRState;
use crate::algebra::{AxiomReport, EffectStructure};
use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// A state on a structure, given by its values on the atoms (positions in
/// [`EffectStructure::atoms`]). The value of any element is the sum over a
/// disjoint atom cover of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicState {
    pub atom_values: Vec<Q>,
}

impl LogicState {
    /// `ρ(p)` via the canonical certificate; `None` if `p` has no atom cover.
    pub fn value(&self, s: &EffectStructure, p: usize) -> Option<Q> {
        let cert = s.certificate(p)?;
        Some(cert.iter().map(|&a| self.atom_values[a].clone()).sum())
    }

    pub fn values(&self, s: &EffectStructure) -> Option<Vec<Q>> {
        (0..s.len()).map(|p| self.value(s, p)).collect()
    }

    pub fn is_zero_one(&self) -> bool {
        self.atom_values.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// Signed atom-count vector `cover_b − cover_a` for two covers of one element.
type Diff = Vec<(u32, i32)>;

/// Event/atom bookkeeping for states on a generated structure.
pub struct StateSpace<'a> {
    s: &'a EffectStructure,
    event_elem: Vec<usize>,
    atom_event: Vec<usize>,
    diffs: OnceLock<Vec<Diff>>,
}

/// Largest number of covers enumerated per element by the well-definedness check.
const COVER_LIMIT: usize = 100_000;

impl<'a> StateSpace<'a> {
    pub fn new(s: &'a EffectStructure) -> Result<Self> {
        let f = s
            .factorization()
            .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
        let event_elem = s
            .event_elements()
            .ok_or_else(|| Error::Structural("an event is not an element".into()))?;
        let atom_event = s
            .atoms()
            .iter()
            .map(|&a| {
                event_elem
                    .iter()
                    .position(|&e| e == a)
                    .ok_or_else(|| Error::Structural("an atom is not an event".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(event_elem.len(), f.events.len());
        Ok(StateSpace {
            s,
            event_elem,
            atom_event,
            diffs: OnceLock::new(),
        })
    }

    pub fn structure(&self) -> &EffectStructure {
        self.s
    }

    /// Differences between every pair (first, other) of disjoint atom
    /// covers of every element, deduplicated.
    pub fn certificate_differences(&self) -> &[Diff] {
        self.diffs.get_or_init(|| {
            let oracle = self.s.oracle();
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::new();
            for m in self.s.elements() {
                let covers = oracle.all_decompositions(m, COVER_LIMIT);
                let Some((first, rest)) = covers.split_first() else { continue };
                for c in rest {
                    let mut acc: std::collections::BTreeMap<u32, i32> = Default::default();
                    for &a in c {
                        *acc.entry(a as u32).or_default() += 1;
                    }
                    for &a in first {
                        *acc.entry(a as u32).or_default() -= 1;
                    }
                    let d: Diff = acc.into_iter().filter(|&(_, v)| v != 0).collect();
                    if !d.is_empty() && seen.insert(d.clone()) {
                        out.push(d);
                    }
                }
            }
            out
        })
    }

    /// Elements with two or more disjoint atom covers.
    pub fn multi_decomposition_elements(&self) -> Vec<usize> {
        let oracle = self.s.oracle();
        (0..self.s.len())
            .filter(|&p| oracle.all_decompositions(self.s.element(p), 2).len() > 1)
            .collect()
    }

    /// Whether every element's covers give the same value.
    pub fn is_well_defined(&self, rho: &LogicState) -> bool {
        let (nums, _) = common_denominator(&rho.atom_values);
        let small: Option<Vec<i128>> = nums.iter().map(|n| n.to_i128()).collect();
        let diffs = self.certificate_differences();
        match small {
            Some(v) if v.iter().all(|x| x.abs() < (1 << 90)) => diffs
                .iter()
                .all(|d| d.iter().map(|&(a, c)| v[a as usize] * c as i128).sum::<i128>() == 0),
            _ => diffs.iter().all(|d| {
                d.iter()
                    .map(|&(a, c)| &nums[a as usize] * BigInt::from(c))
                    .sum::<BigInt>()
                    .is_zero()
            }),
        }
    }

    /// `ρ_P`: atom values read off the table. Fails on a signaling table, on
    /// a different scenario, or if two covers of an element disagree.
    pub fn pr_to_logic_state(&self, p: &PRState) -> Result<LogicState> {
        let f = self.s.factorization().expect("checked in new");
        if p.scenario() != &f.scenario {
            return Err(Error::Domain("state and structure have different scenarios".into()));
        }
        p.validate()?;
        let rho = LogicState {
            atom_values: self.atom_event.iter().map(|&e| p.event_prob(e).clone()).collect(),
        };
        for (e, &el) in self.event_elem.iter().enumerate() {
            if rho.value(self.s, el).as_ref() != Some(p.event_prob(e)) {
                return Err(Error::InvalidState(format!(
                    "event {} is not the sum of its atoms",
                    f.scenario.event_name(e)
                )));
            }
        }
        if !self.is_well_defined(&rho) {
            return Err(Error::InvalidState("two atom covers of an element disagree".into()));
        }
        Ok(rho)
    }

    /// `P_ρ(α|a) = ρ([a_1α_1 … a_kα_k])`.
    pub fn logic_state_to_pr(&self, rho: &LogicState) -> Result<PRState> {
        let f = self.s.factorization().expect("checked in new");
        let probs = self
            .event_elem
            .iter()
            .map(|&el| {
                rho.value(self.s, el)
                    .ok_or_else(|| Error::Internal("event without an atom cover".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PRState::unchecked(f.scenario.clone(), probs))
    }
}

/// Numerators over the least common denominator.
fn common_denominator(vals: &[Q]) -> (Vec<BigInt>, BigInt) {
    let l = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = vals.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    (nums, l)
}

pub fn pr_to_logic_state(p: &PRState, s: &EffectStructure) -> Result<LogicState> {
    StateSpace::new(s)?.pr_to_logic_state(p)
}

pub fn logic_state_to_pr(rho: &LogicState, s: &EffectStructure) -> Result<PRState> {
    StateSpace::new(s)?.logic_state_to_pr(rho)
}

/// One point-mass state per cell: `ρ_γ(p) = 1` iff `γ ∈ p`.
pub fn classical_states(s: &EffectStructure) -> Vec<LogicState> {
    (0..s.cells())
        .map(|c| LogicState {
            atom_values: s
                .atoms()
                .iter()
                .map(|&a| {
                    if s.element(a).contains(c) {
                        rational::one()
                    } else {
                        rational::zero()
                    }
                })
                .collect(),
        })
        .collect()
}

/// S1, values in `[0, 1]`, and S2 on defined sums: every pair when the
/// structure has at most `pair_limit` elements, otherwise every
/// (element, atom) pair.
pub fn verify_state(s: &EffectStructure, rho: &LogicState, pair_limit: usize) -> AxiomReport {
    let Some(v) = rho.values(s) else {
        let p = (0..s.len()).find(|&p| rho.value(s, p).is_none()).unwrap();
        return AxiomReport::exhaustive("state", Some(vec![p]));
    };
    if !v[s.one()].is_one() {
        return AxiomReport::exhaustive("state", Some(vec![s.one()]));
    }
    if let Some(p) = v.iter().position(|x| x.is_negative() || *x > Q::one()) {
        return AxiomReport::exhaustive("state", Some(vec![p]));
    }
    let n = s.len();
    let partners: Vec<usize> = if n <= pair_limit { (0..n).collect() } else { s.atoms().to_vec() };
    for p in 0..n {
        for &q in &partners {
            if let Some(r) = s.oplus(p, q) {
                if v[r] != &v[p] + &v[q] {
                    return AxiomReport::exhaustive("state", Some(vec![p, q]));
                }
            }
        }
    }
    AxiomReport::exhaustive("state", None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDeterminationReport {
    /// `∀ρ: ρ(p) ≤ ρ(q)` iff `p ≤ q`, for every pair.
    pub pass: bool,
    /// Least pair where the equivalence fails.
    pub witness: Vec<usize>,
    /// `∀ρ: ρ(p) = ρ(q)` iff `p = q`.
    pub distinguishing: bool,
    pub distinguishing_witness: Vec<usize>,
    pub states: usize,
}

/// Checks the order-determining and state-distinguishing properties of a
/// family of states, exhaustively over all element pairs.
pub fn check_order_determining(s: &EffectStructure, states: &[LogicState]) -> Result<OrderDeterminationReport> {
    if states.is_empty() {
        return Err(Error::Domain("no states given".into()));
    }
    let n = s.len();
    let values: Vec<Vec<Q>> = states
        .iter()
        .map(|r| r.values(s).ok_or_else(|| Error::Domain("state undefined on an element".into())))
        .collect::<Result<_>>()?;

    let mut witness = None;
    let mut dist_witness = None;
    if states.iter().all(LogicState::is_zero_one) {
        // Bitset of states giving the element value 1.
        let words = states.len().div_ceil(64);
        let bits: Vec<Vec<u64>> = (0..n)
            .map(|p| {
                let mut b = vec![0u64; words];
                for (i, v) in values.iter().enumerate() {
                    if v[p].is_one() {
                        b[i / 64] |= 1 << (i % 64);
                    }
                }
                b
            })
            .collect();
        'outer: for p in 0..n {
            for q in 0..n {
                let dominated = bits[p].iter().zip(&bits[q]).all(|(a, b)| a & !b == 0);
                if dominated != s.leq(p, q) {
                    witness = Some(vec![p, q]);
                    break 'outer;
                }
            }
        }
        let mut first: HashMap<&[u64], usize> = HashMap::new();
        for p in 0..n {
            if let Some(&q) = first.get(bits[p].as_slice()) {
                dist_witness = Some(vec![q, p]);
                break;
            }
            first.insert(&bits[p], p);
        }
    } else {
        'outer2: for p in 0..n {
            for q in 0..n {
                let dominated = values.iter().all(|v| v[p] <= v[q]);
                if dominated != s.leq(p, q) {
                    witness = Some(vec![p, q]);
                    break 'outer2;
                }
            }
        }
        let column = |p: usize| -> Vec<String> { values.iter().map(|v| rational::to_string(&v[p])).collect() };
        let mut first: HashMap<Vec<String>, usize> = HashMap::new();
        for p in 0..n {
            let key = column(p);
            if let Some(&q) = first.get(&key) {
                dist_witness = Some(vec![q, p]);
                break;
            }
            first.insert(key, p);
        }
    }
    Ok(OrderDeterminationReport {
        pass: witness.is_none(),
        witness: witness.unwrap_or_default(),
        distinguishing: dist_witness.is_none(),
        distinguishing_witness: dist_witness.unwrap_or_default(),
        states: states.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{BoxSpec, Scenario};
    use crate::product::{generate, GenerationKind};
    use crate::rational::frac;

    fn ea(k: usize) -> EffectStructure {
        generate(
            &Scenario::homogeneous(&BoxSpec::binary(), k),
            GenerationKind::EffectAlgebra,
            &Default::default(),
        )
        .unwrap()
        .0
    }

    #[test]
    fn uniform_round_trip_and_values() {
        let s = ea(2);
        let sp = StateSpace::new(&s).unwrap();
        let u = PRState::uniform(s.factorization().unwrap().scenario.clone());
        let rho = sp.pr_to_logic_state(&u).unwrap();
        assert!(rho.atom_values.iter().all(|v| *v == frac(1, 4)));
        assert_eq!(sp.logic_state_to_pr(&rho).unwrap(), u);
        assert!(verify_state(&s, &rho, usize::MAX).pass);
    }

    #[test]
    fn classical_states_one_box() {
        let s = ea(1);
        let cl = classical_states(&s);
        assert_eq!(cl.len(), 4);
        for rho in &cl {
            assert!(rho.is_zero_one());
            assert!(verify_state(&s, rho, usize::MAX).pass);
        }
        let rep = check_order_determining(&s, &cl).unwrap();
        assert!(rep.pass && rep.distinguishing);
    }

    #[test]
    fn single_uniform_state_is_not_order_determining() {
        let s = ea(1);
        let u = pr_to_logic_state(&PRState::uniform(Scenario::homogeneous(&BoxSpec::binary(), 1)), &s).unwrap();
        let rep = check_order_determining(&s, &[u]).unwrap();
        assert!(!rep.pass && !rep.distinguishing);
        assert_eq!(rep.witness.len(), 2);
    }

    #[test]
    fn broken_atom_values_are_caught() {
        let s = ea(2);
        let sp = StateSpace::new(&s).unwrap();
        let mut vals = vec![frac(0, 1); 16];
        vals[0] = frac(1, 1);
        let bad = LogicState { atom_values: vals };
        assert!(!sp.is_well_defined(&bad));
        assert!(!verify_state(&s, &bad, usize::MAX).pass);
    }
}
