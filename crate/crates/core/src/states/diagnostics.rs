use serde::{Deserialize, Serialize};

use super::logic::LogicState;
use super::polytope::{PolytopeKind, StatePolytope};
use super::pr::PRState;
use crate::algebra::EffectStructure;
use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Comparison of two definedness predicates for `p ⊕ q` on disjoint pairs:
/// the structure's rule (the union is an element) and the operational one
/// (`ρ(p) + ρ(q) ≤ 1` for every no-signaling state).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinednessReport {
    pub pairs: usize,
    pub agree: usize,
    /// Defined by the rule but exceeding 1 in some state.
    pub rule_only: Vec<(usize, usize)>,
    /// Bounded by 1 in every state but undefined by the rule.
    pub operational_only: Vec<(usize, usize)>,
    /// Every disjoint pair was examined.
    pub complete: bool,
}

/// Examines disjoint element pairs `p < q` in index order, at most
/// `pair_limit` of them. Non-disjoint pairs are skipped: a point-mass
/// state on a shared cell already gives them the value 2.
pub fn compare_definedness(s: &EffectStructure, pair_limit: usize) -> Result<DefinednessReport> {
    let f = s
        .factorization()
        .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
    let poly = StatePolytope::no_signaling(&f.scenario);
    let ev = s
        .event_elements()
        .ok_or_else(|| Error::Structural("an event is not an element".into()))?;
    // certificate positions are atom positions; map them to event variables
    let atom_event: Vec<usize> = s
        .atoms()
        .iter()
        .map(|a| ev.iter().position(|e| e == a).expect("atoms are events"))
        .collect();
    let certs: Vec<Vec<usize>> = (0..s.len())
        .map(|p| {
            s.certificate(p)
                .map(|c| c.into_iter().map(|a| atom_event[a]).collect())
                .ok_or_else(|| Error::Structural(format!("element {p} has no atom cover")))
        })
        .collect::<Result<_>>()?;
    let mut rep = DefinednessReport {
        pairs: 0,
        agree: 0,
        rule_only: Vec::new(),
        operational_only: Vec::new(),
        complete: true,
    };
    'outer: for p in 0..s.len() {
        for q in p + 1..s.len() {
            if !s.element(p).is_disjoint(s.element(q)) {
                continue;
            }
            if rep.pairs == pair_limit {
                rep.complete = false;
                break 'outer;
            }
            rep.pairs += 1;
            let vars: Vec<usize> = certs[p].iter().chain(&certs[q]).copied().collect();
            let bounded = poly.maximize_sum(&vars)?.optimum <= rational::one();
            let rule = s.oplus(p, q).is_some();
            match (rule, bounded) {
                (true, false) => rep.rule_only.push((p, q)),
                (false, true) => rep.operational_only.push((p, q)),
                _ => rep.agree += 1,
            }
        }
    }
    Ok(rep)
}

/// Whether the product of one-box states `factors` (in box order) extends
/// to a state on `s`, tested by LP feasibility over the additivity
/// polytope of `s` with the event atoms fixed. Returns the extension found.
pub fn product_state_extension(
    s: &EffectStructure,
    polytope: &StatePolytope,
    factors: &[PRState],
) -> Result<Option<LogicState>> {
    if polytope.kind != PolytopeKind::Additivity {
        return Err(Error::Domain("an additivity polytope is required".into()));
    }
    let f = s
        .factorization()
        .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Domain("no factors given".into()))?;
    let mut p = first.clone();
    for g in rest {
        p = p.tensor(g);
    }
    if p.scenario() != &f.scenario {
        return Err(Error::Domain("factors do not match the structure's boxes".into()));
    }
    p.validate()?;
    let fixed: Vec<(usize, Q)> = f
        .events
        .iter()
        .enumerate()
        .map(|(e, m)| {
            s.atoms()
                .iter()
                .position(|&a| s.element(a) == m)
                .map(|pos| (pos, p.event_prob(e).clone()))
                .ok_or_else(|| Error::Structural("an event is not an atom".into()))
        })
        .collect::<Result<_>>()?;
    Ok(polytope
        .feasible_with(&fixed)?
        .map(|x| LogicState { atom_values: x }))
}
