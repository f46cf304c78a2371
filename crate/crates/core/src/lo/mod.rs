//! Local orthogonality: events, their orthogonality graph, LO inequalities
//! as cliques, and exact LP bounds on them.

mod cliques;
mod copies;

pub use cliques::{enumerate_lo_inequalities, for_each_clique, CliqueOptions};
pub use copies::{check_lo_copies, max_weight_clique, CopiesOptions, CopiesReport, WeightedClique};

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::EffectStructure;
use crate::boxes::Scenario;
use crate::error::{Error, Result};
use crate::mask::{Mask, MAX_CELLS};
use crate::product::kron;
use crate::rational::{self, Q};
use crate::states::{PolytopeKind, StatePolytope};

/// Events of a scenario with the orthogonality relation. Vertex `e` is the
/// event with index `e` in scenario order.
#[derive(Debug, Clone)]
pub struct OrthogonalityGraph {
    scenario: Scenario,
    masks: Vec<Mask>,
    adj: Vec<Mask>,
}

/// Cell sets of every event of a scenario, over the product phase space.
pub fn event_masks(sc: &Scenario) -> Result<Vec<Mask>> {
    let cells = sc.boxes.iter().try_fold(1usize, |acc, b| {
        acc.checked_mul(b.phase_space().size()).filter(|&c| c <= MAX_CELLS)
    });
    let Some(cells) = cells else {
        return Err(Error::Resource {
            what: "phase-space cell",
            cap: MAX_CELLS,
            reached: sc
                .boxes
                .iter()
                .fold(1usize, |acc, b| acc.saturating_mul(b.phase_space().size())),
        });
    };
    let mut masks = vec![Mask::full(1)];
    for b in &sc.boxes {
        let space = b.phase_space();
        let per_box: Vec<Mask> = (0..b.num_inputs())
            .flat_map(|a| (0..b.outcome_count(a)).map(move |o| (a, o)))
            .map(|(a, o)| crate::boxes::BoxProposition::atom(a, o).realization(&space))
            .collect();
        masks = masks.iter().flat_map(|m| per_box.iter().map(move |g| kron(m, g))).collect();
    }
    debug_assert!(masks.iter().all(|m| m.universe() == cells));
    Ok(masks)
}

impl OrthogonalityGraph {
    /// Builds the graph from event labels and checks that the input rule
    /// (some box with equal inputs and different outcomes) agrees with
    /// disjointness of the cell sets on every pair.
    pub fn new(sc: &Scenario) -> Result<Self> {
        let masks = event_masks(sc)?;
        let n = masks.len();
        let labels: Vec<Vec<(usize, usize)>> = (0..n).map(|e| sc.event_label(e)).collect();
        let mut adj = vec![Mask::empty(n); n];
        for e in 0..n {
            for f in e + 1..n {
                let by_inputs = labels[e].iter().zip(&labels[f]).any(|(x, y)| x.0 == y.0 && x.1 != y.1);
                let by_masks = masks[e].is_disjoint(&masks[f]);
                if by_inputs != by_masks {
                    return Err(Error::Internal(format!(
                        "orthogonality of {} and {} differs between the input rule and the cell sets",
                        sc.event_name(e),
                        sc.event_name(f)
                    )));
                }
                if by_inputs {
                    adj[e].insert(f);
                    adj[f].insert(e);
                }
            }
        }
        Ok(OrthogonalityGraph {
            scenario: sc.clone(),
            masks,
            adj,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn mask(&self, e: usize) -> &Mask {
        &self.masks[e]
    }

    pub fn neighbors(&self, e: usize) -> &Mask {
        &self.adj[e]
    }

    pub fn orthogonal(&self, e: usize, f: usize) -> bool {
        self.adj[e].contains(f)
    }

    pub fn is_clique(&self, events: &[usize]) -> bool {
        events
            .iter()
            .enumerate()
            .all(|(i, &e)| events[i + 1..].iter().all(|&f| self.orthogonal(e, f)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Mask::count).sum::<usize>() / 2
    }
}

pub fn build_orthogonality_graph(s: &EffectStructure) -> Result<OrthogonalityGraph> {
    let f = s
        .factorization()
        .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
    let g = OrthogonalityGraph::new(&f.scenario)?;
    if g.masks != f.events {
        return Err(Error::Internal("event cell sets differ from the structure's".into()));
    }
    Ok(g)
}

/// A set of mutually orthogonal events: `Σ P(e) ≤ 1` under local orthogonality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LOInequality {
    pub events: Vec<usize>,
    pub lp_max: Option<Q>,
    pub holds_in_structure: Option<bool>,
}

impl LOInequality {
    pub fn new(events: Vec<usize>) -> Self {
        LOInequality {
            events,
            lp_max: None,
            holds_in_structure: None,
        }
    }

    pub fn violated(&self) -> bool {
        self.lp_max.as_ref().is_some_and(|v| *v > Q::one())
    }
}

/// One line of the LO report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoEntry {
    pub events: Vec<usize>,
    #[serde(with = "rational::serde_q")]
    pub lp_max: Q,
    pub violated: bool,
    pub sum_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoReport {
    pub entries: Vec<LoEntry>,
    pub violations: usize,
    #[serde(with = "rational::serde_q")]
    pub max_lp: Q,
    /// Index into `entries` of the first inequality attaining `max_lp`.
    pub argmax: Option<usize>,
}

/// Polytope variable of each event: the event itself on a no-signaling
/// polytope, the atom with the same cell set on an additivity polytope.
fn event_variables(s: &EffectStructure, p: &StatePolytope) -> Result<Vec<usize>> {
    let f = s
        .factorization()
        .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
    match p.kind {
        PolytopeKind::NoSignaling => {
            if p.vars != f.events.len() {
                return Err(Error::Domain("polytope and structure have different event counts".into()));
            }
            Ok((0..p.vars).collect())
        }
        PolytopeKind::Additivity => f
            .events
            .iter()
            .map(|m| {
                s.atoms()
                    .iter()
                    .position(|&a| s.element(a) == m)
                    .ok_or_else(|| Error::Structural("an event is not an atom".into()))
            })
            .collect(),
    }
}

/// LP maximum of every inequality over `p`, and whether the events' ⊕-sum
/// exists in `s`. LPs run in parallel; the report keeps input order.
pub fn check_lo_violations(
    s: &EffectStructure,
    p: &StatePolytope,
    inequalities: impl IntoIterator<Item = LOInequality>,
) -> Result<LoReport> {
    let vars = event_variables(s, p)?;
    let elems = s
        .event_elements()
        .ok_or_else(|| Error::Structural("an event is not an element".into()))?;
    let ineqs: Vec<LOInequality> = inequalities.into_iter().collect();
    let entries = ineqs
        .par_iter()
        .map(|ineq| {
            let mut objective = vec![rational::zero(); p.vars];
            for &e in &ineq.events {
                objective[vars[e]] += rational::one();
            }
            let lp_max = p.maximize_linear(&objective)?.optimum;
            let family: Vec<usize> = ineq.events.iter().map(|&e| elems[e]).collect();
            Ok(LoEntry {
                events: ineq.events.clone(),
                violated: lp_max > Q::one(),
                lp_max,
                sum_defined: s.sum(&family).is_some(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(entries))
}

pub(crate) fn summarize(entries: Vec<LoEntry>) -> LoReport {
    let mut argmax: Option<usize> = None;
    for (i, e) in entries.iter().enumerate() {
        if argmax.is_none_or(|j| e.lp_max > entries[j].lp_max) {
            argmax = Some(i);
        }
    }
    LoReport {
        violations: entries.iter().filter(|e| e.violated).count(),
        max_lp: argmax.map_or_else(rational::zero, |i| entries[i].lp_max.clone()),
        argmax,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxSpec;

    fn graph(k: usize) -> OrthogonalityGraph {
        OrthogonalityGraph::new(&Scenario::homogeneous(&BoxSpec::binary(), k)).unwrap()
    }

    #[test]
    fn one_box_edges() {
        let g = graph(1);
        // events x0 x1 y0 y1
        assert!(g.orthogonal(0, 1) && g.orthogonal(2, 3));
        assert!(!g.orthogonal(0, 2) && !g.orthogonal(1, 3));
        assert!((0..4).all(|e| !g.orthogonal(e, e)));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn three_box_example_is_a_clique() {
        let g = graph(3);
        let sc = g.scenario().clone();
        let ev: Vec<usize> = ["x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"]
            .iter()
            .map(|n| sc.parse_event(n).unwrap())
            .collect();
        assert!(g.is_clique(&ev));
    }
}
