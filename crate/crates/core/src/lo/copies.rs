use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::OrthogonalityGraph;
use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::rational::{self, Q};
use crate::states::PRState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopiesOptions {
    /// Search nodes visited before giving up.
    pub node_limit: usize,
}

impl Default for CopiesOptions {
    fn default() -> Self {
        CopiesOptions { node_limit: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedClique {
    pub events: Vec<usize>,
    #[serde(with = "rational::serde_q")]
    pub value: Q,
    pub nodes: usize,
}

struct Search<'a> {
    adj: Vec<Mask>,
    masks: Vec<&'a Mask>,
    w: Vec<u128>,
    best: u128,
    best_set: Vec<usize>,
    nodes: usize,
    limit: usize,
}

impl Search<'_> {
    /// Smallest of three bounds on the weight any clique inside `p` adds:
    /// the total weight, the cell-density bound (events in a clique are
    /// disjoint, so their weight is at most the best weight-per-cell times
    /// the cells covered), and a greedy coloring bound.
    fn bound(&self, p: &Mask) -> u128 {
        let mut total = 0u128;
        // density as a fraction w/|mask|, compared by cross-multiplication
        let (mut dn, mut dd) = (0u128, 1u128);
        let mut cover = Mask::empty(self.masks[0].universe());
        for v in p.iter() {
            total += self.w[v];
            let size = self.masks[v].count() as u128;
            if self.w[v] * dd > dn * size {
                (dn, dd) = (self.w[v], size);
            }
            cover.union_with(self.masks[v]);
        }
        let density = (dn * cover.count() as u128).div_ceil(dd);
        let b = total.min(density);
        let mut left = p.clone();
        let mut colors = 0u128;
        while let Some(first) = left.first() {
            // vertices are sorted by weight, so the first is the heaviest
            colors += self.w[first];
            if colors >= b {
                return b;
            }
            let mut class = left.clone();
            while let Some(v) = class.first() {
                left.remove(v);
                class.remove(v);
                class.difference_with(&self.adj[v]);
            }
        }
        colors
    }

    fn expand(&mut self, clique: &mut Vec<usize>, weight: u128, mut p: Mask) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::Resource {
                what: "clique search node",
                cap: self.limit,
                reached: self.nodes,
            });
        }
        if weight > self.best {
            self.best = weight;
            self.best_set = clique.clone();
        }
        while let Some(v) = p.first() {
            if weight + self.bound(&p) <= self.best {
                return Ok(());
            }
            clique.push(v);
            let next = p.intersection(&self.adj[v]);
            self.expand(clique, weight + self.w[v], next)?;
            clique.pop();
            p.remove(v);
        }
        Ok(())
    }
}

/// Clique of the graph with the largest total weight, by branch and bound.
/// Zero-weight events are ignored. Ties go to the first clique found.
pub fn max_weight_clique(g: &OrthogonalityGraph, weights: &[Q], opts: &CopiesOptions) -> Result<WeightedClique> {
    if weights.len() != g.len() {
        return Err(Error::Domain("one weight per event is required".into()));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::Domain("weights must be nonnegative".into()));
    }
    let mut support: Vec<usize> = (0..g.len()).filter(|&e| !weights[e].is_zero()).collect();
    support.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    if support.is_empty() {
        return Ok(WeightedClique {
            events: Vec::new(),
            value: rational::zero(),
            nodes: 0,
        });
    }
    let lcm = support.iter().fold(BigInt::one(), |acc, &e| acc.lcm(weights[e].denom()));
    let w: Vec<u128> = support
        .iter()
        .map(|&e| (weights[e].numer() * (&lcm / weights[e].denom())).to_u128())
        .collect::<Option<_>>()
        .filter(|w: &Vec<u128>| w.iter().try_fold(0u128, |a, &x| a.checked_add(x)).is_some_and(|t| t < 1 << 100))
        .ok_or_else(|| Error::Domain("weights too fine-grained for the clique search".into()))?;
    let m = support.len();
    let adj: Vec<Mask> = support
        .iter()
        .map(|&e| Mask::from_cells(m, (0..m).filter(|&j| g.orthogonal(e, support[j]))))
        .collect();
    let mut s = Search {
        adj,
        masks: support.iter().map(|&e| g.mask(e)).collect(),
        w,
        best: 0,
        best_set: Vec::new(),
        nodes: 0,
        limit: opts.node_limit,
    };
    s.expand(&mut Vec::new(), 0, Mask::full(m))?;
    let mut events: Vec<usize> = s.best_set.iter().map(|&i| support[i]).collect();
    events.sort_unstable();
    let value = events.iter().map(|&e| weights[e].clone()).sum();
    Ok(WeightedClique {
        events,
        value,
        nodes: s.nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopiesReport {
    pub copies: usize,
    pub boxes: usize,
    pub events: usize,
    /// Events with nonzero probability under the copied state.
    pub support: usize,
    #[serde(with = "rational::serde_q")]
    pub max_value: Q,
    pub violated: bool,
    pub witness: Vec<String>,
    pub nodes: usize,
}

/// Tests `P^{⊗n}` against every LO inequality of the `nk`-box scenario: the
/// largest clique sum is found without enumerating cliques.
pub fn check_lo_copies(p: &PRState, n: usize, opts: &CopiesOptions) -> Result<CopiesReport> {
    if n == 0 {
        return Err(Error::Domain("at least one copy is required".into()));
    }
    p.validate()?;
    let mut state = p.clone();
    for _ in 1..n {
        state = state.tensor(p);
    }
    let sc = state.scenario().clone();
    let g = OrthogonalityGraph::new(&sc)?;
    let best = max_weight_clique(&g, state.probs(), opts)?;
    Ok(CopiesReport {
        copies: n,
        boxes: sc.k(),
        events: sc.event_count(),
        support: state.probs().iter().filter(|q| !q.is_zero()).count(),
        violated: best.value > Q::one(),
        witness: best.events.iter().map(|&e| sc.event_name(e)).collect(),
        max_value: best.value,
        nodes: best.nodes,
    })
}
