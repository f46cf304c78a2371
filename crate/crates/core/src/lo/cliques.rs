use super::{LOInequality, OrthogonalityGraph};
use crate::error::{Error, Result};
use crate::mask::Mask;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueOptions {
    /// Largest clique size emitted; at least 2.
    pub max_size: usize,
    /// Maximal cliques only (pivoting Bron–Kerbosch); otherwise every
    /// clique with 2 to `max_size` events.
    pub maximal_only: bool,
    pub max_cliques: usize,
}

impl Default for CliqueOptions {
    fn default() -> Self {
        CliqueOptions {
            max_size: usize::MAX,
            maximal_only: true,
            max_cliques: 1_000_000,
        }
    }
}

struct Walk<'a, F> {
    g: &'a OrthogonalityGraph,
    opts: CliqueOptions,
    emitted: usize,
    visit: F,
}

impl<F: FnMut(&[usize])> Walk<'_, F> {
    fn emit(&mut self, clique: &[usize]) -> Result<()> {
        if self.emitted == self.opts.max_cliques {
            return Err(Error::Resource {
                what: "clique",
                cap: self.opts.max_cliques,
                reached: self.emitted + 1,
            });
        }
        self.emitted += 1;
        (self.visit)(clique);
        Ok(())
    }

    fn bron_kerbosch(&mut self, r: &mut Vec<usize>, p: Mask, mut x: Mask) -> Result<()> {
        if p.is_empty() {
            if x.is_empty() && r.len() >= 2 && r.len() <= self.opts.max_size {
                let mut c = r.clone();
                c.sort_unstable();
                self.emit(&c)?;
            }
            return Ok(());
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.intersection(self.g.neighbors(u)).count(), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let mut p = p;
        let branch = p.difference(self.g.neighbors(pivot));
        for v in branch.iter() {
            let nv = self.g.neighbors(v);
            r.push(v);
            self.bron_kerbosch(r, p.intersection(nv), x.intersection(nv))?;
            r.pop();
            p.remove(v);
            x.insert(v);
        }
        Ok(())
    }

    fn all(&mut self, r: &mut Vec<usize>, cand: &Mask) -> Result<()> {
        for v in cand.iter() {
            r.push(v);
            if r.len() >= 2 {
                self.emit(r)?;
            }
            if r.len() < self.opts.max_size {
                let mut next = cand.intersection(self.g.neighbors(v));
                // keep only higher-indexed vertices so each clique appears once
                for u in cand.iter().take_while(|&u| u <= v) {
                    next.remove(u);
                }
                self.all(r, &next)?;
            }
            r.pop();
        }
        Ok(())
    }
}

/// Calls `visit` on every clique selected by `opts`, each as a sorted event
/// list, and returns how many were visited. Fails once more than
/// `max_cliques` would be visited.
pub fn for_each_clique(g: &OrthogonalityGraph, opts: &CliqueOptions, visit: impl FnMut(&[usize])) -> Result<usize> {
    if opts.max_size < 2 {
        return Err(Error::Domain("LO inequalities need at least two events".into()));
    }
    let mut w = Walk {
        g,
        opts: *opts,
        emitted: 0,
        visit,
    };
    let n = g.len();
    if opts.maximal_only {
        w.bron_kerbosch(&mut Vec::new(), Mask::full(n), Mask::empty(n))?;
    } else {
        w.all(&mut Vec::new(), &Mask::full(n))?;
    }
    Ok(w.emitted)
}

/// LO inequalities in lexicographic order of their sorted event lists.
pub fn enumerate_lo_inequalities(g: &OrthogonalityGraph, opts: &CliqueOptions) -> Result<Vec<LOInequality>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for_each_clique(g, opts, |c| out.push(c.to_vec()))?;
    out.sort_unstable();
    Ok(out.into_iter().map(LOInequality::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{BoxSpec, Scenario};

    fn graph(k: usize) -> OrthogonalityGraph {
        OrthogonalityGraph::new(&Scenario::homogeneous(&BoxSpec::binary(), k)).unwrap()
    }

    #[test]
    fn one_box_maximal_cliques() {
        let c: Vec<Vec<usize>> = enumerate_lo_inequalities(&graph(1), &CliqueOptions::default())
            .unwrap()
            .into_iter()
            .map(|i| i.events)
            .collect();
        assert_eq!(c, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn all_mode_is_lexicographic_and_bounded() {
        let g = graph(2);
        let opts = CliqueOptions {
            max_size: 3,
            maximal_only: false,
            ..Default::default()
        };
        let mut seen = Vec::new();
        for_each_clique(&g, &opts, |c| seen.push(c.to_vec())).unwrap();
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
        assert!(seen.iter().all(|c| (2..=3).contains(&c.len()) && g.is_clique(c)));
    }

    #[test]
    fn cap_and_bad_size() {
        let g = graph(2);
        let opts = CliqueOptions {
            max_cliques: 3,
            ..Default::default()
        };
        assert!(matches!(for_each_clique(&g, &opts, |_| {}), Err(Error::Resource { cap: 3, reached: 4, .. })));
        let opts = CliqueOptions {
            max_size: 1,
            ..Default::default()
        };
        assert!(matches!(enumerate_lo_inequalities(&g, &opts), Err(Error::Domain(_))));
    }

    #[test]
    fn single_event_graph_has_no_inequalities() {
        let spec = BoxSpec::with_outcome_counts(&[1]).unwrap();
        let g = OrthogonalityGraph::new(&Scenario::homogeneous(&spec, 2)).unwrap();
        assert_eq!(g.len(), 1);
        assert!(enumerate_lo_inequalities(&g, &CliqueOptions::default()).unwrap().is_empty());
    }
}
