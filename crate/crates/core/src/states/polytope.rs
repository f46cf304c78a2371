use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::logic::LogicState;
use std::sync::OnceLock;

use super::lp::{LinearProgram, LpOutcome, PreparedProgram};
use super::pr::{no_signaling_rows, normalization_rows, Row};
use crate::algebra::EffectStructure;
use crate::boxes::Scenario;
use crate::error::{Error, Result};
use crate::rational::{self, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolytopeKind {
    /// One variable per event; normalization and no-signaling equalities.
    NoSignaling,
    /// One variable per atom of a structure; additivity over its sums.
    Additivity,
}

/// `{x ≥ 0 : A x = b}` over exact rationals.
#[derive(Debug, Clone)]
pub struct StatePolytope {
    pub kind: PolytopeKind,
    pub vars: usize,
    pub normalizations: Vec<Row>,
    pub equalities: Vec<Row>,
    independent: Vec<Row>,
    prepared: OnceLock<PreparedProgram>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub optimum: Q,
    /// A vertex attaining the optimum, one value per variable.
    pub argmax: LogicState,
}

/// Reduced row echelon basis grown one row at a time.
struct RowBasis {
    cols: usize,
    /// (pivot column, row with 1 at the pivot and 0 at every other pivot).
    rows: Vec<(usize, Vec<Q>)>,
}

impl RowBasis {
    fn new(cols: usize) -> Self {
        RowBasis { cols, rows: Vec::new() }
    }

    /// Adds `row` if it is independent of the basis; returns whether it was.
    fn insert(&mut self, row: &Row) -> bool {
        let mut r = vec![rational::zero(); self.cols];
        for &(v, c) in &row.terms {
            r[v] += rational::int(c);
        }
        // Entries at pivot columns come from the original row only, since
        // basis rows vanish at each other's pivots.
        for (p, b) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Q::one() / &r[p];
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, b) in self.rows.iter_mut() {
            if b[p].is_zero() {
                continue;
            }
            let f = b[p].clone();
            for (x, y) in b.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

impl StatePolytope {
    fn from_rows(kind: PolytopeKind, vars: usize, normalizations: Vec<Row>, equalities: Vec<Row>) -> Self {
        let mut basis = RowBasis::new(vars);
        let independent = normalizations
            .iter()
            .chain(&equalities)
            .filter(|r| basis.insert(r))
            .cloned()
            .collect();
        StatePolytope {
            kind,
            vars,
            normalizations,
            equalities,
            independent,
            prepared: OnceLock::new(),
        }
    }

    /// The no-signaling polytope of a scenario: variables are events.
    pub fn no_signaling(sc: &Scenario) -> Self {
        Self::from_rows(
            PolytopeKind::NoSignaling,
            sc.event_count(),
            normalization_rows(sc),
            no_signaling_rows(sc),
        )
    }

    /// States of a concrete structure as additive functions of its atoms:
    /// `ρ(𝟙) = 1` and `ρ(q ⊕ a) = ρ(q) + ρ(a)` for every element `q` and atom
    /// `a` with a defined sum, each element valued through its canonical
    /// atom cover. Additivity over `q ⊕ a` extends to all defined sums in
    /// structures where every element is a disjoint union of atoms that
    /// stays in the structure at each step, which holds for the generated
    /// effect algebras and orthoposets.
    pub fn additivity(s: &EffectStructure) -> Result<Self> {
        let n = s.atoms().len();
        let certs: Vec<Vec<usize>> = (0..s.len())
            .map(|p| {
                s.certificate(p)
                    .ok_or_else(|| Error::Structural(format!("element {p} has no atom cover")))
            })
            .collect::<Result<_>>()?;
        let norm = vec![Row {
            terms: certs[s.one()].iter().map(|&a| (a, 1)).collect(),
            rhs: 1,
        }
        .canonical()];
        let mut seen = std::collections::HashSet::new();
        let mut eqs = Vec::new();
        for q in 0..s.len() {
            for (pos, &a) in s.atoms().iter().enumerate() {
                let Some(r) = s.oplus(q, a) else { continue };
                let mut terms: Vec<(usize, i64)> = certs[r].iter().map(|&x| (x, 1)).collect();
                terms.extend(certs[q].iter().map(|&x| (x, -1)));
                terms.push((pos, -1));
                let row = Row { terms, rhs: 0 }.canonical();
                if !row.terms.is_empty() && seen.insert(row.clone()) {
                    eqs.push(row);
                }
            }
        }
        debug_assert!(eqs.iter().all(|r| r.terms.iter().all(|&(v, _)| v < n)));
        Ok(Self::from_rows(PolytopeKind::Additivity, n, norm, eqs))
    }

    /// Rank of the full equality system.
    pub fn rank(&self) -> usize {
        self.independent.len()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.vars
            && x.iter().all(|v| !v.is_negative())
            && self
                .normalizations
                .iter()
                .chain(&self.equalities)
                .all(|r| r.eval(x) == rational::int(r.rhs))
    }

    fn program(&self, extra: &[Row]) -> LinearProgram {
        let rows: Vec<&Row> = self.independent.iter().chain(extra).collect();
        LinearProgram::new(
            rows.iter().map(|r| r.dense(self.vars)).collect(),
            rows.iter().map(|r| rational::int(r.rhs)).collect(),
        )
    }

    /// Exact maximum of `objective · x` and a vertex attaining it.
    pub fn maximize_linear(&self, objective: &[Q]) -> Result<LpSolution> {
        if objective.len() != self.vars {
            return Err(Error::Domain(format!(
                "objective has {} coefficients, polytope has {} variables",
                objective.len(),
                self.vars
            )));
        }
        let prepared = match self.prepared.get() {
            Some(p) => p,
            None => {
                let p = self.program(&[]).prepare()?;
                self.prepared.get_or_init(|| p)
            }
        };
        match prepared.maximize(objective)? {
            LpOutcome::Optimal { value, x } => {
                if !self.contains(&x) {
                    return Err(Error::Internal("optimal vertex violates a constraint".into()));
                }
                Ok(LpSolution {
                    optimum: value,
                    argmax: LogicState { atom_values: x },
                })
            }
            LpOutcome::Infeasible => Err(Error::Internal("state polytope is empty".into())),
        }
    }

    /// Maximum of the sum of the given variables.
    pub fn maximize_sum(&self, vars: &[usize]) -> Result<LpSolution> {
        let mut c = vec![rational::zero(); self.vars];
        for &v in vars {
            c[v] += rational::one();
        }
        self.maximize_linear(&c)
    }

    /// A point of the polytope with some coordinates fixed, if one exists.
    pub fn feasible_with(&self, fixed: &[(usize, Q)]) -> Result<Option<Vec<Q>>> {
        let mut lp = self.program(&[]);
        for (v, q) in fixed {
            let mut row = vec![rational::zero(); self.vars];
            row[*v] = rational::one();
            lp.rows.push(row);
            lp.rhs.push(q.clone());
        }
        lp.feasible_point()
    }
}

pub fn build_state_polytope(s: &EffectStructure) -> Result<StatePolytope> {
    let f = s
        .factorization()
        .ok_or_else(|| Error::Structural("structure has no recorded box structure".into()))?;
    Ok(StatePolytope::no_signaling(&f.scenario))
}

pub fn maximize_linear(p: &StatePolytope, objective: &[Q]) -> Result<LpSolution> {
    p.maximize_linear(objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxSpec;
    use crate::rational::frac;

    fn ns(k: usize) -> StatePolytope {
        StatePolytope::no_signaling(&Scenario::homogeneous(&BoxSpec::binary(), k))
    }

    #[test]
    fn row_counts_and_ranks() {
        let p = ns(1);
        assert_eq!((p.vars, p.normalizations.len(), p.equalities.len()), (4, 2, 0));
        assert_eq!(p.rank(), 2);
        let p = ns(2);
        assert_eq!((p.vars, p.normalizations.len(), p.equalities.len()), (16, 4, 8));
        // 16 variables, affine dimension 8
        assert_eq!(p.rank(), 8);
        let dense: Vec<Vec<Q>> = p
            .normalizations
            .iter()
            .chain(&p.equalities)
            .map(|r| r.dense(16))
            .collect();
        assert_eq!(super::super::lp::rank(&dense), 8);
    }

    #[test]
    fn pr_box_objective_is_four_thirds() {
        let sc = Scenario::homogeneous(&BoxSpec::binary(), 3);
        let p = StatePolytope::no_signaling(&sc);
        let ev: Vec<usize> = ["x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"]
            .iter()
            .map(|e| sc.parse_event(e).unwrap())
            .collect();
        let sol = p.maximize_sum(&ev).unwrap();
        assert_eq!(sol.optimum, frac(4, 3));
        assert!(p.contains(&sol.argmax.atom_values));
    }

    #[test]
    fn context_and_single_event_reach_one() {
        let sc = Scenario::homogeneous(&BoxSpec::binary(), 2);
        let p = StatePolytope::no_signaling(&sc);
        assert_eq!(p.maximize_sum(&sc.context_events(&[0, 1])).unwrap().optimum, frac(1, 1));
        assert_eq!(p.maximize_sum(&[5]).unwrap().optimum, frac(1, 1));
    }

    #[test]
    fn fixed_values() {
        let p = ns(1);
        assert!(p.feasible_with(&[(0, frac(1, 3))]).unwrap().is_some());
        assert!(p.feasible_with(&[(0, frac(1, 3)), (1, frac(1, 1))]).unwrap().is_none());
    }
}
