use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boxes::Scenario;
use crate::error::{Error, Result};
use crate::rational::{self, Q};

/// Conditional probability table `P(α_1…α_k | a_1…a_k)`, one entry per
/// event in scenario order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PRState {
    scenario: Scenario,
    probs: Vec<Q>,
}

/// A sparse linear equality `Σ coeff · P(event) = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub terms: Vec<(usize, i64)>,
    pub rhs: i64,
}

impl Row {
    /// Sorted terms, zero coefficients dropped, sign fixed so the first
    /// coefficient is positive.
    pub(crate) fn canonical(mut self) -> Row {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (e, c) in self.terms {
            *acc.entry(e).or_default() += c;
        }
        self.terms = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        if self.terms.first().is_some_and(|&(_, c)| c < 0) {
            for t in &mut self.terms {
                t.1 = -t.1;
            }
            self.rhs = -self.rhs;
        }
        self
    }

    pub fn eval(&self, values: &[Q]) -> Q {
        self.terms
            .iter()
            .map(|&(e, c)| &values[e] * Q::from_integer(c.into()))
            .sum()
    }

    pub fn dense(&self, n: usize) -> Vec<Q> {
        let mut v = vec![rational::zero(); n];
        for &(e, c) in &self.terms {
            v[e] = rational::int(c);
        }
        v
    }
}

/// One normalization row per context.
pub fn normalization_rows(sc: &Scenario) -> Vec<Row> {
    (0..sc.context_count())
        .map(|ctx| Row {
            terms: sc.context_events(&sc.context_inputs(ctx)).into_iter().map(|e| (e, 1)).collect(),
            rhs: 1,
        })
        .collect()
}

/// Every instance of the no-signaling equality: for each box `i`, each
/// ordered pair of distinct inputs `a ≠ b` of box `i`, and each fixing of the
/// other boxes' inputs and outcomes, the marginals of box `i` agree. Both
/// directions are generated and then deduplicated by canonical form.
pub fn no_signaling_rows(sc: &Scenario) -> Vec<Row> {
    let mut rows = Vec::new();
    if sc.k() < 2 {
        // A single box has nothing to signal to; the marginal equalities
        // reduce to normalization.
        return rows;
    }
    for i in 0..sc.k() {
        let others: Vec<usize> = (0..sc.k()).filter(|&j| j != i).collect();
        // Enumerate fixings of the other boxes: one (input, outcome) each.
        let mut fixings: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for &j in &others {
            let b = &sc.boxes[j];
            fixings = fixings
                .into_iter()
                .flat_map(|f| {
                    (0..b.num_inputs()).flat_map(move |a| {
                        let f = f.clone();
                        (0..b.outcome_count(a)).map(move |o| {
                            let mut g = f.clone();
                            g.push((a, o));
                            g
                        })
                    })
                })
                .collect();
        }
        let bi = &sc.boxes[i];
        let marginal = |fix: &[(usize, usize)], a: usize| -> Vec<usize> {
            (0..bi.outcome_count(a))
                .map(|o| {
                    let mut label = Vec::with_capacity(sc.k());
                    let mut it = fix.iter();
                    for j in 0..sc.k() {
                        label.push(if j == i { (a, o) } else { *it.next().unwrap() });
                    }
                    sc.event_index(&label)
                })
                .collect()
        };
        for fix in &fixings {
            for a in 0..bi.num_inputs() {
                for b in 0..bi.num_inputs() {
                    if a == b {
                        continue;
                    }
                    let mut terms: Vec<(usize, i64)> = marginal(fix, a).into_iter().map(|e| (e, 1)).collect();
                    terms.extend(marginal(fix, b).into_iter().map(|e| (e, -1)));
                    rows.push(Row { terms, rhs: 0 }.canonical());
                }
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    rows.retain(|r| seen.insert(r.clone()));
    rows
}

impl PRState {
    /// Validates positivity, normalization and no-signaling.
    pub fn new(scenario: Scenario, probs: Vec<Q>) -> Result<Self> {
        let s = PRState { scenario, probs };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn unchecked(scenario: Scenario, probs: Vec<Q>) -> Self {
        PRState { scenario, probs }
    }

    /// Builds a table from `P(outcomes | inputs)`.
    pub fn from_fn(scenario: Scenario, f: impl Fn(&[usize], &[usize]) -> Q) -> Result<Self> {
        let probs = (0..scenario.event_count())
            .map(|e| {
                let label = scenario.event_label(e);
                let inputs: Vec<usize> = label.iter().map(|l| l.0).collect();
                let outcomes: Vec<usize> = label.iter().map(|l| l.1).collect();
                f(&inputs, &outcomes)
            })
            .collect();
        Self::new(scenario, probs)
    }

    /// Every outcome tuple of a context equally likely.
    pub fn uniform(scenario: Scenario) -> Self {
        let probs = (0..scenario.event_count())
            .map(|e| {
                let n: i64 = scenario
                    .event_label(e)
                    .iter()
                    .zip(&scenario.boxes)
                    .map(|(&(a, _), b)| b.outcome_count(a) as i64)
                    .product();
                rational::frac(1, n)
            })
            .collect();
        PRState { scenario, probs }
    }

    /// Point mass on one cell per box: `γ_i` answers input `a` with `γ_i(a)`.
    pub fn deterministic(scenario: Scenario, cells: &[usize]) -> Self {
        let spaces: Vec<_> = scenario.boxes.iter().map(|b| b.phase_space()).collect();
        let probs = (0..scenario.event_count())
            .map(|e| {
                let hit = scenario
                    .event_label(e)
                    .iter()
                    .enumerate()
                    .all(|(i, &(a, o))| spaces[i].coord(cells[i], a) == o);
                if hit {
                    rational::one()
                } else {
                    rational::zero()
                }
            })
            .collect();
        PRState { scenario, probs }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn probs(&self) -> &[Q] {
        &self.probs
    }

    pub fn event_prob(&self, e: usize) -> &Q {
        &self.probs[e]
    }

    pub fn prob(&self, inputs: &[usize], outcomes: &[usize]) -> &Q {
        let label: Vec<(usize, usize)> = inputs.iter().copied().zip(outcomes.iter().copied()).collect();
        &self.probs[self.scenario.event_index(&label)]
    }

    pub fn validate(&self) -> Result<()> {
        let sc = &self.scenario;
        if self.probs.len() != sc.event_count() {
            return Err(Error::InvalidState(format!(
                "{} probabilities for {} events",
                self.probs.len(),
                sc.event_count()
            )));
        }
        if let Some(e) = self.probs.iter().position(|p| p.is_negative() || *p > Q::one()) {
            return Err(Error::InvalidState(format!(
                "P({}) = {} is outside [0, 1]",
                sc.event_name(e),
                rational::to_string(&self.probs[e])
            )));
        }
        for row in normalization_rows(sc) {
            let total = row.eval(&self.probs);
            if !total.is_one() {
                return Err(Error::NoSignaling(format!(
                    "context {} sums to {}",
                    context_name(sc, row.terms[0].0),
                    rational::to_string(&total)
                )));
            }
        }
        for row in no_signaling_rows(sc) {
            if !row.eval(&self.probs).is_zero() {
                let plus: Vec<usize> = row.terms.iter().filter(|t| t.1 > 0).map(|t| t.0).collect();
                let minus: Vec<usize> = row.terms.iter().filter(|t| t.1 < 0).map(|t| t.0).collect();
                let m = |es: &[usize]| -> Q { es.iter().map(|&e| self.probs[e].clone()).sum() };
                return Err(Error::NoSignaling(format!(
                    "marginal over {{{}}} is {} but over {{{}}} is {}",
                    names(sc, &plus),
                    rational::to_string(&m(&plus)),
                    names(sc, &minus),
                    rational::to_string(&m(&minus)),
                )));
            }
        }
        Ok(())
    }

    /// `P ⊗ Q` on the concatenated scenario.
    pub fn tensor(&self, other: &PRState) -> PRState {
        let mut boxes = self.scenario.boxes.clone();
        boxes.extend(other.scenario.boxes.iter().cloned());
        let probs = self
            .probs
            .iter()
            .flat_map(|p| other.probs.iter().map(move |q| p * q))
            .collect();
        PRState {
            scenario: Scenario::new(boxes),
            probs,
        }
    }

    /// `Σ w_i P_i` for weights summing to one.
    pub fn mixture(parts: &[(Q, &PRState)]) -> Result<PRState> {
        let first = parts.first().ok_or_else(|| Error::Domain("empty mixture".into()))?.1;
        let mut probs = vec![rational::zero(); first.probs.len()];
        for (w, p) in parts {
            if p.scenario != first.scenario {
                return Err(Error::Domain("mixture of states on different scenarios".into()));
            }
            for (acc, v) in probs.iter_mut().zip(&p.probs) {
                *acc += w * v;
            }
        }
        PRState::new(first.scenario.clone(), probs)
    }

    pub fn to_json(&self) -> PrJson {
        let sc = &self.scenario;
        let contexts = (0..sc.context_count())
            .map(|ctx| {
                let inputs = sc.context_inputs(ctx);
                let probs = sc
                    .context_events(&inputs)
                    .into_iter()
                    .map(|e| {
                        let key = sc
                            .event_label(e)
                            .iter()
                            .zip(&sc.boxes)
                            .map(|(&(a, o), b)| b.inputs[a].outcomes[o].clone())
                            .collect::<Vec<_>>()
                            .join(",");
                        (key, rational::to_string(&self.probs[e]))
                    })
                    .collect();
                ContextJson {
                    inputs: inputs
                        .iter()
                        .zip(&sc.boxes)
                        .map(|(&a, b)| b.inputs[a].name.clone())
                        .collect(),
                    probs,
                }
            })
            .collect();
        PrJson { contexts }
    }

    pub fn from_json(scenario: Scenario, doc: &PrJson) -> Result<Self> {
        let sc = &scenario;
        let mut probs: Vec<Option<Q>> = vec![None; sc.event_count()];
        for c in &doc.contexts {
            if c.inputs.len() != sc.k() {
                return Err(Error::Parse(format!("context {:?} has the wrong number of inputs", c.inputs)));
            }
            let inputs: Vec<usize> = c
                .inputs
                .iter()
                .zip(&sc.boxes)
                .map(|(name, b)| {
                    b.inputs
                        .iter()
                        .position(|i| &i.name == name)
                        .ok_or_else(|| Error::Parse(format!("unknown input {name:?}")))
                })
                .collect::<Result<_>>()?;
            for (key, val) in &c.probs {
                let labels: Vec<&str> = key.split(',').collect();
                if labels.len() != sc.k() {
                    return Err(Error::Parse(format!("outcome tuple {key:?} has the wrong length")));
                }
                let label: Vec<(usize, usize)> = labels
                    .iter()
                    .zip(&inputs)
                    .zip(&sc.boxes)
                    .map(|((l, &a), b)| {
                        b.inputs[a]
                            .outcomes
                            .iter()
                            .position(|o| o == l)
                            .map(|o| (a, o))
                            .ok_or_else(|| Error::Parse(format!("unknown outcome {l:?}")))
                    })
                    .collect::<Result<_>>()?;
                probs[sc.event_index(&label)] = Some(rational::parse(val)?);
            }
        }
        let probs = probs
            .into_iter()
            .enumerate()
            .map(|(e, p)| p.ok_or_else(|| Error::Parse(format!("missing probability for {}", sc.event_name(e)))))
            .collect::<Result<_>>()?;
        PRState::new(scenario, probs)
    }
}

fn names(sc: &Scenario, events: &[usize]) -> String {
    events.iter().map(|&e| sc.event_name(e)).collect::<Vec<_>>().join(", ")
}

fn context_name(sc: &Scenario, event: usize) -> String {
    sc.event_label(event)
        .iter()
        .zip(&sc.boxes)
        .map(|(&(a, _), b)| b.inputs[a].name.clone())
        .collect()
}

/// JSON form: `{contexts: [{inputs: [..], probs: {"o1,o2": "num/den"}}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrJson {
    pub contexts: Vec<ContextJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextJson {
    pub inputs: Vec<String>,
    pub probs: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxSpec;
    use crate::rational::frac;

    fn bin(k: usize) -> Scenario {
        Scenario::homogeneous(&BoxSpec::binary(), k)
    }

    #[test]
    fn equality_counts() {
        assert_eq!(normalization_rows(&bin(1)).len(), 2);
        assert!(no_signaling_rows(&bin(1)).is_empty());
        assert_eq!(normalization_rows(&bin(2)).len(), 4);
        assert_eq!(no_signaling_rows(&bin(2)).len(), 8);
        assert_eq!(no_signaling_rows(&bin(3)).len(), 48);
    }

    #[test]
    fn pr_box_is_valid_and_signaling_is_caught() {
        let pr = PRState::from_fn(bin(2), |a, o| {
            if (o[0] ^ o[1]) == (a[0] & a[1]) {
                frac(1, 2)
            } else {
                frac(0, 1)
            }
        })
        .unwrap();
        assert_eq!(pr.prob(&[1, 1], &[0, 1]), &frac(1, 2));
        // Alice's outcome copies Bob's input: normalized but signaling.
        let err = PRState::from_fn(bin(2), |a, o| {
            if o[0] == a[1] && o[1] == 0 {
                frac(1, 1)
            } else {
                frac(0, 1)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::NoSignaling(_)));
    }

    #[test]
    fn json_round_trip() {
        let u = PRState::uniform(bin(2));
        let doc = u.to_json();
        assert_eq!(doc.contexts.len(), 4);
        assert_eq!(doc.contexts[0].probs["0,1"], "1/4");
        let text = serde_json::to_string(&doc).unwrap();
        let back: PrJson = serde_json::from_str(&text).unwrap();
        assert_eq!(PRState::from_json(bin(2), &back).unwrap(), u);
    }

    #[test]
    fn deterministic_and_tensor() {
        let d = PRState::deterministic(bin(1), &[2]); // x answers 1, y answers 0
        assert_eq!(d.prob(&[0], &[1]), &frac(1, 1));
        assert_eq!(d.prob(&[1], &[0]), &frac(1, 1));
        let t = d.tensor(&PRState::uniform(bin(1)));
        t.validate().unwrap();
        assert_eq!(t.scenario().k(), 2);
    }
}
