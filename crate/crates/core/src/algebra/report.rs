use serde::{Deserialize, Serialize};

/// Whether a checker visited its whole quantifier domain or a seeded sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Exhaustive,
    Sampled,
}

/// Outcome of one axiom. `witness` lists element indices in canonical
/// order and is empty when the axiom passes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub pass: bool,
    pub witness: Vec<usize>,
    pub scope: Scope,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
}

impl AxiomReport {
    pub(crate) fn exhaustive(axiom: &str, witness: Option<Vec<usize>>) -> Self {
        AxiomReport {
            axiom: axiom.to_string(),
            pass: witness.is_none(),
            witness: witness.unwrap_or_default(),
            scope: Scope::Exhaustive,
            samples: None,
        }
    }

    pub(crate) fn sampled(axiom: &str, witness: Option<Vec<usize>>, samples: usize) -> Self {
        AxiomReport {
            scope: Scope::Sampled,
            samples: Some(samples),
            ..Self::exhaustive(axiom, witness)
        }
    }
}

/// All reports pass.
pub fn all_pass(reports: &[AxiomReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Limits that decide when a checker enumerates everything and when it
/// falls back to seeded sampling.
#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Cheap pair quantifiers (E1, L2) are exhaustive up to this many elements.
    pub pair_limit: usize,
    /// E2 is exhaustive over triples up to this many elements.
    pub triple_limit: usize,
    /// L5 needs a meet and a join per comparable pair; exhaustive up to here.
    pub orthomodular_limit: usize,
    /// Suprema of all pairs are computed up to this many elements.
    pub lattice_limit: usize,
    /// Distributivity is checked on all triples up to this many elements.
    pub distributive_limit: usize,
    /// Largest family size searched by the coherence and L4 checks.
    pub family_bound: usize,
    /// Element families (not only atom families) are searched up to here.
    pub family_limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            pair_limit: 50_000,
            triple_limit: 200,
            orthomodular_limit: 600,
            lattice_limit: 5_000,
            distributive_limit: 400,
            family_bound: 4,
            family_limit: 128,
            samples: 20_000,
            seed: 0,
        }
    }
}
