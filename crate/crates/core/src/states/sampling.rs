use rand::Rng;

use super::pr::PRState;
use crate::boxes::Scenario;
use crate::error::Result;
use crate::rational::{self, Q};

/// A PR box on boxes `i < j` (two binary inputs each): `α_i ⊕ α_j = a_i a_j`
/// with probability 1/2 per matching pair. Every other box answers
/// deterministically from its cell in `cells`.
pub fn pr_box(sc: &Scenario, i: usize, j: usize, cells: &[usize]) -> Option<PRState> {
    let binary = |b: usize| sc.boxes[b].num_inputs() == 2 && (0..2).all(|a| sc.boxes[b].outcome_count(a) == 2);
    if i >= j || j >= sc.k() || !binary(i) || !binary(j) {
        return None;
    }
    let spaces: Vec<_> = sc.boxes.iter().map(|b| b.phase_space()).collect();
    PRState::from_fn(sc.clone(), |a, o| {
        let rest = (0..sc.k())
            .filter(|&l| l != i && l != j)
            .all(|l| spaces[l].coord(cells[l], a[l]) == o[l]);
        if rest && (o[i] ^ o[j]) == (a[i] & a[j]) {
            rational::frac(1, 2)
        } else {
            rational::zero()
        }
    })
    .ok()
}

/// A random no-signaling table: a convex mixture, with small random integer
/// weights, of `parts` vertices drawn from deterministic states, PR boxes on
/// random box pairs, and the given extra states.
pub fn random_no_signaling<R: Rng>(sc: &Scenario, extra: &[PRState], parts: usize, rng: &mut R) -> Result<PRState> {
    let mut picks: Vec<(Q, PRState)> = Vec::with_capacity(parts);
    for _ in 0..parts.max(1) {
        let cells: Vec<usize> = sc.boxes.iter().map(|b| rng.gen_range(0..b.phase_space().size())).collect();
        let choice = rng.gen_range(0..3);
        let state = match choice {
            1 if sc.k() >= 2 => {
                let i = rng.gen_range(0..sc.k() - 1);
                let j = rng.gen_range(i + 1..sc.k());
                pr_box(sc, i, j, &cells).unwrap_or_else(|| PRState::deterministic(sc.clone(), &cells))
            }
            2 if !extra.is_empty() => extra[rng.gen_range(0..extra.len())].clone(),
            _ => PRState::deterministic(sc.clone(), &cells),
        };
        picks.push((rational::int(rng.gen_range(1..=12)), state));
    }
    let total: Q = picks.iter().map(|p| p.0.clone()).sum();
    let parts: Vec<(Q, &PRState)> = picks.iter().map(|(w, s)| (w / &total, s)).collect();
    PRState::mixture(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pr_box_is_no_signaling_and_maximally_chsh() {
        let sc = Scenario::homogeneous(&BoxSpec::binary(), 2);
        let p = pr_box(&sc, 0, 1, &[0, 0]).unwrap();
        p.validate().unwrap();
        // P(equal outputs | x,x) = 1
        let eq = |a: usize, b: usize| p.prob(&[a, b], &[0, 0]) + p.prob(&[a, b], &[1, 1]);
        assert_eq!(eq(0, 0), rational::one());
        assert_eq!(eq(1, 1), rational::zero());
    }

    #[test]
    fn random_states_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=3 {
            let sc = Scenario::homogeneous(&BoxSpec::binary(), k);
            for _ in 0..20 {
                random_no_signaling(&sc, &[], 3, &mut rng).unwrap().validate().unwrap();
            }
        }
    }
}
