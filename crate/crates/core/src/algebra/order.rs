//! Bounds, suprema and infima in the order induced by ⊕.

use crate::algebra::EffectStructure;

/// Dense order matrix: `up[p]` holds every `q` with `p ≤ q`.
#[derive(Debug, Clone)]
pub struct OrderRelation {
    n: usize,
    words: usize,
    up: Vec<u64>,
    down: Vec<u64>,
}

impl OrderRelation {
    pub fn new(s: &EffectStructure) -> Self {
        let n = s.len();
        let words = n.div_ceil(64);
        let mut up = vec![0u64; n * words];
        let mut down = vec![0u64; n * words];
        for p in 0..n {
            for q in 0..n {
                if s.leq(p, q) {
                    up[p * words + q / 64] |= 1 << (q % 64);
                    down[q * words + p / 64] |= 1 << (p % 64);
                }
            }
        }
        OrderRelation { n, words, up, down }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    /// All `(p, q)` with `p ≤ q`, lexicographically.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|p| (0..self.n).filter(move |&q| self.leq(p, q)).map(move |q| (p, q)))
            .collect()
    }

    fn row<'a>(&self, v: &'a [u64], p: usize) -> &'a [u64] {
        &v[p * self.words..(p + 1) * self.words]
    }

    fn least_in(&self, set: &[u64], rows: &[u64]) -> Option<usize> {
        // The least element m of `set` has rows[m] ⊇ set.
        iter_bits(set).find(|&m| {
            self.row(rows, m)
                .iter()
                .zip(set)
                .all(|(r, s)| s & !r == 0)
        })
    }

    /// Least upper bound of a pair, if it exists.
    pub fn join(&self, p: usize, q: usize) -> Option<usize> {
        let ub: Vec<u64> = self.row(&self.up, p).iter().zip(self.row(&self.up, q)).map(|(a, b)| a & b).collect();
        self.least_in(&ub, &self.up)
    }

    /// Greatest lower bound of a pair, if it exists.
    pub fn meet(&self, p: usize, q: usize) -> Option<usize> {
        let lb: Vec<u64> = self
            .row(&self.down, p)
            .iter()
            .zip(self.row(&self.down, q))
            .map(|(a, b)| a & b)
            .collect();
        self.least_in(&lb, &self.down)
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + t
            })
        })
    })
}

/// Every element above each member of `family`, ascending.
pub fn upper_bounds(s: &EffectStructure, family: &[usize]) -> Vec<usize> {
    (0..s.len()).filter(|&u| family.iter().all(|&p| s.leq(p, u))).collect()
}

/// Every element below each member of `family`, ascending.
pub fn lower_bounds(s: &EffectStructure, family: &[usize]) -> Vec<usize> {
    (0..s.len()).filter(|&l| family.iter().all(|&p| s.leq(l, p))).collect()
}

/// Least upper bound of `family`, if it exists.
pub fn supremum(s: &EffectStructure, family: &[usize]) -> Option<usize> {
    let ub = upper_bounds(s, family);
    if s.is_concrete() {
        // In a concrete structure ≤ refines inclusion, so a least upper
        // bound must be the intersection of all upper bounds.
        let mut cand = s.element(s.one()).clone();
        for &u in &ub {
            cand = cand.intersection(s.element(u));
        }
        let m = s.index_of(&cand)?;
        (ub.binary_search(&m).is_ok() && ub.iter().all(|&u| s.leq(m, u))).then_some(m)
    } else {
        ub.iter().copied().find(|&m| ub.iter().all(|&u| s.leq(m, u)))
    }
}

/// Greatest lower bound of `family`, if it exists.
pub fn infimum(s: &EffectStructure, family: &[usize]) -> Option<usize> {
    let lb = lower_bounds(s, family);
    if s.is_concrete() {
        let mut cand = s.element(s.zero()).clone();
        for &l in &lb {
            cand.union_with(s.element(l));
        }
        let m = s.index_of(&cand)?;
        (lb.binary_search(&m).is_ok() && lb.iter().all(|&l| s.leq(l, m))).then_some(m)
    } else {
        lb.iter().copied().find(|&m| lb.iter().all(|&l| s.leq(l, m)))
    }
}

/// `p ⊥ q` in the order sense: `p ≤ q^c`.
pub fn order_orthogonal(s: &EffectStructure, p: usize, q: usize) -> bool {
    s.complement(q).is_some_and(|qc| s.leq(p, qc))
}
