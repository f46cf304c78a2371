use dashmap::DashMap;
use rustc_hash::FxBuildHasher;

use crate::mask::Mask;

const UNDECOMPOSABLE: u32 = u32::MAX;

/// Memoized exact-cover search: can a mask be written as a union of
/// pairwise disjoint atoms?
///
/// The search always branches on the lowest uncovered cell and tries the
/// atoms covering it in ascending position, so the certificate returned for
/// a mask is the first one in canonical atom order. The memo maps a residual
/// mask to the first atom of its certificate (or to "undecomposable"); it
/// is shared between threads and every insert is idempotent.
#[derive(Debug)]
pub struct DecompositionOracle {
    atoms: Vec<Mask>,
    by_cell: Vec<Vec<u32>>,
    memo: DashMap<Mask, u32, FxBuildHasher>,
}

struct Frame {
    residual: Mask,
    cell: usize,
    next: usize,
}

impl DecompositionOracle {
    pub fn new(atoms: Vec<Mask>) -> Self {
        let cells = atoms.first().map_or(0, Mask::universe);
        let mut by_cell = vec![Vec::new(); cells];
        for (i, a) in atoms.iter().enumerate() {
            assert_eq!(a.universe(), cells, "atoms over different universes");
            for c in a.iter() {
                by_cell[c].push(i as u32);
            }
        }
        DecompositionOracle {
            atoms,
            by_cell,
            memo: DashMap::with_hasher(FxBuildHasher),
        }
    }

    pub fn atoms(&self) -> &[Mask] {
        &self.atoms
    }

    /// Number of memoized residuals.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn lookup(&self, m: &Mask) -> Option<u32> {
        self.memo.get(m).map(|v| *v)
    }

    fn record(&self, residual: &Mask, step: u32) {
        self.memo.insert(residual.clone(), step);
        if cfg!(debug_assertions) && step != UNDECOMPOSABLE {
            let cert = self.chain(residual);
            let mut acc = Mask::empty(residual.universe());
            for &a in &cert {
                let am = &self.atoms[a];
                debug_assert!(acc.is_disjoint(am), "certificate atoms overlap");
                acc.union_with(am);
            }
            debug_assert_eq!(&acc, residual, "certificate does not cover the residual");
        }
    }

    fn chain(&self, m: &Mask) -> Vec<usize> {
        let mut out = Vec::new();
        let mut res = m.clone();
        while !res.is_empty() {
            let step = self.lookup(&res).expect("certificate chain broken");
            debug_assert_ne!(step, UNDECOMPOSABLE);
            res.difference_with(&self.atoms[step as usize]);
            out.push(step as usize);
        }
        out
    }

    /// Whether `m` admits a disjoint atom cover.
    pub fn is_decomposable(&self, m: &Mask) -> bool {
        if m.is_empty() {
            return true;
        }
        if let Some(v) = self.lookup(m) {
            return v != UNDECOMPOSABLE;
        }
        if self.atoms.is_empty() {
            return false;
        }
        let mut stack = vec![Frame {
            residual: m.clone(),
            cell: m.first().unwrap(),
            next: 0,
        }];
        loop {
            let top = stack.last_mut().unwrap();
            let candidates = &self.by_cell[top.cell];
            let mut descend = None;
            let mut solved = false;
            while top.next < candidates.len() {
                let a = candidates[top.next] as usize;
                top.next += 1;
                let am = &self.atoms[a];
                if !am.is_subset(&top.residual) {
                    continue;
                }
                let rest = top.residual.difference(am);
                if rest.is_empty() {
                    solved = true;
                    break;
                }
                match self.lookup(&rest) {
                    Some(UNDECOMPOSABLE) => continue,
                    Some(_) => {
                        solved = true;
                        break;
                    }
                    None => {
                        descend = Some(rest);
                        break;
                    }
                }
            }
            if solved {
                // Every frame's most recent candidate is on the certificate path.
                for frame in stack.iter().rev() {
                    let step = self.by_cell[frame.cell][frame.next - 1];
                    self.record(&frame.residual, step);
                }
                return true;
            }
            match descend {
                Some(rest) => {
                    let cell = rest.first().unwrap();
                    stack.push(Frame {
                        residual: rest,
                        cell,
                        next: 0,
                    });
                }
                None => {
                    let done = stack.pop().unwrap();
                    self.record(&done.residual, UNDECOMPOSABLE);
                    if stack.is_empty() {
                        return false;
                    }
                }
            }
        }
    }

    /// The canonical certificate of `m`: ascending atom positions.
    pub fn decompose(&self, m: &Mask) -> Option<Vec<usize>> {
        if !self.is_decomposable(m) {
            return None;
        }
        let mut cert = self.chain(m);
        cert.sort_unstable();
        Some(cert)
    }

    /// Every disjoint atom cover of `m`, each sorted, in discovery order.
    /// Stops after `limit` covers.
    pub fn all_decompositions(&self, m: &Mask, limit: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.enumerate(m, &mut path, &mut out, limit);
        out
    }

    fn enumerate(&self, res: &Mask, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let Some(cell) = res.first() else {
            let mut cert = path.clone();
            cert.sort_unstable();
            out.push(cert);
            return;
        };
        for &a in &self.by_cell[cell] {
            let am = &self.atoms[a as usize];
            if !am.is_subset(res) {
                continue;
            }
            let rest = res.difference(am);
            if !self.is_decomposable(&rest) {
                continue;
            }
            path.push(a as usize);
            self.enumerate(&rest, path, out, limit);
            path.pop();
        }
    }
}
