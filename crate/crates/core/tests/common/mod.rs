//! Independent oracles shared by the integration tests. Everything here
//! works on plain `u64` cell sets and rebuilds the binary box model from
//! coordinates, without going through the library's closure or LP code.

#![allow(dead_code)]

use rustc_hash::FxHashSet;

/// Cells of one binary box: assignments `(x, y) -> (out_x, out_y)`,
/// indexed `2 * out_x + out_y`.
pub const ONE_BOX_CELLS: usize = 4;

/// Events `[a_1 α_1 … a_k α_k]` of `k` binary boxes as cell sets, in the
/// order box 1 slowest, input before outcome.
pub fn binary_events(k: usize) -> Vec<u64> {
    assert!(k <= 3, "64 cells at most");
    let cells = ONE_BOX_CELLS.pow(k as u32);
    let mut out = Vec::new();
    for label in 0..4usize.pow(k as u32) {
        // digit i (box 1 most significant) = 2 * input + outcome
        let digits: Vec<usize> = (0..k).rev().map(|i| (label / 4usize.pow(i as u32)) % 4).collect();
        let mut m = 0u64;
        for c in 0..cells {
            let ok = digits.iter().enumerate().all(|(b, &d)| {
                let local = (c / ONE_BOX_CELLS.pow((k - 1 - b) as u32)) % ONE_BOX_CELLS;
                let (input, outcome) = (d / 2, d % 2);
                let out = if input == 0 { local / 2 } else { local % 2 };
                out == outcome
            });
            if ok {
                m |= 1 << c;
            }
        }
        out.push(m);
    }
    out
}

pub fn full(cells: usize) -> u64 {
    if cells == 64 {
        u64::MAX
    } else {
        (1u64 << cells) - 1
    }
}

/// Exact cover of `set` by pairwise disjoint atoms, by branching on the
/// lowest uncovered cell.
pub fn decomposable(set: u64, atoms: &[u64]) -> bool {
    if set == 0 {
        return true;
    }
    let low = set & set.wrapping_neg();
    atoms
        .iter()
        .filter(|&&a| a & low != 0 && a & !set == 0)
        .any(|&a| decomposable(set & !a, atoms))
}

/// `{S ⊆ Γ : S and Γ \ S decomposable}` by scanning every subset.
pub fn brute_force_subsets(cells: usize, atoms: &[u64]) -> Vec<u64> {
    assert!(cells <= 20);
    let all = full(cells);
    let mut out: Vec<u64> = (0..=all)
        .filter(|&s| decomposable(s, atoms) && decomposable(all & !s, atoms))
        .collect();
    out.sort_unstable();
    out
}

/// Same set, computed as the decomposable sets (all disjoint unions of
/// atoms) whose complement is also decomposable.
pub fn brute_force_unions(cells: usize, atoms: &[u64]) -> Vec<u64> {
    let all = full(cells);
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    seen.insert(0);
    let mut stack = vec![0u64];
    while let Some(m) = stack.pop() {
        for &a in atoms {
            if a & m == 0 && seen.insert(m | a) {
                stack.push(m | a);
            }
        }
    }
    let mut out: Vec<u64> = seen.iter().copied().filter(|m| seen.contains(&(all & !m))).collect();
    out.sort_unstable();
    out
}

pub fn as_u64(m: &boxlogic::Mask) -> u64 {
    assert!(m.universe() <= 64);
    m.words().first().copied().unwrap_or(0)
}
