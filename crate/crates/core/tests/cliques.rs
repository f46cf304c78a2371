use boxlogic::lo::{enumerate_lo_inequalities, for_each_clique, CliqueOptions, OrthogonalityGraph};
use boxlogic::{BoxSpec, Scenario};

fn graph(k: usize) -> OrthogonalityGraph {
    OrthogonalityGraph::new(&Scenario::homogeneous(&BoxSpec::binary(), k)).unwrap()
}

/// Every clique with at least two members, by brute-force extension in
/// lexicographic order.
fn naive_cliques(g: &OrthogonalityGraph, max: usize) -> Vec<Vec<usize>> {
    fn grow(g: &OrthogonalityGraph, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        let start = cur.last().map_or(0, |&l| l + 1);
        for e in start..g.len() {
            if cur.iter().all(|&c| g.mask(c).is_disjoint(g.mask(e))) {
                cur.push(e);
                grow(g, cur, max, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(g, &mut Vec::new(), max, &mut out);
    out.sort();
    out
}

fn is_maximal(g: &OrthogonalityGraph, c: &[usize]) -> bool {
    (0..g.len()).all(|e| c.contains(&e) || c.iter().any(|&x| !g.orthogonal(x, e)))
}

fn enumerate(g: &OrthogonalityGraph, max_size: usize, maximal_only: bool) -> Vec<Vec<usize>> {
    let opts = CliqueOptions { max_size, maximal_only, ..Default::default() };
    let mut out = Vec::new();
    for_each_clique(g, &opts, |c| out.push(c.to_vec())).unwrap();
    out.sort();
    out
}

#[test]
fn all_cliques_match_naive_scan() {
    let g = graph(2);
    assert_eq!(enumerate(&g, usize::MAX, false), naive_cliques(&g, usize::MAX));
    let g = graph(3);
    assert_eq!(enumerate(&g, 4, false), naive_cliques(&g, 4));
}

#[test]
fn maximal_cliques_match_naive_scan() {
    for k in 2..=3 {
        let g = graph(k);
        let naive: Vec<Vec<usize>> = naive_cliques(&g, usize::MAX)
            .into_iter()
            .filter(|c| is_maximal(&g, c))
            .collect();
        assert_eq!(enumerate(&g, usize::MAX, true), naive, "k={k}");
    }
}

#[test]
fn counts() {
    assert_eq!(enumerate(&graph(2), usize::MAX, true).len(), 12);
    let g = graph(3);
    assert_eq!(g.edge_count(), 1184);
    assert_eq!(enumerate(&g, usize::MAX, true).len(), 872);
}

#[test]
fn inequalities_are_sorted_cliques() {
    let g = graph(2);
    let ineqs = enumerate_lo_inequalities(&g, &CliqueOptions::default()).unwrap();
    assert!(ineqs.windows(2).all(|w| w[0].events < w[1].events));
    assert!(ineqs.iter().all(|i| g.is_clique(&i.events)));
}

#[test]
fn clique_cap_is_reported() {
    let opts = CliqueOptions { max_cliques: 10, maximal_only: false, ..Default::default() };
    let err = for_each_clique(&graph(3), &opts, |_| {}).unwrap_err();
    assert!(matches!(err, boxlogic::Error::Resource { .. }), "{err}");
}
