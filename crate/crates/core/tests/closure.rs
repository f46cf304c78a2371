mod common;

use boxlogic::product::{generate, generate_from_atoms, ClosureStrategy, GenerationKind, GenerationOptions};
use boxlogic::{BoxSpec, Scenario};

fn binary(k: usize) -> Scenario {
    Scenario::homogeneous(&BoxSpec::binary(), k)
}

fn elements_u64(s: &boxlogic::EffectStructure) -> Vec<u64> {
    s.elements().iter().map(common::as_u64).collect()
}

#[test]
fn coordinate_events_match_the_library_events() {
    for k in 1..=3 {
        let f = boxlogic::product::scenario_factorization(&binary(k)).unwrap();
        let lib: Vec<u64> = f.events.iter().map(common::as_u64).collect();
        assert_eq!(lib, common::binary_events(k), "k={k}");
    }
}

#[test]
fn closure_equals_subset_scan_for_one_and_two_boxes() {
    for k in 1..=2 {
        let (s, _) = generate(&binary(k), GenerationKind::EffectAlgebra, &Default::default()).unwrap();
        let cells = common::ONE_BOX_CELLS.pow(k as u32);
        let oracle = common::brute_force_subsets(cells, &common::binary_events(k));
        assert_eq!(elements_u64(&s), oracle, "k={k}");
    }
}

#[test]
fn both_oracles_agree_on_two_boxes() {
    let atoms = common::binary_events(2);
    assert_eq!(common::brute_force_subsets(16, &atoms), common::brute_force_unions(16, &atoms));
}

#[test]
fn closure_equals_union_oracle_for_three_boxes() {
    let (s, _) = generate(&binary(3), GenerationKind::EffectAlgebra, &Default::default()).unwrap();
    assert_eq!(elements_u64(&s), common::brute_force_unions(64, &common::binary_events(3)));
}

#[test]
fn strategies_agree() {
    for k in 2..=3 {
        let atom = generate(&binary(k), GenerationKind::EffectAlgebra, &Default::default()).unwrap().0;
        let opts = GenerationOptions { strategy: ClosureStrategy::AllPairs, ..Default::default() };
        let pairs = generate(&binary(k), GenerationKind::EffectAlgebra, &opts).unwrap().0;
        assert_eq!(atom.elements(), pairs.elements(), "k={k}");
    }
}

#[test]
fn mixed_product_matches_union_oracle() {
    // 4 × 6 cells: a binary box and one with a ternary and a binary input.
    let sc = Scenario::new(vec![BoxSpec::binary(), BoxSpec::with_outcome_counts(&[3, 2]).unwrap()]);
    let (s, _) = generate(&sc, GenerationKind::EffectAlgebra, &Default::default()).unwrap();
    let atoms: Vec<u64> = s.atoms().iter().map(|&a| common::as_u64(s.element(a))).collect();
    assert_eq!(elements_u64(&s), common::brute_force_unions(24, &atoms));
}

#[test]
fn orthoposet_contains_effect_algebra_for_two_boxes() {
    let ea = generate(&binary(2), GenerationKind::EffectAlgebra, &Default::default()).unwrap().0;
    let omp = generate(&binary(2), GenerationKind::Orthoposet, &Default::default()).unwrap().0;
    // For two boxes both constructions coincide.
    assert_eq!(ea.elements(), omp.elements());
}

#[test]
fn element_cap_is_reported() {
    let opts = GenerationOptions { max_elements: 1000, ..Default::default() };
    let err = generate(&binary(3), GenerationKind::EffectAlgebra, &opts).unwrap_err();
    assert!(matches!(err, boxlogic::Error::Resource { .. }), "{err}");
}

#[test]
fn foreign_generators_are_rejected() {
    let gens = [boxlogic::Mask::full(4)];
    assert!(generate_from_atoms(8, &gens, GenerationKind::EffectAlgebra, &Default::default()).is_err());
}

#[test]
fn order_from_sums_is_inclusion_with_element_difference() {
    let inclusion = |s: &boxlogic::EffectStructure, p: usize, q: usize| {
        s.element(p).is_subset(s.element(q)) && s.contains(&s.element(q).difference(s.element(p)))
    };
    let small = [
        generate(&binary(1), GenerationKind::EffectAlgebra, &Default::default()).unwrap().0,
        generate(&binary(2), GenerationKind::EffectAlgebra, &Default::default()).unwrap().0,
        boxlogic::algebra::fixtures::even_subsets(2),
    ];
    for s in &small {
        let n = s.len();
        for p in 0..n {
            for q in 0..n {
                let by_sum = (0..n).any(|r| s.oplus(p, r) == Some(q));
                assert_eq!(s.leq(p, q), by_sum, "{p} {q}");
                assert_eq!(by_sum, inclusion(s, p, q), "{p} {q}");
            }
        }
    }
    // Three boxes: every atom against every element.
    let s = generate(&binary(3), GenerationKind::EffectAlgebra, &Default::default()).unwrap().0;
    for &a in s.atoms() {
        for q in 0..s.len() {
            assert_eq!(s.leq(a, q), inclusion(&s, a, q));
        }
    }
}
