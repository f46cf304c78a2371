use boxlogic::lo::{check_lo_copies, check_lo_violations, enumerate_lo_inequalities, CliqueOptions, OrthogonalityGraph};
use boxlogic::product::{generate, GenerationKind};
use boxlogic::rational::{frac, one};
use boxlogic::states::{
    check_order_determining, classical_states, compare_definedness, pr_box, product_state_extension, verify_state,
    PRState, StatePolytope, StateSpace,
};
use boxlogic::{BoxSpec, EffectStructure, Scenario};

fn binary(k: usize) -> Scenario {
    Scenario::homogeneous(&BoxSpec::binary(), k)
}

fn build(k: usize, kind: GenerationKind) -> EffectStructure {
    generate(&binary(k), kind, &Default::default()).unwrap().0
}

fn lo_events(sc: &Scenario) -> Vec<usize> {
    ["x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"]
        .iter()
        .map(|n| sc.parse_event(n).unwrap())
        .collect()
}

fn lo_state() -> PRState {
    let sc = binary(3);
    let sol = StatePolytope::no_signaling(&sc).maximize_sum(&lo_events(&sc)).unwrap();
    PRState::new(sc, sol.argmax.atom_values).unwrap()
}

#[test]
fn classical_states_are_states() {
    let s = build(2, GenerationKind::EffectAlgebra);
    let states = classical_states(&s);
    assert_eq!(states.len(), 16);
    for rho in &states {
        assert!(rho.is_zero_one());
        assert!(verify_state(&s, rho, usize::MAX).pass);
    }
    let s = build(3, GenerationKind::EffectAlgebra);
    for rho in classical_states(&s).iter().step_by(7) {
        assert!(verify_state(&s, rho, 0).pass);
    }
}

#[test]
fn pr_box_round_trip_on_two_boxes() {
    let s = build(2, GenerationKind::EffectAlgebra);
    let space = StateSpace::new(&s).unwrap();
    let p = pr_box(&binary(2), 0, 1, &[0, 0]).unwrap();
    let rho = space.pr_to_logic_state(&p).unwrap();
    assert!(verify_state(&s, &rho, usize::MAX).pass);
    assert_eq!(space.logic_state_to_pr(&rho).unwrap(), p);
}

#[test]
fn signaling_table_is_rejected() {
    let sc = binary(2);
    // Box 2 answers with box 1's input. box 1's input into its outcome.
    let f = |inputs: &[usize], outcomes: &[usize]| {
        if outcomes[0] == 0 && outcomes[1] == inputs[0] {
            one()
        } else {
            frac(0, 1)
        }
    };
    let err = PRState::from_fn(sc, f).unwrap_err();
    assert!(matches!(err, boxlogic::Error::NoSignaling(_)), "{err}");
}

#[test]
fn lo_bound_differs_between_structures() {
    let sc = binary(3);
    let events = lo_events(&sc);
    let ea = build(3, GenerationKind::EffectAlgebra);
    let p = StatePolytope::additivity(&ea).unwrap();
    let atoms: Vec<usize> = events
        .iter()
        .map(|&e| {
            let el = ea.event_elements().unwrap()[e];
            ea.atoms().iter().position(|&a| a == el).unwrap()
        })
        .collect();
    assert_eq!(p.maximize_sum(&atoms).unwrap().optimum, frac(4, 3));

    let omp = build(3, GenerationKind::Orthoposet);
    let q = StatePolytope::additivity(&omp).unwrap();
    let atoms: Vec<usize> = events
        .iter()
        .map(|&e| {
            let el = omp.index_of(&boxlogic::product::scenario_factorization(&sc).unwrap().events[e]).unwrap();
            omp.atoms().iter().position(|&a| a == el).unwrap()
        })
        .collect();
    assert_eq!(q.maximize_sum(&atoms).unwrap().optimum, one());
}

#[test]
fn violated_cliques_are_exactly_the_undefined_sums() {
    let s = build(3, GenerationKind::EffectAlgebra);
    let g = OrthogonalityGraph::new(&binary(3)).unwrap();
    let ineqs = enumerate_lo_inequalities(&g, &CliqueOptions::default()).unwrap();
    assert_eq!(ineqs.len(), 872);
    let r = check_lo_violations(&s, &StatePolytope::no_signaling(&binary(3)), ineqs).unwrap();
    assert_eq!(r.violations, 128);
    assert_eq!(r.max_lp, frac(4, 3));
    for e in &r.entries {
        assert_eq!(e.violated, !e.sum_defined, "{:?}", e.events);
        assert!(e.lp_max == one() || e.lp_max == frac(4, 3));
    }
}

#[test]
fn copies_of_the_lo_state() {
    let p = lo_state();
    let r1 = check_lo_copies(&p, 1, &Default::default()).unwrap();
    assert_eq!(r1.max_value, frac(4, 3));
    assert!(r1.violated);
    let r2 = check_lo_copies(&p, 2, &Default::default()).unwrap();
    assert_eq!(r2.boxes, 6);
    assert_eq!(r2.max_value, frac(16, 9));
    let u = check_lo_copies(&PRState::uniform(binary(3)), 2, &Default::default()).unwrap();
    assert_eq!(u.max_value, one());
}

#[test]
fn classical_states_determine_order_up_to_two_boxes() {
    for k in 1..=2 {
        let s = build(k, GenerationKind::EffectAlgebra);
        let r = check_order_determining(&s, &classical_states(&s)).unwrap();
        assert!(r.pass && r.distinguishing, "k={k}");
    }
}

#[test]
fn inclusion_outruns_the_order_on_three_boxes() {
    let s = build(3, GenerationKind::EffectAlgebra);
    let r = check_order_determining(&s, &classical_states(&s)).unwrap();
    assert!(!r.pass);
    assert!(r.distinguishing);
    let (p, q) = (r.witness[0], r.witness[1]);
    assert!(s.element(p).is_subset(s.element(q)));
    assert!(!s.leq(p, q));
    let rest = s.element(q).difference(s.element(p));
    assert!(!s.oracle().is_decomposable(&rest));
    assert!(s.oracle().is_decomposable(&rest.complement()));
}

#[test]
fn definedness_rules_agree_on_two_boxes() {
    let s = build(2, GenerationKind::EffectAlgebra);
    let r = compare_definedness(&s, usize::MAX).unwrap();
    assert!(r.complete);
    assert_eq!(r.pairs, r.agree);
}

#[test]
fn product_of_one_box_states_extends() {
    let s = build(2, GenerationKind::EffectAlgebra);
    let poly = StatePolytope::additivity(&s).unwrap();
    let one_box = binary(1);
    let a = PRState::deterministic(one_box.clone(), &[1]);
    let b = PRState::uniform(one_box);
    let rho = product_state_extension(&s, &poly, &[a, b]).unwrap().expect("extends");
    assert!(verify_state(&s, &rho, usize::MAX).pass);
}
