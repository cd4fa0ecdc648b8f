mod common;

use common::random_polys;
use kontsevich_core::jacobi::{eq3, has_eye_term, reduction_part, ConsequenceLabel};
use kontsevich_core::{
    associator, classify, evaluate_series, i_consequence, jacobiator, rat, s_consequence, solve_combination, star_oh3,
    verify_claim, Graph, GraphSeries, PoissonStructure, Slot, Term,
};
use proptest::prelude::*;

fn a3() -> GraphSeries {
    associator(&star_oh3()).unwrap().reduce_skew().grade_part(3)
}

fn sink_orders(s: &GraphSeries) -> std::collections::BTreeSet<Vec<usize>> {
    s.terms().map(|t| t.graph.sink_in_degrees()).collect()
}

#[test]
fn restrictions_partition_the_grade_three_associator() {
    let a3 = a3();
    assert_eq!(a3.len(), 39);
    let mut total = GraphSeries::new(3);
    for order in sink_orders(&a3) {
        total = total.plus(&a3.restrict(&order)).unwrap();
    }
    assert_eq!(total.reduce_skew(), a3);
    assert!(a3.restrict(&[0, 0, 0]).is_empty());
    let scaled = jacobiator().series.scaled(&rat(2, 3));
    assert_eq!(scaled.restrict(&[1, 1, 1]), scaled);
}

#[test]
fn claim_report_rejects_a_flipped_sign() {
    let a3 = a3();
    assert!(verify_claim(&a3).passed());
    let mut terms: Vec<Term> = a3.terms().cloned().collect();
    let victim = terms.iter().position(|t| t.graph.sink_in_degrees() == vec![2, 1, 1]).unwrap();
    terms[victim].coeff = -terms[victim].coeff.clone();
    let tampered = GraphSeries::from_terms(3, terms).unwrap();
    let report = verify_claim(&tampered);
    assert!(!report.passed());
    assert_eq!(report.failing_orders(), vec![[2, 1, 1]]);
}

#[test]
fn s_f_restrictions() {
    let s_f = s_consequence(Slot::F);
    assert!(s_f.restrict([3, 1, 1]).is_empty());
    assert_eq!(s_f.restrict([2, 2, 1]), eq3(Slot::F).series.restrict(&[2, 2, 1]));
    // the Right edge of the new vertex lands on one of the two Jacobiator
    // vertices: two brackets of three graphs each
    let mut six = Vec::new();
    for t in jacobiator().series.terms() {
        for inner in [3, 4] {
            let mut targets = t.graph.targets().to_vec();
            targets.push([0, inner]);
            six.push(Term::new(t.coeff.clone(), Graph::new(3, targets).unwrap()));
        }
    }
    assert_eq!(six.len(), 6);
    let six = GraphSeries::from_terms(3, six).unwrap().reduce_skew();
    assert_eq!(s_f.restrict([2, 1, 1]), six);
    let so3 = PoissonStructure::so3();
    for seed in 0..3 {
        let args = random_polys(3, 3, 40 + seed, 3);
        assert!(evaluate_series(&six, &so3, &args, 3).unwrap().iter().all(|v| v.is_zero()));
    }
}

#[test]
fn i_sums_carry_eyes_and_a_new_order() {
    let i_f = i_consequence(Slot::F);
    assert!(has_eye_term(&i_f.series));
    assert!(i_f.tadpole_subsum().terms().all(|t| classify(&t.graph).has_tadpole));
    assert!(!i_f.tadpole_subsum().is_empty());
    let target = i_f.restrict([1, 1, 1]);
    assert!(!target.is_empty());
    let basis: Vec<GraphSeries> = Slot::ALL.iter().map(|&s| s_consequence(s).restrict([1, 1, 1])).collect();
    assert!(solve_combination(&target, &basis).unique().is_none());
    assert!(matches!(solve_combination(&target, &basis), kontsevich_core::Combination::Infeasible { .. }));
}

#[test]
fn solver_examples() {
    let a3 = a3();
    let s221 = reduction_part(ConsequenceLabel::S(Slot::F)).restrict(&[2, 2, 1]);
    let solved = solve_combination(&a3.restrict(&[2, 2, 1]), std::slice::from_ref(&s221));
    assert_eq!(solved.unique(), Some(&[rat(2, 3)][..]));
    let zero = solve_combination(&GraphSeries::new(3), &[s221]);
    assert_eq!(zero.unique(), Some(&[rat(0, 1)][..]));
}

#[test]
fn consequences_vanish_for_random_planar_structures() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let p = PoissonStructure::random_planar(&mut rng);
    let args = random_polys(2, 3, 8, 3);
    for slot in Slot::ALL {
        for sum in [s_consequence(slot), i_consequence(slot), eq3(slot)] {
            let v = evaluate_series(&sum.series, &p, &args, 3).unwrap();
            assert!(v.iter().all(|x| x.is_zero()), "{}", sum.label);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reduce_skew_is_idempotent_and_preserves_evaluation(seed in 0u64..10_000, choice in 0u8..6) {
        let raw = associator(&star_oh3()).unwrap().truncated(2);
        let reduced = raw.reduce_skew();
        prop_assert!(reduced.is_reduced());
        prop_assert_eq!(reduced.reduce_skew(), reduced.clone());
        let p = common::structure(choice, seed);
        let args = random_polys(p.dim(), 3, seed, 2);
        prop_assert_eq!(
            evaluate_series(&raw, &p, &args, 2).unwrap(),
            evaluate_series(&reduced, &p, &args, 2).unwrap()
        );
    }

    #[test]
    fn witness_grade_two_associator_is_two_thirds_jacobiator(seed in 0u64..10_000) {
        let w = PoissonStructure::non_poisson_witness();
        let args = random_polys(3, 3, seed, 3);
        let a = evaluate_series(&associator(&star_oh3()).unwrap().truncated(2), &w, &args, 2).unwrap();
        let j = evaluate_series(&jacobiator().series, &w, &args, 2).unwrap();
        prop_assert_eq!(a[2].clone(), j[2].scale(&rat(2, 3)));
    }
}
