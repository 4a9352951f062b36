mod common;

use common::*;
use compact_automata::automaton::{
    intersect, intersect_languages, product, project, saturate, union,
};
use compact_automata::rational::rat;
use compact_automata::structure::{affine_image, box_set, cantor, AffineSpec};
use compact_automata::{Limits, SafetyAutomaton};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lim() -> Limits {
    Limits::default()
}

#[test]
fn oracle_knows_both_expansions() {
    // the point 1/3 reached through 0.1000...
    let a = SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 1, 1), (1, 0, 1)]).unwrap();
    let boxes: Vec<Vec<u32>> = boxes_of(&a, 3).into_iter().collect();
    assert_eq!(boxes, vec![vec![0, 2, 2], vec![1, 0, 0]]);
}

#[test]
fn oracle_difference_of_cantor() {
    let cc = product(&cantor(), &cantor(), &lim()).unwrap();
    let oracle = affine_boxes(&cc, &[1, -1], 1, 1, 4);
    let expected = boxes_of(&box_set(3, &[(rat(0, 1), rat(2, 3))], &lim()).unwrap(), 4);
    assert_eq!(oracle, expected);
}

#[test]
fn oracle_rejects_plain_language_intersection() {
    let hi = SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 1, 1), (1, 0, 1)]).unwrap();
    let lo = SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 0, 1), (1, 2, 1)]).unwrap();
    let plain = intersect_languages(&hi, &lo, &lim()).unwrap();
    assert_ne!(boxes_of(&plain, 3), intersect_boxes(&hi, &lo, 3));
    let set = intersect(&hi, &lo, &lim()).unwrap();
    assert_eq!(boxes_of(&set, 3), intersect_boxes(&hi, &lo, 3));
}

#[test]
fn saturation_preserves_boxes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let base = rng.gen_range(2..=3);
        let arity = rng.gen_range(1..=2);
        let a = small_automaton(&mut rng, base, arity);
        let k = depth_for(base, arity, 800);
        assert_eq!(boxes_of(&saturate(&a, &lim()).unwrap(), k), boxes_of(&a, k));
    }
}

#[test]
fn operations_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..40 {
        let base = rng.gen_range(2..=3);
        let arity = rng.gen_range(1..=2);
        let a = small_automaton(&mut rng, base, arity);
        let b = small_automaton(&mut rng, base, arity);
        let k = depth_for(base, arity, 800);
        let u = union(&a, &b, &lim()).unwrap();
        assert_eq!(
            boxes_of(&u, k),
            union_boxes(&a, &b, k),
            "union, trial {trial}"
        );
        let i = intersect(&a, &b, &lim()).unwrap();
        assert_eq!(
            boxes_of(&i, k),
            intersect_boxes(&a, &b, k),
            "intersect, trial {trial}"
        );
        if arity == 1 {
            let kp = depth_for(base, 2, 800);
            let p = product(&a, &b, &lim()).unwrap();
            assert_eq!(
                boxes_of(&p, kp),
                product_boxes(&a, &b, kp),
                "product, trial {trial}"
            );
        } else {
            let c = rng.gen_range(1..=2);
            let p = project(&a, &[c], &lim()).unwrap();
            let kp = depth_for(base, 1, 800);
            assert_eq!(
                boxes_of(&p, kp),
                project_boxes(&a, &[c], kp),
                "project, trial {trial}"
            );
        }
        let coeffs: Vec<i64> = (0..arity).map(|_| rng.gen_range(-2..=2)).collect();
        let offset = rng.gen_range(0..=2);
        let e = rng.gen_range(0..=2);
        let img = affine_image(&a, &AffineSpec::new(coeffs.clone(), offset, e), &lim()).unwrap();
        let ka = depth_for(base, 1, 800);
        assert_eq!(
            boxes_of(&img, ka),
            affine_boxes(&a, &coeffs, offset, e, ka),
            "affine {coeffs:?} {offset} {e}, trial {trial}"
        );
    }
}
