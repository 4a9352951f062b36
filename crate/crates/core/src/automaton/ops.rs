use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{saturate, Alphabet, Limits, NondetAutomaton, SafetyAutomaton};
use crate::error::{Error, Result};

/// Union through a nondeterministic choice of initial state.
pub fn union(a: &SafetyAutomaton, b: &SafetyAutomaton, limits: &Limits) -> Result<SafetyAutomaton> {
    a.check_compatible(b)?;
    NondetAutomaton::from_union(&[a, b]).determinize(limits)
}

/// Set intersection. The second operand is saturated first so that a point
/// whose expansion in `a` differs from its expansion in `b` is kept.
pub fn intersect(
    a: &SafetyAutomaton,
    b: &SafetyAutomaton,
    limits: &Limits,
) -> Result<SafetyAutomaton> {
    a.check_compatible(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(SafetyAutomaton::empty_with(a.alphabet()));
    }
    let saturated = saturate(b, limits)?;
    intersect_languages(a, &saturated, limits)
}

/// Synchronized product of live runs: the language intersection.
pub fn intersect_languages(
    a: &SafetyAutomaton,
    b: &SafetyAutomaton,
    limits: &Limits,
) -> Result<SafetyAutomaton> {
    a.check_compatible(b)?;
    pair_product(a, b, a.alphabet(), limits, |x, y| {
        // merge two sorted rows on equal letters
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push((x[i].0, x[i].1, y[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    })
}

/// Cartesian product; the letter of the product is the concatenated tuple.
pub fn product(
    a: &SafetyAutomaton,
    b: &SafetyAutomaton,
    limits: &Limits,
) -> Result<SafetyAutomaton> {
    if a.base() != b.base() {
        return Err(Error::BaseMismatch(a.base(), b.base()));
    }
    let alphabet = Alphabet::new(a.base(), a.arity() + b.arity())?;
    let shift = b.alphabet().size();
    pair_product(a, b, alphabet, limits, |x, y| {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for &(la, ta) in x {
            for &(lb, tb) in y {
                out.push((la * shift + lb, ta, tb));
            }
        }
        out
    })
}

fn pair_product<F>(
    a: &SafetyAutomaton,
    b: &SafetyAutomaton,
    alphabet: Alphabet,
    limits: &Limits,
    combine: F,
) -> Result<SafetyAutomaton>
where
    F: Fn(&[(u32, usize)], &[(u32, usize)]) -> Vec<(u32, usize, usize)>,
{
    let (Some(a0), Some(b0)) = (a.initial(), b.initial()) else {
        return Ok(SafetyAutomaton::empty_with(alphabet));
    };
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(a0, b0)];
    ids.insert((a0, b0), 0);
    let mut rows = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (p, q) = pairs[next];
        let mut row = Vec::new();
        for (letter, ta, tb) in combine(a.transitions(p), b.transitions(q)) {
            let id = match ids.get(&(ta, tb)) {
                Some(&id) => id,
                None => {
                    if pairs.len() >= limits.max_states {
                        return Err(Error::StateCap {
                            limit: limits.max_states,
                        });
                    }
                    ids.insert((ta, tb), pairs.len());
                    pairs.push((ta, tb));
                    pairs.len() - 1
                }
            };
            row.push((letter, id));
        }
        row.sort_unstable();
        rows.push(row);
        next += 1;
    }
    Ok(SafetyAutomaton::from_rows(alphabet, 0, rows))
}

/// Image under the coordinate projection onto `coords` (1-based, distinct, in
/// the order given). For trim safety automata language projection equals set
/// projection: by Koenig's lemma a point whose every prefix extends to a live
/// run has an infinite run.
pub fn project(a: &SafetyAutomaton, coords: &[usize], limits: &Limits) -> Result<SafetyAutomaton> {
    if coords.is_empty() {
        return Err(Error::InvalidCoordinates("no coordinates given".into()));
    }
    let n = a.arity();
    let mut seen = vec![false; n];
    for &c in coords {
        if c == 0 || c > n {
            return Err(Error::InvalidCoordinates(format!(
                "coordinate {c} outside 1..={n}"
            )));
        }
        if seen[c - 1] {
            return Err(Error::InvalidCoordinates(format!(
                "coordinate {c} repeated"
            )));
        }
        seen[c - 1] = true;
    }
    let source = a.alphabet();
    let target = Alphabet::new(a.base(), coords.len())?;
    let Some(q0) = a.initial() else {
        return Ok(SafetyAutomaton::empty_with(target));
    };
    let letter_map: Vec<u32> = source
        .letters()
        .map(|l| {
            coords
                .iter()
                .fold(0, |acc, &c| acc * a.base() + source.digit(l, c - 1))
        })
        .collect();
    let mut nfa = NondetAutomaton::new(target, a.num_states(), vec![q0]);
    for q in 0..a.num_states() {
        for &(l, t) in a.transitions(q) {
            nfa.add_transition(q, letter_map[l as usize], t);
        }
    }
    nfa.determinize(limits)
}

/// Number of length-`k` letter strings labelling runs from the initial state.
pub fn count_prefixes(a: &SafetyAutomaton, k: usize) -> BigUint {
    let Some(q0) = a.initial() else {
        return BigUint::zero();
    };
    let mut counts = vec![BigUint::zero(); a.num_states()];
    counts[q0] = BigUint::from(1u32);
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); a.num_states()];
        for (q, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(_, t) in a.transitions(q) {
                next[t] += c;
            }
        }
        counts = next;
    }
    counts.into_iter().sum()
}

/// All length-`k` prefixes, as letter words in lexicographic order.
pub fn prefixes(a: &SafetyAutomaton, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let Some(q0) = a.initial() else {
        return out;
    };
    let mut word = Vec::with_capacity(k);
    fn walk(a: &SafetyAutomaton, q: usize, k: usize, word: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if word.len() == k {
            out.push(word.clone());
            return;
        }
        for &(l, t) in a.transitions(q) {
            word.push(l);
            walk(a, t, k, word, out);
            word.pop();
        }
    }
    walk(a, q0, k, &mut word, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::canonical_equal;

    fn lim() -> Limits {
        Limits::default()
    }

    fn cantor() -> SafetyAutomaton {
        SafetyAutomaton::from_transitions(3, 1, 1, 0, [(0, 0, 0), (0, 2, 0)]).unwrap()
    }

    /// [0, 1/3] in base 3: digit 0 then anything, or the expansion 0.1000...
    fn left_third_box() -> SafetyAutomaton {
        SafetyAutomaton::from_transitions(
            3,
            1,
            3,
            0,
            [
                (0, 0, 1),
                (0, 1, 2),
                (1, 0, 1),
                (1, 1, 1),
                (1, 2, 1),
                (2, 0, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn union_idempotent() {
        let c = cantor();
        let u = union(&c, &c, &lim()).unwrap();
        assert!(canonical_equal(&u, &c, &lim()).unwrap());
    }

    #[test]
    fn intersect_left_third() {
        let i = intersect(&cantor(), &left_third_box(), &lim()).unwrap();
        for k in 1..=8 {
            assert_eq!(count_prefixes(&i, k), BigUint::from(1u32 << (k - 1)));
        }
    }

    #[test]
    fn intersect_with_empty() {
        let e = SafetyAutomaton::empty(3, 1).unwrap();
        assert!(intersect(&cantor(), &e, &lim()).unwrap().is_empty());
        assert!(intersect(&e, &cantor(), &lim()).unwrap().is_empty());
    }

    #[test]
    fn intersect_keeps_points_with_different_expansions() {
        let hi = SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 1, 1), (1, 0, 1)]).unwrap();
        let lo = SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 0, 1), (1, 2, 1)]).unwrap();
        assert!(intersect_languages(&hi, &lo, &lim()).unwrap().is_empty());
        assert!(!intersect(&hi, &lo, &lim()).unwrap().is_empty());
    }

    #[test]
    fn mismatches_rejected() {
        let full2 = SafetyAutomaton::full(3, 2).unwrap();
        assert!(matches!(
            union(&cantor(), &full2, &lim()),
            Err(Error::ArityMismatch(1, 2))
        ));
        let b2 = SafetyAutomaton::full(2, 1).unwrap();
        assert!(matches!(
            intersect(&cantor(), &b2, &lim()),
            Err(Error::BaseMismatch(3, 2))
        ));
        assert!(product(&cantor(), &b2, &lim()).is_err());
    }

    #[test]
    fn product_counts_multiply() {
        let cc = product(&cantor(), &cantor(), &lim()).unwrap();
        for k in 0..6 {
            assert_eq!(count_prefixes(&cc, k), BigUint::from(4u32).pow(k as u32));
        }
        let e = SafetyAutomaton::empty(3, 2).unwrap();
        assert!(product(&e, &cantor(), &lim()).unwrap().is_empty());
    }

    #[test]
    fn project_product_back() {
        let full = SafetyAutomaton::full(3, 2).unwrap();
        let p = product(&cantor(), &full, &lim()).unwrap();
        let back = project(&p, &[1], &lim()).unwrap();
        assert!(canonical_equal(&back, &cantor(), &lim()).unwrap());
        let other = project(&p, &[2, 3], &lim()).unwrap();
        assert!(canonical_equal(&other, &full, &lim()).unwrap());
    }

    #[test]
    fn project_rejects_bad_coordinates() {
        let cc = product(&cantor(), &cantor(), &lim()).unwrap();
        assert!(project(&cc, &[], &lim()).is_err());
        assert!(project(&cc, &[0], &lim()).is_err());
        assert!(project(&cc, &[3], &lim()).is_err());
        assert!(project(&cc, &[1, 1], &lim()).is_err());
    }

    #[test]
    fn project_swaps_coordinates() {
        let full = SafetyAutomaton::full(3, 1).unwrap();
        let p = product(&cantor(), &full, &lim()).unwrap();
        let swapped = project(&p, &[2, 1], &lim()).unwrap();
        let expected = product(&full, &cantor(), &lim()).unwrap();
        assert!(canonical_equal(&swapped, &expected, &lim()).unwrap());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_prefixes(&cantor(), 4), BigUint::from(16u32));
        let full = SafetyAutomaton::full(3, 2).unwrap();
        assert_eq!(count_prefixes(&full, 3), BigUint::from(729u32));
        assert_eq!(
            prefixes(&cantor(), 2),
            vec![vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]]
        );
    }
}
