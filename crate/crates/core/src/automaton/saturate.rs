use std::collections::HashMap;

use super::{Limits, NondetAutomaton, SafetyAutomaton};
use crate::error::Result;

/// State of the value-equality relation between two digit streams `u`, `v`.
///
/// Streams are value-equal iff identical, or they agree up to a position where
/// the digits differ by one and afterwards the smaller stream is all `b-1`
/// while the larger is all `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum ValueRel {
    Same,
    /// `u` took the smaller digit: `u` continues with `b-1`, `v` with `0`.
    Below,
    /// `u` took the larger digit: `u` continues with `0`, `v` with `b-1`.
    Above,
}

impl ValueRel {
    pub(crate) fn code(self) -> usize {
        match self {
            ValueRel::Same => 0,
            ValueRel::Below => 1,
            ValueRel::Above => 2,
        }
    }

    pub(crate) fn from_code(code: usize) -> Self {
        match code {
            0 => ValueRel::Same,
            1 => ValueRel::Below,
            _ => ValueRel::Above,
        }
    }

    /// Possible `(v digit, next state)` given this state and the `u` digit.
    pub(crate) fn options(self, u: u32, base: u32) -> impl Iterator<Item = (u32, ValueRel)> {
        let top = base - 1;
        let mut opts: [Option<(u32, ValueRel)>; 3] = [None; 3];
        match self {
            ValueRel::Same => {
                opts[0] = Some((u, ValueRel::Same));
                if u < top {
                    opts[1] = Some((u + 1, ValueRel::Below));
                }
                if u > 0 {
                    opts[2] = Some((u - 1, ValueRel::Above));
                }
            }
            ValueRel::Below => {
                if u == top {
                    opts[0] = Some((0, ValueRel::Below));
                }
            }
            ValueRel::Above => {
                if u == 0 {
                    opts[0] = Some((top, ValueRel::Above));
                }
            }
        }
        opts.into_iter().flatten()
    }
}

/// Closes the language under value equality of expansions, so that the result
/// accepts every expansion of every point of the denoted set.
///
/// Each track of the input is composed with the value-equality relation; the
/// nondeterministic result is projected onto the new streams and determinized.
pub fn saturate(a: &SafetyAutomaton, limits: &Limits) -> Result<SafetyAutomaton> {
    let Some(q0) = a.initial() else {
        return Ok(a.clone());
    };
    let alphabet = a.alphabet();
    let base = a.base();
    let n = a.arity();
    let rel_count = 3usize.pow(n as u32);
    let encode = |q: usize, rels: usize| q * rel_count + rels;

    let mut nfa = NondetAutomaton::new(alphabet, 0, vec![0]);
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut queue = vec![encode(q0, 0)];
    ids.insert(encode(q0, 0), nfa.add_state());

    let mut choices: Vec<Vec<(u32, ValueRel)>> = vec![Vec::new(); n];
    while let Some(key) = queue.pop() {
        let from = ids[&key];
        let q = key / rel_count;
        let rels = key % rel_count;
        let rel_of =
            |track: usize| ValueRel::from_code((rels / 3usize.pow((n - 1 - track) as u32)) % 3);
        for &(u, target) in a.transitions(q) {
            for (track, slot) in choices.iter_mut().enumerate() {
                slot.clear();
                slot.extend(rel_of(track).options(alphabet.digit(u, track), base));
            }
            for_each_combination(&choices, |picked| {
                let mut letter = 0u32;
                let mut code = 0usize;
                for &(v, r) in picked {
                    letter = letter * base + v;
                    code = code * 3 + r.code();
                }
                let key = encode(target, code);
                let to = *ids.entry(key).or_insert_with(|| {
                    queue.push(key);
                    nfa.add_state()
                });
                nfa.add_transition(from, letter, to);
            });
        }
    }
    nfa.determinize(limits)
}

/// Calls `f` on every element of the cartesian product of `choices`.
pub(crate) fn for_each_combination<T: Copy>(choices: &[Vec<T>], mut f: impl FnMut(&[T])) {
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut pick = vec![0usize; choices.len()];
    let mut current: Vec<T> = choices.iter().map(|c| c[0]).collect();
    loop {
        f(&current);
        let mut t = choices.len();
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            pick[t] += 1;
            if pick[t] < choices[t].len() {
                current[t] = choices[t][pick[t]];
                break;
            }
            pick[t] = 0;
            current[t] = choices[t][0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{canonical_equal, count_prefixes, prefixes};

    fn lim() -> Limits {
        Limits::default()
    }

    fn third_high() -> SafetyAutomaton {
        // 0.1000...
        SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 1, 1), (1, 0, 1)]).unwrap()
    }

    fn third_low() -> SafetyAutomaton {
        // 0.0222...
        SafetyAutomaton::from_transitions(3, 1, 2, 0, [(0, 0, 1), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn both_expansions_of_a_third() {
        let s = saturate(&third_high(), &lim()).unwrap();
        let mut words = prefixes(&s, 4);
        words.sort();
        assert_eq!(words, vec![vec![0, 2, 2, 2], vec![1, 0, 0, 0]]);
        let t = saturate(&third_low(), &lim()).unwrap();
        assert!(canonical_equal(&s, &t, &lim()).unwrap());
        assert_ne!(third_high(), third_low());
    }

    #[test]
    fn cantor_gains_endpoint_expansions() {
        let c = SafetyAutomaton::from_transitions(3, 1, 1, 0, [(0, 0, 0), (0, 2, 0)]).unwrap();
        let s = saturate(&c, &lim()).unwrap();
        assert!(s.run(&[1, 0, 0, 0, 0]).is_some());
        assert!(s.run(&[1, 0, 1]).is_none());
        let ss = saturate(&s, &lim()).unwrap();
        assert!(canonical_equal(&s, &ss, &lim()).unwrap());
        assert!(count_prefixes(&s, 3) > count_prefixes(&c, 3));
    }

    #[test]
    fn empty_stays_empty() {
        let e = SafetyAutomaton::empty(3, 2).unwrap();
        assert!(saturate(&e, &lim()).unwrap().is_empty());
    }

    #[test]
    fn full_box_is_fixed() {
        let f = SafetyAutomaton::full(2, 2).unwrap();
        assert_eq!(
            crate::automaton::minimize(&saturate(&f, &lim()).unwrap()),
            f
        );
    }

    #[test]
    fn point_one_has_single_expansion() {
        let one = SafetyAutomaton::from_transitions(2, 1, 1, 0, [(0, 1, 0)]).unwrap();
        let s = saturate(&one, &lim()).unwrap();
        assert_eq!(count_prefixes(&s, 5), 1u32.into());
    }
}
