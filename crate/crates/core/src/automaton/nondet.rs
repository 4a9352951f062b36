use std::collections::{BTreeMap, HashMap};

use super::{live_states, Alphabet, Limits, SafetyAutomaton};
use crate::error::{Error, Result};

/// Intermediate automaton with set-valued transitions, produced by projection,
/// saturation and affine images before the subset construction.
#[derive(Clone, Debug)]
pub struct NondetAutomaton {
    alphabet: Alphabet,
    initial: Vec<usize>,
    delta: Vec<Vec<(u32, usize)>>,
}

impl NondetAutomaton {
    pub fn new(alphabet: Alphabet, num_states: usize, initial: Vec<usize>) -> Self {
        NondetAutomaton {
            alphabet,
            initial,
            delta: vec![Vec::new(); num_states],
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn add_state(&mut self) -> usize {
        self.delta.push(Vec::new());
        self.delta.len() - 1
    }

    pub fn add_transition(&mut self, from: usize, letter: u32, to: usize) {
        self.delta[from].push((letter, to));
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    /// Disjoint union of deterministic automata with a nondeterministic choice
    /// of initial state.
    pub fn from_union(parts: &[&SafetyAutomaton]) -> Self {
        let alphabet = parts[0].alphabet();
        let mut delta = Vec::new();
        let mut initial = Vec::new();
        for part in parts {
            let offset = delta.len();
            if let Some(q0) = part.initial() {
                initial.push(offset + q0);
            }
            for row in part.rows() {
                delta.push(row.iter().map(|&(a, t)| (a, t + offset)).collect());
            }
        }
        NondetAutomaton {
            alphabet,
            initial,
            delta,
        }
    }

    /// Removes states without an infinite continuation and unreachable states.
    pub fn trim(&self) -> NondetAutomaton {
        let live = live_states(&self.delta);
        let n = self.delta.len();
        let mut reach = vec![false; n];
        let mut stack: Vec<usize> = self.initial.iter().copied().filter(|&q| live[q]).collect();
        for &q in &stack {
            reach[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, t) in &self.delta[q] {
                if live[t] && !reach[t] {
                    reach[t] = true;
                    stack.push(t);
                }
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut kept = 0;
        for q in 0..n {
            if reach[q] {
                index[q] = kept;
                kept += 1;
            }
        }
        let delta = (0..n)
            .filter(|&q| reach[q])
            .map(|q| {
                let mut row: Vec<(u32, usize)> = self.delta[q]
                    .iter()
                    .filter(|&&(_, t)| reach[t])
                    .map(|&(a, t)| (a, index[t]))
                    .collect();
                row.sort_unstable();
                row.dedup();
                row
            })
            .collect();
        let mut initial: Vec<usize> = self
            .initial
            .iter()
            .filter(|&&q| reach[q])
            .map(|&q| index[q])
            .collect();
        initial.sort_unstable();
        initial.dedup();
        NondetAutomaton {
            alphabet: self.alphabet,
            initial,
            delta,
        }
    }

    /// Subset construction on the trimmed automaton. For safety denotations a
    /// word is accepted iff all its prefixes reach a nonempty subset, which by
    /// Koenig's lemma on the finitely branching run tree means some single run
    /// is infinite.
    pub fn determinize(&self, limits: &Limits) -> Result<SafetyAutomaton> {
        let nfa = self.trim();
        if nfa.initial.is_empty() {
            return Ok(SafetyAutomaton::empty_with(self.alphabet));
        }
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets: Vec<Vec<usize>> = vec![nfa.initial.clone()];
        ids.insert(nfa.initial.clone(), 0);
        let mut rows: Vec<Vec<(u32, usize)>> = Vec::new();
        let mut next = 0;
        while next < subsets.len() {
            let mut by_letter: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for &q in &subsets[next] {
                for &(a, t) in &nfa.delta[q] {
                    by_letter.entry(a).or_default().push(t);
                }
            }
            let mut row = Vec::with_capacity(by_letter.len());
            for (a, mut targets) in by_letter {
                targets.sort_unstable();
                targets.dedup();
                let id = match ids.get(&targets) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= limits.max_states {
                            return Err(Error::StateCap {
                                limit: limits.max_states,
                            });
                        }
                        let id = subsets.len();
                        ids.insert(targets.clone(), id);
                        subsets.push(targets);
                        id
                    }
                };
                row.push((a, id));
            }
            rows.push(row);
            next += 1;
        }
        Ok(SafetyAutomaton::from_rows(self.alphabet, 0, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{count_prefixes, prefixes};

    fn loop_on(base: u32, digit: u32) -> SafetyAutomaton {
        SafetyAutomaton::from_transitions(base, 1, 1, 0, [(0, digit, 0)]).unwrap()
    }

    #[test]
    fn deterministic_input_is_isomorphic() {
        let c = SafetyAutomaton::from_transitions(3, 1, 1, 0, [(0, 0, 0), (0, 2, 0)]).unwrap();
        let nfa = NondetAutomaton::from_union(&[&c]);
        let d = nfa.determinize(&Limits::default()).unwrap();
        assert_eq!(d, c);
    }

    #[test]
    fn union_of_two_loops() {
        let zero = loop_on(3, 0);
        let two = loop_on(3, 2);
        let nfa = NondetAutomaton::from_union(&[&zero, &two]);
        let d = nfa.determinize(&Limits::default()).unwrap();
        // subsets {0,1}, {0}, {1}
        assert_eq!(d.num_states(), 3);
        let expected: std::collections::BTreeSet<Vec<u32>> =
            [vec![0; 6], vec![2; 6]].into_iter().collect();
        let got: std::collections::BTreeSet<Vec<u32>> = prefixes(&d, 6).into_iter().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn no_live_run_gives_empty() {
        let alpha = Alphabet::new(2, 1).unwrap();
        let mut nfa = NondetAutomaton::new(alpha, 2, vec![0]);
        nfa.add_transition(0, 0, 1);
        nfa.add_transition(0, 1, 1);
        let d = nfa.determinize(&Limits::default()).unwrap();
        assert!(d.is_empty());
        assert_eq!(count_prefixes(&d, 3), 0u32.into());
    }

    #[test]
    fn state_cap_is_reported() {
        let nfa = NondetAutomaton::from_union(&[&loop_on(3, 0), &loop_on(3, 2)]);
        let err = nfa.determinize(&Limits { max_states: 1 });
        assert!(matches!(err, Err(Error::StateCap { limit: 1 })));
    }
}
