//! Seeded random automata for property tests and experiments.

use rand::Rng;

use crate::automaton::SafetyAutomaton;

/// A random trim automaton on `states` states (before trimming). Each letter is
/// present at a state with probability `density`, targets are uniform, and
/// every state keeps at least one transition, so the result is never empty.
pub fn random_automaton<R: Rng>(
    rng: &mut R,
    base: u32,
    arity: usize,
    states: usize,
    density: f64,
) -> SafetyAutomaton {
    assert!(states >= 1, "need at least one state");
    let size = base.pow(arity as u32);
    let mut transitions = Vec::new();
    for q in 0..states {
        let before = transitions.len();
        for letter in 0..size {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                transitions.push((q, letter, rng.gen_range(0..states)));
            }
        }
        if transitions.len() == before {
            transitions.push((q, rng.gen_range(0..size), rng.gen_range(0..states)));
        }
    }
    SafetyAutomaton::from_transitions(base, arity, states, 0, transitions)
        .expect("generated transitions are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_nonempty() {
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_automaton(&mut r1, 3, 2, 4, 0.2);
            assert!(!a.is_empty());
            assert_eq!(a, random_automaton(&mut r2, 3, 2, 4, 0.2));
        }
    }
}
