//! Deterministic safety automata over tuple-digit alphabets.
//!
//! A letter is a tuple `(d_1, .., d_n)` of base-`b` digits, one per coordinate,
//! encoded as the integer `d_1 b^(n-1) + .. + d_n`. Coordinate 1 is the most
//! significant position, so letter order is lexicographic on tuples.
//!
//! A point `x` belongs to the denoted set iff some synchronous expansion of `x`
//! labels an infinite run from the initial state. The point 1 is written as the
//! all-`(b-1)` stream. Every automaton handed out by this module is trim: all
//! states are reachable and every state has a successor, so every finite run
//! extends to an infinite one and the empty set is the automaton with no states.

mod format;
mod minimize;
mod nondet;
mod ops;
mod saturate;

pub use format::{read_text, write_text};
pub use minimize::{canonical_equal, is_subset, minimize};
pub use nondet::NondetAutomaton;
pub use ops::{count_prefixes, intersect, intersect_languages, prefixes, product, project, union};
pub use saturate::saturate;

use crate::error::{Error, Result};

/// Largest alphabet accepted; letters are stored as `u32`.
const MAX_ALPHABET: u64 = 1 << 24;

/// Resource limits for constructions that may blow up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 1_000_000,
        }
    }
}

/// The letters `{0..b-1}^n` of an `n`-track base-`b` automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    base: u32,
    arity: usize,
}

impl Alphabet {
    pub fn new(base: u32, arity: usize) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        if arity == 0 {
            return Err(Error::InvalidArity);
        }
        let size = (base as u64).checked_pow(arity as u32);
        match size {
            Some(s) if s <= MAX_ALPHABET => Ok(Alphabet { base, arity }),
            _ => Err(Error::AlphabetTooLarge { base, arity }),
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> u32 {
        self.base.pow(self.arity as u32)
    }

    pub fn letters(&self) -> std::ops::Range<u32> {
        0..self.size()
    }

    pub fn encode(&self, digits: &[u32]) -> Result<u32> {
        if digits.len() != self.arity {
            return Err(Error::TupleLength {
                expected: self.arity,
                got: digits.len(),
            });
        }
        let mut letter = 0u32;
        for &d in digits {
            if d >= self.base {
                return Err(Error::DigitOutOfRange {
                    digit: d,
                    base: self.base,
                });
            }
            letter = letter * self.base + d;
        }
        Ok(letter)
    }

    pub fn decode(&self, letter: u32) -> Vec<u32> {
        let mut digits = vec![0; self.arity];
        let mut rest = letter;
        for slot in digits.iter_mut().rev() {
            *slot = rest % self.base;
            rest /= self.base;
        }
        digits
    }

    /// Digit of coordinate `track` (0-based) in `letter`.
    pub fn digit(&self, letter: u32, track: usize) -> u32 {
        let shift = (self.arity - 1 - track) as u32;
        (letter / self.base.pow(shift)) % self.base
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SafetyAutomaton {
    alphabet: Alphabet,
    initial: usize,
    // per state, sorted by letter
    delta: Vec<Vec<(u32, usize)>>,
}

impl SafetyAutomaton {
    /// Builds an automaton from explicit transitions `(state, letter, target)`
    /// and trims it. Rejects duplicate letters on a state.
    pub fn from_transitions(
        base: u32,
        arity: usize,
        num_states: usize,
        initial: usize,
        transitions: impl IntoIterator<Item = (usize, u32, usize)>,
    ) -> Result<Self> {
        let alphabet = Alphabet::new(base, arity)?;
        if num_states == 0 {
            return Ok(Self::empty_with(alphabet));
        }
        if initial >= num_states {
            return Err(Error::StateOutOfRange(initial));
        }
        let mut delta = vec![Vec::new(); num_states];
        for (state, letter, target) in transitions {
            if state >= num_states {
                return Err(Error::StateOutOfRange(state));
            }
            if target >= num_states {
                return Err(Error::StateOutOfRange(target));
            }
            if letter >= alphabet.size() {
                return Err(Error::DigitOutOfRange {
                    digit: letter,
                    base,
                });
            }
            delta[state].push((letter, target));
        }
        for (state, row) in delta.iter_mut().enumerate() {
            row.sort_unstable();
            for pair in row.windows(2) {
                if pair[0].0 == pair[1].0 {
                    if pair[0].1 == pair[1].1 {
                        continue;
                    }
                    return Err(Error::NonDeterministic {
                        state,
                        letter: pair[0].0,
                    });
                }
            }
            row.dedup();
        }
        Ok(Self::trim_raw(alphabet, initial, delta))
    }

    pub fn empty(base: u32, arity: usize) -> Result<Self> {
        Ok(Self::empty_with(Alphabet::new(base, arity)?))
    }

    pub(crate) fn empty_with(alphabet: Alphabet) -> Self {
        SafetyAutomaton {
            alphabet,
            initial: 0,
            delta: Vec::new(),
        }
    }

    /// The whole cube `[0,1]^arity`.
    pub fn full(base: u32, arity: usize) -> Result<Self> {
        let alphabet = Alphabet::new(base, arity)?;
        let row = alphabet.letters().map(|a| (a, 0)).collect();
        Ok(SafetyAutomaton {
            alphabet,
            initial: 0,
            delta: vec![row],
        })
    }

    /// Builds from rows that are already sorted and deterministic; trims.
    pub(crate) fn from_rows(
        alphabet: Alphabet,
        initial: usize,
        delta: Vec<Vec<(u32, usize)>>,
    ) -> Self {
        if delta.is_empty() {
            return Self::empty_with(alphabet);
        }
        Self::trim_raw(alphabet, initial, delta)
    }

    /// Rows already known to be trim (used by minimization and relabelling).
    pub(crate) fn from_trim_rows(
        alphabet: Alphabet,
        initial: usize,
        delta: Vec<Vec<(u32, usize)>>,
    ) -> Self {
        SafetyAutomaton {
            alphabet,
            initial,
            delta,
        }
    }

    /// Greatest fixpoint of "has a live successor", then drops unreachable
    /// states. Surviving states keep their relative order.
    fn trim_raw(alphabet: Alphabet, initial: usize, delta: Vec<Vec<(u32, usize)>>) -> Self {
        let n = delta.len();
        let live = live_states(&delta);
        if !live[initial] {
            return Self::empty_with(alphabet);
        }
        let mut reach = vec![false; n];
        let mut stack = vec![initial];
        reach[initial] = true;
        while let Some(q) = stack.pop() {
            for &(_, t) in &delta[q] {
                if live[t] && !reach[t] {
                    reach[t] = true;
                    stack.push(t);
                }
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if reach[q] {
                index[q] = next;
                next += 1;
            }
        }
        let mut rows = Vec::with_capacity(next);
        for q in 0..n {
            if reach[q] {
                rows.push(
                    delta[q]
                        .iter()
                        .filter(|&&(_, t)| reach[t])
                        .map(|&(a, t)| (a, index[t]))
                        .collect(),
                );
            }
        }
        SafetyAutomaton {
            alphabet,
            initial: index[initial],
            delta: rows,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn base(&self) -> u32 {
        self.alphabet.base
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    /// `None` for the empty set.
    pub fn initial(&self) -> Option<usize> {
        if self.delta.is_empty() {
            None
        } else {
            Some(self.initial)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// Outgoing transitions of `state`, sorted by letter.
    pub fn transitions(&self, state: usize) -> &[(u32, usize)] {
        &self.delta[state]
    }

    pub fn step(&self, state: usize, letter: u32) -> Option<usize> {
        let row = &self.delta[state];
        row.binary_search_by_key(&letter, |&(a, _)| a)
            .ok()
            .map(|i| row[i].1)
    }

    /// Runs a finite word from the initial state.
    pub fn run(&self, word: &[u32]) -> Option<usize> {
        let mut q = self.initial()?;
        for &a in word {
            q = self.step(q, a)?;
        }
        Some(q)
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub(crate) fn rows(&self) -> &[Vec<(u32, usize)>] {
        &self.delta
    }

    /// Same automaton; the empty automaton is already trim and every
    /// constructor trims, so this only re-establishes the invariant.
    pub fn trim(&self) -> SafetyAutomaton {
        if self.is_empty() {
            return self.clone();
        }
        Self::trim_raw(self.alphabet, self.initial, self.delta.clone())
    }

    pub(crate) fn check_compatible(&self, other: &SafetyAutomaton) -> Result<()> {
        if self.base() != other.base() {
            return Err(Error::BaseMismatch(self.base(), other.base()));
        }
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch(self.arity(), other.arity()));
        }
        Ok(())
    }
}

/// States with an infinite continuation, as a greatest fixpoint.
pub(crate) fn live_states(delta: &[Vec<(u32, usize)>]) -> Vec<bool> {
    let n = delta.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out_count = vec![0usize; n];
    for (q, row) in delta.iter().enumerate() {
        for &(_, t) in row {
            preds[t].push(q);
            out_count[q] += 1;
        }
    }
    let mut live = vec![true; n];
    let mut queue: Vec<usize> = (0..n).filter(|&q| out_count[q] == 0).collect();
    for &q in &queue {
        live[q] = false;
    }
    while let Some(q) = queue.pop() {
        for &p in &preds[q] {
            if live[p] {
                out_count[p] -= 1;
                if out_count[p] == 0 {
                    live[p] = false;
                    queue.push(p);
                }
            }
        }
    }
    live
}
