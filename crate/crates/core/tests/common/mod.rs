//! Brute-force reference for depth-`k` box sets.
//!
//! A system is a bank of digit tracks constrained by checkers: an automaton
//! reading some tracks, or an integer linear relation `Σ c·value(track) + p = 0`
//! between track values. Live configurations are found by exhaustive search;
//! the box set is the set of length-`k` output prefixes of runs ending in a
//! live configuration. Tying the output to a witness through a linear
//! relation lets the output range over every expansion of every point, so
//! the result is the set of closed depth-`k` cells meeting the set.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use compact_automata::SafetyAutomaton;
use rand::Rng;

pub type Boxes = BTreeSet<Vec<u32>>;

#[derive(Clone, Debug)]
pub enum Checker {
    Run {
        a: SafetyAutomaton,
        tracks: Vec<usize>,
    },
    Linear {
        terms: Vec<(usize, i64)>,
        constant: i64,
    },
}

#[derive(Clone, Debug)]
pub struct System {
    pub base: u32,
    pub tracks: usize,
    pub checkers: Vec<Checker>,
    pub output: Vec<usize>,
}

type Config = Vec<i64>;

impl System {
    fn initial(&self) -> Option<Config> {
        let mut cfg = Vec::new();
        for c in &self.checkers {
            match c {
                Checker::Run { a, .. } => cfg.push(a.initial()? as i64),
                Checker::Linear { terms, constant } => {
                    if !linear_ok(terms, *constant) {
                        return None;
                    }
                    cfg.push(*constant);
                }
            }
        }
        Some(cfg)
    }

    /// Successor configurations with the digits read, found by assigning
    /// tracks one at a time and checking each checker once its tracks are set.
    fn successors(&self, cfg: &Config) -> Vec<(Vec<u32>, Config)> {
        let mut out = Vec::new();
        let mut digits = vec![0u32; self.tracks];
        self.assign(cfg, 0, &mut digits, &mut out);
        out
    }

    fn last_track(&self, c: &Checker) -> usize {
        match c {
            Checker::Run { tracks, .. } => *tracks.iter().max().unwrap(),
            Checker::Linear { terms, .. } => terms.iter().map(|t| t.0).max().unwrap(),
        }
    }

    fn step(&self, idx: usize, state: i64, digits: &[u32]) -> Option<i64> {
        match &self.checkers[idx] {
            Checker::Run { a, tracks } => {
                let letter = tracks
                    .iter()
                    .fold(0u32, |acc, &t| acc * self.base + digits[t]);
                a.step(state as usize, letter).map(|t| t as i64)
            }
            Checker::Linear { terms, .. } => {
                let next = self.base as i64 * state
                    + terms
                        .iter()
                        .map(|&(t, c)| c * digits[t] as i64)
                        .sum::<i64>();
                linear_ok(terms, next).then_some(next)
            }
        }
    }

    fn assign(
        &self,
        cfg: &Config,
        track: usize,
        digits: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, Config)>,
    ) {
        if track == self.tracks {
            let mut next = Vec::with_capacity(cfg.len());
            for (i, &s) in cfg.iter().enumerate() {
                match self.step(i, s, digits) {
                    Some(n) => next.push(n),
                    None => return,
                }
            }
            out.push((digits.clone(), next));
            return;
        }
        'digit: for d in 0..self.base {
            digits[track] = d;
            for (i, c) in self.checkers.iter().enumerate() {
                if self.last_track(c) == track && self.step(i, cfg[i], digits).is_none() {
                    continue 'digit;
                }
            }
            self.assign(cfg, track + 1, digits, out);
        }
    }

    /// Output prefixes of length `k` that extend to infinite runs.
    pub fn boxes(&self, k: usize) -> Boxes {
        let Some(start) = self.initial() else {
            return Boxes::new();
        };
        // reachable configurations and their successor lists
        let mut succ: HashMap<Config, Vec<(Vec<u32>, Config)>> = HashMap::new();
        let mut stack = vec![start.clone()];
        while let Some(c) = stack.pop() {
            if succ.contains_key(&c) {
                continue;
            }
            let s = self.successors(&c);
            for (_, n) in &s {
                if !succ.contains_key(n) {
                    stack.push(n.clone());
                }
            }
            succ.insert(c, s);
        }
        // greatest set of configurations with a successor inside the set
        let mut live: HashSet<Config> = succ.keys().cloned().collect();
        loop {
            let dead: Vec<Config> = live
                .iter()
                .filter(|c| !succ[*c].iter().any(|(_, n)| live.contains(n)))
                .cloned()
                .collect();
            if dead.is_empty() {
                break;
            }
            for c in dead {
                live.remove(&c);
            }
        }
        if !live.contains(&start) {
            return Boxes::new();
        }
        let mut level: HashSet<(Config, Vec<u32>)> = HashSet::from([(start, Vec::new())]);
        for _ in 0..k {
            let mut next = HashSet::new();
            for (c, word) in &level {
                for (digits, n) in &succ[c] {
                    if live.contains(n) {
                        let letter = self
                            .output
                            .iter()
                            .fold(0u32, |acc, &t| acc * self.base + digits[t]);
                        let mut w = word.clone();
                        w.push(letter);
                        next.insert((n.clone(), w));
                    }
                }
            }
            level = next;
        }
        level.into_iter().map(|(_, w)| w).collect()
    }
}

fn linear_ok(terms: &[(usize, i64)], state: i64) -> bool {
    // remaining tails t_i ∈ [0,1] must be able to cancel the residual
    let pos: i64 = terms.iter().map(|t| t.1.max(0)).sum();
    let neg: i64 = terms.iter().map(|t| t.1.min(0)).sum();
    -state >= neg && -state <= pos
}

fn equal_tracks(s: usize, t: usize) -> Checker {
    Checker::Linear {
        terms: vec![(s, 1), (t, -1)],
        constant: 0,
    }
}

/// Closed depth-`k` cells meeting the set denoted by `a`.
pub fn boxes_of(a: &SafetyAutomaton, k: usize) -> Boxes {
    let n = a.arity();
    let mut checkers = vec![Checker::Run {
        a: a.clone(),
        tracks: (0..n).collect(),
    }];
    checkers.extend((0..n).map(|i| equal_tracks(i, n + i)));
    System {
        base: a.base(),
        tracks: 2 * n,
        checkers,
        output: (n..2 * n).collect(),
    }
    .boxes(k)
}

pub fn union_boxes(a: &SafetyAutomaton, b: &SafetyAutomaton, k: usize) -> Boxes {
    let mut out = boxes_of(a, k);
    out.extend(boxes_of(b, k));
    out
}

pub fn intersect_boxes(a: &SafetyAutomaton, b: &SafetyAutomaton, k: usize) -> Boxes {
    let n = a.arity();
    let mut checkers = vec![
        Checker::Run {
            a: a.clone(),
            tracks: (0..n).collect(),
        },
        Checker::Run {
            a: b.clone(),
            tracks: (n..2 * n).collect(),
        },
    ];
    for i in 0..n {
        checkers.push(equal_tracks(i, n + i));
        checkers.push(equal_tracks(n + i, 2 * n + i));
    }
    System {
        base: a.base(),
        tracks: 3 * n,
        checkers,
        output: (2 * n..3 * n).collect(),
    }
    .boxes(k)
}

/// Cells of a product are pairs of cells, joined letter by letter.
pub fn product_boxes(a: &SafetyAutomaton, b: &SafetyAutomaton, k: usize) -> Boxes {
    let shift = b.base().pow(b.arity() as u32);
    let (ba, bb) = (boxes_of(a, k), boxes_of(b, k));
    let mut out = Boxes::new();
    for x in &ba {
        for y in &bb {
            out.insert(x.iter().zip(y).map(|(p, q)| p * shift + q).collect());
        }
    }
    out
}

/// Projection maps cells onto cells.
pub fn project_boxes(a: &SafetyAutomaton, coords: &[usize], k: usize) -> Boxes {
    let base = a.base();
    let n = a.arity();
    boxes_of(a, k)
        .into_iter()
        .map(|w| {
            w.into_iter()
                .map(|l| {
                    coords.iter().fold(0u32, |acc, &c| {
                        acc * base + (l / base.pow((n - c) as u32)) % base
                    })
                })
                .collect()
        })
        .collect()
}

/// Cells of `{(Σ c_i x_i + p)/b^e} ∩ [0,1]`.
pub fn affine_boxes(
    a: &SafetyAutomaton,
    coeffs: &[i64],
    offset: i64,
    scale_exp: u32,
    k: usize,
) -> Boxes {
    let n = a.arity();
    let scale = (a.base() as i64).pow(scale_exp);
    let mut terms: Vec<(usize, i64)> = coeffs.iter().enumerate().map(|(i, &c)| (i, c)).collect();
    terms.push((n, -scale));
    let checkers = vec![
        Checker::Run {
            a: a.clone(),
            tracks: (0..n).collect(),
        },
        Checker::Linear {
            terms,
            constant: offset,
        },
        equal_tracks(n, n + 1),
    ];
    System {
        base: a.base(),
        tracks: n + 2,
        checkers,
        output: vec![n + 1],
    }
    .boxes(k)
}

/// Largest depth `<= 6` with at most `budget` possible cells.
pub fn depth_for(base: u32, arity: usize, budget: u64) -> usize {
    let per = (base as u64).pow(arity as u32);
    (1..=6)
        .take_while(|&k| per.pow(k as u32) <= budget)
        .last()
        .unwrap_or(1)
}

/// A small random automaton with a random letter density.
pub fn small_automaton<R: Rng>(rng: &mut R, base: u32, arity: usize) -> SafetyAutomaton {
    let states = rng.gen_range(1..=6);
    let density = rng.gen_range(0.15..0.8);
    compact_automata::gen::random_automaton(rng, base, arity, states, density)
}
