use std::collections::HashMap;

use super::{intersect, saturate, Limits, SafetyAutomaton};
use crate::error::Result;

/// Moore partition refinement on residual prefix languages. The initial
/// partition separates states by their sets of defined letters; blocks are
/// split by the blocks reached on each letter until stable. The quotient is
/// renumbered breadth-first from the initial state with letters ascending, so
/// two automata with the same language minimize to identical values.
pub fn minimize(a: &SafetyAutomaton) -> SafetyAutomaton {
    let Some(q0) = a.initial() else {
        return a.clone();
    };
    let n = a.num_states();
    let mut block = vec![0usize; n];
    {
        let mut ids: HashMap<Vec<u32>, usize> = HashMap::new();
        for q in 0..n {
            let key: Vec<u32> = a.transitions(q).iter().map(|&(l, _)| l).collect();
            let next = ids.len();
            block[q] = *ids.entry(key).or_insert(next);
        }
    }
    let mut count = block.iter().max().map_or(0, |m| m + 1);
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![0usize; n];
        for q in 0..n {
            let sig: Vec<usize> = a.transitions(q).iter().map(|&(_, t)| block[t]).collect();
            let next = ids.len();
            refined[q] = *ids.entry((block[q], sig)).or_insert(next);
        }
        let new_count = ids.len();
        block = refined;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    // breadth-first renumbering of the quotient
    let mut order = vec![usize::MAX; count];
    let mut reps = Vec::with_capacity(count);
    order[block[q0]] = 0;
    reps.push(q0);
    let mut next = 0;
    while next < reps.len() {
        let q = reps[next];
        for &(_, t) in a.transitions(q) {
            if order[block[t]] == usize::MAX {
                order[block[t]] = reps.len();
                reps.push(t);
            }
        }
        next += 1;
    }
    let rows = reps
        .iter()
        .map(|&q| {
            a.transitions(q)
                .iter()
                .map(|&(l, t)| (l, order[block[t]]))
                .collect()
        })
        .collect();
    SafetyAutomaton::from_trim_rows(a.alphabet(), 0, rows)
}

/// Point-set equality: isomorphism of the minimized saturated automata.
pub fn canonical_equal(a: &SafetyAutomaton, b: &SafetyAutomaton, limits: &Limits) -> Result<bool> {
    a.check_compatible(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(a.is_empty() && b.is_empty());
    }
    let sa = minimize(&saturate(a, limits)?);
    let sb = minimize(&saturate(b, limits)?);
    Ok(sa == sb)
}

/// Point-set inclusion `a ⊆ b`.
pub fn is_subset(a: &SafetyAutomaton, b: &SafetyAutomaton, limits: &Limits) -> Result<bool> {
    let meet = intersect(a, b, limits)?;
    canonical_equal(&meet, a, limits)
}
