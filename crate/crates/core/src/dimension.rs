//! Metric and topological queries: box dimension from the spectral radius of
//! the transition multigraph, Lebesgue measure, interior, a depth-`k`
//! total-disconnectedness probe and the avoidance verdict built on them.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::automaton::{count_prefixes, prefixes, saturate, Limits, SafetyAutomaton};
use crate::error::{Error, Result};
use crate::rational::Rational;

const POWER_TOL: f64 = 1e-13;
const POWER_MAX_ITERS: usize = 200_000;

/// Box dimension `log(rho) / log(base)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionResult {
    pub value: f64,
    /// Spectral radius of the transition multigraph (1 for the empty set).
    pub growth: f64,
    /// Collatz-Wielandt enclosure of `growth`.
    pub growth_bounds: (f64, f64),
    /// Set when `growth` is known exactly as an integer (constant row sums).
    pub exact_growth: Option<u64>,
    pub base: u32,
    pub arity: usize,
    /// States of a strongly connected component attaining the radius.
    pub witness: Vec<usize>,
    pub empty: bool,
}

impl DimensionResult {
    /// Prefix counts grow polynomially; the dimension is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.exact_growth == Some(1)
    }
}

impl fmt::Display for DimensionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rho = match self.exact_growth {
            Some(r) => r.to_string(),
            None => format!("{}", self.growth),
        };
        writeln!(f, "dim {} = log({})/log({})", self.value, rho, self.base)?;
        let states: Vec<String> = self.witness.iter().map(usize::to_string).collect();
        if self.empty {
            write!(f, "witness [] (empty set)")
        } else {
            write!(f, "witness [{}]", states.join(" "))
        }
    }
}

/// Strongly connected components (Tarjan, iterative). Components come out in
/// reverse topological order.
pub(crate) fn sccs(a: &SafetyAutomaton) -> Vec<Vec<usize>> {
    let n = a.num_states();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            let row = a.transitions(v);
            if *edge < row.len() {
                let w = row[*edge].1;
                *edge += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

struct Radius {
    estimate: f64,
    lower: f64,
    upper: f64,
    exact: Option<u64>,
}

/// Spectral radius of the component's internal multigraph.
fn component_radius(a: &SafetyAutomaton, comp: &[usize]) -> Radius {
    let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let edges: Vec<Vec<usize>> = comp
        .iter()
        .map(|&q| {
            a.transitions(q)
                .iter()
                .filter_map(|&(_, t)| pos.get(&t).copied())
                .collect()
        })
        .collect();
    let sums: Vec<usize> = edges.iter().map(Vec::len).collect();
    if sums.iter().all(|&s| s == 0) {
        return Radius {
            estimate: 0.0,
            lower: 0.0,
            upper: 0.0,
            exact: Some(0),
        };
    }
    // a strongly connected graph with constant out-degree r has radius r
    if sums.iter().all(|&s| s == sums[0]) {
        let r = sums[0] as f64;
        return Radius {
            estimate: r,
            lower: r,
            upper: r,
            exact: Some(sums[0] as u64),
        };
    }
    // power iteration on M + I (primitive), bracketed by Collatz-Wielandt ratios
    let m = comp.len();
    let mut v = vec![1.0f64; m];
    let mut w = vec![0.0f64; m];
    let mut lower = *sums.iter().min().unwrap() as f64;
    let mut upper = *sums.iter().max().unwrap() as f64;
    for _ in 0..POWER_MAX_ITERS {
        for i in 0..m {
            w[i] = v[i] + edges[i].iter().map(|&j| v[j]).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..m {
            let ratio = w[i] / v[i] - 1.0;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        lower = lower.max(lo);
        upper = upper.min(hi);
        let scale = w.iter().cloned().fold(0.0, f64::max);
        for i in 0..m {
            v[i] = w[i] / scale;
        }
        if upper - lower <= POWER_TOL * upper.max(1.0) {
            break;
        }
    }
    Radius {
        estimate: 0.5 * (lower + upper),
        lower,
        upper,
        exact: None,
    }
}

pub fn box_dimension(a: &SafetyAutomaton) -> DimensionResult {
    let mut result = DimensionResult {
        value: 0.0,
        growth: 1.0,
        growth_bounds: (1.0, 1.0),
        exact_growth: Some(1),
        base: a.base(),
        arity: a.arity(),
        witness: Vec::new(),
        empty: a.is_empty(),
    };
    if a.is_empty() {
        return result;
    }
    let mut best: Option<(Radius, Vec<usize>)> = None;
    for comp in sccs(a) {
        let r = component_radius(a, &comp);
        let better = match &best {
            None => true,
            Some((b, _)) => match (r.exact, b.exact) {
                (Some(x), Some(y)) => x > y,
                _ => r.estimate > b.estimate,
            },
        };
        if better {
            best = Some((r, comp));
        }
    }
    let (radius, witness) = best.expect("nonempty automaton has a component");
    let full = (a.base() as u64).pow(a.arity() as u32);
    result.witness = witness;
    result.exact_growth = radius.exact;
    result.growth = radius.estimate;
    result.growth_bounds = (radius.lower, radius.upper);
    result.value = match radius.exact {
        Some(1) => 0.0,
        Some(r) if r == full => a.arity() as f64,
        _ => (radius.estimate.ln() / (a.base() as f64).ln()).clamp(0.0, a.arity() as f64),
    };
    result
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Lebesgue measure by value iteration from `mu = 1`. Iterates decrease to the
/// measure; iteration stops once the observed contraction predicts a remaining
/// decrease below `tol`, so the returned value is an upper bound within `tol`.
pub fn measure(a: &SafetyAutomaton, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let Some(q0) = a.initial() else {
        return Ok(0.0);
    };
    let n = a.num_states();
    let scale = (a.alphabet().size() as f64).recip();
    let mut mu = vec![1.0f64; n];
    let mut next = vec![0.0f64; n];
    let mut last_step = f64::INFINITY;
    let budget = 2_000_000_000usize / (a.num_transitions() + n).max(1);
    for _ in 0..budget.max(1000) {
        let mut step = 0.0f64;
        for q in 0..n {
            let v = scale * a.transitions(q).iter().map(|&(_, t)| mu[t]).sum::<f64>();
            step = step.max(mu[q] - v);
            next[q] = v;
        }
        std::mem::swap(&mut mu, &mut next);
        if step == 0.0 {
            break;
        }
        let contraction = if last_step.is_finite() {
            (step / last_step).min(1.0 - 1e-12)
        } else {
            1.0 - 1e-12
        };
        last_step = step;
        if step <= tol * (1.0 - contraction) {
            break;
        }
    }
    Ok(mu[q0])
}

/// States from which every letter is defined and stays in the set.
pub(crate) fn full_states(a: &SafetyAutomaton) -> Vec<bool> {
    let size = a.alphabet().size() as usize;
    let n = a.num_states();
    let mut keep: Vec<bool> = (0..n).map(|q| a.transitions(q).len() == size).collect();
    loop {
        let mut changed = false;
        for q in 0..n {
            if keep[q] && a.transitions(q).iter().any(|&(_, t)| !keep[t]) {
                keep[q] = false;
                changed = true;
            }
        }
        if !changed {
            return keep;
        }
    }
}

/// Exact measure: the probability that a uniformly random letter stream is
/// absorbed into the full states.
pub fn measure_exact(a: &SafetyAutomaton) -> Rational {
    let Some(q0) = a.initial() else {
        return Rational::zero();
    };
    let n = a.num_states();
    let full = full_states(a);
    // states that can reach a full state
    let mut reaches = full.clone();
    loop {
        let mut changed = false;
        for q in 0..n {
            if !reaches[q] && a.transitions(q).iter().any(|&(_, t)| reaches[t]) {
                reaches[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if full[q0] {
        return Rational::one();
    }
    if !reaches[q0] {
        return Rational::zero();
    }
    let unknown: Vec<usize> = (0..n).filter(|&q| reaches[q] && !full[q]).collect();
    let pos: HashMap<usize, usize> = unknown.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let m = unknown.len();
    let p = Rational::new(1.into(), (a.alphabet().size() as i64).into());
    // (I - P) x = P 1_full, as an augmented matrix
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); m + 1]; m];
    for (i, &q) in unknown.iter().enumerate() {
        rows[i][i] += Rational::one();
        for &(_, t) in a.transitions(q) {
            if full[t] {
                rows[i][m] += &p;
            } else if let Some(&j) = pos.get(&t) {
                rows[i][j] -= &p;
            }
        }
    }
    solve(rows)[pos[&q0]].clone()
}

/// Gauss-Jordan elimination on a nonsingular augmented system.
fn solve(mut rows: Vec<Vec<Rational>>) -> Vec<Rational> {
    let m = rows.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !rows[r][col].is_zero())
            .expect("transient system is nonsingular");
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
    }
    rows.into_iter().map(|mut r| r.pop().unwrap()).collect()
}

/// Shortest word leading the saturated automaton into a full state, i.e. an
/// open cell `prod [w_i, w_i + b^-k]` contained in the set.
pub fn interior_witness(a: &SafetyAutomaton, limits: &Limits) -> Result<Option<Vec<u32>>> {
    let s = saturate(a, limits)?;
    let Some(q0) = s.initial() else {
        return Ok(None);
    };
    let full = full_states(&s);
    let mut parent: Vec<Option<(usize, u32)>> = vec![None; s.num_states()];
    let mut seen = vec![false; s.num_states()];
    seen[q0] = true;
    let mut queue = VecDeque::from([q0]);
    while let Some(q) = queue.pop_front() {
        if full[q] {
            let mut word = Vec::new();
            let mut cur = q;
            while let Some((p, l)) = parent[cur] {
                word.push(l);
                cur = p;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for &(l, t) in s.transitions(q) {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((q, l));
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}

pub fn has_interior(a: &SafetyAutomaton, limits: &Limits) -> Result<bool> {
    Ok(interior_witness(a, limits)?.is_some())
}

pub fn is_nowhere_dense(a: &SafetyAutomaton, limits: &Limits) -> Result<bool> {
    Ok(!has_interior(a, limits)?)
}

/// Outcome of the depth-`k` probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Disconnected(usize),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub depth: usize,
    pub outcome: Probe,
    pub boxes: usize,
    pub components: usize,
    /// Largest per-coordinate extent of a component, in boxes.
    pub max_extent: u64,
}

/// Boxes beyond this count are not enumerated; the probe reports `Unknown`.
pub const PROBE_BOX_CAP: usize = 1 << 20;

/// Covers the set by the closed depth-`k` cells of accepted prefixes, joins
/// cells whose closures meet, and reports `Disconnected(k)` when every
/// component spans at most `2b` cells and less than the whole cube along
/// each coordinate.
pub fn totally_disconnected_probe(a: &SafetyAutomaton, k: usize) -> Result<ProbeReport> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "probe depth must be at least 1".into(),
        ));
    }
    let mut report = ProbeReport {
        depth: k,
        outcome: Probe::Unknown,
        boxes: 0,
        components: 0,
        max_extent: 0,
    };
    if a.is_empty() {
        report.outcome = Probe::Disconnected(k);
        return Ok(report);
    }
    let base = a.base() as u64;
    let Some(side) = base.checked_pow(k as u32) else {
        return Ok(report);
    };
    let total = count_prefixes(a, k);
    if total > PROBE_BOX_CAP.into() {
        report.boxes = usize::MAX;
        return Ok(report);
    }
    let n = a.arity();
    let alphabet = a.alphabet();
    let cells: Vec<Vec<u64>> = prefixes(a, k)
        .into_iter()
        .map(|word| {
            let mut idx = vec![0u64; n];
            for &l in &word {
                for (t, c) in idx.iter_mut().enumerate() {
                    *c = *c * base + alphabet.digit(l, t) as u64;
                }
            }
            idx
        })
        .collect();
    report.boxes = cells.len();
    let lookup: HashMap<&[u64], usize> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let offsets = 3usize.pow(n as u32);
    let mut probe = vec![0u64; n];
    for (i, cell) in cells.iter().enumerate() {
        'offsets: for code in 0..offsets {
            let mut rest = code;
            for t in 0..n {
                let delta = (rest % 3) as i64 - 1;
                rest /= 3;
                let c = cell[t] as i64 + delta;
                if c < 0 || c as u64 >= side {
                    continue 'offsets;
                }
                probe[t] = c as u64;
            }
            if let Some(&j) = lookup.get(probe.as_slice()) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut extents: HashMap<usize, (Vec<u64>, Vec<u64>)> = HashMap::new();
    for (i, cell) in cells.iter().enumerate() {
        let r = find(&mut parent, i);
        let (lo, hi) = extents
            .entry(r)
            .or_insert_with(|| (cell.clone(), cell.clone()));
        for t in 0..n {
            lo[t] = lo[t].min(cell[t]);
            hi[t] = hi[t].max(cell[t]);
        }
    }
    report.components = extents.len();
    report.max_extent = extents
        .values()
        .flat_map(|(lo, hi)| lo.iter().zip(hi).map(|(l, h)| h - l + 1))
        .max()
        .unwrap_or(0);
    if report.max_extent <= 2 * base && report.max_extent < side {
        report.outcome = Probe::Disconnected(k);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictTag {
    AvoidsCompactSet,
    DefinesAllCompactSets,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictTag::AvoidsCompactSet => "AvoidsCompactSet",
            VerdictTag::DefinesAllCompactSets => "DefinesAllCompactSets",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub dimension: DimensionResult,
    pub probe: ProbeReport,
    /// Over the rationals every automatic set avoids a compact set.
    pub rational_column: &'static str,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict {}", self.tag)?;
        writeln!(f, "{}", self.dimension)?;
        writeln!(
            f,
            "probe Disconnected({}) boxes {} components {} max_extent {}",
            self.probe.depth, self.probe.boxes, self.probe.components, self.probe.max_extent
        )?;
        write!(f, "over Q: {}", self.rational_column)
    }
}

pub const DEFAULT_VERDICT_DEPTH: usize = 8;

/// Scans probe depths `1..=max_depth`; refuses unless some depth certifies
/// total disconnectedness. The tag is decided exactly: the set avoids a
/// compact set iff prefix counts grow polynomially.
pub fn avoids_compact_verdict(a: &SafetyAutomaton, max_depth: usize) -> Result<Verdict> {
    let mut certified = None;
    for k in 1..=max_depth {
        let report = totally_disconnected_probe(a, k)?;
        if report.outcome == Probe::Disconnected(k) {
            certified = Some(report);
            break;
        }
        if report.boxes > PROBE_BOX_CAP {
            break;
        }
    }
    let Some(probe) = certified else {
        return Err(Error::VerdictRefused { max_depth });
    };
    let dimension = box_dimension(a);
    let tag = if dimension.is_zero() {
        VerdictTag::AvoidsCompactSet
    } else {
        VerdictTag::DefinesAllCompactSets
    };
    Ok(Verdict {
        tag,
        dimension,
        probe,
        rational_column: "avoids (automatic)",
    })
}
