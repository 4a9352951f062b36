//! Digit-restriction sets `E_S`: the points whose `k`-th digit is 0 whenever
//! `k` is not in `S`. Densities of `S`, the tower set built from
//! `a_0 = 2, a_{n+1} = 2^{a_n}`, dimensions and finite-depth automata.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::automaton::SafetyAutomaton;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `a_5` would have `2^65536` bits.
pub const MAX_TOWER_LEVELS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityKind {
    /// Position `m >= 1` is in `S` iff the `m`-th bit of `preperiod ++ period^omega` is set.
    Periodic {
        preperiod: Vec<bool>,
        period: Vec<bool>,
    },
    /// `S = { m : a_n <= m <= 2 a_n for some n < levels }`.
    Tower { levels: usize },
    /// A finite list of members, meaningful up to `bound`.
    Explicit { members: BTreeSet<u64>, bound: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityDescriptor {
    pub kind: DensityKind,
    pub base: u32,
}

impl DensityDescriptor {
    pub fn periodic(preperiod: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must be nonempty".into()));
        }
        Ok(DensityDescriptor {
            kind: DensityKind::Periodic { preperiod, period },
            base: 2,
        })
    }

    pub fn tower(levels: usize) -> Result<Self> {
        check_levels(levels)?;
        Ok(DensityDescriptor {
            kind: DensityKind::Tower { levels },
            base: 2,
        })
    }

    pub fn explicit(members: impl IntoIterator<Item = u64>, bound: Option<u64>) -> Result<Self> {
        let members: BTreeSet<u64> = members.into_iter().collect();
        if members.contains(&0) {
            return Err(Error::InvalidArgument("positions start at 1".into()));
        }
        let top = members.iter().next_back().copied().unwrap_or(0);
        let bound = bound.unwrap_or(top);
        if bound < top {
            return Err(Error::BeyondBound { depth: top, bound });
        }
        if bound == 0 {
            return Err(Error::InvalidArgument(
                "explicit set needs a positive bound".into(),
            ));
        }
        Ok(DensityDescriptor {
            kind: DensityKind::Explicit { members, bound },
            base: 2,
        })
    }

    pub fn with_base(mut self, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        self.base = base;
        Ok(self)
    }

    /// Whether digit position `m` (1-based) is unrestricted.
    pub fn contains(&self, m: u64) -> bool {
        match &self.kind {
            DensityKind::Periodic { preperiod, period } => {
                let i = (m - 1) as usize;
                if i < preperiod.len() {
                    preperiod[i]
                } else {
                    period[(i - preperiod.len()) % period.len()]
                }
            }
            DensityKind::Tower { levels } => tower_intervals(*levels)
                .iter()
                .any(|(lo, hi)| *lo <= BigUint::from(m) && BigUint::from(m) <= *hi),
            DensityKind::Explicit { members, .. } => members.contains(&m),
        }
    }
}

impl fmt::Display for DensityDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| {
            v.iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.kind {
            DensityKind::Tower { levels } => write!(f, "tower({levels})"),
            DensityKind::Periodic { preperiod, period } if preperiod.is_empty() => {
                write!(f, "periodic([{}])", bits(period))
            }
            DensityKind::Periodic { preperiod, period } => {
                write!(f, "periodic([{}],[{}])", bits(preperiod), bits(period))
            }
            DensityKind::Explicit { members, bound } => {
                write!(f, "explicit({} members, bound {bound})", members.len())
            }
        }
    }
}

fn check_levels(levels: usize) -> Result<()> {
    if levels == 0 {
        return Err(Error::InvalidArgument(
            "tower needs at least one level".into(),
        ));
    }
    if levels > MAX_TOWER_LEVELS {
        return Err(Error::TooManyLevels {
            requested: levels,
            max: MAX_TOWER_LEVELS,
        });
    }
    Ok(())
}

/// `[a_0, .., a_{levels-1}]`.
pub fn tower_sequence(levels: usize) -> Result<Vec<BigUint>> {
    check_levels(levels)?;
    let mut out = vec![BigUint::from(2u32)];
    while out.len() < levels {
        let exp = out
            .last()
            .unwrap()
            .to_usize()
            .expect("exponent fits below the level cap");
        out.push(BigUint::one() << exp);
    }
    Ok(out)
}

/// The intervals `[a_n, 2 a_n]` merged where they touch or overlap.
fn tower_intervals(levels: usize) -> Vec<(BigUint, BigUint)> {
    let seq = tower_sequence(levels.clamp(1, MAX_TOWER_LEVELS)).expect("levels checked");
    let mut merged: Vec<(BigUint, BigUint)> = Vec::new();
    for a in seq {
        let hi = &a << 1;
        match merged.last_mut() {
            Some((_, top)) if a <= &*top + 1u32 => {
                if hi > *top {
                    *top = hi;
                }
            }
            _ => merged.push((a, hi)),
        }
    }
    merged
}

/// `|S ∩ [1, m]|` for the tower set.
fn tower_count(levels: usize, m: &BigUint) -> BigUint {
    let mut total = BigUint::zero();
    for (lo, hi) in tower_intervals(levels) {
        if lo > *m {
            break;
        }
        let top = if hi < *m { hi } else { m.clone() };
        total += top - lo + 1u32;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckpointKind {
    Lower,
    Upper,
    Running,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub m: BigUint,
    pub ratio: Rational,
    pub kind: CheckpointKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub checkpoints: Vec<Checkpoint>,
    /// Exact lower and upper densities when known in closed form.
    pub limits: Option<(Rational, Rational)>,
    pub exact: bool,
}

fn ratio(count: BigUint, m: BigUint) -> Rational {
    Rational::new(count.into(), m.into())
}

pub fn density_bounds(s: &DensityDescriptor) -> DensityBounds {
    match &s.kind {
        DensityKind::Periodic { preperiod, period } => {
            let ones = period.iter().filter(|&&b| b).count();
            let d = Rational::new(ones.into(), period.len().into());
            let m = preperiod.len() + period.len();
            let count = (1..=m as u64).filter(|&i| s.contains(i)).count();
            DensityBounds {
                lower: d.clone(),
                upper: d.clone(),
                checkpoints: vec![Checkpoint {
                    m: m.into(),
                    ratio: ratio(count.into(), m.into()),
                    kind: CheckpointKind::Running,
                }],
                limits: Some((d.clone(), d)),
                exact: true,
            }
        }
        DensityKind::Tower { levels } => {
            let seq = tower_sequence(*levels).expect("levels checked on construction");
            let mut checkpoints = Vec::new();
            // m = a_n - 1, just before a block starts; n = 0 only when it is the sole level
            let first = if seq.len() > 1 { 1 } else { 0 };
            for a in &seq[first..] {
                let m = a - 1u32;
                let c = tower_count(*levels, &m);
                checkpoints.push(Checkpoint {
                    ratio: ratio(c, m.clone()),
                    m,
                    kind: CheckpointKind::Lower,
                });
            }
            for a in &seq {
                let m: BigUint = a << 1;
                let c = tower_count(*levels, &m);
                checkpoints.push(Checkpoint {
                    ratio: ratio(c, m.clone()),
                    m,
                    kind: CheckpointKind::Upper,
                });
            }
            let last = |kind| {
                checkpoints
                    .iter()
                    .rev()
                    .find(|c| c.kind == kind)
                    .map(|c| c.ratio.clone())
                    .expect("at least one checkpoint of each kind")
            };
            DensityBounds {
                lower: last(CheckpointKind::Lower),
                upper: last(CheckpointKind::Upper),
                checkpoints,
                limits: Some((Rational::zero(), Rational::new(1.into(), 2.into()))),
                exact: false,
            }
        }
        DensityKind::Explicit { members, bound } => {
            // running ratios over the second half of the window
            let start = bound.div_ceil(2).max(1);
            let mut count = members.range(..start).count() as u64;
            let mut lo: Option<(u64, Rational)> = None;
            let mut hi: Option<(u64, Rational)> = None;
            for m in start..=*bound {
                if members.contains(&m) {
                    count += 1;
                }
                let r = Rational::new(count.into(), m.into());
                if lo.as_ref().is_none_or(|(_, x)| r < *x) {
                    lo = Some((m, r.clone()));
                }
                if hi.as_ref().is_none_or(|(_, x)| r > *x) {
                    hi = Some((m, r));
                }
            }
            let (lo_m, lo_r) = lo.expect("bound is positive");
            let (hi_m, hi_r) = hi.expect("bound is positive");
            DensityBounds {
                lower: lo_r.clone(),
                upper: hi_r.clone(),
                checkpoints: vec![
                    Checkpoint {
                        m: lo_m.into(),
                        ratio: lo_r,
                        kind: CheckpointKind::Lower,
                    },
                    Checkpoint {
                        m: hi_m.into(),
                        ratio: hi_r,
                        kind: CheckpointKind::Upper,
                    },
                ],
                limits: None,
                exact: false,
            }
        }
    }
}

/// Lower and upper density of `S`; the Hausdorff and packing dimensions of
/// `E_S^k` are `k` times these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EsDimensions {
    pub hausdorff: Rational,
    pub packing: Rational,
    pub exact: bool,
}

pub fn es_dimensions(s: &DensityDescriptor) -> EsDimensions {
    let bounds = density_bounds(s);
    match bounds.limits {
        Some((lower, upper)) => EsDimensions {
            hausdorff: lower,
            packing: upper,
            exact: true,
        },
        None => EsDimensions {
            hausdorff: bounds.lower,
            packing: bounds.upper,
            exact: false,
        },
    }
}

/// Depth-`k` automaton: digit positions `<= k` are free when in `S` and 0
/// otherwise; all later digits are 0.
pub fn es_truncate(s: &DensityDescriptor, k: usize) -> Result<SafetyAutomaton> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "truncation depth must be at least 1".into(),
        ));
    }
    if let DensityKind::Explicit { bound, .. } = &s.kind {
        if k as u64 > *bound {
            return Err(Error::BeyondBound {
                depth: k as u64,
                bound: *bound,
            });
        }
    }
    let mut transitions = Vec::new();
    for i in 0..k {
        if s.contains(i as u64 + 1) {
            transitions.extend((0..s.base).map(|d| (i, d, i + 1)));
        } else {
            transitions.push((i, 0, i + 1));
        }
    }
    transitions.push((k, 0, k));
    SafetyAutomaton::from_transitions(s.base, 1, k + 1, 0, transitions)
}

/// Explicit member lists: integers separated by whitespace or commas, `#`
/// comments, and an optional `bound <M>` line.
pub fn parse_explicit(text: &str) -> Result<DensityDescriptor> {
    let mut members = Vec::new();
    let mut bound = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let err = |message: String| Error::Format {
            line: idx + 1,
            message,
        };
        if let Some(rest) = line.strip_prefix("bound") {
            let m = rest
                .trim()
                .parse::<u64>()
                .map_err(|_| err(format!("bad bound `{}`", rest.trim())))?;
            bound = Some(m);
            continue;
        }
        for field in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if field.is_empty() {
                continue;
            }
            let m = field
                .parse::<u64>()
                .map_err(|_| err(format!("expected a position, found `{field}`")))?;
            if m == 0 {
                return Err(err("positions start at 1".into()));
            }
            members.push(m);
        }
    }
    DensityDescriptor::explicit(members, bound)
}

pub fn load_explicit(path: &Path) -> Result<DensityDescriptor> {
    parse_explicit(&std::fs::read_to_string(path)?)
}
