//! Query execution and plain-text / CSV reports.

use std::fmt::Write as _;

use compact_automata::automaton::{canonical_equal, count_prefixes, is_subset};
use compact_automata::dimension::{
    avoids_compact_verdict, box_dimension, interior_witness, is_nowhere_dense, measure,
};
use compact_automata::gadgets::{cantor_endpoints, Gadgets};
use compact_automata::lab::{box_count_estimate, marstrand_scan, sample_points, steinhaus_check};
use compact_automata::rational::{format_rational, to_f64, Rational};
use compact_automata::restriction::{density_bounds, es_dimensions, CheckpointKind};
use compact_automata::{Error, Limits, SafetyAutomaton};
use num_bigint::BigUint;

use crate::eval::{descriptor, eval, shape, Shape, TypeError};
use crate::syntax::{format_float, Expr, Query};
use crate::CliError;

/// Settings shared by all queries; each one is echoed in the report header.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub tol: f64,
    pub seed: u64,
    /// Deepest total-disconnectedness probe for `verdict`.
    pub depth: usize,
    pub cap: usize,
    /// Sample size for `marstrand` and `boxcount`.
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: 1e-9,
            seed: 1,
            depth: compact_automata::dimension::DEFAULT_VERDICT_DEPTH,
            cap: Limits::default().max_states,
            samples: 100_000,
        }
    }
}

impl Options {
    pub fn limits(&self) -> Limits {
        Limits {
            max_states: self.cap,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub body: Vec<String>,
    /// Tabular results, first row is the column names.
    pub table: Vec<Vec<String>>,
}

impl Report {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for l in self.header.iter().chain(&self.body) {
            let _ = writeln!(out, "{l}");
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::new();
        for l in &self.header {
            let _ = writeln!(out, "{l}");
        }
        for row in &self.table {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

const SMALL_BITS: u64 = 96;

/// Enumerated elements of the dense difference set available to `probe_ii`.
const GADGET_PREFIX: usize = 4000;

fn show_big(n: &BigUint) -> String {
    if n.bits() <= SMALL_BITS {
        n.to_string()
    } else {
        format!("<{} digits, ~2^{}>", n.to_string().len(), n.bits() - 1)
    }
}

fn show_ratio(r: &Rational) -> String {
    let bits = r.numer().bits().max(r.denom().bits());
    if bits <= SMALL_BITS {
        format!("{} ~ {:.9}", format_rational(r), to_f64(r))
    } else {
        format!("~ {:.9} (exact, {bits}-bit terms)", to_f64(r))
    }
}

fn checked(e: &Expr) -> Result<Shape, CliError> {
    Ok(shape(e)?)
}

fn set(e: &Expr, opts: &Options) -> Result<SafetyAutomaton, CliError> {
    checked(e)?;
    Ok(eval(e, &opts.limits())?)
}

fn core<T>(term: &impl ToString, r: Result<T, Error>) -> Result<T, CliError> {
    r.map_err(|source| {
        CliError::Eval(crate::eval::EvalError {
            term: term.to_string(),
            source,
        })
    })
}

fn same_shape(op: &str, a: &Expr, b: &Expr) -> Result<(), CliError> {
    let (sa, sb) = (checked(a)?, checked(b)?);
    if sa != sb {
        return Err(TypeError(format!(
            "{op}: `{a}` has base {} and arity {} but `{b}` has base {} and arity {}",
            sa.base, sa.arity, sb.base, sb.arity
        ))
        .into());
    }
    Ok(())
}

fn es_arg(
    op: &str,
    e: &Expr,
) -> Result<compact_automata::restriction::DensityDescriptor, CliError> {
    match e {
        Expr::Es { desc, .. } => core(e, descriptor(desc)),
        _ => Err(TypeError(format!("{op} needs an es(..) argument, found `{e}`")).into()),
    }
}

/// Smallest sampling depth whose cells are at most a quarter of `delta`,
/// limited so cell indices stay exact in `f64`.
fn sample_depth(base: u32, delta: f64) -> usize {
    let mut k = 1;
    while (base as f64).powi(-(k as i32)) > delta / 4.0
        && (base as f64).powi(k as i32 + 1) < 2f64.powi(52)
    {
        k += 1;
    }
    k
}

/// Runs `q`; `input` is the text exactly as the user wrote it.
pub fn run(input: &str, q: &Query, opts: &Options) -> Result<Report, CliError> {
    let mut header = vec![format!("# workbench {}", env!("CARGO_PKG_VERSION"))];
    for (i, l) in input.trim().lines().enumerate() {
        header.push(format!(
            "# {} {l}",
            if i == 0 { "input:" } else { "      " }
        ));
    }
    header.push(format!("# query: {q}"));
    let mut r = Report {
        header: [
            header,
            vec![format!(
                "# tol {} seed {} depth {} cap {} samples {}",
                format_float(opts.tol),
                opts.seed,
                opts.depth,
                opts.cap,
                opts.samples
            )],
        ]
        .concat(),
        ..Report::default()
    };
    let limits = opts.limits();
    match q {
        Query::Empty(e) => r.body.push(format!("empty {}", set(e, opts)?.is_empty())),
        Query::Equal(a, b) | Query::Subset(a, b) => {
            let eq = matches!(q, Query::Equal(..));
            let op = if eq { "equal" } else { "subset" };
            same_shape(op, a, b)?;
            let (x, y) = (set(a, opts)?, set(b, opts)?);
            let ans = if eq {
                core(q, canonical_equal(&x, &y, &limits))?
            } else {
                core(q, is_subset(&x, &y, &limits))?
            };
            r.body.push(format!("{op} {ans}"));
        }
        Query::Interior(e) | Query::NowhereDense(e) => {
            let a = set(e, opts)?;
            let w = core(e, interior_witness(&a, &limits))?;
            if matches!(q, Query::Interior(_)) {
                r.body.push(format!("interior {}", w.is_some()));
            } else {
                r.body.push(format!(
                    "nowhere_dense {}",
                    core(e, is_nowhere_dense(&a, &limits))?
                ));
            }
            if let Some(w) = w {
                let alphabet = a.alphabet();
                let cells: Vec<String> = w
                    .iter()
                    .map(|&l| {
                        let d: Vec<String> =
                            alphabet.decode(l).iter().map(u32::to_string).collect();
                        format!("({})", d.join(","))
                    })
                    .collect();
                r.body
                    .push(format!("full cell after prefix [{}]", cells.join(" ")));
            }
        }
        Query::Dim(e) => {
            let d = box_dimension(&set(e, opts)?);
            r.body.extend(d.to_string().lines().map(String::from));
            r.body.push(format!(
                "growth in [{}, {}]",
                d.growth_bounds.0, d.growth_bounds.1
            ));
        }
        Query::Measure(e, tol) => {
            let t = tol.unwrap_or(opts.tol);
            let m = core(e, measure(&set(e, opts)?, t))?;
            r.body.push(format!(
                "measure {m} (upper estimate, within {})",
                format_float(t)
            ));
        }
        Query::Boxes(e, k) => {
            let n = count_prefixes(&set(e, opts)?, *k);
            r.body.push(format!("boxes {n} at depth {k}"));
        }
        Query::Verdict(e) => {
            let v = core(e, avoids_compact_verdict(&set(e, opts)?, opts.depth))?;
            r.body.extend(v.to_string().lines().map(String::from));
        }
        Query::Densities(e) => {
            let s = es_arg("densities", e)?;
            let b = density_bounds(&s);
            r.body.push(format!("descriptor {s}"));
            r.table.push(vec![
                "kind".into(),
                "m".into(),
                "ratio".into(),
                "approx".into(),
            ]);
            for c in &b.checkpoints {
                let kind = match c.kind {
                    CheckpointKind::Lower => "lower",
                    CheckpointKind::Upper => "upper",
                    CheckpointKind::Running => "running",
                };
                r.body.push(format!(
                    "{kind:<8} m = {:<24} ratio {}",
                    show_big(&c.m),
                    show_ratio(&c.ratio)
                ));
                let exact = if c.ratio.numer().bits().max(c.ratio.denom().bits()) <= SMALL_BITS {
                    format_rational(&c.ratio)
                } else {
                    String::new()
                };
                r.table.push(vec![
                    kind.into(),
                    show_big(&c.m),
                    exact,
                    format!("{}", to_f64(&c.ratio)),
                ]);
            }
            r.body.push(format!(
                "bounds lower {} upper {}{}",
                show_ratio(&b.lower),
                show_ratio(&b.upper),
                if b.exact { " (exact)" } else { "" }
            ));
            r.body.push(match &b.limits {
                Some((lo, hi)) => {
                    format!("limits ({}, {})", format_rational(lo), format_rational(hi))
                }
                None => "limits unknown beyond the listed window".into(),
            });
        }
        Query::EsDims(e) => {
            let s = es_arg("es_dims", e)?;
            let d = es_dimensions(&s);
            let tag = if d.exact { "exact" } else { "window estimate" };
            r.body.push(format!(
                "hausdorff {} per coordinate ({tag})",
                show_ratio(&d.hausdorff)
            ));
            r.body.push(format!(
                "packing {} per coordinate ({tag})",
                show_ratio(&d.packing)
            ));
        }
        Query::Steinhaus(e, tol) => {
            let sh = checked(e)?;
            if sh.arity != 1 {
                return Err(TypeError(format!(
                    "steinhaus needs a set of arity 1, `{e}` has arity {}",
                    sh.arity
                ))
                .into());
            }
            let t = tol.unwrap_or(opts.tol);
            let rep = core(e, steinhaus_check(&set(e, opts)?, t, &limits))?;
            r.body.push(format!("steinhaus {}", rep.holds()));
            r.body.push(format!(
                "measure {} interior of difference set {} vacuous {}",
                rep.measure, rep.interior, rep.vacuous
            ));
        }
        Query::Endpoints(n) => {
            let en = cantor_endpoints(*n);
            let deltas = en.deltas.clone().unwrap_or_default();
            r.table
                .push(vec!["index".into(), "value".into(), "gap".into()]);
            for (i, x) in en.elements.iter().enumerate() {
                let gap = deltas
                    .get(i)
                    .cloned()
                    .flatten()
                    .map_or("-".to_string(), |d| format_rational(&d));
                r.body
                    .push(format!("{i:>6} {:>16} gap {gap}", format_rational(x)));
                r.table.push(vec![i.to_string(), format_rational(x), gap]);
            }
        }
        Query::ProbeII { a, b, d, e } => {
            let gd = Gadgets::new(GADGET_PREFIX.max(8 * (*d + 1)));
            let out = core(q, gd.condition_ii_probe(a, b, *d, *e))?;
            r.body.push(format!("probe {out}"));
        }
        Query::Marstrand {
            expr,
            angles,
            delta,
            seed,
        } => {
            let sh = checked(expr)?;
            if sh.arity < 2 {
                return Err(TypeError(format!(
                    "marstrand needs arity at least 2, `{expr}` has arity {}",
                    sh.arity
                ))
                .into());
            }
            let seed = seed.unwrap_or(opts.seed);
            let a = set(expr, opts)?;
            let k = sample_depth(sh.base, *delta);
            let sample = core(
                expr,
                sample_points(&a, opts.samples, k, seed, expr.to_string()),
            )?;
            let reports = core(q, marstrand_scan(&sample, *angles, *delta, seed))?;
            r.body.push(format!(
                "sample {} points at depth {k}, seed {seed}",
                opts.samples
            ));
            r.body.push(format!(
                "{:>10} {:>12} {:>10} {:>10} range",
                "angle", "delta", "occupied", "covered"
            ));
            r.table.push(
                [
                    "direction",
                    "angle",
                    "delta",
                    "occupied",
                    "covered",
                    "lo",
                    "hi",
                ]
                .map(String::from)
                .to_vec(),
            );
            for p in &reports {
                r.body.push(p.to_string());
                let dir: Vec<String> = p.direction.iter().map(|x| format!("{x:.6}")).collect();
                r.table.push(vec![
                    dir.join(" "),
                    p.angle.map_or(String::new(), |t| t.to_string()),
                    p.resolution.to_string(),
                    p.occupied.to_string(),
                    p.covered_fraction.to_string(),
                    p.range.0.to_string(),
                    p.range.1.to_string(),
                ]);
            }
            let covered = reports.iter().map(|p| p.covered_fraction);
            let (lo, hi) = covered.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), c| {
                (l.min(c), h.max(c))
            });
            r.body.push(format!("covered min {lo:.6} max {hi:.6}"));
        }
        Query::BoxCount { expr, k1, k2 } => {
            let a = set(expr, opts)?;
            let sample = core(
                expr,
                sample_points(&a, opts.samples, *k2, opts.seed, expr.to_string()),
            )?;
            let est = core(q, box_count_estimate(&sample, *k1, *k2))?;
            r.table.push(vec!["depth".into(), "occupied".into()]);
            for (k, c) in &est.counts {
                r.body.push(format!("depth {k:>3} occupied {c}"));
                r.table.push(vec![k.to_string(), c.to_string()]);
            }
            r.body.push(format!(
                "slope {:.6} residual {:.6}",
                est.slope, est.residual
            ));
        }
    }
    Ok(r)
}
