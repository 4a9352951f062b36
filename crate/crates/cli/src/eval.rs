//! Type checking and evaluation of set expressions.

use std::path::Path;

use compact_automata::automaton::{intersect, product, project, read_text, saturate, union};
use compact_automata::restriction::{es_truncate, load_explicit, DensityDescriptor, DensityKind};
use compact_automata::structure::{
    affine_image, box_set, cantor, carpet, make_digit_set, menger, relation_eq, relation_le,
    singleton, AffineSpec,
};
use compact_automata::{Error, Limits, SafetyAutomaton};

use crate::syntax::{EsDesc, Expr};

/// Truncation depth of `es(..)` when none is given.
pub const DEFAULT_ES_DEPTH: usize = 16;

/// Base and arity of the set an expression denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub base: u32,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("type error: {0}")]
pub struct TypeError(pub String);

#[derive(Debug, thiserror::Error)]
#[error("while evaluating `{term}`: {source}")]
pub struct EvalError {
    pub term: String,
    #[source]
    pub source: Error,
}

fn mismatch(
    op: &str,
    a: &Expr,
    sa: Shape,
    b: &Expr,
    sb: Shape,
    arity_too: bool,
) -> Result<(), TypeError> {
    if sa.base != sb.base {
        return Err(TypeError(format!(
            "{op}: base mismatch, `{a}` has base {} but `{b}` has base {}",
            sa.base, sb.base
        )));
    }
    if arity_too && sa.arity != sb.arity {
        return Err(TypeError(format!(
            "{op}: arity mismatch, `{a}` has arity {} but `{b}` has arity {}",
            sa.arity, sb.arity
        )));
    }
    Ok(())
}

fn coordinate(op: &str, e: &Expr, c: usize, arity: usize) -> Result<(), TypeError> {
    if c == 0 || c > arity {
        Err(TypeError(format!(
            "{op}: coordinate {c} outside 1..={arity} for `{e}`"
        )))
    } else {
        Ok(())
    }
}

/// Explicit descriptor files are read relative to the working directory.
pub fn descriptor(desc: &EsDesc) -> Result<DensityDescriptor, Error> {
    match desc {
        EsDesc::Tower(levels) => DensityDescriptor::tower(*levels),
        EsDesc::Periodic { preperiod, period } => {
            DensityDescriptor::periodic(preperiod.clone(), period.clone())
        }
        EsDesc::Explicit(path) => load_explicit(Path::new(path)),
    }
}

fn es_depth(s: &DensityDescriptor, depth: Option<usize>) -> usize {
    match (&s.kind, depth) {
        (_, Some(k)) => k,
        (DensityKind::Explicit { bound, .. }, None) => DEFAULT_ES_DEPTH.min(*bound as usize),
        (_, None) => DEFAULT_ES_DEPTH,
    }
}

pub fn shape(e: &Expr) -> Result<Shape, TypeError> {
    let s = |base, arity| Ok(Shape { base, arity });
    match e {
        Expr::Cantor => s(3, 1),
        Expr::Carpet => s(3, 2),
        Expr::Menger => s(3, 3),
        Expr::Full { arity, base } => s(base.unwrap_or(3), *arity),
        Expr::Digits {
            base,
            arity,
            tuples,
        } => {
            if let Some(t) = tuples.iter().find(|t| t.len() != *arity) {
                return Err(TypeError(format!(
                    "`{e}`: digit tuple of length {} in a set of arity {arity}",
                    t.len()
                )));
            }
            s(*base, *arity)
        }
        Expr::Singleton { base, point } => s(*base, point.len()),
        Expr::Box { base, bounds } => s(*base, bounds.len()),
        Expr::Es { .. } => s(2, 1),
        Expr::Union(a, b) | Expr::Inter(a, b) => {
            let (sa, sb) = (shape(a)?, shape(b)?);
            let op = if matches!(e, Expr::Union(..)) {
                "union"
            } else {
                "inter"
            };
            mismatch(op, a, sa, b, sb, true)?;
            Ok(sa)
        }
        Expr::Product(a, b) => {
            let (sa, sb) = (shape(a)?, shape(b)?);
            mismatch("product", a, sa, b, sb, false)?;
            s(sa.base, sa.arity + sb.arity)
        }
        Expr::Proj { expr, coords } => {
            let se = shape(expr)?;
            for &c in coords {
                coordinate("proj", expr, c, se.arity)?;
            }
            s(se.base, coords.len())
        }
        Expr::Affine { expr, coeffs, .. } => {
            let se = shape(expr)?;
            if coeffs.len() != se.arity {
                return Err(TypeError(format!(
                    "affine: {} coefficients given but `{expr}` has arity {}",
                    coeffs.len(),
                    se.arity
                )));
            }
            s(se.base, 1)
        }
        Expr::Saturate(a) => shape(a),
        Expr::Load(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|err| TypeError(format!("`{e}`: cannot read {path}: {err}")))?;
            let header = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .find(|l| !l.is_empty())
                .unwrap_or("");
            let fields: Vec<&str> = header.split_whitespace().collect();
            match fields.as_slice() {
                ["sda", b, n, ..] => match (b.parse(), n.parse()) {
                    (Ok(base), Ok(arity)) => s(base, arity),
                    _ => Err(TypeError(format!("`{e}`: malformed header `{header}`"))),
                },
                _ => Err(TypeError(format!("`{e}`: missing `sda` header"))),
            }
        }
        Expr::RelationEq { base, arity, i, j } | Expr::RelationLe { base, arity, i, j } => {
            coordinate("relation", e, *i, *arity)?;
            coordinate("relation", e, *j, *arity)?;
            s(*base, *arity)
        }
    }
}

/// Evaluates a type-checked expression. Errors name the innermost failing
/// subterm.
pub fn eval(e: &Expr, limits: &Limits) -> Result<SafetyAutomaton, EvalError> {
    let wrap = |r: Result<SafetyAutomaton, Error>| {
        r.map_err(|source| EvalError {
            term: e.to_string(),
            source,
        })
    };
    match e {
        Expr::Cantor => Ok(cantor()),
        Expr::Carpet => Ok(carpet()),
        Expr::Menger => Ok(menger()),
        Expr::Full { arity, base } => wrap(SafetyAutomaton::full(base.unwrap_or(3), *arity)),
        Expr::Digits {
            base,
            arity,
            tuples,
        } => wrap(make_digit_set(*base, *arity, tuples)),
        Expr::Singleton { base, point } => wrap(singleton(*base, point, limits)),
        Expr::Box { base, bounds } => wrap(box_set(*base, bounds, limits)),
        Expr::Es { desc, depth } => wrap(descriptor(desc).and_then(|s| {
            let k = es_depth(&s, *depth);
            es_truncate(&s, k)
        })),
        Expr::Union(a, b) => {
            let (x, y) = (eval(a, limits)?, eval(b, limits)?);
            wrap(union(&x, &y, limits))
        }
        Expr::Inter(a, b) => {
            let (x, y) = (eval(a, limits)?, eval(b, limits)?);
            wrap(intersect(&x, &y, limits))
        }
        Expr::Product(a, b) => {
            let (x, y) = (eval(a, limits)?, eval(b, limits)?);
            wrap(product(&x, &y, limits))
        }
        Expr::Proj { expr, coords } => {
            let x = eval(expr, limits)?;
            wrap(project(&x, coords, limits))
        }
        Expr::Affine {
            expr,
            coeffs,
            offset,
            exp,
        } => {
            let x = eval(expr, limits)?;
            wrap(affine_image(
                &x,
                &AffineSpec::new(coeffs.clone(), *offset, *exp),
                limits,
            ))
        }
        Expr::Saturate(a) => {
            let x = eval(a, limits)?;
            wrap(saturate(&x, limits))
        }
        Expr::Load(path) => wrap(
            std::fs::read_to_string(path)
                .map_err(Error::from)
                .and_then(|t| read_text(&t)),
        ),
        Expr::RelationEq { base, arity, i, j } => wrap(relation_eq(*base, *arity, *i, *j)),
        Expr::RelationLe { base, arity, i, j } => wrap(relation_le(*base, *arity, *i, *j)),
    }
}
