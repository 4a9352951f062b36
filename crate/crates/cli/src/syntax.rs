//! Abstract syntax of set expressions and queries, with the canonical printer.
//! Printing and re-parsing gives back the same tree.

use std::fmt;

use compact_automata::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum EsDesc {
    Tower(usize),
    Periodic {
        preperiod: Vec<bool>,
        period: Vec<bool>,
    },
    Explicit(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Cantor,
    Carpet,
    Menger,
    Full {
        arity: usize,
        base: Option<u32>,
    },
    Digits {
        base: u32,
        arity: usize,
        tuples: Vec<Vec<u32>>,
    },
    Singleton {
        base: u32,
        point: Vec<Rational>,
    },
    Box {
        base: u32,
        bounds: Vec<(Rational, Rational)>,
    },
    Es {
        desc: EsDesc,
        depth: Option<usize>,
    },
    Union(Box<Expr>, Box<Expr>),
    Inter(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Proj {
        expr: Box<Expr>,
        coords: Vec<usize>,
    },
    Affine {
        expr: Box<Expr>,
        coeffs: Vec<i64>,
        offset: i64,
        exp: u32,
    },
    Saturate(Box<Expr>),
    Load(String),
    RelationEq {
        base: u32,
        arity: usize,
        i: usize,
        j: usize,
    },
    RelationLe {
        base: u32,
        arity: usize,
        i: usize,
        j: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Empty(Expr),
    Equal(Expr, Expr),
    Subset(Expr, Expr),
    Interior(Expr),
    NowhereDense(Expr),
    Dim(Expr),
    Measure(Expr, Option<f64>),
    Boxes(Expr, usize),
    Verdict(Expr),
    Densities(Expr),
    EsDims(Expr),
    Steinhaus(Expr, Option<f64>),
    Endpoints(usize),
    ProbeII {
        a: Rational,
        b: Rational,
        d: usize,
        e: usize,
    },
    Marstrand {
        expr: Expr,
        angles: usize,
        delta: f64,
        seed: Option<u64>,
    },
    BoxCount {
        expr: Expr,
        k1: usize,
        k2: usize,
    },
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn bits(v: &[bool]) -> String {
    join(v, |&b| if b { "1".into() } else { "0".into() })
}

/// Floats always print with a `.` or an exponent so they re-lex as floats.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

impl fmt::Display for EsDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EsDesc::Tower(n) => write!(f, "tower({n})"),
            EsDesc::Periodic { preperiod, period } if preperiod.is_empty() => {
                write!(f, "periodic([{}])", bits(period))
            }
            EsDesc::Periodic { preperiod, period } => {
                write!(f, "periodic([{}],[{}])", bits(preperiod), bits(period))
            }
            EsDesc::Explicit(path) => write!(f, "explicit({})", quote(path)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Cantor => f.write_str("cantor"),
            Expr::Carpet => f.write_str("carpet"),
            Expr::Menger => f.write_str("menger"),
            Expr::Full { arity, base: None } => write!(f, "full({arity})"),
            Expr::Full {
                arity,
                base: Some(b),
            } => write!(f, "full({arity},{b})"),
            Expr::Digits {
                base,
                arity,
                tuples,
            } => {
                let body = if *arity == 1 {
                    join(tuples, |t| t[0].to_string())
                } else {
                    join(tuples, |t| format!("[{}]", join(t, u32::to_string)))
                };
                write!(f, "digits({base},{arity},[{body}])")
            }
            Expr::Singleton { base, point } => {
                write!(f, "singleton({base},{})", join(point, format_rational))
            }
            Expr::Box { base, bounds } => write!(
                f,
                "box({base},{})",
                join(bounds, |(l, u)| format!(
                    "[{},{}]",
                    format_rational(l),
                    format_rational(u)
                ))
            ),
            Expr::Es { desc, depth: None } => write!(f, "es({desc})"),
            Expr::Es {
                desc,
                depth: Some(k),
            } => write!(f, "es({desc},{k})"),
            Expr::Union(a, b) => write!(f, "union({a},{b})"),
            Expr::Inter(a, b) => write!(f, "inter({a},{b})"),
            Expr::Product(a, b) => write!(f, "product({a},{b})"),
            Expr::Proj { expr, coords } => {
                write!(f, "proj({expr},[{}])", join(coords, usize::to_string))
            }
            Expr::Affine {
                expr,
                coeffs,
                offset,
                exp,
            } => write!(
                f,
                "affine({expr},[{}],{offset},{exp})",
                join(coeffs, i64::to_string)
            ),
            Expr::Saturate(a) => write!(f, "saturate({a})"),
            Expr::Load(path) => write!(f, "load({})", quote(path)),
            Expr::RelationEq { base, arity, i, j } => {
                write!(f, "relation_eq({base},{arity},{i},{j})")
            }
            Expr::RelationLe { base, arity, i, j } => {
                write!(f, "relation_le({base},{arity},{i},{j})")
            }
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt_float = |x: &Option<f64>| {
            x.map(|t| format!(",{}", format_float(t)))
                .unwrap_or_default()
        };
        match self {
            Query::Empty(e) => write!(f, "empty({e})"),
            Query::Equal(a, b) => write!(f, "equal({a},{b})"),
            Query::Subset(a, b) => write!(f, "subset({a},{b})"),
            Query::Interior(e) => write!(f, "interior({e})"),
            Query::NowhereDense(e) => write!(f, "nowhere_dense({e})"),
            Query::Dim(e) => write!(f, "dim({e})"),
            Query::Measure(e, tol) => write!(f, "measure({e}{})", opt_float(tol)),
            Query::Boxes(e, k) => write!(f, "boxes({e},{k})"),
            Query::Verdict(e) => write!(f, "verdict({e})"),
            Query::Densities(e) => write!(f, "densities({e})"),
            Query::EsDims(e) => write!(f, "es_dims({e})"),
            Query::Steinhaus(e, tol) => write!(f, "steinhaus({e}{})", opt_float(tol)),
            Query::Endpoints(n) => write!(f, "endpoints({n})"),
            Query::ProbeII { a, b, d, e } => write!(
                f,
                "probe_ii({},{},{d},{e})",
                format_rational(a),
                format_rational(b)
            ),
            Query::Marstrand {
                expr,
                angles,
                delta,
                seed,
            } => {
                write!(f, "marstrand({expr},{angles},{}", format_float(*delta))?;
                if let Some(s) = seed {
                    write!(f, ",{s}")?;
                }
                f.write_str(")")
            }
            Query::BoxCount { expr, k1, k2 } => write!(f, "boxcount({expr},{k1},{k2})"),
        }
    }
}
