//! Hand-written lexer and LL(1) parser for expressions and queries.

use std::fmt;

use compact_automata::rational::Rational;
use num_bigint::BigInt;

use crate::syntax::{EsDesc, Expr, Query};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Float(f64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Slash,
    Minus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Float(x) => write!(f, "number {x}"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {}, column {}: {message}", pos.line, pos.col)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '/' => Tok::Slash,
            '-' => Tok::Minus,
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return err(pos, "unterminated string"),
                        Some('"') => break,
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => {
                                    return err(
                                        Pos {
                                            line,
                                            col: col + (i - start),
                                        },
                                        "unknown escape; only \\\" and \\\\ are allowed",
                                    )
                                }
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let mut float = false;
                if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    float = true;
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        float = true;
                        j = k;
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                }
                let text: String = chars[i..j].iter().collect();
                i = j - 1;
                if float {
                    match text.parse::<f64>() {
                        Ok(x) => Tok::Float(x),
                        Err(_) => return err(pos, format!("bad number `{text}`")),
                    }
                } else {
                    Tok::Int(text.parse().expect("digits"))
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                i = j - 1;
                Tok::Ident(text)
            }
            other => return err(pos, format!("unexpected character `{other}`")),
        };
        i += 1;
        col += i - start;
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

const EXPR_HEADS: &[&str] = &[
    "cantor",
    "carpet",
    "menger",
    "full",
    "digits",
    "singleton",
    "box",
    "es",
    "union",
    "inter",
    "product",
    "proj",
    "affine",
    "saturate",
    "load",
    "relation_eq",
    "relation_le",
];

const QUERY_HEADS: &[&str] = &[
    "empty",
    "equal",
    "subset",
    "interior",
    "nowhere_dense",
    "dim",
    "measure",
    "boxes",
    "verdict",
    "densities",
    "es_dims",
    "steinhaus",
    "endpoints",
    "probe_ii",
    "marstrand",
    "boxcount",
];

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn expected<T>(&self, what: &str) -> Result<T, ParseError> {
        let t = self.peek();
        err(t.pos, format!("expected {what}, found {}", t.tok))
    }

    fn eat(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek().tok == want {
            self.bump();
            Ok(())
        } else {
            self.expected(&want.to_string())
        }
    }

    /// `,` before another argument, or `)` closing the list.
    fn more(&mut self) -> Result<bool, ParseError> {
        match self.peek().tok {
            Tok::Comma => {
                self.bump();
                Ok(true)
            }
            Tok::RParen => Ok(false),
            _ => self.expected("`,` or `)`"),
        }
    }

    fn nat<T: TryFrom<u64>>(&mut self, what: &str) -> Result<T, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.bump();
                u64::try_from(n.clone())
                    .ok()
                    .and_then(|v| T::try_from(v).ok())
                    .map_or_else(|| err(t.pos, format!("{what} {n} is too large")), Ok)
            }
            _ => self.expected(what),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, ParseError> {
        let neg = self.peek().tok == Tok::Minus;
        if neg {
            self.bump();
        }
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.bump();
                let v = if neg { -n.clone() } else { n.clone() };
                i64::try_from(v).map_or_else(|_| err(t.pos, format!("{what} is too large")), Ok)
            }
            _ => self.expected(what),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.peek().tok == Tok::Minus;
        if neg {
            self.bump();
        }
        let num = match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                n
            }
            _ => return self.expected("a rational `p` or `p/q`"),
        };
        let den = if self.peek().tok == Tok::Slash {
            self.bump();
            let t = self.peek().clone();
            match t.tok {
                Tok::Int(d) if d != BigInt::from(0) => {
                    self.bump();
                    d
                }
                Tok::Int(_) => return err(t.pos, "zero denominator"),
                _ => return self.expected("a denominator"),
            }
        } else {
            BigInt::from(1)
        };
        Ok(Rational::new(if neg { -num } else { num }, den))
    }

    fn float(&mut self, what: &str) -> Result<f64, ParseError> {
        match self.peek().tok.clone() {
            Tok::Float(x) => {
                self.bump();
                Ok(x)
            }
            Tok::Int(n) => {
                self.bump();
                Ok(n.to_string().parse().unwrap_or(f64::INFINITY))
            }
            _ => self.expected(what),
        }
    }

    fn string(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().tok.clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.expected(what),
        }
    }

    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.eat(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.peek().tok == Tok::RBracket {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.expected("`,` or `]`"),
            }
        }
    }

    fn bit(&mut self) -> Result<bool, ParseError> {
        let t = self.peek().clone();
        match self.nat::<u64>("a bit 0 or 1")? {
            0 => Ok(false),
            1 => Ok(true),
            _ => err(t.pos, "expected a bit 0 or 1"),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) => {
                self.bump();
                Ok((s, t.pos))
            }
            _ => self.expected(what),
        }
    }

    fn es_desc(&mut self) -> Result<EsDesc, ParseError> {
        let (name, pos) = self.ident("`tower`, `periodic` or `explicit`")?;
        self.eat(Tok::LParen)?;
        let desc =
            match name.as_str() {
                "tower" => EsDesc::Tower(self.nat("a tower level")?),
                "periodic" => {
                    let first = self.list(Self::bit)?;
                    if self.more()? {
                        let period = self.list(Self::bit)?;
                        EsDesc::Periodic {
                            preperiod: first,
                            period,
                        }
                    } else {
                        EsDesc::Periodic {
                            preperiod: vec![],
                            period: first,
                        }
                    }
                }
                "explicit" => EsDesc::Explicit(self.string("a file path string")?),
                other => return err(
                    pos,
                    format!(
                        "unknown descriptor `{other}`; expected `tower`, `periodic` or `explicit`"
                    ),
                ),
            };
        self.eat(Tok::RParen)?;
        Ok(desc)
    }

    fn boxed(&mut self) -> Result<Box<Expr>, ParseError> {
        Ok(Box::new(self.expr()?))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let (name, pos) = match self.peek().tok {
            Tok::Ident(_) => self.ident("an expression")?,
            _ => return self.expected("an expression"),
        };
        match name.as_str() {
            "cantor" => return Ok(Expr::Cantor),
            "carpet" => return Ok(Expr::Carpet),
            "menger" => return Ok(Expr::Menger),
            "complement" | "not" => {
                return err(
                    pos,
                    format!(
                        "`{name}` is not available: complements of compact sets are not compact"
                    ),
                )
            }
            n if !EXPR_HEADS.contains(&n) => {
                let hint = if QUERY_HEADS.contains(&n) {
                    format!("`{n}` is a query and cannot be used as a set expression")
                } else {
                    format!(
                        "unknown expression `{n}`; expected one of {}",
                        EXPR_HEADS.join(", ")
                    )
                };
                return err(pos, hint);
            }
            _ => {}
        }
        self.eat(Tok::LParen)?;
        let e = match name.as_str() {
            "full" => {
                let arity = self.nat("an arity")?;
                let base = if self.more()? {
                    Some(self.nat("a base")?)
                } else {
                    None
                };
                Expr::Full { arity, base }
            }
            "digits" => {
                let base = self.nat("a base")?;
                self.eat(Tok::Comma)?;
                let arity: usize = self.nat("an arity")?;
                self.eat(Tok::Comma)?;
                let tuples = self.list(|p| {
                    if p.peek().tok == Tok::LBracket {
                        p.list(|q| q.nat("a digit"))
                    } else {
                        Ok(vec![p.nat("a digit or a digit tuple")?])
                    }
                })?;
                Expr::Digits {
                    base,
                    arity,
                    tuples,
                }
            }
            "singleton" => {
                let base = self.nat("a base")?;
                let mut point = Vec::new();
                while self.more()? {
                    point.push(self.rational()?);
                }
                Expr::Singleton { base, point }
            }
            "box" => {
                let base = self.nat("a base")?;
                let mut bounds = Vec::new();
                while self.more()? {
                    self.eat(Tok::LBracket)?;
                    let l = self.rational()?;
                    self.eat(Tok::Comma)?;
                    let u = self.rational()?;
                    self.eat(Tok::RBracket)?;
                    bounds.push((l, u));
                }
                Expr::Box { base, bounds }
            }
            "es" => {
                let desc = self.es_desc()?;
                let depth = if self.more()? {
                    Some(self.nat("a depth")?)
                } else {
                    None
                };
                Expr::Es { desc, depth }
            }
            "union" | "inter" | "product" => {
                let a = self.boxed()?;
                self.eat(Tok::Comma)?;
                let b = self.boxed()?;
                match name.as_str() {
                    "union" => Expr::Union(a, b),
                    "inter" => Expr::Inter(a, b),
                    _ => Expr::Product(a, b),
                }
            }
            "proj" => {
                let expr = self.boxed()?;
                self.eat(Tok::Comma)?;
                let coords = self.list(|p| p.nat("a coordinate"))?;
                Expr::Proj { expr, coords }
            }
            "affine" => {
                let expr = self.boxed()?;
                self.eat(Tok::Comma)?;
                let coeffs = self.list(|p| p.int("a coefficient"))?;
                self.eat(Tok::Comma)?;
                let offset = self.int("an offset")?;
                self.eat(Tok::Comma)?;
                let exp = self.nat("a scale exponent")?;
                Expr::Affine {
                    expr,
                    coeffs,
                    offset,
                    exp,
                }
            }
            "saturate" => Expr::Saturate(self.boxed()?),
            "load" => Expr::Load(self.string("a file path string")?),
            _ => {
                let base = self.nat("a base")?;
                self.eat(Tok::Comma)?;
                let arity = self.nat("an arity")?;
                self.eat(Tok::Comma)?;
                let i = self.nat("a coordinate")?;
                self.eat(Tok::Comma)?;
                let j = self.nat("a coordinate")?;
                if name == "relation_eq" {
                    Expr::RelationEq { base, arity, i, j }
                } else {
                    Expr::RelationLe { base, arity, i, j }
                }
            }
        };
        self.eat(Tok::RParen)?;
        Ok(e)
    }

    fn query(&mut self) -> Result<Query, ParseError> {
        let (name, pos) = match self.peek().tok {
            Tok::Ident(_) => self.ident("a query")?,
            _ => return self.expected("a query"),
        };
        if !QUERY_HEADS.contains(&name.as_str()) {
            let hint = if EXPR_HEADS.contains(&name.as_str()) {
                format!("`{name}` is a set expression; wrap it in a query such as dim(...)")
            } else {
                format!(
                    "unknown query `{name}`; expected one of {}",
                    QUERY_HEADS.join(", ")
                )
            };
            return err(pos, hint);
        }
        self.eat(Tok::LParen)?;
        let q = match name.as_str() {
            "empty" => Query::Empty(self.expr()?),
            "interior" => Query::Interior(self.expr()?),
            "nowhere_dense" => Query::NowhereDense(self.expr()?),
            "dim" => Query::Dim(self.expr()?),
            "verdict" => Query::Verdict(self.expr()?),
            "densities" => Query::Densities(self.expr()?),
            "es_dims" => Query::EsDims(self.expr()?),
            "equal" | "subset" => {
                let a = self.expr()?;
                self.eat(Tok::Comma)?;
                let b = self.expr()?;
                if name == "equal" {
                    Query::Equal(a, b)
                } else {
                    Query::Subset(a, b)
                }
            }
            "measure" | "steinhaus" => {
                let e = self.expr()?;
                let tol = if self.more()? {
                    Some(self.float("a tolerance")?)
                } else {
                    None
                };
                if name == "measure" {
                    Query::Measure(e, tol)
                } else {
                    Query::Steinhaus(e, tol)
                }
            }
            "boxes" => {
                let e = self.expr()?;
                self.eat(Tok::Comma)?;
                Query::Boxes(e, self.nat("a depth")?)
            }
            "endpoints" => Query::Endpoints(self.nat("a count")?),
            "probe_ii" => {
                let a = self.rational()?;
                self.eat(Tok::Comma)?;
                let b = self.rational()?;
                self.eat(Tok::Comma)?;
                let d = self.nat("an index")?;
                self.eat(Tok::Comma)?;
                let e = self.nat("an index")?;
                Query::ProbeII { a, b, d, e }
            }
            "marstrand" => {
                let expr = self.expr()?;
                self.eat(Tok::Comma)?;
                let angles = self.nat("a number of angles")?;
                self.eat(Tok::Comma)?;
                let delta = self.float("a resolution")?;
                let seed = if self.more()? {
                    Some(self.nat("a seed")?)
                } else {
                    None
                };
                Query::Marstrand {
                    expr,
                    angles,
                    delta,
                    seed,
                }
            }
            _ => {
                let expr = self.expr()?;
                self.eat(Tok::Comma)?;
                let k1 = self.nat("a depth")?;
                self.eat(Tok::Comma)?;
                let k2 = self.nat("a depth")?;
                Query::BoxCount { expr, k1, k2 }
            }
        };
        self.eat(Tok::RParen)?;
        Ok(q)
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.expected("end of input")
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_query(src: &str) -> Result<Query, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let q = p.query()?;
    p.finish()?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_count_lines_and_columns() {
        let e = parse_expr("union(cantor,\n  # comment\n  full(1,2)").unwrap_err();
        assert_eq!(e.pos, Pos { line: 3, col: 12 });
        assert!(e.message.contains("expected `)`"), "{}", e.message);
    }

    #[test]
    fn complement_is_rejected_by_name() {
        let e = parse_expr("complement(cantor)").unwrap_err();
        assert!(e.message.contains("not compact"));
        assert_eq!(e.pos, Pos { line: 1, col: 1 });
    }

    #[test]
    fn numbers() {
        let toks = lex("1e-3 2.5 7 3/4").unwrap();
        assert_eq!(toks[0].tok, Tok::Float(1e-3));
        assert_eq!(toks[1].tok, Tok::Float(2.5));
        assert_eq!(toks[2].tok, Tok::Int(7.into()));
        assert_eq!(toks[4].tok, Tok::Slash);
    }

    #[test]
    fn digit_lists_in_both_shapes() {
        assert_eq!(
            parse_expr("digits(3,1,[0,2])").unwrap(),
            Expr::Digits {
                base: 3,
                arity: 1,
                tuples: vec![vec![0], vec![2]]
            }
        );
        assert_eq!(
            parse_expr("digits(2, 2, [[0,1],[1,0]])").unwrap(),
            Expr::Digits {
                base: 2,
                arity: 2,
                tuples: vec![vec![0, 1], vec![1, 0]]
            }
        );
    }
}
