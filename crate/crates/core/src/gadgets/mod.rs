//! Omega-orders and the interiority gadgets. `D` is the difference set of the
//! Cantor endpoints (dense in `[-1, 1]`), `lambda = sqrt 2`, and `lambda D` is
//! ordered by transporting the order of `D`.

mod order;
mod quadratic;

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

pub use order::{
    cantor_endpoint, cantor_endpoints, dense_difference_set, max_gap, order_image, order_product,
    product_cmp, product_tuples, OrderName, OrderedEnumeration,
};
pub use quadratic::ExactQuadratic;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// An enumerated prefix of `D`, sufficient or not for a given query; queries
/// that cannot be settled inside the prefix fail with `InsufficientPrefix`.
#[derive(Clone, Debug)]
pub struct Gadgets {
    pub d: OrderedEnumeration,
}

impl Gadgets {
    pub fn new(prefix: usize) -> Self {
        Gadgets {
            d: dense_difference_set(prefix.max(1)),
        }
    }

    fn element(&self, idx: usize) -> Result<&Rational> {
        self.d.elements.get(idx).ok_or_else(|| {
            Error::InsufficientPrefix(format!(
                "index {idx} beyond the enumerated prefix of {}",
                self.d.len()
            ))
        })
    }

    /// The order-least `x` in `sqrt2 * D` with `e < x < e + u` and no element
    /// of `D_{⪯d}` in `(e, x]`. Returns `x` and the index of `x / sqrt 2`.
    pub fn h1(&self, u: &Rational, d: usize, e: usize) -> Result<(ExactQuadratic, usize)> {
        if !u.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "u must be positive, got {}",
                format_rational(u)
            )));
        }
        let ev = self.element(e)?.clone();
        self.element(d)?;
        let mut top = &ev + u;
        for x in self.d.up_to(d) {
            if *x > ev && *x < top {
                top = x.clone();
            }
        }
        for (i, y) in self.d.elements.iter().enumerate() {
            let x = ExactQuadratic::sqrt2_times(y.clone());
            if x.cmp_rational(&ev) == Ordering::Greater && x.cmp_rational(&top) == Ordering::Less {
                return Ok((x, i));
            }
        }
        Err(Error::InsufficientPrefix(format!(
            "no element of sqrt2*D in ({}, {}) among the first {}",
            format_rational(&ev),
            format_rational(&top),
            self.d.len()
        )))
    }

    pub fn h2(&self, u: &Rational, d: usize, e: usize) -> Result<ExactQuadratic> {
        let (x, _) = self.h1(u, d, e)?;
        Ok(x - ExactQuadratic::rational(self.element(e)?.clone()))
    }

    /// The `h2` values over `D_{⪯d}`, indexed like the enumeration.
    pub fn h2_values(&self, u: &Rational, d: usize) -> Result<Vec<ExactQuadratic>> {
        (0..=d).map(|e| self.h2(u, d, e)).collect()
    }

    /// Index of the `e ⪯ d` minimizing `|(c - a) - h2(b - a, d, e)|`, the
    /// order-least on ties; the first element when `b <= a`.
    pub fn g(&self, c: &ExactQuadratic, a: &Rational, b: &Rational, d: usize) -> Result<usize> {
        if b <= a {
            return Ok(0);
        }
        let values = self.h2_values(&(b - a), d)?;
        let offset = c.clone() - ExactQuadratic::rational(a.clone());
        let mut best = 0;
        let mut best_dist = (offset.clone() - values[0].clone()).abs();
        for (e, v) in values.iter().enumerate().skip(1) {
            let dist = (offset.clone() - v.clone()).abs();
            if dist < best_dist {
                best = e;
                best_dist = dist;
            }
        }
        Ok(best)
    }

    /// An interval with rational endpoints inside `(a, b)` on which `g` is
    /// constantly `e`: the nearest-value cell of `h2(e)` among all `h2`
    /// values, shifted by `a`, shrunk to rational endpoints and re-checked.
    pub fn condition_ii_probe(
        &self,
        a: &Rational,
        b: &Rational,
        d: usize,
        e: usize,
    ) -> Result<ProbeOutcome> {
        if e > d {
            return Err(Error::Precondition(format!(
                "element {e} does not precede element {d}"
            )));
        }
        if b <= a {
            return Ok(ProbeOutcome::Failure(format!(
                "empty window ({}, {})",
                format_rational(a),
                format_rational(b)
            )));
        }
        let u = b - a;
        let values = self.h2_values(&u, d)?;
        let target = &values[e];
        let two = Rational::from_integer(2.into());
        let half = |x: &ExactQuadratic, y: &ExactQuadratic| {
            ExactQuadratic::new((&x.p + &y.p) / &two, (&x.q + &y.q) / &two)
        };
        let mut lo = ExactQuadratic::rational(Rational::zero());
        let mut hi = ExactQuadratic::rational(u.clone());
        for (j, v) in values.iter().enumerate() {
            if j == e {
                continue;
            }
            match v.cmp(target) {
                Ordering::Less => lo = lo.max(half(v, target)),
                Ordering::Greater => hi = hi.min(half(v, target)),
                Ordering::Equal => {
                    return Ok(ProbeOutcome::Failure(format!(
                        "h2 takes the value {target} at elements {j} and {e}"
                    )))
                }
            }
        }
        let shift = ExactQuadratic::rational(a.clone());
        let cell = (lo + shift.clone(), hi + shift);
        if cell.0 >= cell.1 {
            return Ok(ProbeOutcome::Failure(format!(
                "cell ({}, {}) is empty",
                cell.0, cell.1
            )));
        }
        let mut bits = 16;
        let (l, r) = loop {
            let (_, lo_hi) = cell.0.enclose(bits);
            let (hi_lo, _) = cell.1.enclose(bits);
            if lo_hi < hi_lo {
                let third = (&hi_lo - &lo_hi) / Rational::from_integer(3.into());
                break (&lo_hi + &third, &hi_lo - &third);
            }
            bits *= 2;
        };
        let strictly_inside = |x: &Rational| {
            cell.0.cmp_rational(x) == Ordering::Less && cell.1.cmp_rational(x) == Ordering::Greater
        };
        let mid = (&l + &r) / &two;
        for c in [&l, &mid, &r] {
            let hit = self.g(&ExactQuadratic::rational(c.clone()), a, b, d)?;
            if !strictly_inside(c) || hit != e || c <= a || c >= b {
                return Ok(ProbeOutcome::Failure(format!(
                    "check failed at c = {}",
                    format_rational(c)
                )));
            }
        }
        Ok(ProbeOutcome::Interval { lo: l, hi: r, cell })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// `g(c, a, b, d) = e` for every `c` in `[lo, hi]`, a subset of the exact
    /// cell.
    Interval {
        lo: Rational,
        hi: Rational,
        cell: (ExactQuadratic, ExactQuadratic),
    },
    Failure(String),
}

impl fmt::Display for ProbeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeOutcome::Interval { lo, hi, cell } => write!(
                f,
                "interval [{}, {}] inside cell ({}, {})",
                format_rational(lo),
                format_rational(hi),
                cell.0,
                cell.1
            ),
            ProbeOutcome::Failure(reason) => write!(f, "failure: {reason}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn h1_window_and_irrationality() {
        let gd = Gadgets::new(400);
        let u = rat(1, 2);
        for e in 0..=4 {
            let (x, i) = gd.h1(&u, 4, e).unwrap();
            let ev = gd.d.elements[e].clone();
            let h2 = x.clone() - ExactQuadratic::rational(ev.clone());
            assert_eq!(h2.cmp_rational(&rat(0, 1)), Ordering::Greater);
            assert_eq!(h2.cmp_rational(&u), Ordering::Less);
            // minimality: no earlier element of sqrt2*D qualifies
            for y in &gd.d.elements[..i] {
                let z = ExactQuadratic::sqrt2_times(y.clone());
                let inside = z.cmp_rational(&ev) == Ordering::Greater
                    && z.cmp_rational(&(&ev + &u)) == Ordering::Less
                    && !gd
                        .d
                        .up_to(4)
                        .iter()
                        .any(|w| *w > ev && z.cmp_rational(w) != Ordering::Less);
                assert!(!inside);
            }
            if !gd.d.elements[i].is_zero() {
                assert!(!x.is_rational());
            }
        }
        assert!(gd.h1(&rat(0, 1), 4, 0).is_err());
    }

    #[test]
    fn h2_is_injective() {
        let gd = Gadgets::new(400);
        let vals = gd.h2_values(&rat(1, 2), 5).unwrap();
        assert_eq!(vals.len(), 6);
        for i in 0..6 {
            for j in 0..i {
                assert_ne!(vals[i], vals[j]);
            }
        }
    }

    #[test]
    fn g_examples() {
        let gd = Gadgets::new(400);
        let (a, b) = (rat(-1, 2), rat(1, 2));
        assert_eq!(
            gd.g(&ExactQuadratic::rational(rat(0, 1)), &b, &a, 3)
                .unwrap(),
            0
        );
        let vals = gd.h2_values(&(&b - &a), 3).unwrap();
        for (e, v) in vals.iter().enumerate() {
            let c = v.clone() + ExactQuadratic::rational(a.clone());
            assert_eq!(gd.g(&c, &a, &b, 3).unwrap(), e);
        }
    }

    #[test]
    fn probe_examples() {
        let gd = Gadgets::new(400);
        let (a, b) = (rat(-1, 2), rat(1, 2));
        match gd.condition_ii_probe(&a, &b, 3, 0).unwrap() {
            ProbeOutcome::Interval { lo, hi, .. } => assert!(a < lo && lo < hi && hi < b),
            other => panic!("{other}"),
        }
        assert!(matches!(
            gd.condition_ii_probe(&a, &b, 2, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            gd.condition_ii_probe(&a, &a, 3, 1).unwrap(),
            ProbeOutcome::Failure(_)
        ));
    }

    #[test]
    fn insufficient_prefix_is_reported() {
        let gd = Gadgets::new(2);
        assert!(matches!(
            gd.h1(&rat(1, 1000), 1, 0),
            Err(Error::InsufficientPrefix(_))
        ));
    }
}
