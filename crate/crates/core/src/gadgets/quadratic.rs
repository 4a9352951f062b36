use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, Rational};

/// `p + q * sqrt(2)` with rational `p`, `q`. The representation is unique
/// because sqrt(2) is irrational, so derived equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactQuadratic {
    pub p: Rational,
    pub q: Rational,
}

impl ExactQuadratic {
    pub fn new(p: Rational, q: Rational) -> Self {
        ExactQuadratic { p, q }
    }

    pub fn rational(p: Rational) -> Self {
        ExactQuadratic {
            p,
            q: Rational::zero(),
        }
    }

    /// `q * sqrt(2)`.
    pub fn sqrt2_times(q: Rational) -> Self {
        ExactQuadratic {
            p: Rational::zero(),
            q,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&Rational::zero());
        let sq = self.q.cmp(&Rational::zero());
        match (sp, sq) {
            (s, Ordering::Equal) | (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            // opposite signs: compare p^2 with 2 q^2
            (sp, _) => {
                let lhs = &self.p * &self.p;
                let rhs = &self.q * &self.q * Rational::from_integer(2.into());
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sp,
                    Ordering::Less => sp.reverse(),
                    Ordering::Equal => unreachable!("sqrt(2) is irrational"),
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        (self.clone() - ExactQuadratic::rational(r.clone())).signum()
    }

    /// Rational enclosure `lo <= self <= hi` of width at most `2^-bits`
    /// times `|q| + 1`.
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let scale = BigUint::one() << bits;
        let s: BigUint = (BigUint::from(2u32) * &scale * &scale).sqrt();
        let den = BigInt::from(scale);
        let below = Rational::new(BigInt::from(s.clone()), den.clone());
        let above = Rational::new(BigInt::from(s) + 1, den);
        let (a, b) = (&self.q * &below, &self.q * &above);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        (&self.p + lo, &self.p + hi)
    }

    pub fn to_f64(&self) -> f64 {
        crate::rational::to_f64(&self.p)
            + std::f64::consts::SQRT_2 * crate::rational::to_f64(&self.q)
    }
}

impl Ord for ExactQuadratic {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl PartialOrd for ExactQuadratic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExactQuadratic {
    type Output = ExactQuadratic;
    fn add(self, o: Self) -> Self {
        ExactQuadratic::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for ExactQuadratic {
    type Output = ExactQuadratic;
    fn sub(self, o: Self) -> Self {
        ExactQuadratic::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for ExactQuadratic {
    type Output = ExactQuadratic;
    fn neg(self) -> Self {
        ExactQuadratic::new(-self.p, -self.q)
    }
}

impl fmt::Display for ExactQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return f.write_str(&format_rational(&self.p));
        }
        let q = if self.q.abs().is_one() {
            String::new()
        } else {
            format_rational(&self.q.abs())
        };
        let sign = if self.q.is_negative() { "-" } else { "+" };
        if self.p.is_zero() {
            let lead = if self.q.is_negative() { "-" } else { "" };
            write!(f, "{lead}{q}√2")
        } else {
            write!(f, "{} {sign} {q}√2", format_rational(&self.p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn eq(p: (i64, i64), q: (i64, i64)) -> ExactQuadratic {
        ExactQuadratic::new(rat(p.0, p.1), rat(q.0, q.1))
    }

    #[test]
    fn signs_against_floats() {
        let cases = [
            ((3, 2), (-1, 1)),
            ((-3, 2), (1, 1)),
            ((7, 5), (-1, 1)),
            ((-141, 100), (1, 1)),
            ((-142, 100), (1, 1)),
            ((0, 1), (-2, 3)),
            ((5, 1), (0, 1)),
        ];
        for (p, q) in cases {
            let x = eq(p, q);
            let f = x.to_f64();
            assert_eq!(x.signum(), f.partial_cmp(&0.0).unwrap(), "{x}");
        }
        assert_eq!(eq((0, 1), (0, 1)).signum(), Ordering::Equal);
    }

    #[test]
    fn ordering_and_enclosure() {
        let a = eq((1, 1), (0, 1));
        let b = ExactQuadratic::sqrt2_times(rat(1, 1));
        assert!(a < b);
        assert_eq!((b.clone() - a.clone()).abs(), b.clone() - a);
        let (lo, hi) = b.enclose(30);
        assert!(b.cmp_rational(&lo) != Ordering::Less && b.cmp_rational(&hi) != Ordering::Greater);
        assert!(&hi - &lo < rat(1, 1 << 29));
    }

    #[test]
    fn display() {
        assert_eq!(eq((1, 2), (-1, 1)).to_string(), "1/2 - √2");
        assert_eq!(eq((0, 1), (2, 3)).to_string(), "2/3√2");
        assert_eq!(eq((-1, 1), (0, 1)).to_string(), "-1");
    }
}
