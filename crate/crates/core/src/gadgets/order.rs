use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderName {
    CantorEndpoint,
    Product(usize),
    Image(String),
}

impl fmt::Display for OrderName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderName::CantorEndpoint => f.write_str("cantor-endpoint"),
            OrderName::Product(n) => write!(f, "product-{n}"),
            OrderName::Image(name) => write!(f, "image-{name}"),
        }
    }
}

/// The first `len()` elements of an omega-order, listed in that order; the
/// predecessors of an element are exactly the elements before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedEnumeration {
    pub elements: Vec<Rational>,
    /// Complementary interval lengths, `None` standing for an infinite one.
    pub deltas: Option<Vec<Option<Rational>>>,
    pub order_name: OrderName,
    index: HashMap<Rational, usize>,
}

impl OrderedEnumeration {
    pub fn new(elements: Vec<Rational>, order_name: OrderName) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        OrderedEnumeration {
            elements,
            deltas: None,
            order_name,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of `x` in the order; an error outside the enumerated prefix.
    pub fn index_of(&self, x: &Rational) -> Result<usize> {
        self.index.get(x).copied().ok_or_else(|| {
            Error::InsufficientPrefix(format!(
                "{} is not among the first {} elements",
                format_rational(x),
                self.len()
            ))
        })
    }

    pub fn compare(&self, x: &Rational, y: &Rational) -> Result<Ordering> {
        Ok(self.index_of(x)?.cmp(&self.index_of(y)?))
    }

    /// Elements `e` with `e ⪯ elements[d]`.
    pub fn up_to(&self, d: usize) -> &[Rational] {
        &self.elements[..=d.min(self.len() - 1)]
    }
}

/// The `i`-th right endpoint of a complementary interval of the middle-thirds
/// Cantor set, ordered by decreasing interval length and then by position,
/// with its interval length. Index 0 is 0, closing `(-inf, 0)`.
pub fn cantor_endpoint(i: usize) -> (Rational, Option<Rational>) {
    if i == 0 {
        return (Rational::from_integer(0.into()), None);
    }
    // generation g holds 2^(g-1) endpoints 0.d_1..d_{g-1}2 with d_j in {0,2}
    let g = (usize::BITS - i.leading_zeros()) as usize;
    let j = i - (1 << (g - 1));
    let mut numer = BigInt::from(0);
    for bit in (0..g - 1).rev() {
        numer = numer * 3 + 2 * ((j >> bit) & 1);
    }
    numer = numer * 3 + 2;
    let denom = BigInt::from(3).pow(g as u32);
    (
        Rational::new(numer, denom.clone()),
        Some(Rational::new(1.into(), denom)),
    )
}

pub fn cantor_endpoints(count: usize) -> OrderedEnumeration {
    let (elements, deltas): (Vec<_>, Vec<_>) = (0..count).map(cantor_endpoint).unzip();
    let mut out = OrderedEnumeration::new(elements, OrderName::CantorEndpoint);
    out.deltas = Some(deltas);
    out
}

/// The product order on index tuples: compare the largest index, then
/// lexicographically.
pub fn product_cmp(x: &[usize], y: &[usize]) -> Ordering {
    let mx = x.iter().max();
    let my = y.iter().max();
    mx.cmp(&my).then_with(|| x.cmp(y))
}

/// Index tuples of `D^n` in product order, lazily.
pub fn product_tuples(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0usize..).flat_map(move |m| {
        // tuples over 0..=m containing m, lexicographically
        let total = (m + 1).pow(n as u32);
        (0..total).filter_map(move |code| {
            let mut t = vec![0usize; n];
            let mut rest = code;
            for slot in t.iter_mut().rev() {
                *slot = rest % (m + 1);
                rest /= m + 1;
            }
            t.contains(&m).then_some(t)
        })
    })
}

/// Comparison on `D^n` for values inside the enumerated prefix of `D`.
pub fn order_product(
    base: &OrderedEnumeration,
    x: &[Rational],
    y: &[Rational],
) -> Result<Ordering> {
    if x.len() != y.len() {
        return Err(Error::ArityMismatch(x.len(), y.len()));
    }
    let ix = x
        .iter()
        .map(|v| base.index_of(v))
        .collect::<Result<Vec<_>>>()?;
    let iy = y
        .iter()
        .map(|v| base.index_of(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(product_cmp(&ix, &iy))
}

/// The image order on `f(D)`: values ordered by their first preimage. Takes
/// the source in order and keeps first occurrences.
pub fn order_image<T, I, F>(source: I, f: F, count: usize, name: &str) -> OrderedEnumeration
where
    I: IntoIterator<Item = T>,
    F: Fn(T) -> Rational,
{
    let mut seen = HashSet::new();
    let mut elements = Vec::with_capacity(count);
    for x in source {
        if elements.len() == count {
            break;
        }
        let v = f(x);
        if seen.insert(v.clone()) {
            elements.push(v);
        }
    }
    OrderedEnumeration::new(elements, OrderName::Image(name.to_string()))
}

/// `E - E` for the Cantor endpoints `E`, in the image of the product order.
pub fn dense_difference_set(count: usize) -> OrderedEnumeration {
    let mut cache: Vec<Rational> = Vec::new();
    let mut endpoint = move |i: usize| {
        while cache.len() <= i {
            cache.push(cantor_endpoint(cache.len()).0);
        }
        cache[i].clone()
    };
    let pairs = product_tuples(2).map(move |t| (endpoint(t[0]), endpoint(t[1])));
    order_image(pairs, |(x, y)| x - y, count, "difference")
}

/// Largest gap between consecutive points of `{lo, hi} ∪ (elements ∩ [lo, hi])`.
pub fn max_gap(elements: &[Rational], lo: &Rational, hi: &Rational) -> Rational {
    let mut inside: Vec<&Rational> = elements.iter().filter(|x| *x >= lo && *x <= hi).collect();
    inside.push(lo);
    inside.push(hi);
    inside.sort();
    inside
        .windows(2)
        .map(|w| w[1] - w[0])
        .max()
        .unwrap_or_else(|| hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn first_endpoints() {
        let e = cantor_endpoints(4);
        assert_eq!(e.elements, vec![rat(0, 1), rat(2, 3), rat(2, 9), rat(8, 9)]);
        assert_eq!(
            e.deltas.unwrap(),
            vec![None, Some(rat(1, 3)), Some(rat(1, 9)), Some(rat(1, 9))]
        );
        assert_eq!(cantor_endpoints(1).elements, vec![rat(0, 1)]);
    }

    #[test]
    fn generation_sizes() {
        let e = cantor_endpoints(1 << 7);
        let deltas = e.deltas.unwrap();
        for g in 1..7u32 {
            let d = Some(Rational::new(1.into(), BigInt::from(3).pow(g)));
            assert_eq!(deltas.iter().filter(|x| **x == d).count(), 1 << (g - 1));
        }
    }

    #[test]
    fn product_order_examples() {
        let e = cantor_endpoints(8);
        let first: Vec<Vec<usize>> = product_tuples(2).take(5).collect();
        assert_eq!(
            first,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(
            order_product(&e, &[rat(0, 1), rat(2, 3)], &[rat(2, 3), rat(0, 1)]).unwrap(),
            Ordering::Less
        );
        assert!(order_product(&e, &[rat(1, 2), rat(0, 1)], &[rat(0, 1), rat(0, 1)]).is_err());
    }

    #[test]
    fn image_orders() {
        let e = cantor_endpoints(20);
        let same = order_image(e.elements.clone(), |x| x, 20, "identity");
        assert_eq!(same.elements, e.elements);
        let diff = dense_difference_set(10);
        assert_eq!(diff.elements[0], rat(0, 1));
        assert_eq!(&diff.elements[..3], &[rat(0, 1), rat(-2, 3), rat(2, 3)]);
    }
}
