//! Continued fractions over 𝔽_p[T]: continuants, convergents, and the
//! conversions between rationals, partial-quotient lists and Laurent series.
//!
//! Indexing is 1-based throughout: `a_1` is the first partial quotient and
//! `(x_n, y_n)` the continuants after `a_1, ..., a_n`, with `x_0 = 1`,
//! `y_0 = 0`, `x_1 = a_1`, `y_1 = 1`.

use std::ops::Index;

use crate::algebra::{Poly, PrimeField};
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// A nonempty list of partial quotients, each of degree at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuotients {
    items: Vec<Poly>,
}

impl PartialQuotients {
    pub fn new(items: Vec<Poly>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyPartialQuotients);
        }
        if let Some(i) = items.iter().position(|a| a.degree().unwrap_or(0) < 1) {
            return Err(Error::ConstantPartialQuotient { index: i + 1, quotient: items[i].clone() });
        }
        let field = items[0].field();
        if let Some(a) = items.iter().find(|a| a.field() != field) {
            return Err(Error::FieldMismatch(field.modulus(), a.field().modulus()));
        }
        Ok(Self { items })
    }

    pub fn field(&self) -> PrimeField {
        self.items[0].field()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a_n`, 1-indexed.
    pub fn get(&self, n: usize) -> Option<&Poly> {
        n.checked_sub(1).and_then(|i| self.items.get(i))
    }

    pub fn as_slice(&self) -> &[Poly] {
        &self.items
    }

    pub fn into_vec(self) -> Vec<Poly> {
        self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Poly> {
        self.items.iter()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.items.iter().map(|a| a.degree().unwrap_or(0)).collect()
    }

    pub fn leading_coefficients(&self) -> Vec<u64> {
        self.items.iter().map(|a| a.leading_coefficient().map_or(0, |c| c.value())).collect()
    }

    /// The first `n` quotients (all of them if `n >= len`).
    pub fn prefix(&self, n: usize) -> Self {
        Self { items: self.items[..n.clamp(1, self.items.len())].to_vec() }
    }

    /// Tail `a_n, a_{n+1}, ...`, 1-indexed; `None` if it would be empty.
    pub fn tail(&self, n: usize) -> Option<Self> {
        let start = n.checked_sub(1)?;
        (start < self.items.len()).then(|| Self { items: self.items[start..].to_vec() })
    }

    /// 1-based index of the first position where `self` and `other` differ,
    /// including a length difference.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let shared = self.len().min(other.len());
        (0..shared)
            .find(|&i| self.items[i] != other.items[i])
            .or((self.len() != other.len()).then_some(shared))
            .map(|i| i + 1)
    }
}

impl Index<usize> for PartialQuotients {
    type Output = Poly;

    /// 1-indexed.
    fn index(&self, n: usize) -> &Poly {
        &self.items[n - 1]
    }
}

impl<'a> IntoIterator for &'a PartialQuotients {
    type Item = &'a Poly;
    type IntoIter = std::slice::Iter<'a, Poly>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub n: usize,
    pub x: Poly,
    pub y: Poly,
}

impl ConvergentPair {
    /// `(x_0, y_0) = (1, 0)`.
    pub fn seed(field: PrimeField) -> Self {
        Self { n: 0, x: Poly::one(field), y: Poly::zero(field) }
    }

    /// `x_n y_{n-1} - x_{n-1} y_n`; equals `(-1)^n` for consecutive pairs.
    pub fn determinant(&self, prev: &ConvergentPair) -> Poly {
        &(&self.x * &prev.y) - &(&prev.x * &self.y)
    }

    /// Evaluates `(x_n t + x_{n-1}) / (y_n t + y_{n-1})` at a tail series
    /// `t = α_{n+1}`, recovering `α`.
    pub fn convergent_map(&self, prev: &ConvergentPair, tail: &LaurentSeries) -> Result<LaurentSeries> {
        let num = &(&LaurentSeries::from_poly(&self.x) * tail) + &LaurentSeries::from_poly(&prev.x);
        let den = &(&LaurentSeries::from_poly(&self.y) * tail) + &LaurentSeries::from_poly(&prev.y);
        num.checked_div(&den)
    }
}

/// Continuant pairs for `n = 1..=len` via `K_n = a_n K_{n-1} + K_{n-2}`.
pub fn continuants(pqs: &PartialQuotients) -> Vec<ConvergentPair> {
    continuants_of(pqs.as_slice(), pqs.field())
}

fn continuants_of(items: &[Poly], field: PrimeField) -> Vec<ConvergentPair> {
    let mut out = Vec::with_capacity(items.len());
    let (mut x_prev, mut y_prev) = (Poly::zero(field), Poly::one(field));
    let (mut x, mut y) = (Poly::one(field), Poly::zero(field));
    for (i, a) in items.iter().enumerate() {
        let x_next = &(a * &x) + &x_prev;
        let y_next = &(a * &y) + &y_prev;
        x_prev = std::mem::replace(&mut x, x_next);
        y_prev = std::mem::replace(&mut y, y_next);
        out.push(ConvergentPair { n: i + 1, x: x.clone(), y: y.clone() });
    }
    out
}

/// Euclidean-algorithm expansion of `num/den`. Fails if a partial quotient
/// would be constant, which only happens for `a_1` when
/// `deg num <= deg den`.
pub fn rational_to_cf(num: &Poly, den: &Poly) -> Result<PartialQuotients> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut items = Vec::new();
    let (mut a, mut b) = (num.clone(), den.clone());
    while !b.is_zero() {
        let (q, r) = a.divmod(&b)?;
        items.push(q);
        a = std::mem::replace(&mut b, r);
    }
    PartialQuotients::new(items)
}

/// Series of the infinite continued fraction whose first quotients are
/// `pqs`, correct down to and including `T^order`.
///
/// With `n` quotients known, `|α - x_n/y_n| = |y_n|^-1 |y_{n+1}|^-1`, and
/// `deg y_{n+1} >= deg y_n + 1` for the unknown next quotient. The smallest
/// convergent whose error bound clears `order` is expanded.
pub fn cf_to_series(pqs: &PartialQuotients, order: i64) -> Result<LaurentSeries> {
    let pairs = continuants(pqs);
    let ydeg = |i: usize| pairs[i].y.degree().unwrap_or(0) as i64;
    let bound = |i: usize| {
        if i + 1 < pairs.len() {
            -ydeg(i) - ydeg(i + 1)
        } else {
            -2 * ydeg(i) - 1
        }
    };
    let Some(i) = (0..pairs.len()).find(|&i| bound(i) < order) else {
        return Err(Error::InsufficientQuotients {
            available: pqs.len(),
            reachable: bound(pairs.len() - 1) + 1,
            requested: order,
        });
    };
    LaurentSeries::from_rational(&pairs[i].x, &pairs[i].y, order)
}

/// Deepest order `cf_to_series` can reach from `pqs`.
pub fn reachable_order(pqs: &PartialQuotients) -> i64 {
    let last = continuants(pqs).pop().expect("nonempty");
    -2 * last.y.degree().unwrap_or(0) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, c: &[u64]) -> Poly {
        Poly::new(fp(p), c.to_vec())
    }

    fn lin(p: u64, u: u64) -> Poly {
        Poly::monomial(fp(p).element(u), 1)
    }

    #[test]
    fn continuants_of_first_block() {
        let pqs = PartialQuotients::new(vec![lin(7, 2), lin(7, 4), lin(7, 5)]).unwrap();
        let pairs = continuants(&pqs);
        // x3 = u1u2u3 T^3 + (u1+u3) T, y3 = u2u3 T^2 + 1
        assert_eq!(pairs[2].x, poly(7, &[0, 7, 0, 40]));
        assert_eq!(pairs[2].y, poly(7, &[1, 0, 20]));
        assert_eq!(pairs[2].n, 3);

        let single = continuants(&PartialQuotients::new(vec![lin(5, 1)]).unwrap());
        assert_eq!((single[0].x.clone(), single[0].y.clone()), (lin(5, 1), Poly::one(fp(5))));

        let four = continuants(&PartialQuotients::new(vec![lin(3, 1); 4]).unwrap());
        assert_eq!(four[3].x, poly(3, &[1, 0, 0, 0, 1]));
        assert_eq!(four[3].y, poly(3, &[0, 2, 0, 1]));
    }

    #[test]
    fn euclid_examples() {
        let f = fp(7);
        // Fibonacci polynomials f4, f5 at p = 7
        let mut fib = vec![Poly::one(f), Poly::t(f)];
        for n in 2..=5 {
            let next = &(&Poly::t(f) * &fib[n - 1]) + &fib[n - 2];
            fib.push(next);
        }
        let cf = rational_to_cf(&fib[5], &fib[4]).unwrap();
        assert_eq!(cf.as_slice(), vec![Poly::t(f); 5].as_slice());

        let cf = rational_to_cf(&poly(7, &[1, 0, 1]), &Poly::t(f)).unwrap();
        assert_eq!(cf.as_slice(), &[Poly::t(f), Poly::t(f)]);

        let x3 = poly(7, &[0, 7, 0, 40]);
        let y3 = poly(7, &[1, 0, 20]);
        let cf = rational_to_cf(&x3, &y3).unwrap();
        assert_eq!(cf.as_slice(), &[lin(7, 2), lin(7, 4), lin(7, 5)]);

        assert!(matches!(
            rational_to_cf(&Poly::one(f), &Poly::t(f)),
            Err(Error::ConstantPartialQuotient { index: 1, .. })
        ));
    }

    #[test]
    fn series_of_prefixes() {
        let t = LaurentSeries::from_descending;
        let f3 = fp(3);
        let pqs = PartialQuotients::new(vec![lin(3, 1), lin(3, 1)]).unwrap();
        let s = cf_to_series(&pqs, -1).unwrap();
        assert_eq!(s, t(f3, 1, &[1, 0, 1], Some(-1)));

        let pattern = PartialQuotients::new(vec![
            lin(3, 1),
            lin(3, 1),
            lin(3, 1),
            lin(3, 1),
            poly(3, &[0, 0, 0, 1, 0, 1]),
        ])
        .unwrap();
        let s = cf_to_series(&pattern, -9).unwrap();
        assert_eq!(s, t(f3, 1, &[1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 2], Some(-9)));

        let one = PartialQuotients::new(vec![lin(5, 3)]).unwrap();
        assert_eq!(cf_to_series(&one, 0).unwrap(), t(fp(5), 1, &[3, 0], Some(0)));
        assert!(matches!(
            cf_to_series(&one, -1),
            Err(Error::InsufficientQuotients { available: 1, reachable: 0, requested: -1 })
        ));
        assert_eq!(reachable_order(&pattern), -16);
    }

    #[test]
    fn tail_relation_recovers_alpha() {
        let f = fp(5);
        let items: Vec<Poly> = [1u64, 2, 3, 4, 1, 2, 3, 4, 2, 2, 1, 3, 3, 4, 1, 2].iter().map(|&u| lin(5, u)).collect();
        let pqs = PartialQuotients::new(items).unwrap();
        let alpha = cf_to_series(&pqs, -12).unwrap();
        let tail = cf_to_series(&pqs.tail(4).unwrap(), -20).unwrap();
        let pairs = continuants(&pqs);
        let back = pairs[2].convergent_map(&pairs[1], &tail).unwrap();
        let fl = back.valid_order().unwrap();
        assert!(fl <= -12);
        for k in -12..=1 {
            assert_eq!(back.coeff(k), alpha.coeff(k));
        }
        assert_eq!(back.field(), f);
    }

    fn arb_pqs() -> impl Strategy<Value = PartialQuotients> {
        prop::sample::select(vec![3u64, 5, 7]).prop_flat_map(|p| {
            prop::collection::vec(
                (1usize..4, prop::collection::vec(0..p, 4), 1..p),
                1..12,
            )
            .prop_map(move |qs| {
                let items = qs
                    .into_iter()
                    .map(|(d, mut c, lead)| {
                        c.truncate(d);
                        c.push(lead);
                        poly(p, &c)
                    })
                    .collect();
                PartialQuotients::new(items).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn determinant_identity(pqs in arb_pqs()) {
            let f = pqs.field();
            let mut prev = ConvergentPair::seed(f);
            for pair in continuants(&pqs) {
                let sign = if pair.n % 2 == 0 { f.one() } else { -f.one() };
                prop_assert_eq!(pair.determinant(&prev), Poly::constant(sign));
                prev = pair;
            }
        }

        #[test]
        fn rational_roundtrip(pqs in arb_pqs()) {
            let last = continuants(&pqs).pop().unwrap();
            prop_assert_eq!(rational_to_cf(&last.x, &last.y).unwrap(), pqs);
        }

        #[test]
        fn convergent_accuracy(pqs in arb_pqs()) {
            prop_assume!(pqs.len() >= 3);
            let pairs = continuants(&pqs);
            let alpha = cf_to_series(&pqs, reachable_order(&pqs)).unwrap();
            for n in 1..pairs.len() {
                let conv = LaurentSeries::from_rational(&pairs[n - 1].x, &pairs[n - 1].y, reachable_order(&pqs)).unwrap();
                let err = &alpha - &conv;
                let expected = -(pairs[n - 1].y.degree().unwrap() as i64) - pairs[n].y.degree().unwrap() as i64;
                prop_assert_eq!(err.top_degree(), Some(expected));
            }
        }
    }
}
