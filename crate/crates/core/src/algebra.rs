//! Arithmetic in a prime field 𝔽_p and dense polynomials over 𝔽_p[T].
//!
//! Residues are stored as `u64` values in `[0, p)` with `p < 2^32`, so a
//! product of two residues always fits in a machine word. Polynomials keep
//! their coefficients in ascending order with no trailing zero; the zero
//! polynomial has no coefficients and degree `None` (minus infinity).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Operand length below which multiplication falls back to schoolbook.
pub const KARATSUBA_THRESHOLD: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if p > u64::from(u32::MAX) {
            return Err(Error::ModulusTooLarge(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement { value: value % self.p, field: self }
    }

    pub fn from_i64(self, value: i64) -> FieldElement {
        let p = self.p as i64;
        FieldElement { value: value.rem_euclid(p) as u64, field: self }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    /// All nonzero residues, in increasing order.
    pub fn units(self) -> impl Iterator<Item = FieldElement> {
        (1..self.p).map(move |v| self.element(v))
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub(crate) fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub(crate) fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn inv(self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Number of products of two residues that can be summed onto a reduced
    /// residue without overflowing `u64`.
    fn lazy_batch(self) -> usize {
        let sq = (self.p - 1) * (self.p - 1);
        (((u64::MAX - self.p) / sq.max(1)) as usize).max(1)
    }
}

/// An element of 𝔽_p, tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Result<FieldElement> {
        Ok(FieldElement { value: self.field.inv(self.value)?, field: self.field })
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        FieldElement { value: self.field.pow(self.value, exp), field: self.field }
    }

    fn check(self, other: FieldElement) {
        assert_eq!(self.field, other.field, "field elements over different moduli");
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement { value: self.field.add(self.value, rhs.value), field: self.field }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement { value: self.field.sub(self.value, rhs.value), field: self.field }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement { value: self.field.mul(self.value, rhs.value), field: self.field }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { value: self.field.neg(self.value), field: self.field }
    }
}

// ---------------------------------------------------------------------------
// Residue-slice kernels
// ---------------------------------------------------------------------------

fn schoolbook(a: &[u64], b: &[u64], field: PrimeField) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = field.modulus();
    let batch = field.lazy_batch();
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    let mut pending = 0usize;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (slot, &bj) in acc[i..].iter_mut().zip(b) {
            *slot += ai * bj;
        }
        pending += 1;
        if pending == batch {
            acc.iter_mut().for_each(|c| *c %= p);
            pending = 0;
        }
    }
    acc.iter_mut().for_each(|c| *c %= p);
    acc
}

fn add_into(dst: &mut [u64], src: &[u64], field: PrimeField) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = field.add(*d, s);
    }
}

fn sub_into(dst: &mut [u64], src: &[u64], field: PrimeField) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = field.sub(*d, s);
    }
}

fn padded_sum(a: &[u64], b: &[u64], field: PrimeField) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    add_into(&mut out, short, field);
    out
}

/// Product of two ascending residue slices. Uses schoolbook when the shorter
/// operand is below `threshold`, Karatsuba otherwise; very unbalanced
/// operands are split into chunks of the shorter length first.
pub(crate) fn mul_residues(a: &[u64], b: &[u64], field: PrimeField, threshold: usize) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.len() < threshold.max(2) {
        return schoolbook(long, short, field);
    }
    let mut out = vec![0u64; long.len() + short.len() - 1];
    if long.len() >= 2 * short.len() {
        for (idx, chunk) in long.chunks(short.len()).enumerate() {
            let part = mul_residues(chunk, short, field, threshold);
            add_into(&mut out[idx * short.len()..], &part, field);
        }
        return out;
    }

    let m = long.len().div_ceil(2);
    let (a0, a1) = long.split_at(m);
    let (b0, b1) = short.split_at(m.min(short.len()));
    let z0 = mul_residues(a0, b0, field, threshold);
    let z2 = mul_residues(a1, b1, field, threshold);
    let mut z1 = mul_residues(
        &padded_sum(a0, a1, field),
        &padded_sum(b0, b1, field),
        field,
        threshold,
    );
    sub_into(&mut z1, &z0, field);
    sub_into(&mut z1, &z2, field);
    add_into(&mut out, &z0, field);
    add_into(&mut out[m..], &z1, field);
    if !z2.is_empty() {
        add_into(&mut out[2 * m..], &z2, field);
    }
    out
}

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

/// Dense polynomial in 𝔽_p[T], coefficients ascending, canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, reducing each one
    /// mod p and trimming trailing zeros.
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        let p = field.modulus();
        coeffs.iter_mut().for_each(|c| *c %= p);
        Self::from_reduced(field, coeffs)
    }

    pub(crate) fn from_reduced(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_elements(field: PrimeField, coeffs: &[FieldElement]) -> Self {
        Self::from_reduced(field, coeffs.iter().map(|c| c.value()).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_reduced(c.field(), vec![c.value()])
    }

    /// The indeterminate `T`.
    pub fn t(field: PrimeField) -> Self {
        Self::monomial(field.one(), 1)
    }

    /// `c * T^k`.
    pub fn monomial(c: FieldElement, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero(c.field());
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c.value();
        Self { field: c.field(), coeffs }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Degree, with `None` standing for the degree of the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.element(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn leading_coefficient(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.field.element(c))
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        self.check(c.field());
        if c.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        Poly { field: f, coeffs: self.coeffs.iter().map(|&a| f.mul(a, c.value())).collect() }
    }

    /// Multiplies by `T^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field, coeffs }
    }

    pub fn mul_with_threshold(&self, rhs: &Poly, threshold: usize) -> Poly {
        self.check(rhs.field);
        Poly::from_reduced(self.field, mul_residues(&self.coeffs, &rhs.coeffs, self.field, threshold))
    }

    /// `self^p`: coefficient `a_i` moves to index `p*i`, everything else is 0.
    pub fn frobenius(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.field.modulus() as usize;
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = c;
        }
        Poly { field: self.field, coeffs }
    }

    pub fn pow(&self, k: u64) -> Poly {
        if k == self.field.modulus() {
            return self.frobenius();
        }
        let mut acc = Poly::one(self.field);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q*divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor.field);
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = self.field;
        let da = match self.degree() {
            Some(d) if d >= db => d,
            _ => return Ok((Poly::zero(f), self.clone())),
        };
        let lead_inv = f.inv(divisor.coeffs[db])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; da - db + 1];
        for k in (0..=da - db).rev() {
            let c = f.mul(rem[k + db], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_reduced(f, quot), Poly::from_reduced(f, rem)))
    }

    /// Evaluates at a field element.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.check(x.field());
        let f = self.field;
        let v = self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x.value()), c));
        f.element(v)
    }

    fn check(&self, other: PrimeField) {
        assert_eq!(self.field, other, "polynomials over different moduli");
    }
}

impl fmt::Display for Poly {
    /// Descending powers, `c*t^k` joined by ` + `, unit coefficients elided
    /// except on the constant term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, k) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "t^{k}")?,
                (_, 1) => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.field.modulus(), self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check(rhs.field);
        Poly::from_reduced(self.field, padded_sum(&self.coeffs, &rhs.coeffs, self.field))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check(rhs.field);
        let f = self.field;
        let mut out = self.coeffs.clone();
        if out.len() < rhs.coeffs.len() {
            out.resize(rhs.coeffs.len(), 0);
        }
        sub_into(&mut out, &rhs.coeffs, f);
        Poly::from_reduced(f, out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_with_threshold(rhs, KARATSUBA_THRESHOLD)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly { field: f, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, c: &[u64]) -> Poly {
        Poly::new(fp(p), c.to_vec())
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15, 21] {
            assert_eq!(PrimeField::new(p), Err(Error::NotOddPrime(p)));
        }
        assert!(PrimeField::new(4_294_967_311).is_err());
        assert!(PrimeField::new(13).is_ok());
    }

    #[test]
    fn inverses() {
        let f = fp(7);
        assert_eq!(f.element(6).inverse().unwrap(), f.element(6));
        assert_eq!(f.one().inverse().unwrap(), f.one());
        // (4*u3)^-1 with u3 = 5
        assert_eq!((f.element(4) * f.element(5)).inverse().unwrap().value(), 6);
        assert_eq!(f.zero().inverse(), Err(Error::DivisionByZero));
        for p in [3, 5, 11, 13] {
            let f = fp(p);
            for a in f.units() {
                assert_eq!(a * a.inverse().unwrap(), f.one());
            }
        }
    }

    #[test]
    fn divmod_examples() {
        // T^7 / (T^2+4)^3 mod 7
        let f7 = poly(7, &[1, 0, 6, 0, 5, 0, 1]);
        let t7 = Poly::monomial(fp(7).one(), 7);
        let (q, r) = t7.divmod(&f7).unwrap();
        assert_eq!(r, poly(7, &[0, 6, 0, 1, 0, 2]));
        assert_eq!(&(&q * &f7) + &r, t7);

        let (q, r) = Poly::monomial(fp(3).one(), 3).divmod(&poly(3, &[1, 0, 1])).unwrap();
        assert_eq!(q, Poly::t(fp(3)));
        assert_eq!(r, poly(3, &[0, 2]));

        let a = poly(5, &[1, 2, 3, 4]);
        let (q, r) = a.divmod(&Poly::one(fp(5))).unwrap();
        assert_eq!((q, r), (a.clone(), Poly::zero(fp(5))));

        assert_eq!(a.divmod(&Poly::zero(fp(5))), Err(Error::DivisionByZero));
    }

    #[test]
    fn pow_examples() {
        let base7 = poly(7, &[4, 0, 1]);
        assert_eq!(base7.pow(3), poly(7, &[1, 0, 6, 0, 5, 0, 1]));
        assert_eq!(poly(3, &[4, 0, 1]).pow(1), poly(3, &[1, 0, 1]));
        assert_eq!(base7.pow(0), Poly::one(fp(7)));
        assert_eq!(Poly::zero(fp(7)).pow(0), Poly::one(fp(7)));
        assert_eq!(Poly::zero(fp(7)).pow(3), Poly::zero(fp(7)));
        // k = p goes through the Frobenius path; compare with repeated products
        let a = poly(7, &[3, 1, 0, 5]);
        let mut slow = Poly::one(fp(7));
        for _ in 0..7 {
            slow = &slow * &a;
        }
        assert_eq!(a.pow(7), slow);
    }

    #[test]
    fn rendering() {
        let a5 = poly(7, &[0, 0, 0, 0, 0, 0, 0, 6, 0, 1, 0, 2, 0, 6]);
        assert_eq!(a5.to_string(), "6*t^13 + 2*t^11 + t^9 + 6*t^7");
        assert_eq!(poly(7, &[0, 2]).to_string(), "2*t");
        assert_eq!(poly(7, &[0, 1]).to_string(), "t");
        assert_eq!(poly(7, &[1, 1]).to_string(), "t + 1");
        assert_eq!(poly(7, &[3]).to_string(), "3");
        assert_eq!(Poly::zero(fp(7)).to_string(), "0");
    }

    #[test]
    fn canonical_form() {
        let a = poly(5, &[1, 2, 5, 10]);
        assert_eq!(a.coeffs(), &[1, 2]);
        let b = poly(5, &[0, 0, 1]);
        assert!((&b - &b).is_zero());
        assert_eq!((&b - &b).degree(), None);
    }

    fn arb_poly(p: u64, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..p, 0..max_len).prop_map(move |c| poly(p, &c))
    }

    fn arb_case(max_len: usize) -> impl Strategy<Value = (Poly, Poly, Poly)> {
        prop::sample::select(vec![3u64, 5, 7, 11, 13]).prop_flat_map(move |p| {
            (arb_poly(p, max_len), arb_poly(p, max_len), arb_poly(p, max_len))
        })
    }

    proptest! {
        #[test]
        fn divmod_contract((a, b, _c) in arb_case(40)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn ring_axioms((a, b, c) in arb_case(30)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a - &b) + &b, a);
        }

        #[test]
        fn karatsuba_matches_schoolbook((a, b, _c) in arb_case(300)) {
            let fast = a.mul_with_threshold(&b, 2);
            let slow = a.mul_with_threshold(&b, usize::MAX);
            prop_assert_eq!(&fast, &slow);
            prop_assert_eq!(fast, &a * &b);
        }

        #[test]
        fn frobenius_spreads_coefficients((a, _b, _c) in arb_case(20)) {
            let p = a.field().modulus() as usize;
            let ap = a.pow(p as u64);
            for (i, &c) in ap.coeffs().iter().enumerate() {
                if i % p == 0 {
                    prop_assert_eq!(c, a.coeff(i / p).value());
                } else {
                    prop_assert_eq!(c, 0);
                }
            }
            prop_assert_eq!(ap.degree(), a.degree().map(|d| d * p));
        }

        #[test]
        fn outputs_are_canonical((a, b, c) in arb_case(30)) {
            for r in [&a + &b, &a - &b, &a * &c, -&a, a.scale(b.coeff(0)), a.pow(3)] {
                prop_assert!(r.coeffs().last().is_none_or(|&x| x != 0));
            }
        }
    }
}
