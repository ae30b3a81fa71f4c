//! Truncated formal Laurent series in `1/T` over 𝔽_p.
//!
//! Every series carries a precision watermark, its *valid order*: all
//! coefficients of `T^k` with `k >= valid_order` are exact, nothing is known
//! below it. A series built from a polynomial is *exact* (no watermark) and
//! all of its unstored coefficients are zero.
//!
//! Propagation rules, writing `f` for a valid order (minus infinity when the
//! operand is exact) and `m(s)` for the degree of the leading term of `s`
//! (or `f(s) - 1` when `s` is zero down to its valid order):
//!
//! * `a ± b`: `max(f(a), f(b))`.
//! * `a * b`: `max(f(a) + m(b), f(b) + m(a))`.
//! * `a / b`: `max(f(a) - m(b), m(a) - 2*m(b) + f(b))`, optionally capped by
//!   an explicit target order. Writing `a = A + ea`, `b = B(1 + eb/B)`, the
//!   two terms bound `ea/b` and `(a/b)(eb/B)` respectively.
//! * `s^p`: `p*f(s) - p + 1`, since the unknown tail `e` of degree `< f`
//!   contributes `e^p` of degree `<= p*(f-1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{mul_residues, FieldElement, Poly, PrimeField, KARATSUBA_THRESHOLD};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: PrimeField,
    /// Degree of `coeffs[0]`.
    low: i64,
    /// Ascending coefficients starting at `low`. For an inexact series
    /// `low == floor` whenever the series is nonzero.
    coeffs: Vec<u64>,
    floor: Option<i64>,
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    fn build(field: PrimeField, low: i64, coeffs: Vec<u64>, floor: Option<i64>) -> Self {
        let mut s = Self { field, low, coeffs, floor };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        match self.floor {
            Some(f) => {
                if self.coeffs.is_empty() {
                    self.low = f;
                    return;
                }
                if self.low < f {
                    let drop = (f - self.low) as usize;
                    if drop >= self.coeffs.len() {
                        self.coeffs.clear();
                    } else {
                        self.coeffs.drain(..drop);
                    }
                    self.low = f;
                    self.normalize();
                } else if self.low > f {
                    let pad = (self.low - f) as usize;
                    let mut c = vec![0; pad];
                    c.append(&mut self.coeffs);
                    self.coeffs = c;
                    self.low = f;
                }
            }
            None => {
                let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
                self.coeffs.drain(..lead_zeros);
                self.low = if self.coeffs.is_empty() { 0 } else { self.low + lead_zeros as i64 };
            }
        }
    }

    /// Exact zero.
    pub fn zero(field: PrimeField) -> Self {
        Self { field, low: 0, coeffs: Vec::new(), floor: None }
    }

    /// Zero, known only down to `order`.
    pub fn zero_to(field: PrimeField, order: i64) -> Self {
        Self { field, low: order, coeffs: Vec::new(), floor: Some(order) }
    }

    pub fn from_poly(poly: &Poly) -> Self {
        Self::build(poly.field(), 0, poly.coeffs().to_vec(), None)
    }

    /// `sum c_i T^(top - i)` for the given descending coefficients; `floor`
    /// of `None` marks the result exact.
    pub fn from_descending(field: PrimeField, top: i64, desc: &[u64], floor: Option<i64>) -> Self {
        let p = field.modulus();
        let coeffs: Vec<u64> = desc.iter().rev().map(|c| c % p).collect();
        let low = top - desc.len() as i64 + 1;
        Self::build(field, low, coeffs, floor)
    }

    /// Long division of `num / den` in descending powers, exact down to and
    /// including `T^order`.
    pub fn from_rational(num: &Poly, den: &Poly, order: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_poly(num).div_to(&Self::from_poly(den), Some(order))?.truncate(order))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `None` for exact series.
    #[inline]
    pub fn valid_order(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Degree of the leading nonzero term, `None` if no nonzero term is known.
    pub fn top_degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    /// True when every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `T^k`, or `None` when it lies below the valid order.
    pub fn coeff(&self, k: i64) -> Option<FieldElement> {
        if matches!(self.floor, Some(f) if k < f) {
            return None;
        }
        let v = if k < self.low {
            0
        } else {
            self.coeffs.get((k - self.low) as usize).copied().unwrap_or(0)
        };
        Some(self.field.element(v))
    }

    /// Nonzero known terms in descending degree order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i64, self.field.element(c)))
    }

    /// Polynomial part (terms of degree >= 0), if those are all known.
    pub fn integer_part(&self) -> Option<Poly> {
        if matches!(self.floor, Some(f) if f > 0) {
            return None;
        }
        let mut c = vec![0u64; self.top_degree().map_or(0, |t| (t.max(-1) + 1) as usize)];
        for (k, v) in self.terms() {
            if k >= 0 {
                c[k as usize] = v.value();
            }
        }
        Some(Poly::new(self.field, c))
    }

    /// Discards terms below `order`.
    pub fn truncate(&self, order: i64) -> Self {
        let floor = max_floor(self.floor, Some(order));
        Self::build(self.field, self.low, self.coeffs.clone(), floor)
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        assert_eq!(self.field, c.field(), "series over different moduli");
        let f = self.field;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(a, c.value())).collect();
        Self::build(f, self.low, coeffs, self.floor)
    }

    /// Bound on the degree of the series: leading degree, or `floor - 1`
    /// when nothing nonzero is known. `None` for exact zero.
    fn magnitude(&self) -> Option<i64> {
        self.top_degree().or(self.floor.map(|f| f - 1))
    }

    pub fn frobenius(&self) -> Self {
        let p = self.field.modulus() as i64;
        let floor = self.floor.map(|f| p * f - p + 1);
        if self.coeffs.is_empty() {
            return Self::build(self.field, floor.unwrap_or(0), Vec::new(), floor);
        }
        let mut coeffs = vec![0u64; (self.coeffs.len() - 1) * p as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = c;
        }
        Self::build(self.field, self.low * p, coeffs, floor)
    }

    fn combine(&self, rhs: &Self, negate_rhs: bool) -> Self {
        assert_eq!(self.field, rhs.field, "series over different moduli");
        let f = self.field;
        let floor = max_floor(self.floor, rhs.floor);
        let parts = [self, rhs].into_iter().filter(|s| !s.coeffs.is_empty());
        let low = parts.clone().map(|s| s.low).min();
        let high = parts.map(|s| s.low + s.coeffs.len() as i64).max();
        let (Some(low), Some(high)) = (low, high) else {
            return Self::build(f, floor.unwrap_or(0), Vec::new(), floor);
        };
        let mut out = vec![0u64; (high - low) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (self.low - low) as usize + i;
            out[k] = f.add(out[k], c);
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            let k = (rhs.low - low) as usize + i;
            out[k] = if negate_rhs { f.sub(out[k], c) } else { f.add(out[k], c) };
        }
        Self::build(f, low, out, floor)
    }

    /// Quotient `self / rhs`, with the valid order given by the propagation
    /// rule and, when `order` is set, never deeper than `order`. Fails when
    /// `rhs` has no known nonzero term, or when both operands are exact and
    /// no `order` is supplied.
    pub fn div_to(&self, rhs: &Self, order: Option<i64>) -> Result<Self> {
        assert_eq!(self.field, rhs.field, "series over different moduli");
        let f = self.field;
        let top_b = rhs.top_degree().ok_or(Error::SeriesDivisionByZero)?;
        let Some(mag_a) = self.magnitude() else {
            return Ok(Self::zero(f));
        };
        let floor = [
            self.floor.map(|fa| fa - top_b),
            rhs.floor.map(|fb| mag_a - 2 * top_b + fb),
            order,
        ]
        .into_iter()
        .flatten()
        .max()
        .ok_or(Error::UnboundedPrecision)?;

        let Some(top_a) = self.top_degree() else {
            return Ok(Self::zero_to(f, floor));
        };
        let top_q = top_a - top_b;
        if top_q < floor {
            return Ok(Self::zero_to(f, floor));
        }
        let lead_inv = f.inv(rhs.coeffs[rhs.coeffs.len() - 1])?;
        // remainder indexed by degree - base, covering [floor + top_b, top_a]
        let base = floor + top_b;
        let mut rem = vec![0u64; (top_a - base + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            if k >= base {
                rem[(k - base) as usize] = c;
            }
        }
        let b_low = rhs.low;
        let len_q = (top_q - floor + 1) as usize;
        let mut quot = vec![0u64; len_q];
        for qi in (0..len_q).rev() {
            let qdeg = floor + qi as i64;
            let c = f.mul(rem[(qdeg + top_b - base) as usize], lead_inv);
            quot[qi] = c;
            if c == 0 {
                continue;
            }
            // subtract c*T^qdeg*rhs on degrees >= base
            for (j, &bj) in rhs.coeffs.iter().enumerate().rev() {
                let deg = qdeg + b_low + j as i64;
                if deg < base {
                    break;
                }
                if bj != 0 {
                    let slot = &mut rem[(deg - base) as usize];
                    *slot = f.sub(*slot, f.mul(c, bj));
                }
            }
        }
        Ok(Self::build(f, floor, quot, Some(floor)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.div_to(rhs, None)
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, false)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, true)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(self.field.from_i64(-1))
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        assert_eq!(self.field, rhs.field, "series over different moduli");
        let f = self.field;
        let (Some(ma), Some(mb)) = (self.magnitude(), rhs.magnitude()) else {
            return LaurentSeries::zero(f);
        };
        let floor = max_floor(self.floor.map(|fa| fa + mb), rhs.floor.map(|fb| fb + ma));
        let prod = mul_residues(&self.coeffs, &rhs.coeffs, f, KARATSUBA_THRESHOLD);
        LaurentSeries::build(f, self.low + rhs.low, prod, floor)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = c.value();
            match (c, k) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "t^{k}")?,
                (_, 1) => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        match self.floor {
            Some(fl) if first => write!(f, "O(t^{})", fl - 1),
            Some(fl) => write!(f, " + O(t^{})", fl - 1),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries[F_{}]({})", self.field.modulus(), self)
    }
}
