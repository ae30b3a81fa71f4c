//! The hyperquadratic pattern and the objects around it.
//!
//! For an odd prime `p` and `(u1, u2, u3)` in `(𝔽_p^*)^3`:
//!
//! * `F = (T^2 + 4)^((p-1)/2)`, `R = T^p - T F` (the remainder of `T^p` by `F`);
//! * `P_0 = T`, `P_{n+1} = F P_n^p`, so `deg P_n = 2p^n - 1`;
//! * the partial quotients are the concatenation of blocks `C_0, C_1, ...`
//!   where, with `h = (p^k - 1)/2`,
//!   - `C_k` for even `k` is `u1 T, u2 P_k, u3 T` followed by
//!     `((2u3)^-1 T, 2u3 T)` repeated `h` times,
//!   - `C_k` for odd `k` is `(4u3)^-1 T, 4u1u2u3 P_k, (4u1)^-1 T` followed by
//!     `(2u1 T, (2u1)^-1 T)` repeated `h` times;
//! * the resulting `α` satisfies `α^p = 4u1u3 F α_4 + u1 R`, and eliminating
//!   `α_4` gives the degree-`(p+1)` equation built by [`equation3`].

use std::thread;

use crate::algebra::{FieldElement, Poly, PrimeField};
use crate::cf::{cf_to_series, continuants, rational_to_cf, reachable_order, PartialQuotients};
use crate::error::{Error, Result};
use crate::mkaouar::{expand, BiPoly};
use crate::series::LaurentSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triple {
    pub u1: FieldElement,
    pub u2: FieldElement,
    pub u3: FieldElement,
}

impl Triple {
    pub fn new(u1: FieldElement, u2: FieldElement, u3: FieldElement) -> Result<Self> {
        for (index, u) in [u1, u2, u3].into_iter().enumerate() {
            if u.is_zero() {
                return Err(Error::ZeroTripleEntry { index: index + 1 });
            }
        }
        Ok(Self { u1, u2, u3 })
    }

    pub fn from_residues(field: PrimeField, u: [u64; 3]) -> Result<Self> {
        Self::new(field.element(u[0]), field.element(u[1]), field.element(u[2]))
    }

    pub fn residues(&self) -> [u64; 3] {
        [self.u1.value(), self.u2.value(), self.u3.value()]
    }
}

/// Which polynomial plays the role of `R` in the equations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RDefinition {
    /// `R = T^p - T F`.
    #[default]
    Remainder,
    /// `R = T^p`, as set in the original Sage listing.
    ListingPower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSpec {
    field: PrimeField,
    u: Triple,
    f: Poly,
    r: Poly,
}

impl PatternSpec {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn triple(&self) -> Triple {
        self.u
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn r(&self) -> &Poly {
        &self.r
    }
}

/// `(T^2 + 4)^((p-1)/2)`.
pub fn f_poly(field: PrimeField) -> Poly {
    let p = field.modulus();
    Poly::new(field, vec![4, 0, 1]).pow((p - 1) / 2)
}

pub fn build_spec(field: PrimeField, u: Triple) -> Result<PatternSpec> {
    build_spec_with(field, u, RDefinition::Remainder)
}

pub fn build_spec_with(field: PrimeField, u: Triple, rdef: RDefinition) -> Result<PatternSpec> {
    if u.u1.field() != field {
        return Err(Error::FieldMismatch(field.modulus(), u.u1.field().modulus()));
    }
    let p = field.modulus();
    let f = f_poly(field);
    assert_eq!(f.degree(), Some(p as usize - 1));
    let tp = Poly::monomial(field.one(), p as usize);
    let remainder = &tp - &(&Poly::t(field) * &f);
    let (_, r_div) = tp.divmod(&f)?;
    assert_eq!(remainder, r_div, "T^p - TF is not the remainder of T^p by F");
    let r = match rdef {
        RDefinition::Remainder => remainder,
        RDefinition::ListingPower => tp,
    };
    Ok(PatternSpec { field, u, f, r })
}

/// `P_n`, with `deg P_n = 2p^n - 1` checked.
pub fn build_pn(spec: &PatternSpec, n: u32) -> Poly {
    let mut pn = Poly::t(spec.field);
    for k in 1..=n {
        pn = next_pn(spec, &pn, k);
    }
    pn
}

fn next_pn(spec: &PatternSpec, prev: &Poly, k: u32) -> Poly {
    let p = spec.field.modulus();
    let next = &spec.f * &prev.frobenius();
    assert_eq!(next.degree(), Some(2 * p.pow(k) as usize - 1), "deg P_{k} != 2p^{k} - 1");
    next
}

/// Lazy stream of the pattern's partial quotients `a_1, a_2, ...`.
pub struct PatternStream<'a> {
    spec: &'a PatternSpec,
    block: u32,
    pos: u64,
    block_len: u64,
    pn: Poly,
    pn_index: u32,
    // block constants: even blocks, odd blocks
    even_a: [Poly; 2],
    even_b: [Poly; 2],
    odd_a: [FieldElement; 3],
    odd_b: [Poly; 2],
}

impl<'a> PatternStream<'a> {
    pub fn new(spec: &'a PatternSpec) -> Self {
        let f = spec.field;
        let Triple { u1, u2, u3 } = spec.u;
        let two = f.element(2);
        let four = f.element(4);
        let inv = |x: FieldElement| x.inverse().expect("nonzero for odd p and units u_i");
        let lin = |c: FieldElement| Poly::monomial(c, 1);
        Self {
            spec,
            block: 0,
            pos: 0,
            block_len: 3,
            pn: Poly::t(f),
            pn_index: 0,
            even_a: [lin(u1), lin(u3)],
            even_b: [lin(inv(two * u3)), lin(two * u3)],
            odd_a: [inv(four * u3), four * u1 * u2 * u3, inv(four * u1)],
            odd_b: [lin(two * u1), lin(inv(two * u1))],
        }
    }

    fn big(&mut self) -> Poly {
        while self.pn_index < self.block {
            self.pn_index += 1;
            self.pn = next_pn(self.spec, &self.pn, self.pn_index);
        }
        self.pn.clone()
    }
}

impl Iterator for PatternStream<'_> {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.pos == self.block_len {
            self.block += 1;
            self.pos = 0;
            let pk = self.spec.field.modulus().checked_pow(self.block)?;
            assert_eq!((pk - 1) % 2, 0);
            self.block_len = pk + 2;
        }
        let pos = self.pos;
        self.pos += 1;
        let even = self.block.is_multiple_of(2);
        let item = match (even, pos) {
            (true, 0) => self.even_a[0].clone(),
            (true, 1) => self.big().scale(self.spec.u.u2),
            (true, 2) => self.even_a[1].clone(),
            (true, _) => self.even_b[((pos - 3) % 2) as usize].clone(),
            (false, 1) => self.big().scale(self.odd_a[1]),
            (false, 0 | 2) => Poly::monomial(self.odd_a[pos as usize], 1),
            (false, _) => self.odd_b[((pos - 3) % 2) as usize].clone(),
        };
        Some(item)
    }
}

/// The first `count` pattern quotients.
pub fn pattern(spec: &PatternSpec, count: usize) -> PartialQuotients {
    let items: Vec<Poly> = PatternStream::new(spec).take(count.max(1)).collect();
    PartialQuotients::new(items).expect("pattern entries have degree >= 1")
}

/// `y3 x^(p+1) - x3 x^p + (4u1u3 y2 F - u1 y3 R) x + u1 x3 R - 4u1u3 x2 F`,
/// with `x_i, y_i` the continuants of `[u1 T, u2 T, u3 T]`.
pub fn equation3(spec: &PatternSpec) -> BiPoly {
    let f = spec.field;
    let Triple { u1, u2, u3 } = spec.u;
    let lin = |c: FieldElement| Poly::monomial(c, 1);
    let first = PartialQuotients::new(vec![lin(u1), lin(u2), lin(u3)]).expect("units");
    let pairs = continuants(&first);
    let (x2, y2) = (&pairs[1].x, &pairs[1].y);
    let (x3, y3) = (&pairs[2].x, &pairs[2].y);
    let z = f.element(4) * u1 * u3;
    let (big_f, r) = (&spec.f, &spec.r);
    let p = f.modulus() as usize;

    let mut coeffs = vec![Poly::zero(f); p + 2];
    coeffs[p + 1] = y3.clone();
    coeffs[p] = -x3;
    coeffs[1] = &(y2 * big_f).scale(z) - &(y3 * r).scale(u1);
    coeffs[0] = &(x3 * r).scale(u1) - &(x2 * big_f).scale(z);
    BiPoly::new(f, coeffs).expect("leading coefficient y3 is nonzero")
}

/// `u2 = -u1 (1 + 2u1)^-1` for the Mills–Robbins family.
pub fn mills_robbins_u2(u1: FieldElement) -> Result<FieldElement> {
    let f = u1.field();
    let denom = f.one() + f.element(2) * u1;
    if u1.is_zero() || denom.is_zero() {
        return Err(Error::InvalidU1 { u1: u1.value() });
    }
    Ok(-u1 * denom.inverse()?)
}

/// Degree-`(p+1)` equation for `α = [u1 T, u2 T, α_3]` with
/// `α^p = F α_3 - R/2`. Substituting `α_3 = (x1 - y1 α)/(y2 α - x2)` gives
/// `y2 x^(p+1) - x2 x^p + (y1 F + y2 R/2) x - (x1 F + x2 R/2)`.
pub fn equation4(field: PrimeField, u1: FieldElement) -> Result<BiPoly> {
    let p = field.modulus();
    if p < 5 {
        return Err(Error::MillsRobbinsPrimeTooSmall(p));
    }
    let u2 = mills_robbins_u2(u1)?;
    let lin = |c: FieldElement| Poly::monomial(c, 1);
    let pairs = continuants(&PartialQuotients::new(vec![lin(u1), lin(u2)])?);
    let (x1, y1) = (&pairs[0].x, &pairs[0].y);
    let (x2, y2) = (&pairs[1].x, &pairs[1].y);
    let big_f = f_poly(field);
    let tp = Poly::monomial(field.one(), p as usize);
    let half_r = (&tp - &(&Poly::t(field) * &big_f)).scale(field.element(2).inverse()?);

    let mut coeffs = vec![Poly::zero(field); p as usize + 2];
    coeffs[p as usize + 1] = y2.clone();
    coeffs[p as usize] = -x2;
    coeffs[1] = &(y1 * &big_f) + &(y2 * &half_r);
    coeffs[0] = -&(&(x1 * &big_f) + &(x2 * &half_r));
    BiPoly::new(field, coeffs)
}

/// `f_0 = 1, f_1 = T, f_n = T f_{n-1} + f_{n-2}`, returned for `0..=n`.
pub fn fibonacci_polys(field: PrimeField, n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::one(field), Poly::t(field)];
    let t = Poly::t(field);
    while out.len() <= n {
        let k = out.len();
        let next = &(&t * &out[k - 1]) + &out[k - 2];
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

pub fn fibonacci_poly(field: PrimeField, n: usize) -> Poly {
    fibonacci_polys(field, n).pop().expect("n + 1 entries")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub p: u64,
    /// `F = f_{p-1}`.
    pub f_is_fibonacci: bool,
    /// `f_p + f_{p-2} = T^p`.
    pub fibonacci_sum_is_tp: bool,
    /// `R = 2 f_{p-2}`.
    pub r_is_twice_fibonacci: bool,
    /// `f_n / f_{n-1} = [T, ..., T]` (n entries) for all `1 <= n <= omega_bound`.
    pub omega_prefixes: bool,
    pub omega_bound: usize,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.f_is_fibonacci && self.fibonacci_sum_is_tp && self.r_is_twice_fibonacci && self.omega_prefixes
    }
}

pub fn check_identities(field: PrimeField, omega_bound: usize) -> IdentityReport {
    let p = field.modulus() as usize;
    let fib = fibonacci_polys(field, p.max(omega_bound));
    let big_f = f_poly(field);
    let tp = Poly::monomial(field.one(), p);
    let r = &tp - &(&Poly::t(field) * &big_f);
    let t = Poly::t(field);
    let omega_prefixes = (1..=omega_bound).all(|n| {
        rational_to_cf(&fib[n], &fib[n - 1]).is_ok_and(|cf| cf.iter().all(|a| *a == t) && cf.len() == n)
    });
    IdentityReport {
        p: p as u64,
        f_is_fibonacci: big_f == fib[p - 1],
        fibonacci_sum_is_tp: &fib[p] + &fib[p - 2] == tp,
        r_is_twice_fibonacci: r == fib[p - 2].scale(field.element(2)),
        omega_prefixes,
        omega_bound,
    }
}

/// Outcome of substituting a truncated series into an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualCheck {
    /// Validity floor of the residual series.
    pub valid_order: i64,
    /// Degree of the first nonzero known term, if any.
    pub leading_nonzero: Option<i64>,
}

impl ResidualCheck {
    pub fn of(s: &LaurentSeries) -> Self {
        Self {
            valid_order: s.valid_order().unwrap_or(i64::MIN),
            leading_nonzero: s.top_degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.leading_nonzero.is_none()
    }

    /// Order down to which the residual is known to vanish.
    pub fn vanishing_order(&self) -> i64 {
        self.leading_nonzero.map_or(self.valid_order, |d| d + 1)
    }
}

#[derive(Clone, Debug)]
pub struct PatternVerification {
    pub steps: usize,
    pub pattern: PartialQuotients,
    pub engine: Option<PartialQuotients>,
    pub engine_error: Option<Error>,
    /// 1-based first index where pattern and engine disagree.
    pub first_mismatch: Option<usize>,
    /// Order of the series `α` built from the pattern.
    pub alpha_order: i64,
    /// `α^p - 4u1u3 F α_4 - u1 R`; absent when fewer than 4 quotients.
    pub eq2: Option<ResidualCheck>,
    /// `equation3(α)`.
    pub eq3: ResidualCheck,
}

impl PatternVerification {
    pub fn matches(&self) -> bool {
        self.engine_error.is_none() && self.first_mismatch.is_none()
    }

    pub fn verified(&self) -> bool {
        self.matches() && self.eq2.is_none_or(|r| r.is_zero()) && self.eq3.is_zero()
    }

    /// The weaker of the two residual vanishing orders.
    pub fn residual_order(&self) -> i64 {
        let e3 = self.eq3.vanishing_order();
        self.eq2.map_or(e3, |r| r.vanishing_order().max(e3))
    }
}

/// Compares the pattern with the engine on `equation3` over `steps`
/// quotients, then checks both identities on the pattern's series.
/// `order` is the precision of `α`; `None` takes the deepest order the
/// pattern prefix supports.
pub fn verify_pattern(spec: &PatternSpec, steps: usize, order: Option<i64>) -> Result<PatternVerification> {
    let steps = steps.max(1);
    let eq = equation3(spec);
    let (pat, engine) = thread::scope(|s| {
        let engine = s.spawn(|| expand(&eq, steps));
        let pat = pattern(spec, steps);
        (pat, engine.join().expect("engine thread panicked"))
    });
    let (engine, engine_error, first_mismatch) = match engine {
        Ok(e) => {
            let diff = pat.first_difference(&e.quotients);
            (Some(e.quotients), None, diff)
        }
        Err(err) => {
            let emitted = match err {
                Error::NoAdmissibleQuotient { emitted, .. } => emitted + 1,
                _ => 1,
            };
            (None, Some(err), Some(emitted))
        }
    };

    let f = spec.field;
    let p = f.modulus() as i64;
    let alpha_order = order.unwrap_or_else(|| reachable_order(&pat));
    let alpha = cf_to_series(&pat, alpha_order)?;

    let eq2 = match pat.tail(4) {
        Some(tail) => {
            let wanted = p * alpha_order - 2 * p + 2;
            let alpha4 = cf_to_series(&tail, wanted.max(reachable_order(&tail)))?;
            let Triple { u1, u3, .. } = spec.u;
            let rhs = &(&LaurentSeries::from_poly(&spec.f) * &alpha4).scale(f.element(4) * u1 * u3)
                + &LaurentSeries::from_poly(&spec.r.scale(u1));
            Some(ResidualCheck::of(&(&alpha.frobenius() - &rhs)))
        }
        None => None,
    };
    let eq3 = ResidualCheck::of(&eq.eval_at_series(&alpha));

    Ok(PatternVerification {
        steps,
        pattern: pat,
        engine,
        engine_error,
        first_mismatch,
        alpha_order,
        eq2,
        eq3,
    })
}
