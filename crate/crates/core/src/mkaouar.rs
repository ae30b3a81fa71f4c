//! Partial-quotient extraction from an algebraic equation.
//!
//! Given `P(x) = sum c_i(T) x^i` with a power-series root `α`, one step takes
//! `bar = -(c_{n-1} div c_n)` as the next partial quotient, shifts
//! `P(x) -> P(x + bar)` (root `α - bar`) and reverses the coefficient order
//! (root `1/(α - bar)`, the next complete quotient). If `P(bar) = 0` the root
//! is rational and the expansion ends with `bar`.
//!
//! Nothing guarantees that `bar` is the integer part of the intended root;
//! expansions are meant to be checked afterwards with [`BiPoly::eval_at_series`].

use std::fmt;

use crate::algebra::{Poly, PrimeField};
use crate::cf::PartialQuotients;
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// Polynomial in `x` with coefficients in 𝔽_p[T], ascending in `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    field: PrimeField,
    coeffs: Vec<Poly>,
}

impl BiPoly {
    /// Trims zero leading coefficients; the result must have x-degree >= 1.
    pub fn new(field: PrimeField, mut coeffs: Vec<Poly>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field.modulus(), c.field().modulus()));
        }
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::DegenerateEquation);
        }
        Ok(Self { field, coeffs })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^i`.
    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Poly::zero(self.field))
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Poly {
        &self.coeffs[self.coeffs.len() - 1]
    }

    /// Largest T-degree among the coefficients.
    pub fn max_coeff_degree(&self) -> usize {
        self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// `P(x + shift)` by repeated synthetic division.
    pub fn taylor_shift(&self, shift: &Poly) -> BiPoly {
        let mut c = self.coeffs.clone();
        let n = c.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                let term = shift * &c[j + 1];
                c[j] = &c[j] + &term;
            }
        }
        BiPoly { field: self.field, coeffs: c }
    }

    /// Reverses the coefficient order: `x^n P(1/x)`. Callers make sure the
    /// constant coefficient is nonzero.
    fn reversed(mut self) -> BiPoly {
        self.coeffs.reverse();
        self
    }

    /// `P(value)` for a polynomial value.
    pub fn eval_poly(&self, value: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(self.field), |acc, c| &(&acc * value) + c)
    }

    /// `P(s)` by Horner's rule, with precision propagated from `s`.
    pub fn eval_at_series(&self, s: &LaurentSeries) -> LaurentSeries {
        self.coeffs.iter().rev().fold(LaurentSeries::zero(self.field), |acc, c| {
            &(&acc * s) + &LaurentSeries::from_poly(c)
        })
    }

    /// One extraction step.
    pub fn next_step(&self) -> Result<Step> {
        self.step(0)
    }

    fn step(&self, emitted: usize) -> Result<Step> {
        let n = self.degree_x();
        let (q, _) = self.coeffs[n - 1].divmod(&self.coeffs[n])?;
        let bar = -q;
        if bar.degree().unwrap_or(0) < 1 {
            return Err(Error::NoAdmissibleQuotient { emitted, bar });
        }
        let shifted = self.taylor_shift(&bar);
        if shifted.coeffs[0].is_zero() {
            return Ok(Step::RationalRoot(bar));
        }
        Ok(Step::Quotient { bar, next: shifted.reversed() })
    }

    /// Parses the line format `i: c0 c1 c2 ...` (coefficient of `x^i`,
    /// ascending T-coefficients as residues). Blank lines and lines starting
    /// with `#` are skipped; powers that do not appear are zero.
    pub fn parse(field: PrimeField, text: &str) -> Result<Self> {
        let mut coeffs: Vec<Option<Poly>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: lineno, message };
            let (power, rest) = line.split_once(':').ok_or_else(|| err("missing ':'".into()))?;
            let power: usize = power
                .trim()
                .parse()
                .map_err(|_| err(format!("bad power {:?}", power.trim())))?;
            let mut residues = Vec::new();
            for tok in rest.split_whitespace() {
                let v: u64 = tok.parse().map_err(|_| err(format!("bad coefficient {tok:?}")))?;
                if v >= field.modulus() {
                    return Err(err(format!("coefficient {v} is not a residue mod {}", field.modulus())));
                }
                residues.push(v);
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, None);
            }
            if coeffs[power].is_some() {
                return Err(err(format!("duplicate power {power}")));
            }
            coeffs[power] = Some(Poly::new(field, residues));
        }
        let coeffs = coeffs.into_iter().map(|c| c.unwrap_or_else(|| Poly::zero(field))).collect();
        Self::new(field, coeffs)
    }

    /// Inverse of [`BiPoly::parse`]; zero coefficients are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.push_str(&format!("{i}:"));
            for v in c.coeffs() {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[F_{}](", self.field.modulus())?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*x^{i}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Quotient { bar: Poly, next: BiPoly },
    RationalRoot(Poly),
}

/// Result of [`expand`].
#[derive(Clone, Debug)]
pub struct Expansion {
    pub quotients: PartialQuotients,
    /// The root turned out rational; `quotients` is its complete expansion.
    pub terminated: bool,
    /// Largest coefficient T-degree seen across all intermediate equations.
    pub peak_coeff_degree: usize,
    /// A-priori bound on that degree: a shift by `bar` raises coefficient
    /// degrees by at most `degree_x * deg(bar)`, and reversal keeps them.
    pub degree_bound: usize,
}

/// First `m` partial quotients of the root of `equation`, stopping early at
/// a rational root. An inadmissible step reports how many quotients were
/// emitted before it.
pub fn expand(equation: &BiPoly, m: usize) -> Result<Expansion> {
    let n = equation.degree_x();
    let mut current = equation.clone();
    let mut items = Vec::with_capacity(m);
    let mut bound = equation.max_coeff_degree();
    let mut peak = bound;
    let mut terminated = false;
    while items.len() < m {
        match current.step(items.len())? {
            Step::RationalRoot(bar) => {
                items.push(bar);
                terminated = true;
                break;
            }
            Step::Quotient { bar, next } => {
                bound += n * bar.degree().unwrap_or(0);
                let observed = next.max_coeff_degree();
                if observed > bound {
                    return Err(Error::DegreeBoundExceeded { observed, bound, steps: items.len() + 1 });
                }
                peak = peak.max(observed);
                items.push(bar);
                current = next;
            }
        }
    }
    Ok(Expansion {
        quotients: PartialQuotients::new(items)?,
        terminated,
        peak_coeff_degree: peak,
        degree_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{cf_to_series, continuants, rational_to_cf};
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, c: &[u64]) -> Poly {
        Poly::new(fp(p), c.to_vec())
    }

    /// Equation (3) at p = 3, u = (1,1,1), written out by hand:
    /// (T²+1)x⁴ − (T³+2T)x³ + (2T³+2T)x + (T⁴+2T²+2).
    fn eq3_p3() -> BiPoly {
        BiPoly::new(
            fp(3),
            vec![
                poly(3, &[2, 0, 2, 0, 1]),
                poly(3, &[0, 2, 0, 2]),
                Poly::zero(fp(3)),
                poly(3, &[0, 1, 0, 2]),
                poly(3, &[1, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn first_step_at_p3() {
        match eq3_p3().next_step().unwrap() {
            Step::Quotient { bar, next } => {
                assert_eq!(bar, Poly::t(fp(3)));
                assert_eq!(next.degree_x(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hand_written_p3_equation_matches_pattern_prefix() {
        let e = expand(&eq3_p3(), 10).unwrap();
        let t = |u| Poly::monomial(fp(3).element(u), 1);
        let expected = vec![
            t(1),
            t(1),
            t(1),
            t(1),
            poly(3, &[0, 0, 0, 1, 0, 1]),
            t(1),
            t(2),
            t(2),
            t(1),
            poly(3, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1]),
        ];
        assert_eq!(e.quotients.as_slice(), expected.as_slice());
        assert!(!e.terminated);
        assert!(e.peak_coeff_degree <= e.degree_bound);
    }

    #[test]
    fn linear_rational_root() {
        let f = fp(5);
        let p = BiPoly::new(f, vec![-Poly::t(f), Poly::one(f)]).unwrap();
        assert_eq!(p.next_step().unwrap(), Step::RationalRoot(Poly::t(f)));
        let e = expand(&p, 10).unwrap();
        assert!(e.terminated);
        assert_eq!(e.quotients.as_slice(), &[Poly::t(f)]);
    }

    #[test]
    fn constant_bar_aborts() {
        // x² - 1 has constant roots
        let f = fp(7);
        let p = BiPoly::new(f, vec![-Poly::one(f), Poly::zero(f), Poly::one(f)]).unwrap();
        assert!(matches!(p.next_step(), Err(Error::NoAdmissibleQuotient { emitted: 0, .. })));
        // roots T² and 1: bar is the sum of the roots, not the integer part of either
        let q = BiPoly::new(f, vec![poly(7, &[0, 0, 1]), -poly(7, &[1, 0, 1]), Poly::one(f)]).unwrap();
        match q.next_step().unwrap() {
            Step::Quotient { bar, .. } => assert_eq!(bar, poly(7, &[1, 0, 1])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_equations_rejected() {
        let f = fp(5);
        assert_eq!(BiPoly::new(f, vec![Poly::one(f)]), Err(Error::DegenerateEquation));
        assert_eq!(
            BiPoly::new(f, vec![Poly::one(f), Poly::zero(f)]),
            Err(Error::DegenerateEquation)
        );
    }

    #[test]
    fn eval_at_series_examples() {
        let f = fp(5);
        let t = Poly::t(f);
        let p = BiPoly::new(f, vec![-(&t * &t), Poly::zero(f), Poly::one(f)]).unwrap();
        let r = p.eval_at_series(&LaurentSeries::from_poly(&t));
        assert!(r.is_zero() && r.is_exact());

        let e = eq3_p3();
        let alpha = cf_to_series(&expand(&e, 10).unwrap().quotients, -30).unwrap();
        let residual = e.eval_at_series(&alpha);
        assert!(residual.is_zero());
        assert!(residual.valid_order().unwrap() <= -20);
    }

    #[test]
    fn residual_vanishes_deeper_with_more_quotients() {
        let e = eq3_p3();
        let full = expand(&e, 14).unwrap().quotients;
        let mut last = i64::MAX;
        for m in 4..=14 {
            let pqs = full.prefix(m);
            let conv = continuants(&pqs).pop().unwrap();
            let order = -80;
            let s = LaurentSeries::from_rational(&conv.x, &conv.y, order).unwrap();
            let r = e.eval_at_series(&s);
            let vanish = r.top_degree().expect("convergent is not a root");
            assert!(vanish < last, "m={m}: {vanish} !< {last}");
            last = vanish;
        }
    }

    #[test]
    fn file_format_roundtrip() {
        let e = eq3_p3();
        let text = e.to_text();
        assert_eq!(text, "0: 2 0 2 0 1\n1: 0 2 0 2\n3: 0 1 0 2\n4: 1 0 1\n");
        assert_eq!(BiPoly::parse(fp(3), &text).unwrap(), e);
        assert_eq!(BiPoly::parse(fp(3), &format!("# eq3\n\n{text}")).unwrap(), e);
        assert!(matches!(BiPoly::parse(fp(3), "0: 1 5\n1: 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(BiPoly::parse(fp(3), "1 1 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(BiPoly::parse(fp(3), "0: 1\n0: 2"), Err(Error::Parse { line: 2, .. })));
    }

    fn arb_rational() -> impl Strategy<Value = (Poly, Poly)> {
        prop::sample::select(vec![3u64, 5, 7]).prop_flat_map(|p| {
            (prop::collection::vec(0..p, 2..14), prop::collection::vec(0..p, 1..8))
                .prop_map(move |(a, b)| (poly(p, &a), poly(p, &b)))
        })
    }

    proptest! {
        #[test]
        fn steps_on_linear_equations_follow_euclid((num, den) in arb_rational()) {
            prop_assume!(!den.is_zero() && num.degree() > den.degree());
            let f = num.field();
            let eq = BiPoly::new(f, vec![-&num, den.clone()]).unwrap();
            let e = expand(&eq, 1000).unwrap();
            prop_assert!(e.terminated);
            prop_assert_eq!(e.quotients, rational_to_cf(&num, &den).unwrap());
        }

        #[test]
        fn shift_matches_evaluation((a, b) in arb_rational(), c in prop::collection::vec(0u64..3, 1..4)) {
            let f = a.field();
            let eq = BiPoly::new(f, vec![a.clone(), b.clone(), Poly::one(f)]).unwrap();
            let s = Poly::new(f, c);
            let shifted = eq.taylor_shift(&s);
            prop_assert_eq!(shifted.coeff(0), eq.eval_poly(&s));
            let x = Poly::new(f, vec![2, 1]);
            prop_assert_eq!(shifted.eval_poly(&x), eq.eval_poly(&(&x + &s)));
        }
    }
}
