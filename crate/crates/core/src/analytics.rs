//! Degree statistics of the pattern and its irrationality measure.
//!
//! The large partial quotients sit at positions `n_k` with degree `2p^k - 1`;
//! everything else has degree 1. Writing `s_k` for the sum of the degrees
//! strictly before `n_k`:
//!
//! * `n_k = (p^k - 1)/(p - 1) + 2k + 2`, `n_{k+1} = n_k + p^k + 2`;
//! * `s_k = 3(p^k - 1)/(p - 1) + 1`, `s_{k+1} = s_k + 3p^k`;
//! * `ν(α) = 2 + lim (2p^k - 1)/s_k = 2 + 2(p - 1)/3`.

use num_rational::Ratio;

use crate::algebra::PrimeField;
use crate::cf::PartialQuotients;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedForms {
    pub k: u32,
    pub n_k: u64,
    pub s_k: u64,
    /// `2p^k - 1`.
    pub d_k: u64,
}

pub fn closed_forms(field: PrimeField, k: u32) -> ClosedForms {
    assert!(k >= 1, "k starts at 1");
    let p = field.modulus();
    let pk = p.pow(k);
    let geometric = (pk - 1) / (p - 1);
    ClosedForms { k, n_k: geometric + 2 * k as u64 + 2, s_k: 3 * geometric + 1, d_k: 2 * pk - 1 }
}

/// `2 + 2(p - 1)/3`.
pub fn nu(field: PrimeField) -> Ratio<u64> {
    Ratio::from_integer(2) + Ratio::new(2 * (field.modulus() - 1), 3)
}

/// Liouville–Mahler upper bound `p + 1` on the algebraic degree, hence on `ν`.
pub fn liouville_upper(field: PrimeField) -> u64 {
    field.modulus() + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BigPosition {
    /// 1-based rank among the large quotients.
    pub k: u32,
    /// 1-based position in the expansion.
    pub n: usize,
    pub degree: usize,
    /// Sum of the degrees before position `n`.
    pub partial_sum: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
    pub big_positions: Vec<BigPosition>,
    /// Running sums `d_1 + ... + d_n` for every `n`.
    pub partial_sums: Vec<u64>,
    /// For each big position, whether `(n, degree, partial_sum)` equals
    /// `(n_k, 2p^k - 1, s_k)`.
    pub closed_form_agreement: Vec<bool>,
}

impl DegreeProfile {
    pub fn agrees_with_closed_forms(&self) -> bool {
        self.closed_form_agreement.iter().all(|&b| b)
    }

    /// `max_k d_{n_k} / s_k` over the observed big positions: a finite
    /// stand-in for the limsup, exact only in the limit.
    pub fn empirical_ratio(&self) -> Option<Ratio<u64>> {
        self.big_positions
            .iter()
            .filter(|b| b.partial_sum > 0)
            .map(|b| Ratio::new(b.degree as u64, b.partial_sum))
            .max()
    }
}

pub fn profile_degrees(degrees: &[usize], field: PrimeField) -> DegreeProfile {
    let mut partial_sums = Vec::with_capacity(degrees.len());
    let mut big_positions = Vec::new();
    let mut acc = 0u64;
    for (i, &d) in degrees.iter().enumerate() {
        if d > 1 {
            big_positions.push(BigPosition {
                k: big_positions.len() as u32 + 1,
                n: i + 1,
                degree: d,
                partial_sum: acc,
            });
        }
        acc += d as u64;
        partial_sums.push(acc);
    }
    let closed_form_agreement = big_positions
        .iter()
        .map(|b| {
            let c = closed_forms(field, b.k);
            (c.n_k, c.d_k, c.s_k) == (b.n as u64, b.degree as u64, b.partial_sum)
        })
        .collect();
    DegreeProfile { degrees: degrees.to_vec(), big_positions, partial_sums, closed_form_agreement }
}

pub fn profile(pqs: &PartialQuotients, field: PrimeField) -> DegreeProfile {
    profile_degrees(&pqs.degrees(), field)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrationalityReport {
    pub p: u64,
    pub nu: Ratio<u64>,
    pub liouville_upper: u64,
    /// `(2p^k - 1)/s_k` for `k = 1..=samples`.
    pub ratio_samples: Vec<Ratio<u64>>,
    /// `2 + max observed ratio`, when a profile is supplied. Finite data:
    /// a lower estimate of the limsup, not the limit itself.
    pub empirical_nu: Option<Ratio<u64>>,
}

impl IrrationalityReport {
    /// `2 < ν <= p + 1`.
    pub fn consistent_with_liouville(&self) -> bool {
        self.nu > Ratio::from_integer(2) && self.nu <= Ratio::from_integer(self.liouville_upper)
    }
}

pub fn irrationality(field: PrimeField, samples: u32, observed: Option<&DegreeProfile>) -> IrrationalityReport {
    let ratio_samples = (1..=samples)
        .map(|k| {
            let c = closed_forms(field, k);
            Ratio::new(c.d_k, c.s_k)
        })
        .collect();
    IrrationalityReport {
        p: field.modulus(),
        nu: nu(field),
        liouville_upper: liouville_upper(field),
        ratio_samples,
        empirical_nu: observed.and_then(DegreeProfile::empirical_ratio).map(|r| r + 2),
    }
}
