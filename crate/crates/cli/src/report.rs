use serde::{Deserialize, Serialize};

use hypercf_core::analytics::{self, DegreeProfile};
use hypercf_core::{PartialQuotients, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub coeffs: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuJson {
    pub num: u64,
    pub den: u64,
}

/// Machine-readable report shared by every subcommand. Fields that do not
/// apply to a command are `null` (or empty lists).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub p: u64,
    pub u: Vec<u64>,
    pub partial_quotients: Vec<QuotientJson>,
    pub degrees: Vec<usize>,
    pub leading_coefficients: Vec<u64>,
    pub big_positions: Vec<[u64; 3]>,
    pub nu: Option<NuJson>,
    pub verified: Option<bool>,
    pub residual_order: Option<i64>,
}

impl Report {
    pub fn new(p: u64, u: Vec<u64>) -> Self {
        Self {
            p,
            u,
            partial_quotients: Vec::new(),
            degrees: Vec::new(),
            leading_coefficients: Vec::new(),
            big_positions: Vec::new(),
            nu: None,
            verified: None,
            residual_order: None,
        }
    }

    pub fn with_quotients(mut self, pqs: &PartialQuotients) -> Self {
        self.partial_quotients = pqs.iter().map(|a| QuotientJson { coeffs: a.coeffs().to_vec() }).collect();
        self.degrees = pqs.degrees();
        self.leading_coefficients = pqs.leading_coefficients();
        self.big_positions = big_positions(&analytics::profile(pqs, pqs.field()));
        self
    }

    pub fn with_nu(mut self, field: PrimeField) -> Self {
        let nu = analytics::nu(field);
        self.nu = Some(NuJson { num: *nu.numer(), den: *nu.denom() });
        self
    }
}

pub fn big_positions(profile: &DegreeProfile) -> Vec<[u64; 3]> {
    profile.big_positions.iter().map(|b| [b.k as u64, b.n as u64, b.degree as u64]).collect()
}

/// `[a, b, c]` in the style of a printed Python list.
pub fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}
