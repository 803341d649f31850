//! Exact checks of two identities for the Mertens function M:
//!
//! * the grid identity, for every N ≥ 1,
//!   M(N²)/N² + Σ_{m,n≤N} K(m/N, n/N) μ(m)μ(n)/N²
//!   = M(N)(M(N) + 4)/(2N²) − (Σ_{m≤N} μ(m)/m)²;
//! * Mertens' formula, for every n ≥ 1,
//!   M(n) = 2M(√n) − Σ_{r,s≤√n} μ(r)μ(s)⌊n/(rs)⌋.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kernel::{lcm_upto, mobius_quadratic_form};
use crate::numtheory::MobiusTable;
use crate::rational::Rational;

/// Default largest N accepted for grid-identity scans.
pub const DEFAULT_EQ12_CAP: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub parameter: u64,
    pub lhs: Rational,
    pub rhs: Rational,
    pub residual: Rational,
}

impl IdentityReport {
    fn new(parameter: u64, lhs: Rational, rhs: Rational) -> Self {
        let residual = &lhs - &rhs;
        Self {
            parameter,
            lhs,
            rhs,
            residual,
        }
    }

    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityKind {
    /// The grid quadratic-form identity.
    Eq12,
    /// Mertens' 1897 formula.
    Mertens1897,
}

impl IdentityKind {
    /// Table size needed to check parameter `p`.
    pub fn table_limit_for(self, p: u64) -> Option<u64> {
        match self {
            IdentityKind::Eq12 => p.checked_mul(p),
            IdentityKind::Mertens1897 => Some(p),
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityKind::Eq12 => "eq12",
            IdentityKind::Mertens1897 => "mertens1897",
        })
    }
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq12" => Ok(IdentityKind::Eq12),
            "mertens1897" => Ok(IdentityKind::Mertens1897),
            other => Err(invalid(format!("unknown identity {other:?} (expected eq12 or mertens1897)"))),
        }
    }
}

/// Both sides of the grid identity at `n`, exactly.
pub fn check_identity_12(n: u64, table: &MobiusTable) -> Result<IdentityReport> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let n2 = n.checked_mul(n).ok_or_else(|| invalid(format!("N = {n} is too large")))?;
    table.require(n2)?;
    let n2_rat = Rational::from_integer(n2);

    let lhs = Rational::from(table.mertens_at(n2)) / &n2_rat + mobius_quadratic_form(n, table)?;

    let m = table.mertens_at(n);
    let l = lcm_upto(n);
    let harmonic_num: BigInt = (1..=n)
        .filter(|&k| table.mu(k) != 0)
        .map(|k| (&l / k) * i32::from(table.mu(k)))
        .sum();
    let harmonic = Rational::new(harmonic_num, l)?;
    let rhs = Rational::from(m * (m + 4)) / (n2_rat * Rational::from(2)) - harmonic.square();

    Ok(IdentityReport::new(n, lhs, rhs))
}

/// Both sides of Mertens' formula at `n`.
pub fn check_mertens_1897(n: u64, table: &MobiusTable) -> Result<IdentityReport> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    table.require(n)?;
    let root = n.sqrt();
    debug_assert!(root * root <= n && (root + 1) * (root + 1) > n);

    let mut double_sum: i128 = 0;
    for r in 1..=root {
        let mu_r = table.mu(r);
        if mu_r == 0 {
            continue;
        }
        let mut inner: i128 = 0;
        for s in 1..=root {
            let mu_s = table.mu(s);
            if mu_s != 0 {
                inner += i128::from(mu_s) * i128::from(n / (r * s));
            }
        }
        double_sum += i128::from(mu_r) * inner;
    }
    let lhs = Rational::from(table.mertens_at(n));
    let rhs = Rational::from_integer(2 * i128::from(table.mertens_at(root)) - double_sum);
    Ok(IdentityReport::new(n, lhs, rhs))
}

/// Reports for every parameter in `range`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityScan {
    pub identity: IdentityKind,
    pub reports: Vec<IdentityReport>,
    pub all_zero: bool,
}

pub fn scan_identities(
    which: IdentityKind,
    range: RangeInclusive<u64>,
    table: &MobiusTable,
) -> Result<IdentityScan> {
    if !range.is_empty() {
        if *range.start() == 0 {
            return Err(invalid("identity parameters start at 1"));
        }
        let needed = which
            .table_limit_for(*range.end())
            .ok_or_else(|| invalid("range end too large"))?;
        table.require(needed)?;
    }
    let check = match which {
        IdentityKind::Eq12 => check_identity_12,
        IdentityKind::Mertens1897 => check_mertens_1897,
    };
    let reports = range
        .into_par_iter()
        .map(|p| check(p, table))
        .collect::<Result<Vec<_>>>()?;
    let all_zero = reports.iter().all(IdentityReport::holds);
    Ok(IdentityScan {
        identity: which,
        reports,
        all_zero,
    })
}
