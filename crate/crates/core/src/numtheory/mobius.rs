//! Möbius values and Mertens prefix sums.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Sieved values of μ(1..=limit) with the running Mertens sums.
///
/// Slot 0 of both vectors is a zero sentinel so that `mu[k]` is μ(k).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MobiusTable {
    limit: u64,
    #[serde(skip)]
    mu: Vec<i8>,
    #[serde(skip)]
    mertens_prefix: Vec<i64>,
}

/// Linear sieve for μ(1..=limit).
pub fn sieve_mobius(limit: u64) -> Result<MobiusTable> {
    if limit == 0 {
        return Err(invalid("sieve limit must be at least 1"));
    }
    let len = usize::try_from(limit)
        .ok()
        .and_then(|l| l.checked_add(1))
        .ok_or_else(|| invalid("sieve limit exceeds addressable memory"))?;

    let mut mu = vec![0i8; len];
    let mut composite = vec![false; len];
    let mut primes: Vec<usize> = Vec::new();
    mu[1] = 1;
    for i in 2..len {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let Some(ip) = i.checked_mul(p).filter(|&ip| ip < len) else {
                break;
            };
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(MobiusTable::from_values(mu[1..].to_vec()))
}

impl MobiusTable {
    /// Builds a table from μ(1), μ(2), ... without validating the values.
    ///
    /// Prefix sums are recomputed from `values`, so a deliberately corrupted
    /// input yields a self-consistent (but wrong) table. Used to probe the
    /// sensitivity of the identity checks.
    pub fn from_values(values: Vec<i8>) -> Self {
        let limit = values.len() as u64;
        let mut mu = Vec::with_capacity(values.len() + 1);
        mu.push(0);
        mu.extend(values);
        let mut mertens_prefix = Vec::with_capacity(mu.len());
        let mut acc = 0i64;
        for &v in &mu {
            acc += i64::from(v);
            mertens_prefix.push(acc);
        }
        Self {
            limit,
            mu,
            mertens_prefix,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// μ(k) for 1 ≤ k ≤ limit.
    ///
    /// # Panics
    /// If `k` is zero or above the limit.
    pub fn mu(&self, k: u64) -> i8 {
        assert!(k >= 1 && k <= self.limit, "mu({k}) outside table 1..={}", self.limit);
        self.mu[k as usize]
    }

    /// M(k) = μ(1) + ... + μ(k); M(0) = 0.
    ///
    /// # Panics
    /// If `k` is above the limit.
    pub fn mertens_at(&self, k: u64) -> i64 {
        assert!(k <= self.limit, "M({k}) outside table 0..={}", self.limit);
        self.mertens_prefix[k as usize]
    }

    /// μ(1..=limit) as a slice.
    pub fn mu_values(&self) -> &[i8] {
        &self.mu[1..]
    }

    /// M(1..=limit) as a slice.
    pub fn mertens_values(&self) -> &[i64] {
        &self.mertens_prefix[1..]
    }

    pub(crate) fn require(&self, needed: u64) -> Result<()> {
        if needed > self.limit {
            Err(Error::TableTooSmall {
                needed,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// The Mertens function M(x) = Σ_{m ≤ x} μ(m) at a real argument.
///
/// M(x) = 0 for x < 1.
pub fn mertens(x: f64, table: &MobiusTable) -> Result<i64> {
    if !x.is_finite() || x < 0.0 {
        return Err(invalid(format!("Mertens argument must be a non-negative real, got {x}")));
    }
    let floor = x.floor();
    if floor > table.limit as f64 {
        return Err(Error::TableTooSmall {
            needed: if floor >= u64::MAX as f64 { u64::MAX } else { floor as u64 },
            limit: table.limit,
        });
    }
    Ok(table.mertens_at(floor as u64))
}
