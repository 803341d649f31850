//! Primality testing and prime search in the classes ±1 mod 8.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// Miller–Rabin with these bases is exact for every n < 3.317·10^24.
const DETERMINISTIC_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Upper end of the range where [`DETERMINISTIC_BASES`] certify primality.
const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Number of candidates `primes_pm1_mod8` examines before giving up.
pub const PRIME_SEARCH_CAP: u64 = 1 << 28;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for machine-size integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in DETERMINISTIC_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in DETERMINISTIC_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_strong_probable_prime(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality of an arbitrary non-negative integer.
///
/// Below 3.3·10^24 the answer is unconditional (fixed Miller–Rabin bases).
/// Above that every base up to 2·ln²n is tried, which is exact under the
/// generalized Riemann hypothesis; witness construction never gets there.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in DETERMINISTIC_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    let last_base = if n.to_u128().is_some_and(|v| v < DETERMINISTIC_LIMIT) {
        41
    } else {
        let ln = n.bits() as f64 * std::f64::consts::LN_2;
        (2.0 * ln * ln).ceil() as u64
    };
    (2..=last_base).all(|a| is_strong_probable_prime(n, &d, s, &BigUint::from(a)))
}

/// The `count` smallest primes p > q with p ≡ ±1 (mod 8), ascending.
pub fn primes_pm1_mod8(q: f64, count: usize) -> Result<Vec<u64>> {
    if !(q.is_finite() && q >= 5.0) {
        return Err(invalid(format!("prime search bound must be a real >= 5, got {q}")));
    }
    if q >= (u64::MAX / 2) as f64 {
        return Err(invalid(format!("prime search bound {q} is beyond the supported range")));
    }
    let mut out = Vec::with_capacity(count);
    // smallest integer strictly above q
    let mut candidate = q.floor() as u64 + 1;
    let mut examined = 0u64;
    while out.len() < count {
        if examined >= PRIME_SEARCH_CAP {
            return Err(Error::ResourceLimit(format!(
                "examined {examined} candidates above {q} and found only {} of {count} primes",
                out.len()
            )));
        }
        if matches!(candidate % 8, 1 | 7) && is_prime_u64(candidate) {
            out.push(candidate);
        }
        candidate += 1;
        examined += 1;
    }
    Ok(out)
}
