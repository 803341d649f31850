//! Independent reference implementations used by the integration tests.
//! Everything here is brute force on purpose.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// μ by trial division.
pub fn mu_trial(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn is_prime_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// K(a/b, c/d) as an exact (numerator, denominator) pair with i128 arithmetic,
/// for small inputs only.
pub fn kernel_small(a: i128, b: i128, c: i128, d: i128) -> (i128, i128) {
    if a == 0 || c == 0 {
        return (0, 1);
    }
    // 1/(xy) = bd/(ac); frac = (bd mod ac)/(ac); K = (ac - 2(bd mod ac)) / (2ac)
    let num = b * d;
    let den = a * c;
    let r = num.rem_euclid(den);
    let k_num = den - 2 * r;
    let k_den = 2 * den;
    let g = k_num.gcd(&k_den);
    (k_num / g, k_den / g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleWitness {
    pub primes: Vec<u64>,
    pub m: Vec<u64>,
    pub n: u64,
}

/// Scans for the witness data directly from the defining conditions:
/// the first `count` primes above `q` that are ±1 mod 8, the least positive
/// m_j with 2m_j ≡ 3 (mod p_j) and m_j ≡ u (mod 3), and the least n in
/// (P², 2P²) with 3n² ≡ m_j (mod p_j²) whose residue mod each p_j² is the
/// smaller of the two square roots.
pub fn brute_force_witness(u: i64, count: usize, q: f64) -> Option<OracleWitness> {
    let mut primes = Vec::new();
    let mut p = q.floor() as u64 + 1;
    while primes.len() < count {
        if is_prime_trial(p) && (p % 8 == 1 || p % 8 == 7) {
            primes.push(p);
        }
        p += 1;
    }
    let m: Vec<u64> = primes
        .iter()
        .map(|&p| {
            (1..)
                .find(|&m: &u64| (2 * m) % p == 3 % p && (m as i64 - u).rem_euclid(3) == 0)
                .unwrap()
        })
        .collect();
    let big_p: u64 = primes.iter().product();
    let p2 = big_p.checked_mul(big_p)?;
    let n = (p2 + 1..2 * p2).find(|&n| {
        primes.iter().zip(&m).all(|(&p, &mj)| {
            let q = (p * p) as u128;
            let r = n as u128 % q;
            (3 * r * r) % q == mj as u128 % q && r <= (q - 1) / 2
        })
    })?;
    Some(OracleWitness { primes, m, n })
}

/// Checks the defining congruences of a witness with plain big-integer
/// arithmetic.
pub fn witness_conditions_hold(primes: &[u64], m: &[u64], n: &BigInt, u: i64) -> bool {
    let big_p: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
    let p2 = &big_p * &big_p;
    if !(n > &p2 && n < &(&p2 * 2)) {
        return false;
    }
    for (j, (&p, &mj)) in primes.iter().zip(m).enumerate() {
        let pb = BigInt::from(p);
        let mb = BigInt::from(mj);
        let least = (1..mj).all(|c| (2 * c) % p != 3 % p || (c as i64 - u).rem_euclid(3) != 0);
        let ok = is_prime_trial(p)
            && (p % 8 == 1 || p % 8 == 7)
            && (2 * mj) % p == 3 % p
            && (mj as i64 - u).rem_euclid(3) == 0
            && least
            && mj > 0
            && mj < 3 * p
            && (BigInt::from(3) * n * n - &mb).mod_floor(&(&pb * &pb)).is_zero()
            && mb.gcd(&(BigInt::from(3) * &pb)).is_one()
            && n.gcd(&pb).is_one();
        if !ok {
            return false;
        }
        for &pk in &primes[j + 1..] {
            let prod = BigInt::from(p) * BigInt::from(pk);
            if !(BigInt::from(2) * n * n - 1u32).mod_floor(&prod).is_zero() {
                return false;
            }
        }
    }
    true
}
