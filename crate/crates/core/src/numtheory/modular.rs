//! Quadratic residues, modular square roots and the Chinese Remainder Theorem
//! over unbounded integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// The class `residue mod modulus`, kept reduced: 0 ≤ residue < modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    residue: BigInt,
    modulus: BigInt,
}

impl ResidueClass {
    /// Reduces `residue` into `[0, modulus)`.
    pub fn new(residue: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if !modulus.is_positive() {
            return Err(invalid(format!("modulus must be positive, got {modulus}")));
        }
        let residue = residue.into().mod_floor(&modulus);
        Ok(Self { residue, modulus })
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn contains(&self, value: &BigInt) -> bool {
        value.mod_floor(&self.modulus) == self.residue
    }
}

impl Serialize for ResidueClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ResidueClass", 2)?;
        st.serialize_field("residue", &self.residue.to_string())?;
        st.serialize_field("modulus", &self.modulus.to_string())?;
        st.end()
    }
}

fn check_odd_prime_modulus(p: &BigInt) -> Result<()> {
    if *p < BigInt::from(3) || p.is_even() {
        return Err(invalid(format!("modulus must be an odd prime, got {p}")));
    }
    Ok(())
}

/// Multiplicative inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = a.mod_floor(m).extended_gcd(m);
    if ext.gcd.is_one() {
        Some(ext.x.mod_floor(m))
    } else {
        None
    }
}

/// Legendre symbol (a/p) by Euler's criterion a^((p−1)/2) mod p.
pub fn legendre_symbol(a: &BigInt, p: &BigInt) -> Result<i8> {
    check_odd_prime_modulus(p)?;
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u32) >> 1;
    let r = a.modpow(&e, p);
    if r.is_one() {
        Ok(1)
    } else if r == p - 1u32 {
        Ok(-1)
    } else {
        // Euler's criterion only yields ±1 for prime p.
        Err(invalid(format!("{p} is not prime")))
    }
}

/// Least non-negative square root of `a` modulo the odd prime `p` (Tonelli–Shanks).
///
/// Of the two roots r and p − r the smaller one is returned, so the result
/// never exceeds (p − 1)/2.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Result<BigInt> {
    match legendre_symbol(a, p)? {
        0 => return Ok(BigInt::zero()),
        -1 => {
            return Err(Error::NoSquareRoot {
                a: a.to_string(),
                p: p.to_string(),
            })
        }
        _ => {}
    }
    let a = a.mod_floor(p);
    let one = BigInt::one();
    let pm1: BigInt = p - 1u32;

    // p − 1 = q · 2^s with q odd
    let s = pm1.trailing_zeros().expect("p - 1 is non-zero");
    let q = &pm1 >> s;

    let root = if s == 1 {
        a.modpow(&((p + 1u32) >> 2), p)
    } else {
        let mut z = BigInt::from(2);
        while legendre_symbol(&z, p)? != -1 {
            z += 1u32;
        }
        let mut m = s;
        let mut c = z.modpow(&q, p);
        let mut t = a.modpow(&q, p);
        let mut r = a.modpow(&((&q + 1u32) >> 1), p);
        while !t.is_one() {
            let mut i = 0u64;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = (&t2 * &t2).mod_floor(p);
                i += 1;
                if i == m {
                    return Err(invalid(format!("{p} is not prime")));
                }
            }
            let b = c.modpow(&(&one << (m - i - 1)), p);
            r = (r * &b).mod_floor(p);
            c = (&b * &b).mod_floor(p);
            t = (t * &c).mod_floor(p);
            m = i;
        }
        r
    };
    debug_assert_eq!((&root * &root).mod_floor(p), a);
    let other = p - &root;
    Ok(if other < root { other } else { root })
}

/// One Hensel step: from r² ≡ a (mod p) to s² ≡ a (mod p²) with s ≡ r (mod p).
///
/// The result is normalized to 0 < s < p².
pub fn lift_sqrt_to_prime_square(r: &BigInt, a: &BigInt, p: &BigInt) -> Result<BigInt> {
    check_odd_prime_modulus(p)?;
    if a.mod_floor(p).is_zero() {
        return Err(Error::CannotLift {
            a: a.to_string(),
            p: p.to_string(),
        });
    }
    if !(r * r - a).mod_floor(p).is_zero() {
        return Err(invalid(format!("{r} is not a square root of {a} modulo {p}")));
    }
    let p2 = p * p;
    let two_r_inv = mod_inverse(&(r * 2u32), p).expect("2r is a unit modulo p when p does not divide a");
    // (r² − a)/p is exact; the correction is −((r² − a)/p)·(2r)⁻¹ mod p.
    let k = ((r * r - a) / p).mod_floor(p);
    let s = (r - k * two_r_inv * p).mod_floor(&p2);
    debug_assert!((&s * &s - a).mod_floor(&p2).is_zero());
    Ok(s)
}

/// Combines pairwise-coprime residue classes into the class modulo their product.
///
/// An empty input yields the trivial class 0 mod 1.
pub fn crt_combine(classes: &[ResidueClass]) -> Result<ResidueClass> {
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if !a.modulus.gcd(&b.modulus).is_one() {
                return Err(Error::NonCoprimeModuli(a.modulus.to_string(), b.modulus.to_string()));
            }
        }
    }
    let mut acc = ResidueClass::new(0, 1)?;
    for c in classes {
        // x = acc.r + acc.m · k with acc.m · k ≡ c.r − acc.r (mod c.m)
        let inv = mod_inverse(&acc.modulus, &c.modulus).expect("moduli checked coprime");
        let k = ((&c.residue - &acc.residue) * inv).mod_floor(&c.modulus);
        let modulus = &acc.modulus * &c.modulus;
        let residue = &acc.residue + &acc.modulus * k;
        acc = ResidueClass::new(residue, modulus)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(&b(1), &b(7)).unwrap(), 1);
        assert_eq!(legendre_symbol(&b(2), &b(7)).unwrap(), 1);
        assert_eq!(legendre_symbol(&b(3), &b(7)).unwrap(), -1);
        assert_eq!(legendre_symbol(&b(14), &b(7)).unwrap(), 0);
        assert_eq!(legendre_symbol(&b(-3), &b(7)).unwrap(), 1);
    }

    #[test]
    fn legendre_rejects_bad_modulus() {
        for p in [0, 1, 2, 8, -7] {
            assert_eq!(legendre_symbol(&b(1), &b(p)).unwrap_err().kind(), "invalid-argument");
        }
    }

    #[test]
    fn legendre_of_two_matches_mod8_rule() {
        for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 97, 101, 103] {
            let expected = if matches!(p % 8, 1 | 7) { 1 } else { -1 };
            assert_eq!(legendre_symbol(&b(2), &BigInt::from(p)).unwrap(), expected, "p={p}");
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod_prime(&b(4), &b(7)).unwrap(), b(2));
        assert_eq!(sqrt_mod_prime(&b(2), &b(7)).unwrap(), b(3));
        assert_eq!(sqrt_mod_prime(&b(39), &b(7)).unwrap(), b(2));
        assert_eq!(sqrt_mod_prime(&b(0), &b(7)).unwrap(), b(0));
        assert_eq!(sqrt_mod_prime(&b(3), &b(7)).unwrap_err().kind(), "no-square-root");
    }

    #[test]
    fn sqrt_handles_high_two_adicity() {
        // 97 − 1 = 3 · 2^5, 257 − 1 = 2^8
        for p in [17i64, 41, 97, 113, 257, 65537] {
            let p = b(p);
            for a in 1..60 {
                let a = b(a);
                if legendre_symbol(&a, &p).unwrap() == 1 {
                    let r = sqrt_mod_prime(&a, &p).unwrap();
                    assert_eq!((&r * &r).mod_floor(&p), a.mod_floor(&p));
                    assert!(r <= (&p - 1) / 2);
                }
            }
        }
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_sqrt_to_prime_square(&b(1), &b(1), &b(7)).unwrap(), b(1));
        assert_eq!(lift_sqrt_to_prime_square(&b(2), &b(39), &b(7)).unwrap(), b(23));
        assert_eq!(lift_sqrt_to_prime_square(&b(3), &b(2), &b(7)).unwrap(), b(10));
        assert_eq!(lift_sqrt_to_prime_square(&b(0), &b(49), &b(7)).unwrap_err().kind(), "cannot-lift");
        assert_eq!(lift_sqrt_to_prime_square(&b(3), &b(4), &b(7)).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn crt_examples() {
        let c = |r: i64, m: i64| ResidueClass::new(r, m).unwrap();
        assert_eq!(crt_combine(&[c(0, 7)]).unwrap(), c(0, 7));
        assert_eq!(crt_combine(&[c(2, 3), c(3, 5)]).unwrap(), c(8, 15));
        assert_eq!(crt_combine(&[c(5, 7), c(1, 3)]).unwrap(), c(19, 21));
        assert_eq!(crt_combine(&[c(1, 6), c(1, 4)]).unwrap_err().kind(), "non-coprime-moduli");
        assert_eq!(crt_combine(&[]).unwrap(), c(0, 1));
    }

    #[test]
    fn crt_matches_exhaustive_scan() {
        let classes = [(2i64, 3i64), (3, 5), (6, 7)];
        let expected = (0..105)
            .find(|x| classes.iter().all(|&(r, m)| x % m == r))
            .unwrap();
        let rc: Vec<_> = classes.iter().map(|&(r, m)| ResidueClass::new(r, m).unwrap()).collect();
        assert_eq!(crt_combine(&rc).unwrap().residue(), &b(expected));
    }

    #[test]
    fn residue_class_normalizes() {
        let c = ResidueClass::new(-1, 7).unwrap();
        assert_eq!(c.residue(), &b(6));
        assert!(ResidueClass::new(1, 0).is_err());
    }

    const SMALL_PRIMES: &[i64] = &[3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 97, 193, 7681];

    proptest! {
        #[test]
        fn legendre_depends_only_on_residue(a in -100_000i64..100_000, idx in 0..SMALL_PRIMES.len()) {
            let p = b(SMALL_PRIMES[idx]);
            let a = b(a);
            prop_assert_eq!(legendre_symbol(&a, &p).unwrap(), legendre_symbol(&a.mod_floor(&p), &p).unwrap());
        }

        #[test]
        fn roots_square_back_and_lift(a in 1i64..1_000_000, idx in 0..SMALL_PRIMES.len()) {
            let p = b(SMALL_PRIMES[idx]);
            let a = b(a);
            if legendre_symbol(&a, &p).unwrap() == 1 {
                let r = sqrt_mod_prime(&a, &p).unwrap();
                prop_assert_eq!((&r * &r).mod_floor(&p), a.mod_floor(&p));
                let s = lift_sqrt_to_prime_square(&r, &a, &p).unwrap();
                let p2 = &p * &p;
                prop_assert_eq!((&s * &s).mod_floor(&p2), a.mod_floor(&p2));
                prop_assert_eq!(s.mod_floor(&p), r);
            }
        }

        #[test]
        fn crt_output_reduces_to_inputs(r1 in 0i64..1000, r2 in 0i64..1000, r3 in 0i64..1000) {
            let mods = [1009i64, 1013, 1024];
            let classes: Vec<_> = [r1, r2, r3].iter().zip(mods).map(|(&r, m)| ResidueClass::new(r, m).unwrap()).collect();
            let c = crt_combine(&classes).unwrap();
            prop_assert_eq!(c.modulus(), &b(mods.iter().product()));
            for input in &classes {
                prop_assert_eq!(c.residue().mod_floor(input.modulus()), input.residue().clone());
            }
        }
    }
}
