//! Prime/modulus data behind the sign-definite witness points.
//!
//! For u = ±1 and a count N + 1 we pick primes p_j > Q with p_j ≡ ±1 (mod 8),
//! the least positive m_j with 2m_j ≡ 3 (mod p_j) and m_j ≡ u (mod 3), and an
//! n with 3n² ≡ m_j (mod p_j²) for every j and P² < n < 2P², P = ∏ p_j.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::numtheory::{
    crt_combine, is_prime, lift_sqrt_to_prime_square, mod_inverse, primes_pm1_mod8, sqrt_mod_prime,
    ResidueClass,
};

/// The sign u ∈ {+1, −1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(invalid(format!("sign must be +1 or -1, got {other}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One instance of the construction. Fields are public so that verification
/// can be exercised on tampered data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma31Instance {
    pub sign: Sign,
    /// Lower bound the primes must exceed.
    pub q: f64,
    /// The construction uses `extra + 1` primes.
    pub extra: usize,
    pub primes: Vec<u64>,
    pub m: Vec<u64>,
    #[serde(serialize_with = "serialize_bigint")]
    pub n: BigInt,
    /// P, the product of the primes.
    #[serde(serialize_with = "serialize_bigint")]
    pub product: BigInt,
}

impl Lemma31Instance {
    /// 5·√(extra + 1).
    pub fn default_q(extra: usize) -> f64 {
        5.0 * ((extra + 1) as f64).sqrt()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Least positive m with 2m ≡ 3 (mod p) and m ≡ u (mod 3).
fn least_m(p: u64, sign: Sign) -> Result<u64> {
    let pb = BigInt::from(p);
    let half = mod_inverse(&BigInt::from(2), &pb).ok_or_else(|| invalid(format!("2 is not invertible mod {p}")))?;
    let classes = [
        ResidueClass::new(half * 3, pb)?,
        ResidueClass::new(sign.value(), 3)?,
    ];
    let c = crt_combine(&classes)?;
    let m: u64 = c
        .residue()
        .try_into()
        .map_err(|_| Error::ConstructionBug("m does not fit in 64 bits".into()))?;
    if m == 0 {
        return Err(Error::ConstructionBug(format!("m = 0 for p = {p}")));
    }
    Ok(m)
}

/// Deterministic instance: the smallest admissible primes, the least m_j, and
/// n from the smaller square root of m_j/3 modulo each p_j², combined by CRT
/// and shifted into (P², 2P²).
pub fn construct_lemma31(sign: Sign, extra: usize, q: Option<f64>) -> Result<Lemma31Instance> {
    let q = q.unwrap_or_else(|| Lemma31Instance::default_q(extra));
    if !(q.is_finite() && q >= 5.0) {
        return Err(invalid(format!("Q must be a real >= 5, got {q}")));
    }
    let count = extra.checked_add(1).ok_or_else(|| invalid("too many primes requested"))?;
    let primes = primes_pm1_mod8(q, count)?;

    let mut m = Vec::with_capacity(count);
    let mut root_classes = Vec::with_capacity(count);
    for &p in &primes {
        let mj = least_m(p, sign)?;
        let pb = BigInt::from(p);
        let p2 = &pb * &pb;
        // 3n² ≡ m (mod p²) ⇔ n² ≡ m·3⁻¹
        let three_inv = mod_inverse(&BigInt::from(3), &p2)
            .ok_or_else(|| Error::ConstructionBug(format!("3 is not invertible mod {p}²")))?;
        let target = (BigInt::from(mj) * three_inv).mod_floor(&p2);
        let r = sqrt_mod_prime(&target, &pb).map_err(|e| Error::ConstructionBug(format!("p = {p}: {e}")))?;
        let s = lift_sqrt_to_prime_square(&r, &target, &pb)?;
        let other = &p2 - &s;
        let s = if other < s { other } else { s };
        root_classes.push(ResidueClass::new(s, p2)?);
        m.push(mj);
    }
    let combined = crt_combine(&root_classes)?;
    let product: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
    let n = combined.residue() + &product * &product;

    let instance = Lemma31Instance {
        sign,
        q,
        extra,
        primes,
        m,
        n,
        product,
    };
    let verification = verify_lemma31(&instance);
    if let Some(failed) = verification.checks.iter().find(|c| !c.passed) {
        return Err(Error::ConstructionBug(format!("constructed instance fails {} ({})", failed.name, failed.subject)));
    }
    Ok(instance)
}

/// One named condition and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// Which indices the check concerns, e.g. `j=2` or `j=1,k=3`; empty if global.
    pub subject: String,
    pub passed: bool,
}

impl Check {
    pub(crate) fn new(name: &str, subject: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.to_string(),
            subject: subject.into(),
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma31Verification {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Lemma31Verification {
    /// Whether every check with the given name passed (vacuously true if none ran).
    pub fn passed_named(&self, name: &str) -> bool {
        self.checks.iter().filter(|c| c.name == name).all(|c| c.passed)
    }
}

/// Check names reported by [`verify_lemma31`].
pub mod checks {
    pub const PRIME: &str = "prime";
    pub const PRIME_ABOVE_Q: &str = "prime-above-q";
    pub const PRIME_CLASS: &str = "prime-class-pm1-mod8";
    pub const PRIMES_ASCENDING: &str = "primes-ascending-distinct";
    pub const PRIME_COUNT: &str = "prime-count";
    pub const M_CONGRUENCES: &str = "m-congruences";
    pub const M_LEAST: &str = "m-least";
    pub const M_RANGE: &str = "m-range";
    pub const SQUARE_CONGRUENCE: &str = "square-congruence";
    pub const PRODUCT: &str = "product";
    pub const N_WINDOW: &str = "n-window";
    pub const M_COPRIME: &str = "m-coprime-3p";
    pub const N_COPRIME: &str = "n-coprime-p";
    pub const DIAGONAL_CERTIFICATE: &str = "diagonal-certificate";
    pub const PAIR_CONGRUENCE: &str = "pair-congruence";
    pub const PAIR_CERTIFICATE: &str = "pair-certificate";
}

/// Exact check of every defining condition plus the derived congruences the
/// closed-form kernel values rely on.
pub fn verify_lemma31(inst: &Lemma31Instance) -> Lemma31Verification {
    use checks::*;

    let mut out = Vec::new();
    let u = BigInt::from(inst.sign.value());
    let three = BigInt::from(3);
    let n2 = &inst.n * &inst.n;

    out.push(Check::new(PRIME_COUNT, "", inst.primes.len() == inst.extra + 1 && inst.m.len() == inst.primes.len()));
    out.push(Check::new(
        PRIMES_ASCENDING,
        "",
        inst.primes.windows(2).all(|w| w[0] < w[1]),
    ));

    for (j, (&p, &mj)) in inst.primes.iter().zip(&inst.m).enumerate() {
        let subject = format!("j={}", j + 1);
        let pb = BigInt::from(p);
        let mb = BigInt::from(mj);
        let p2 = &pb * &pb;

        out.push(Check::new(PRIME, &subject, is_prime(&BigUint::from(p))));
        out.push(Check::new(PRIME_ABOVE_Q, &subject, (p as f64) > inst.q));
        out.push(Check::new(PRIME_CLASS, &subject, matches!(p % 8, 1 | 7)));

        let congruences = (BigInt::from(2u32) * &mb - 3u32).mod_floor(&pb).is_zero() && (&mb - &u).mod_floor(&three).is_zero();
        out.push(Check::new(M_CONGRUENCES, &subject, congruences));
        // solutions form one class mod 3p, so the least positive one is at most 3p
        out.push(Check::new(M_LEAST, &subject, congruences && mj >= 1 && mj <= 3 * p));
        out.push(Check::new(M_RANGE, &subject, mj > 0 && mj < 3 * p));
        out.push(Check::new(M_COPRIME, &subject, mb.gcd(&(3u32 * &pb)).is_one()));

        let diff = 3u32 * &n2 - &mb;
        let square = diff.mod_floor(&p2).is_zero();
        out.push(Check::new(SQUARE_CONGRUENCE, &subject, square));
        // 3n² = m + (3v − u)p² for an integer v
        let certificate = square && (&diff / &p2 + &u).mod_floor(&three).is_zero();
        out.push(Check::new(DIAGONAL_CERTIFICATE, &subject, certificate));
    }

    let product: BigInt = inst.primes.iter().map(|&p| BigInt::from(p)).product();
    out.push(Check::new(PRODUCT, "", product == inst.product));
    let pp = &inst.product * &inst.product;
    out.push(Check::new(
        N_WINDOW,
        "",
        inst.product.is_positive() && pp < inst.n && inst.n < 2u32 * &pp,
    ));
    out.push(Check::new(N_COPRIME, "", inst.n.gcd(&product).is_one()));

    let two_n2_minus_1 = 2u32 * &n2 - 1u32;
    for j in 0..inst.primes.len() {
        for k in (j + 1)..inst.primes.len() {
            let subject = format!("j={},k={}", j + 1, k + 1);
            let pq = BigInt::from(inst.primes[j]) * inst.primes[k];
            let congruent = two_n2_minus_1.mod_floor(&pq).is_zero();
            out.push(Check::new(PAIR_CONGRUENCE, &subject, congruent));
            // 2n² = 1 + (1 + 2w)p_j p_k for an integer w
            out.push(Check::new(PAIR_CERTIFICATE, &subject, congruent && (&two_n2_minus_1 / &pq).is_odd()));
        }
    }

    let passed = out.iter().all(|c| c.passed);
    Lemma31Verification { checks: out, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_prime_instances() {
        let plus = construct_lemma31(Sign::Plus, 0, Some(5.0)).unwrap();
        assert_eq!(plus.primes, vec![7]);
        assert_eq!(plus.m, vec![19]);
        assert_eq!(plus.n, BigInt::from(72));
        assert_eq!(plus.product, BigInt::from(7));

        let minus = construct_lemma31(Sign::Minus, 0, Some(5.0)).unwrap();
        assert_eq!(minus.primes, vec![7]);
        assert_eq!(minus.m, vec![5]);
        assert_eq!(minus.n, BigInt::from(68));
    }

    #[test]
    fn two_prime_instance_skips_excluded_primes() {
        let inst = construct_lemma31(Sign::Plus, 1, None).unwrap();
        assert_eq!(inst.primes, vec![17, 23]);
        assert!(verify_lemma31(&inst).passed);
    }

    #[test]
    fn q_below_five_rejected() {
        assert_eq!(construct_lemma31(Sign::Plus, 0, Some(4.0)).unwrap_err().kind(), "invalid-argument");
        assert_eq!(construct_lemma31(Sign::Plus, 0, Some(f64::INFINITY)).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn tampered_n_fails_square_congruence() {
        let mut inst = construct_lemma31(Sign::Plus, 0, Some(5.0)).unwrap();
        inst.n += 1;
        let v = verify_lemma31(&inst);
        assert!(!v.passed);
        assert!(!v.passed_named(checks::SQUARE_CONGRUENCE));
        assert!(v.passed_named(checks::M_CONGRUENCES));
    }

    #[test]
    fn wrong_product_fails_window() {
        let mut inst = construct_lemma31(Sign::Plus, 0, Some(5.0)).unwrap();
        inst.product = BigInt::from(14);
        let v = verify_lemma31(&inst);
        assert!(!v.passed_named(checks::N_WINDOW));
        assert!(!v.passed_named(checks::PRODUCT));
        assert!(v.passed_named(checks::SQUARE_CONGRUENCE));
    }

    #[test]
    fn wrong_m_detected() {
        let mut inst = construct_lemma31(Sign::Plus, 0, Some(5.0)).unwrap();
        inst.m = vec![19 + 21];
        let v = verify_lemma31(&inst);
        assert!(v.passed_named(checks::M_CONGRUENCES));
        assert!(!v.passed_named(checks::M_LEAST));
        assert!(!v.passed_named(checks::M_RANGE));
    }

    #[test]
    fn sign_values() {
        assert_eq!(Sign::from_value(1).unwrap(), Sign::Plus);
        assert_eq!(Sign::from_value(-1).unwrap(), Sign::Minus);
        assert!(Sign::from_value(0).is_err());
    }
}
