//! Widths of the logarithmic bump intervals around the witness points and the
//! overlap integrals Ψ(j, k) = ∫∫ K(x, y) ψ_j(x) ψ_k(y) dx dy.
//!
//! ψ_j is 1/√(t x_j) on e^{−δ} < x/x_j < e^{Δ}, with Δ = ln(t/(1 − e^{−t}))
//! and δ = t − Δ, so that e^{Δ} − e^{−δ} = t = Δ + δ.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rational::{Rational, RationalMatrix};

use super::closed_form_kernel_values;
use super::lemma::Lemma31Instance;

/// Relative tolerance for e^{Δ} − e^{−δ} = t = Δ + δ in double precision.
pub const BUMP_IDENTITY_TOLERANCE: f64 = 1e-12;

/// Relative tolerance between closed-form and box-integral overlaps.
pub const OVERLAP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpParameters {
    /// Total log-width t = Δ + δ.
    pub t: f64,
    /// Δ, the log-width above each point.
    pub upper: f64,
    /// δ, the log-width below each point.
    pub lower: f64,
}

/// (1 − e^{−t})/t − 1, accurate for tiny t.
fn shrink_minus_one(t: f64) -> f64 {
    if t < 0.5 {
        // Σ_{k≥1} (−t)^k/(k+1)!
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..=30 {
            term *= -t / (k + 1) as f64;
            sum += term;
        }
        sum
    } else {
        -(-t).exp_m1() / t - 1.0
    }
}

impl BumpParameters {
    pub fn from_width(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("bump width must be a positive real, got {t}")));
        }
        let upper = -shrink_minus_one(t).ln_1p();
        let lower = t - upper;
        Ok(Self { t, upper, lower })
    }

    /// e^{Δ} − e^{−δ}, evaluated without cancellation.
    pub fn exp_gap(&self) -> f64 {
        self.upper.exp_m1() - (-self.lower).exp_m1()
    }

    /// Relative deviations of e^{Δ} − e^{−δ} and Δ + δ from t.
    pub fn identity_gaps(&self) -> (f64, f64) {
        (
            (self.exp_gap() - self.t).abs() / self.t,
            (self.upper + self.lower - self.t).abs() / self.t,
        )
    }

    pub fn identities_hold(&self) -> bool {
        let (a, b) = self.identity_gaps();
        a <= BUMP_IDENTITY_TOLERANCE
            && b <= BUMP_IDENTITY_TOLERANCE
            && self.upper > 0.0
            && self.lower > 0.0
            && self.upper < self.t
            && self.lower < self.t
    }
}

/// 28/(3n²), the largest admissible e^{2t} − 1 for the instance.
pub fn continuity_budget(inst: &Lemma31Instance) -> f64 {
    let n2 = &inst.n * &inst.n;
    Rational::new(28, 3u32 * n2).expect("n > 0").to_f64()
}

/// Whether e^{2t} − 1 ≤ 28/(3n²), up to a few ulps.
pub fn satisfies_continuity(inst: &Lemma31Instance, bump: &BumpParameters) -> bool {
    (2.0 * bump.t).exp_m1() <= continuity_budget(inst) * (1.0 + 4.0 * f64::EPSILON)
}

/// The widest bump width allowed: e^{2t} − 1 = 28/(3n²).
pub fn choose_bump_scale(inst: &Lemma31Instance) -> Result<BumpParameters> {
    let budget = continuity_budget(inst);
    let t = 0.5 * budget.ln_1p();
    let max_p = inst.primes.iter().copied().max().ok_or_else(|| invalid("instance has no primes"))?;
    if t > 2.0 / max_p as f64 {
        return Err(Error::ConstructionBug(format!(
            "bump width {t:e} exceeds 2/max p = {:e}",
            2.0 / max_p as f64
        )));
    }
    BumpParameters::from_width(t)
}

/// Ψ from the closed form and from the box integrals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapMatrix {
    pub dim: usize,
    /// t·√(x_j x_k)·K(x_j, x_k), row-major.
    pub closed_form: Vec<f64>,
    /// Same entries integrated over the boxes, row-major.
    pub box_integral: Vec<f64>,
    pub max_relative_gap: f64,
}

impl OverlapMatrix {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.closed_form[j * self.dim + k]
    }

    pub fn agrees(&self) -> bool {
        self.max_relative_gap <= OVERLAP_TOLERANCE
    }
}

/// Ψ(j, k) = t·√(x_j x_k)·K(x_j, x_k), checked against a direct evaluation of
/// the box integral.
///
/// The check uses that K is constant on each box (from the continuity
/// condition) and integrates 1/(xy) by its logarithmic antiderivative:
///
/// Ψ(j, k) = [(K + 1/(x_j x_k))·|box| − (Δ + δ)²] / (t√(x_j x_k)),
/// |box| = x_j x_k (e^{Δ} − e^{−δ})².
///
/// The two bracketed terms agree to about 4·log₂n bits (t is of order n⁻²
/// and 1/(x_j x_k) of order n²), so this route runs in binary floating point
/// with 4·log₂n + 128 bits.
pub fn overlap_matrix(inst: &Lemma31Instance, bump: &BumpParameters) -> Result<OverlapMatrix> {
    if !satisfies_continuity(inst, bump) {
        return Err(Error::PreconditionViolation(format!(
            "bump width {:e} violates e^(2t) - 1 <= 28/(3n^2) = {:e}",
            bump.t,
            continuity_budget(inst)
        )));
    }
    let kernel = closed_form_kernel_values(inst)?;
    let dim = kernel.dim();
    let n = bigint_to_f64(&inst.n);

    let mut closed_form = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for k in 0..dim {
            let root = ((inst.primes[j] as f64) * (inst.primes[k] as f64)).sqrt() / n;
            closed_form.push(bump.t * root * kernel.get(j, k).to_f64());
        }
    }

    let mut hp = HighPrecision::new(4 * inst.n.bits() as usize + 128);
    let box_integral = hp.box_overlaps(inst, &kernel, bump.t)?;

    let max_relative_gap = closed_form
        .iter()
        .zip(&box_integral)
        .map(|(a, b)| (a - b).abs() / a.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);

    Ok(OverlapMatrix {
        dim,
        closed_form,
        box_integral,
        max_relative_gap,
    })
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY)
}

struct HighPrecision {
    bits: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl HighPrecision {
    fn new(bits: usize) -> Self {
        Self {
            bits: bits.next_multiple_of(64),
            rm: RoundingMode::ToEven,
            cc: Consts::new().expect("constant cache"),
        }
    }

    fn integer(&mut self, v: &BigInt) -> BigFloat {
        BigFloat::parse(&v.to_string(), Radix::Dec, self.bits, self.rm, &mut self.cc)
    }

    fn rational(&mut self, v: &Rational) -> BigFloat {
        let num = self.integer(v.numer());
        let den = self.integer(v.denom());
        num.div(&den, self.bits, self.rm)
    }

    fn round_to_f64(&mut self, v: &BigFloat) -> Result<f64> {
        let s = v
            .format(Radix::Dec, self.rm, &mut self.cc)
            .map_err(|e| Error::ConstructionBug(format!("formatting high-precision value: {e:?}")))?;
        s.parse::<f64>()
            .map_err(|e| Error::ConstructionBug(format!("parsing high-precision value {s:?}: {e}")))
    }

    fn box_overlaps(&mut self, inst: &Lemma31Instance, kernel: &RationalMatrix, t: f64) -> Result<Vec<f64>> {
        let (p, rm) = (self.bits, self.rm);
        let one = BigFloat::from_u64(1, p);
        let t = BigFloat::from_f64(t, p);
        // Δ = ln(t/(1 − e^{−t})), δ = t − Δ
        let shrink = one.sub(&t.neg().exp(p, rm, &mut self.cc), p, rm);
        let upper = t.div(&shrink, p, rm).ln(p, rm, &mut self.cc);
        let lower = t.sub(&upper, p, rm);
        // ∫ dx over (x_j e^{−δ}, x_j e^{Δ}) is x_j·width; ∫ dx/x is log_width
        let width = upper
            .exp(p, rm, &mut self.cc)
            .sub(&lower.neg().exp(p, rm, &mut self.cc), p, rm);
        let log_width = upper.add(&lower, p, rm);
        let log_area = log_width.mul(&log_width, p, rm);
        let n = self.integer(&inst.n);
        let n2 = n.mul(&n, p, rm);

        let dim = inst.primes.len();
        let mut out = Vec::with_capacity(dim * dim);
        for j in 0..dim {
            for k in 0..dim {
                let pp = BigFloat::from_u128(inst.primes[j] as u128 * inst.primes[k] as u128, p);
                let xx = pp.div(&n2, p, rm);
                let area = xx.mul(&width, p, rm).mul(&width, p, rm);
                let level = self.rational(kernel.get(j, k)).add(&xx.reciprocal(p, rm), p, rm);
                let integral = level.mul(&area, p, rm).sub(&log_area, p, rm);
                let norm = t.mul(&xx.sqrt(p, rm), p, rm);
                let psi = integral.div(&norm, p, rm);
                out.push(self.round_to_f64(&psi)?);
            }
        }
        Ok(out)
    }
}
