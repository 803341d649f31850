//! Sign-definite witnesses for the kernel.
//!
//! At the points x_j = p_j/n of a [`Lemma31Instance`] the kernel takes the
//! closed-form values
//!
//! * K(x_j, x_j) = −(u/6 + m_j/(3p_j²)),
//! * K(x_j, x_k) = −1/(2 p_j p_k) for j ≠ k,
//!
//! and u·[K(x_j, x_k)] is negative definite with largest eigenvalue at most
//! −1/336. Bumps of log-width t around the points turn this into a
//! quadratic form on L²[0, 1] of sign −u whose overlap matrix is
//! Ψ = t·√(x_j x_k)·K(x_j, x_k).

mod bump;
mod lemma;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::kernel_exact;
use crate::rational::{Rational, RationalMatrix};
use crate::spectral::{symmetric_eigenvalues, SymmetricMatrix};

pub use bump::{
    choose_bump_scale, continuity_budget, overlap_matrix, satisfies_continuity, BumpParameters, OverlapMatrix,
    BUMP_IDENTITY_TOLERANCE, OVERLAP_TOLERANCE,
};
pub use lemma::{checks, construct_lemma31, verify_lemma31, Check, Lemma31Instance, Lemma31Verification, Sign};

/// Required upper bound on the largest eigenvalue of u·G.
pub const DEFINITENESS_BOUND: f64 = -1.0 / 336.0;

/// Slack allowed on [`DEFINITENESS_BOUND`].
pub const DEFINITENESS_SLACK: f64 = 1e-12;

/// x_j = p_j/n.
pub fn witness_points(inst: &Lemma31Instance) -> Vec<Rational> {
    inst.primes
        .iter()
        .map(|&p| Rational::new(p, inst.n.clone()).expect("n > 0"))
        .collect()
}

/// The closed-form value of K(x_j, x_k) (zero-based indices).
pub fn closed_form_entry(inst: &Lemma31Instance, j: usize, k: usize) -> Rational {
    let pj = inst.primes[j];
    if j == k {
        let u = Rational::new(inst.sign.value(), 6).expect("6");
        let tail = Rational::new(inst.m[j], 3 * u128::from(pj) * u128::from(pj)).expect("p > 0");
        -(u + tail)
    } else {
        let pk = inst.primes[k];
        Rational::new(-1, 2 * u128::from(pj) * u128::from(pk)).expect("p > 0")
    }
}

/// G(j, k) = K(x_j, x_k), evaluated directly and by the closed forms; the two
/// must agree exactly.
pub fn closed_form_kernel_values(inst: &Lemma31Instance) -> Result<RationalMatrix> {
    if inst.primes.len() != inst.m.len() || inst.primes.is_empty() {
        return Err(Error::InvalidInstance("primes and m must be non-empty and of equal length".into()));
    }
    let points = witness_points(inst);
    let dim = points.len();
    let mut entries = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for k in 0..dim {
            let direct = kernel_exact(&points[j], &points[k])?;
            let closed = closed_form_entry(inst, j, k);
            if direct != closed {
                return Err(Error::ConstructionBug(format!(
                    "K(x_{}, x_{}) = {direct} but the closed form gives {closed}",
                    j + 1,
                    k + 1
                )));
            }
            entries.push(direct);
        }
    }
    Ok(RationalMatrix::from_rows(dim, entries))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub instance: Lemma31Instance,
    pub verification: Lemma31Verification,
    pub points: Vec<Rational>,
    pub kernel_matrix: RationalMatrix,
    pub bump: BumpParameters,
    pub overlap: OverlapMatrix,
    /// Eigenvalues of u·G, descending.
    pub eigenvalues_ug: Vec<f64>,
    pub max_eig_ug: f64,
    pub bound: f64,
    /// Whether max_eig_ug ≤ bound + slack.
    pub passes: bool,
    /// Structural properties of the points and bumps.
    pub properties: Vec<Check>,
}

impl WitnessReport {
    /// `passes` together with every instance and property check.
    pub fn all_passed(&self) -> bool {
        self.passes && self.verification.passed && self.properties.iter().all(|c| c.passed)
    }
}

/// Property check names reported in [`WitnessReport::properties`].
pub mod properties {
    pub const POINT_RANGE: &str = "points-in-open-0-1/7";
    pub const DIAGONAL_SIGN: &str = "diagonal-sign";
    pub const FRACTIONAL_WINDOW: &str = "fractional-part-window";
    pub const CLOSED_FORM: &str = "closed-form-kernel-values";
    pub const BUMP_IDENTITIES: &str = "bump-identities";
    pub const CONTINUITY: &str = "bump-continuity-condition";
    pub const WIDTH_BELOW_2_OVER_P: &str = "bump-width-below-2/max-p";
    pub const SUPPORTS_DISJOINT: &str = "supports-disjoint";
    pub const SUPPORTS_INSIDE_UNIT: &str = "supports-inside-unit-interval";
    pub const UNIT_NORM: &str = "unit-norm";
    pub const OVERLAP_AGREES: &str = "overlap-box-agreement";
    pub const OVERLAP_SIGNS: &str = "overlap-sign-pattern";
}

fn property_checks(
    inst: &Lemma31Instance,
    points: &[Rational],
    g: &RationalMatrix,
    bump: &BumpParameters,
    overlap: &OverlapMatrix,
) -> Vec<Check> {
    use properties::*;

    let mut out = Vec::new();
    let seventh = Rational::new(1, 7).expect("7");
    let third = Rational::new(1, 3).expect("3");
    let window_top = Rational::new(17, 21).expect("21");
    let half = Rational::half();
    let dim = points.len();

    for (j, x) in points.iter().enumerate() {
        let subject = format!("j={}", j + 1);
        out.push(Check::new(POINT_RANGE, &subject, x.is_positive() && *x < seventh));
        let d = g.get(j, j);
        let sign_ok = match inst.sign {
            Sign::Plus => d.is_negative(),
            Sign::Minus => d.is_positive(),
        };
        out.push(Check::new(DIAGONAL_SIGN, &subject, sign_ok));

        let x = x.to_f64();
        out.push(Check::new(SUPPORTS_INSIDE_UNIT, &subject, bump.upper.exp() * x < 1.0));
        // ‖ψ_j‖² = x_j(e^Δ − e^{−δ}) / (t x_j)
        let norm = (bump.exp_gap() * x) / (bump.t * x);
        out.push(Check::new(UNIT_NORM, &subject, (norm - 1.0).abs() <= BUMP_IDENTITY_TOLERANCE));
    }

    for j in 0..dim {
        for k in 0..dim {
            let subject = format!("j={},k={}", j + 1, k + 1);
            let frac = &half - g.get(j, k);
            out.push(Check::new(FRACTIONAL_WINDOW, &subject, frac > third && frac < window_top));
            let same_sign = (overlap.get(j, k) < 0.0) == g.get(j, k).is_negative()
                && (overlap.get(j, k) > 0.0) == g.get(j, k).is_positive();
            out.push(Check::new(OVERLAP_SIGNS, &subject, same_sign));
            if j < k {
                let gap = (inst.primes[k] as f64 / inst.primes[j] as f64).ln().abs();
                out.push(Check::new(SUPPORTS_DISJOINT, &subject, gap > bump.t));
            }
        }
    }

    let max_p = inst.primes.iter().copied().max().unwrap_or(1);
    out.push(Check::new(BUMP_IDENTITIES, "", bump.identities_hold()));
    out.push(Check::new(CONTINUITY, "", satisfies_continuity(inst, bump)));
    out.push(Check::new(WIDTH_BELOW_2_OVER_P, "", bump.t <= 2.0 / max_p as f64));
    out.push(Check::new(OVERLAP_AGREES, "", overlap.agrees()));
    out
}

/// Builds the full witness for `inst` and tests λ_max(u·G) ≤ −1/336.
pub fn definiteness_check(inst: &Lemma31Instance) -> Result<WitnessReport> {
    let min_p = inst.primes.iter().copied().min().ok_or_else(|| Error::InvalidInstance("no primes".into()))?;
    let floor = 5.0 * (inst.extra as f64).sqrt().max(1.0);
    if !(min_p as f64 > floor) {
        return Err(Error::InvalidInstance(format!(
            "smallest prime {min_p} does not exceed 5·max(1, √{}) = {floor}",
            inst.extra
        )));
    }
    let verification = verify_lemma31(inst);
    if !verification.passed {
        let failed: Vec<String> = verification
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} {}", c.name, c.subject))
            .collect();
        return Err(Error::InvalidInstance(format!("failed checks: {}", failed.join(", "))));
    }

    let g = closed_form_kernel_values(inst)?;
    let points = witness_points(inst);
    let bump = choose_bump_scale(inst)?;
    let overlap = overlap_matrix(inst, &bump)?;

    let u = Rational::from(inst.sign.value());
    let ug = g.scaled(&u);
    let dim = ug.dim();
    let ug = SymmetricMatrix::from_data(dim, ug.to_f64())?;
    let eigenvalues_ug = symmetric_eigenvalues(&ug, 1e-15)?;
    let max_eig_ug = eigenvalues_ug.first().copied().unwrap_or(f64::NEG_INFINITY);
    let passes = max_eig_ug <= DEFINITENESS_BOUND + DEFINITENESS_SLACK;

    let properties = property_checks(inst, &points, &g, &bump, &overlap);
    Ok(WitnessReport {
        instance: inst.clone(),
        verification,
        points,
        kernel_matrix: g,
        bump,
        overlap,
        eigenvalues_ug,
        max_eig_ug,
        bound: DEFINITENESS_BOUND,
        passes,
        properties,
    })
}
