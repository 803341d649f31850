//! Grid discretization of the integral operator f ↦ ∫₀¹ K(·, y) f(y) dy and
//! its eigenvalues.
//!
//! With uniform weights 1/N on the points m/N the operator becomes the matrix
//! A_N(m, n) = K(m/N, n/N)/N. An eigenvalue e of A_N approximates 1/λ for a
//! kernel eigenvalue λ (the convention φ = λ∫Kφ), so kernel estimates are the
//! reciprocals 1/e. They are indicative only: no convergence rate is known
//! for this discontinuous kernel.

mod jacobi;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::kernel::{grid_kernel_parts, riemann_l2_sum, MAX_GRID};
use crate::rational::Rational;

pub use jacobi::{symmetric_eigenvalues, MAX_SWEEPS, SYMMETRY_TOLERANCE};

/// Default cut-off below which an eigenvalue counts as numerically zero.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-9;

/// Default relative off-diagonal tolerance for the eigensolver.
pub const DEFAULT_SOLVER_TOLERANCE: f64 = 1e-13;

/// Relative agreement required between eigenvalue sums and matrix invariants.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-10;

/// Dense real square matrix, row-major. Symmetry is checked by consumers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn from_data(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(invalid(format!("expected {} entries for a {dim}x{dim} matrix, got {}", dim * dim, data.len())));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_squared(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_squared().sqrt()
    }
}

/// A_N(m, n) = K(m/N, n/N)/N.
pub fn nystrom_matrix(grid: u64) -> Result<SymmetricMatrix> {
    if grid == 0 {
        return Err(invalid("grid size must be at least 1"));
    }
    if grid > MAX_GRID {
        return Err(invalid(format!("grid size {grid} exceeds {MAX_GRID}")));
    }
    let dim = grid as usize;
    let scale = grid as f64;
    let data: Vec<f64> = (1..=grid)
        .into_par_iter()
        .flat_map_iter(|m| {
            (1..=grid).map(move |n| {
                // numerator and denominator are exact doubles (< 2^53), so the
                // quotient is the correctly rounded kernel sample
                let (num, den) = grid_kernel_parts(grid, m, n);
                (num as f64 / den as f64) / scale
            })
        })
        .collect();
    SymmetricMatrix::from_data(dim, data)
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub grid_size: u64,
    pub zero_threshold: f64,
    /// Eigenvalues of A_N, descending.
    pub eigenvalues: Vec<f64>,
    pub positive_count: usize,
    pub negative_count: usize,
    /// 1/e for every eigenvalue with |e| above the threshold, in the order of
    /// `eigenvalues` (positive estimates ascend, then negative ones ascend).
    pub kernel_eigenvalue_estimates: Vec<f64>,
    pub trace: f64,
    pub frobenius_squared: f64,
}

impl Spectrum {
    /// Reciprocal of `eigenvalues[i]` if it clears the zero threshold.
    pub fn estimate_at(&self, i: usize) -> Option<f64> {
        let e = self.eigenvalues[i];
        (e.abs() > self.zero_threshold).then(|| 1.0 / e)
    }

    /// Positive kernel-eigenvalue estimates, smallest first.
    pub fn positive_estimates(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues
            .iter()
            .take_while(|&&e| e > self.zero_threshold)
            .map(|e| 1.0 / e)
    }

    pub fn eigenvalue_sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn eigenvalue_square_sum(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e * e).sum()
    }

    /// Relative gap between Σe and the trace, scaled by ‖A‖_F when the trace
    /// itself is tiny.
    pub fn trace_gap(&self) -> f64 {
        let scale = self.trace.abs().max(self.frobenius_squared.sqrt());
        if scale == 0.0 {
            0.0
        } else {
            (self.eigenvalue_sum() - self.trace).abs() / scale
        }
    }

    pub fn frobenius_gap(&self) -> f64 {
        relative_gap(self.eigenvalue_square_sum(), self.frobenius_squared)
    }

    pub fn is_consistent(&self) -> bool {
        self.trace_gap() <= CONSISTENCY_TOLERANCE && self.frobenius_gap() <= CONSISTENCY_TOLERANCE
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// Eigenvalues and sign counts of A_N.
pub fn spectrum(grid: u64, zero_threshold: f64) -> Result<Spectrum> {
    if !(zero_threshold >= 0.0 && zero_threshold.is_finite()) {
        return Err(invalid(format!("zero threshold must be a non-negative real, got {zero_threshold}")));
    }
    let a = nystrom_matrix(grid)?;
    let eigenvalues = symmetric_eigenvalues(&a, DEFAULT_SOLVER_TOLERANCE)?;
    let positive_count = eigenvalues.iter().filter(|&&e| e > zero_threshold).count();
    let negative_count = eigenvalues.iter().filter(|&&e| e < -zero_threshold).count();
    let kernel_eigenvalue_estimates = eigenvalues
        .iter()
        .filter(|e| e.abs() > zero_threshold)
        .map(|e| 1.0 / e)
        .collect();
    Ok(Spectrum {
        grid_size: grid,
        zero_threshold,
        eigenvalues,
        positive_count,
        negative_count,
        kernel_eigenvalue_estimates,
        trace: a.trace(),
        frobenius_squared: a.frobenius_squared(),
    })
}

/// Grid evidence for ∫∫K² < 1/4.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceBoundReport {
    pub grid_size: u64,
    pub riemann_sum: Rational,
    pub riemann_sum_f64: f64,
    pub eig_square_sum: f64,
    pub below_quarter: bool,
    /// Σe² agrees with the exact grid sum to [`CONSISTENCY_TOLERANCE`].
    pub consistent: bool,
}

pub fn trace_bound_check(grid: u64) -> Result<TraceBoundReport> {
    let riemann_sum = riemann_l2_sum(grid)?;
    let spec = spectrum(grid, DEFAULT_ZERO_THRESHOLD)?;
    Ok(trace_bound_from(&spec, riemann_sum))
}

/// Same as [`trace_bound_check`] for an already computed spectrum.
pub fn trace_bound_from(spec: &Spectrum, riemann_sum: Rational) -> TraceBoundReport {
    let eig_square_sum = spec.eigenvalue_square_sum();
    let riemann_sum_f64 = riemann_sum.to_f64();
    TraceBoundReport {
        grid_size: spec.grid_size,
        below_quarter: riemann_sum < Rational::new(1, 4).expect("1/4"),
        consistent: relative_gap(eig_square_sum, riemann_sum_f64) <= CONSISTENCY_TOLERANCE,
        riemann_sum,
        riemann_sum_f64,
        eig_square_sum,
    }
}

/// ln of 2772·(918(k+1)·ln(k+1))^{6(k+1)}.
pub fn remark_bound_ln(k: u64) -> f64 {
    let k1 = (k + 1) as f64;
    2772f64.ln() + 6.0 * k1 * (918.0 * k1 * k1.ln()).ln()
}

/// 2772·(918(k+1)·ln(k+1))^{6(k+1)}, or +∞ once it exceeds the double range.
pub fn remark_bound(k: u64) -> f64 {
    let k1 = (k + 1) as f64;
    2772.0 * (918.0 * k1 * k1.ln()).powf(6.0 * k1)
}

/// Whether `estimate` lies at or below the upper bound for the k-th positive
/// kernel eigenvalue.
pub fn remark_bound_check(k: u64, estimate: f64) -> Result<bool> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if !(estimate > 0.0) {
        return Err(invalid(format!("estimate must be positive, got {estimate}")));
    }
    if remark_bound_ln(k) >= f64::MAX.ln() {
        // the bound exceeds every finite double
        return Ok(estimate.is_finite());
    }
    Ok(estimate <= remark_bound(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::grid_matrix;

    #[test]
    fn nystrom_examples() {
        assert_eq!(nystrom_matrix(1).unwrap().data(), &[0.5]);
        assert_eq!(nystrom_matrix(2).unwrap().data(), &[0.25; 4]);
        assert_eq!(nystrom_matrix(3).unwrap().get(1, 1), 1.0 / 12.0);
        assert_eq!(nystrom_matrix(0).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn nystrom_is_rounded_grid() {
        for n in [5u64, 16, 31] {
            let a = nystrom_matrix(n).unwrap();
            let g = grid_matrix(n).unwrap();
            for i in 0..n as usize {
                for j in 0..n as usize {
                    assert_eq!(a.get(i, j), g.matrix().get(i, j).to_f64() / n as f64);
                    assert_eq!(a.get(i, j), a.get(j, i));
                }
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(1, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!((s.positive_count, s.negative_count), (1, 0));
        assert_eq!(s.kernel_eigenvalue_estimates, vec![2.0]);

        let s = spectrum(2, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!((s.positive_count, s.negative_count), (1, 0));
        assert!((s.eigenvalues[0] - 0.5).abs() < 1e-15 && s.eigenvalues[1].abs() < 1e-15);
        assert_eq!(s.estimate_at(1), None);

        assert!(spectrum(4, -1.0).is_err());
        assert_eq!(spectrum(0, 1e-9).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn spectrum_invariants_small_grids() {
        for n in 1..=40u64 {
            let s = spectrum(n, DEFAULT_ZERO_THRESHOLD).unwrap();
            assert_eq!(s.eigenvalues.len(), n as usize);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.is_consistent(), "N={n}: {} {}", s.trace_gap(), s.frobenius_gap());
            assert!(s.max_abs_eigenvalue() <= 0.5 + 1e-12);
            assert!(s.kernel_eigenvalue_estimates.iter().all(|e| e.abs() >= 2.0 - 1e-12));
        }
    }

    #[test]
    fn permutation_invariance() {
        let n = 24usize;
        let a = nystrom_matrix(n as u64).unwrap();
        // fixed permutation i ↦ 7i + 3 mod 24... 7 is a unit mod 24
        let perm: Vec<usize> = (0..n).map(|i| (7 * i + 3) % n).collect();
        let b = SymmetricMatrix::from_fn(n, |i, j| a.get(perm[i], perm[j]));
        let ea = symmetric_eigenvalues(&a, 1e-14).unwrap();
        let eb = symmetric_eigenvalues(&b, 1e-14).unwrap();
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_bound_examples() {
        let r = trace_bound_check(1).unwrap();
        assert_eq!(r.riemann_sum, Rational::new(1, 4).unwrap());
        assert!(!r.below_quarter && r.consistent);
        let r = trace_bound_check(3).unwrap();
        assert_eq!(r.riemann_sum, Rational::new(17, 144).unwrap());
        assert!(r.below_quarter && r.consistent);
    }

    #[test]
    fn remark_bound_examples() {
        assert!(remark_bound_check(1, 2.0).unwrap());
        let bound = 2772.0 * (918.0 * 2.0 * 2f64.ln()).powi(12);
        assert!((remark_bound(1) / bound - 1.0).abs() < 1e-12);
        // bound + 1 is not representable at this magnitude; use the next double
        assert!(remark_bound_check(1, remark_bound(1)).unwrap());
        assert!(!remark_bound_check(1, remark_bound(1).next_up()).unwrap());
        assert!(!remark_bound_check(1, bound * (1.0 + 1e-9)).unwrap());
        assert!(remark_bound_check(40, 1e300).unwrap());
        assert!(remark_bound(40).is_infinite());
        assert!(remark_bound_check(0, 2.0).is_err());
        assert!(remark_bound_check(1, -2.0).is_err());
    }

    #[test]
    fn remark_bound_ln_matches_direct_value() {
        for k in 1..=10 {
            assert!((remark_bound_ln(k) - remark_bound(k).ln()).abs() < 1e-9 * remark_bound_ln(k));
        }
    }
}
