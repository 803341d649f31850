//! Cyclic Jacobi eigenvalue iteration for dense symmetric matrices.

use crate::error::{invalid, Error, Result};

use super::SymmetricMatrix;

/// Sweeps allowed before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Largest tolerated |a_ij − a_ji| on input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-14;

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[i * n + j] * a[i * n + j];
        }
    }
    (2.0 * s).sqrt()
}

/// All eigenvalues of `matrix`, sorted descending.
///
/// Rotations are applied in row-cyclic order (p, q) = (0, 1), (0, 2), ...,
/// so the result is deterministic. Iteration stops once the off-diagonal
/// Frobenius norm is at most `tol` times the Frobenius norm of the input.
pub fn symmetric_eigenvalues(matrix: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid(format!("tolerance must be a positive real, got {tol}")));
    }
    let n = matrix.dim();
    let mut a = matrix.data().to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (a[i * n + j] - a[j * n + i]).abs();
            if !(d <= SYMMETRY_TOLERANCE) {
                return Err(invalid(format!(
                    "matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {d:e}"
                )));
            }
        }
    }
    // work on the exactly symmetric part
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }

    let target = tol * matrix.frobenius_norm();
    let mut sweeps = 0;
    while off_diagonal_norm(&a, n) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Annihilates a[p][q] with a plane rotation in the (p, q) plane.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let g = a[k * n + p];
        let h = a[k * n + q];
        let new_p = g - s * (h + g * tau);
        let new_q = h + s * (g - h * tau);
        a[k * n + p] = new_p;
        a[k * n + q] = new_q;
        a[p * n + k] = new_p;
        a[q * n + k] = new_q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(n: usize, data: Vec<f64>) -> SymmetricMatrix {
        SymmetricMatrix::from_data(n, data).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(symmetric_eigenvalues(&sym(1, vec![3.5]), 1e-14).unwrap(), vec![3.5]);
        let e = symmetric_eigenvalues(&sym(2, vec![0.0, 1.0, 1.0, 0.0]), 1e-14).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-15 && (e[1] + 1.0).abs() < 1e-15);
        let e = symmetric_eigenvalues(&sym(2, vec![0.25; 4]), 1e-14).unwrap();
        assert!((e[0] - 0.5).abs() < 1e-15 && e[1].abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let m = sym(2, vec![0.0, 1.0, 1.0 + 1e-10, 0.0]);
        assert_eq!(symmetric_eigenvalues(&m, 1e-12).unwrap_err().kind(), "invalid-argument");
        let m = sym(2, vec![0.0, 1.0, 1.0, 0.0]);
        assert_eq!(symmetric_eigenvalues(&m, 0.0).unwrap_err().kind(), "invalid-argument");
        assert_eq!(symmetric_eigenvalues(&m, f64::NAN).unwrap_err().kind(), "invalid-argument");
    }

    #[test]
    fn zero_and_empty_matrices() {
        assert_eq!(symmetric_eigenvalues(&sym(3, vec![0.0; 9]), 1e-12).unwrap(), vec![0.0; 3]);
        assert!(symmetric_eigenvalues(&sym(0, vec![]), 1e-12).unwrap().is_empty());
    }

    #[test]
    fn three_by_three_closed_forms() {
        // tridiagonal Toeplitz: b + 2c·cos(kπ/4)
        let (b, c) = (0.3, -0.7);
        let m = sym(3, vec![b, c, 0.0, c, b, c, 0.0, c, b]);
        let e = symmetric_eigenvalues(&m, 1e-15).unwrap();
        let mut want: Vec<f64> = (1..=3)
            .map(|k| b + 2.0 * c * (k as f64 * std::f64::consts::PI / 4.0).cos())
            .collect();
        want.sort_by(|x, y| y.total_cmp(x));
        for (g, w) in e.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
        // J − I (all-ones minus identity): 2, −1, −1
        let m = sym(3, vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]);
        let e = symmetric_eigenvalues(&m, 1e-15).unwrap();
        for (g, w) in e.iter().zip([2.0, -1.0, -1.0]) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn two_by_two_closed_form(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0) {
            let e = symmetric_eigenvalues(&sym(2, vec![a, b, b, c]), 1e-15).unwrap();
            let mean = 0.5 * (a + c);
            let radius = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            prop_assert!((e[0] - (mean + radius)).abs() < 1e-12);
            prop_assert!((e[1] - (mean - radius)).abs() < 1e-12);
        }

        #[test]
        fn diagonal_conjugated_by_rotation(l1 in -5.0f64..5.0, l2 in -5.0f64..5.0, l3 in -5.0f64..5.0,
                                           phi in 0.0f64..6.28, psi in 0.0f64..6.28) {
            // R = R_z(phi) R_x(psi); A = R diag(l) Rᵀ
            let (cp, sp, cs, ss) = (phi.cos(), phi.sin(), psi.cos(), psi.sin());
            let r = [[cp, -sp * cs, sp * ss], [sp, cp * cs, -cp * ss], [0.0, ss, cs]];
            let l = [l1, l2, l3];
            let mut data = vec![0.0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    data[i * 3 + j] = (0..3).map(|k| r[i][k] * l[k] * r[j][k]).sum();
                }
            }
            for i in 0..3 {
                for j in 0..i {
                    data[i * 3 + j] = data[j * 3 + i];
                }
            }
            let e = symmetric_eigenvalues(&sym(3, data), 1e-15).unwrap();
            let mut want = l.to_vec();
            want.sort_by(|x, y| y.total_cmp(x));
            for (g, w) in e.iter().zip(&want) {
                prop_assert!((g - w).abs() < 1e-12, "{} vs {}", g, w);
            }
        }
    }
}
