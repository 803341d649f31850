//! Exact and numerical tools for the symmetric kernel K(x, y) = 1/2 − {1/(xy)}
//! on (0, 1]².
//!
//! * [`numtheory`]: Möbius sieve, Mertens function, Legendre symbols, modular
//!   square roots, CRT and prime search.
//! * [`kernel`]: exact and floating evaluation of K, grid samples, grid L² sums
//!   and the Möbius quadratic form.
//! * [`identities`]: exact verification of the two Mertens-function identities.
//! * [`spectral`]: grid discretization of the integral operator and its
//!   eigenvalues.
//! * [`witness`]: prime/modulus witness points where u·K is negative definite,
//!   with the bump-function overlap data.

pub mod error;
pub mod identities;
pub mod kernel;
pub mod numtheory;
pub mod rational;
pub mod spectral;
pub mod witness;

pub use error::{Error, Result};
pub use identities::{
    check_identity_12, check_mertens_1897, scan_identities, IdentityKind, IdentityReport, IdentityScan,
};
pub use kernel::{grid_matrix, kernel_exact, kernel_float, mobius_quadratic_form, riemann_l2_sum, GridMatrix};
pub use numtheory::{mertens, sieve_mobius, MobiusTable, ResidueClass};
pub use rational::{Rational, RationalMatrix};
pub use spectral::{
    nystrom_matrix, remark_bound_check, spectrum, symmetric_eigenvalues, trace_bound_check, Spectrum,
    SymmetricMatrix, TraceBoundReport,
};
pub use witness::{
    choose_bump_scale, closed_form_kernel_values, construct_lemma31, definiteness_check, overlap_matrix,
    verify_lemma31, BumpParameters, Lemma31Instance, Sign, WitnessReport,
};
