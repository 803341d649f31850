//! The kernel K(x, y) = 1/2 − {1/(xy)} on [0, 1]², extended by 0 where xy = 0.
//!
//! Exact values go through [`Rational`]; [`kernel_float`] is a rounded view of
//! the same exact computation. Grid sums over the points (m/N, n/N) are done
//! in integers over a common denominator lcm(1..=N), which keeps them exact
//! and fast enough for N in the hundreds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numtheory::MobiusTable;
use crate::rational::{Rational, RationalMatrix};

/// Largest grid size accepted by the grid routines (keeps N² in a u64).
pub const MAX_GRID: u64 = 1 << 31;

fn check_unit_interval(v: &Rational, name: &str) -> Result<()> {
    if v.is_negative() || *v > Rational::one() {
        return Err(invalid(format!("{name} = {v} is outside [0, 1]")));
    }
    Ok(())
}

/// K(x, y) computed exactly.
pub fn kernel_exact(x: &Rational, y: &Rational) -> Result<Rational> {
    check_unit_interval(x, "x")?;
    check_unit_interval(y, "y")?;
    let xy = x * y;
    if xy.is_zero() {
        return Ok(Rational::zero());
    }
    let inv = xy.recip()?;
    Ok(Rational::half() - inv.fract())
}

/// K(x, y) in double precision.
///
/// The doubles `x` and `y` are taken at their exact binary values and the
/// kernel is evaluated exactly before a single rounding, so the result is the
/// correctly rounded kernel value at those points.
pub fn kernel_float(x: f64, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(invalid(format!("({x}, {y}) is outside [0, 1]²")));
    }
    let k = kernel_exact(&Rational::from_f64(x)?, &Rational::from_f64(y)?)?;
    Ok(k.to_f64())
}

fn check_grid(grid: u64) -> Result<()> {
    if grid == 0 {
        return Err(invalid("grid size must be at least 1"));
    }
    if grid > MAX_GRID {
        return Err(invalid(format!("grid size {grid} exceeds {MAX_GRID}")));
    }
    Ok(())
}

/// K(m/N, n/N) as the unreduced fraction (mn − 2r) / (2mn), r = N² mod mn.
///
/// `m` and `n` are one-based grid indices.
pub(crate) fn grid_kernel_parts(grid: u64, m: u64, n: u64) -> (i64, u64) {
    let mn = m * n;
    let r = (grid * grid) % mn;
    (mn as i64 - 2 * r as i64, 2 * mn)
}

/// Exact samples K(m/N, n/N), 1 ≤ m, n ≤ N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridMatrix {
    grid_size: u64,
    entries: RationalMatrix,
}

impl GridMatrix {
    pub fn grid_size(&self) -> u64 {
        self.grid_size
    }

    /// Entry at one-based indices (m, n).
    pub fn entry(&self, m: u64, n: u64) -> &Rational {
        self.entries.get(m as usize - 1, n as usize - 1)
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.entries
    }

    /// Σ entries², exact.
    pub fn frobenius_squared(&self) -> Rational {
        self.entries.entries().iter().map(Rational::square).sum()
    }
}

/// The matrix of K(m/N, n/N) for 1 ≤ m, n ≤ N.
pub fn grid_matrix(grid: u64) -> Result<GridMatrix> {
    check_grid(grid)?;
    let dim = usize::try_from(grid).map_err(|_| invalid("grid too large"))?;
    let entries: Vec<Rational> = (1..=grid)
        .into_par_iter()
        .flat_map_iter(|m| {
            (1..=grid).map(move |n| {
                let (num, den) = grid_kernel_parts(grid, m, n);
                Rational::new(num, den).expect("non-zero denominator")
            })
        })
        .collect();
    Ok(GridMatrix {
        grid_size: grid,
        entries: RationalMatrix::from_rows(dim, entries),
    })
}

/// lcm(1, 2, ..., n).
pub(crate) fn lcm_upto(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// (1/N²) Σ_{m,n ≤ N} K(m/N, n/N)², exact.
pub fn riemann_l2_sum(grid: u64) -> Result<Rational> {
    check_grid(grid)?;
    let l = lcm_upto(grid);
    // K(m/N, n/N)² = a² (L/m)² (L/n)² / (4 L⁴) with a = mn − 2r
    let cofactor_sq: Vec<BigInt> = (1..=grid)
        .map(|m| {
            let c = &l / m;
            &c * &c
        })
        .collect();
    let total: BigInt = (1..=grid)
        .into_par_iter()
        .map(|m| {
            let mut row = BigInt::default();
            for n in 1..=grid {
                let (a, _) = grid_kernel_parts(grid, m, n);
                let a2 = (a as i128 * a as i128) as u128;
                row += &cofactor_sq[n as usize - 1] * a2;
            }
            row * &cofactor_sq[m as usize - 1]
        })
        .sum();
    let l2 = &l * &l;
    let denom = l2.clone() * l2 * 4u32 * grid * grid;
    Rational::new(total, denom)
}

/// Σ_{m,n ≤ N} K(m/N, n/N) μ(m) μ(n) / N², exact.
pub fn mobius_quadratic_form(grid: u64, table: &MobiusTable) -> Result<Rational> {
    check_grid(grid)?;
    table.require(grid)?;
    let l = lcm_upto(grid);
    // K(m/N, n/N) = a (L/m)(L/n) / (2 L²)
    let weights: Vec<(u64, BigInt)> = (1..=grid)
        .filter_map(|m| match table.mu(m) {
            0 => None,
            s => Some((m, (&l / m) * i32::from(s))),
        })
        .collect();
    let total: BigInt = weights
        .par_iter()
        .map(|(m, wm)| {
            let mut row = BigInt::default();
            for (n, wn) in &weights {
                let (a, _) = grid_kernel_parts(grid, *m, *n);
                row += wn * a;
            }
            row * wm
        })
        .sum();
    let denom = &l * &l * 2u32 * grid * grid;
    Rational::new(total, denom)
}
