//! Three-term Lindeberg replacement of `X` by `Z`, one lex coordinate at a time.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::derivatives::{
    directional_derivative, entry_matrix, random_unit, resolvent_partial, stieltjes_of_entries, third_partial_ceiling,
    unit_vector,
};
use crate::error::{invalid, Error, Result};
use crate::field::RngStream;
use crate::index_lattice::{lex_pair, ring_offsets, triangle_len};
use crate::point::UpperPoint;

/// Largest order accepted without `allow_large`.
pub const SWAP_MAX_ORDER: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwapOptions {
    /// Ring radius `a >= 1`.
    pub a: u32,
    /// Random (point, direction) pairs used to fit the third-derivative constant.
    pub l3_samples: usize,
    pub allow_large: bool,
}

impl Default for SwapOptions {
    fn default() -> Self {
        Self {
            a: 2,
            l3_samples: 1000,
            allow_large: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapReport {
    pub n: usize,
    pub a: u32,
    pub z: UpperPoint,
    /// `sum_k (X_k - Z_k) d_k s(Y_k^0)`.
    pub r1: Complex64,
    /// `(1/2) sum_k (X_k^2 - Z_k^2) d^2_k s(U_k^0)`.
    pub r2: Complex64,
    /// Sum of the per-coordinate Taylor remainders.
    pub r3: Complex64,
    /// `s(X) - s(Z)`.
    pub delta: Complex64,
    /// `|s(X) - s(Z) - (R1 + R2 + R3)|`.
    pub residual: f64,
    /// `sum (X_k^2 + Z_k^2) sum_{u in ring} |X_u| + sum |X_k|^3 + sum |Z_k|^3`.
    pub bound_structure: f64,
    /// Twice the largest sampled third derivative.
    pub l3_fitted: f64,
    pub l3_ceiling: f64,
    /// `l3_fitted * bound_structure`.
    pub r3_bound: f64,
    /// `l3_ceiling * bound_structure`.
    pub r3_bound_ceiling: f64,
    pub bound_holds: bool,
}

/// Neumaier-compensated sum in slice order.
fn compensated(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    for v in values {
        let t = sum + v;
        c.re += if sum.re.abs() >= v.re.abs() {
            (sum.re - t.re) + v.re
        } else {
            (v.re - t.re) + sum.re
        };
        c.im += if sum.im.abs() >= v.im.abs() {
            (sum.im - t.im) + v.im
        } else {
            (v.im - t.im) + sum.im
        };
        sum = t;
    }
    sum + c
}

struct Term {
    swap: Complex64,
    r1: Complex64,
    r2: Complex64,
    ring_abs: f64,
}

/// `Y_k^0 = (X_1, .., X_{k-1}, 0, Z_{k+1}, ..)`, 0-based `k`.
fn interpolation_point(x: &[f64], z: &[f64], k: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(x.len());
    p.extend_from_slice(&x[..k]);
    p.push(0.0);
    p.extend_from_slice(&z[k + 1..]);
    p
}

pub fn swap_decomposition(
    x: &[f64],
    zv: &[f64],
    n: usize,
    z: UpperPoint,
    opts: SwapOptions,
    rng: &mut RngStream,
) -> Result<SwapReport> {
    let len = triangle_len(n);
    if x.len() != len || zv.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "order {n} needs {len} entries, got {} and {}",
            x.len(),
            zv.len()
        )));
    }
    if n > SWAP_MAX_ORDER && !opts.allow_large {
        return invalid(format!(
            "swap decomposition limited to n <= {SWAP_MAX_ORDER} (got {n}); set allow_large"
        ));
    }
    if opts.a == 0 {
        return invalid("ring radius must be >= 1");
    }
    let rings: Vec<Vec<usize>> = (0..len)
        .map(|k| {
            let (i, j) = lex_pair(k + 1)?;
            ring_offsets((i, j), opts.a, n)
        })
        .collect::<Result<_>>()?;

    let terms: Vec<Term> = (0..len)
        .into_par_iter()
        .map(|k| {
            let y0 = interpolation_point(x, zv, k);
            let mut wk = y0.clone();
            wk[k] = x[k];
            let mut wk1 = y0.clone();
            wk1[k] = zv[k];
            let swap = stieltjes_of_entries(n, &wk, z)? - stieltjes_of_entries(n, &wk1, z)?;
            let r1 = (x[k] - zv[k]) * resolvent_partial(&entry_matrix(n, &y0)?, z, k)?;
            let mut u0 = y0;
            for &u in &rings[k] {
                u0[u] = 0.0;
            }
            let h = 1e-5 * u0[k].abs().max(1.0);
            let mut up = u0.clone();
            up[k] += h;
            let mut dn = u0.clone();
            dn[k] -= h;
            let d2 = (resolvent_partial(&entry_matrix(n, &up)?, z, k)?
                - resolvent_partial(&entry_matrix(n, &dn)?, z, k)?)
                / (2.0 * h);
            let r2 = 0.5 * (x[k] * x[k] - zv[k] * zv[k]) * d2;
            let ring_abs = rings[k].iter().map(|&u| x[u].abs()).sum();
            Ok(Term { swap, r1, r2, ring_abs })
        })
        .collect::<Result<_>>()?;

    let r1 = compensated(terms.iter().map(|t| t.r1));
    let r2 = compensated(terms.iter().map(|t| t.r2));
    let r3 = compensated(terms.iter().map(|t| t.swap - t.r1 - t.r2));
    let delta = stieltjes_of_entries(n, x, z)? - stieltjes_of_entries(n, zv, z)?;
    let residual = (delta - (r1 + r2 + r3)).norm();

    let bound_structure: f64 = terms
        .iter()
        .enumerate()
        .map(|(k, t)| (x[k] * x[k] + zv[k] * zv[k]) * t.ring_abs + x[k].abs().powi(3) + zv[k].abs().powi(3))
        .sum();

    // Sampled third derivatives on the segments the Taylor expansions use.
    let mut best: f64 = 0.0;
    for s in 0..opts.l3_samples {
        let k = (rng.uniform() * len as f64) as usize % len;
        let theta = rng.uniform();
        let mut p = interpolation_point(x, zv, k);
        p[k] = theta * if rng.uniform() < 0.5 { x[k] } else { zv[k] };
        let d = if s % 2 == 0 {
            unit_vector(len, k)
        } else {
            random_unit(len, rng)
        };
        best = best.max(directional_derivative(&entry_matrix(n, &p)?, z, &d, 3)?.norm());
    }
    let l3_fitted = 2.0 * best;
    let l3_ceiling = third_partial_ceiling(n, z.im());
    let r3_bound = l3_fitted * bound_structure;
    Ok(SwapReport {
        n,
        a: opts.a,
        z,
        r1,
        r2,
        r3,
        delta,
        residual,
        bound_structure,
        l3_fitted,
        l3_ceiling,
        r3_bound,
        r3_bound_ceiling: l3_ceiling * bound_structure,
        bound_holds: r3.norm() <= r3_bound,
    })
}
