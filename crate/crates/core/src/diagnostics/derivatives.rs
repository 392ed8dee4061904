//! Derivatives of `s(x) = (1/n) Tr (A_n(x) - zI)^{-1}` with respect to the
//! entry vector `x` (lower triangle in lex order, `A_n(x) = X / sqrt(n)`).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::field::RngStream;
use crate::index_lattice::{lex_pair, triangle_len};
use crate::matrix::SymMatrix;
use crate::point::UpperPoint;
use crate::spectra::{eigenvalues, factor_shifted, resolvent, stieltjes_from_eigs};

/// Central-difference step for first partials.
pub const FD_STEP: f64 = 1e-6;

/// `A_n(x)`: entry `k` of `x` sits at the `k`-th lower-triangle position, divided by `sqrt(n)`.
pub fn entry_matrix(n: usize, x: &[f64]) -> Result<SymMatrix> {
    if x.len() != triangle_len(n) {
        return invalid(format!("order {n} needs {} entries, got {}", triangle_len(n), x.len()));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut it = x.iter();
    Ok(SymMatrix::from_lower(n, |_, _| {
        it.next().copied().unwrap_or(0.0) * scale
    }))
}

/// `s(x)` through the eigenvalues of `A_n(x)`.
pub fn stieltjes_of_entries(n: usize, x: &[f64], z: UpperPoint) -> Result<Complex64> {
    Ok(stieltjes_from_eigs(&eigenvalues(&entry_matrix(n, x)?)?, z))
}

/// 0-based `(i, j)` of the 0-based lex coordinate `k`.
fn position(k: usize) -> (usize, usize) {
    let (i, j) = lex_pair(k + 1).expect("coordinate in range");
    (i - 1, j - 1)
}

/// `ds/dx_k = -n^{-3/2} (2 - I(i = j)) (R^2)_ij` at every coordinate, from the
/// full resolvent of the already scaled matrix `m`.
pub fn resolvent_partials(m: &SymMatrix, z: UpperPoint) -> Result<Vec<Complex64>> {
    let n = m.order();
    let r = resolvent(m, z)?;
    let r2 = r.matmul(&r);
    let c = -(n as f64).powf(-1.5);
    Ok((0..triangle_len(n))
        .map(|k| {
            let (i, j) = position(k);
            let w = if i == j { 1.0 } else { 2.0 };
            c * w * r2.get(i, j)
        })
        .collect())
}

/// Single first partial `ds/dx_k` from two column solves:
/// `(R^2)_ij = sum_m R_im R_mj`.
pub fn resolvent_partial(m: &SymMatrix, z: UpperPoint, k: usize) -> Result<Complex64> {
    let n = m.order();
    if k >= triangle_len(n) {
        return invalid(format!("coordinate {k} out of range for order {n}"));
    }
    let (i, j) = position(k);
    let lu = factor_shifted(m, z)?;
    let ri = lu.solve_unit(i);
    let rj = if i == j { ri.clone() } else { lu.solve_unit(j) };
    let dot: Complex64 = ri.iter().zip(&rj).map(|(a, b)| a * b).sum();
    let w = if i == j { 1.0 } else { 2.0 };
    Ok(-(n as f64).powf(-1.5) * w * dot)
}

fn bump(m: &SymMatrix, k: usize, h: f64) -> SymMatrix {
    let (i, j) = position(k);
    let mut out = m.clone();
    out.set(i, j, m.get(i, j) + h / (m.order() as f64).sqrt());
    out
}

/// Central differences of `s` in each coordinate, step `step` in entry units.
pub fn finite_difference_partials(m: &SymMatrix, z: UpperPoint, step: f64) -> Result<Vec<Complex64>> {
    if !(step > 0.0) {
        return invalid("finite-difference step must be > 0");
    }
    (0..triangle_len(m.order()))
        .into_par_iter()
        .map(|k| {
            let up = stieltjes_from_eigs(&eigenvalues(&bump(m, k, step))?, z);
            let dn = stieltjes_from_eigs(&eigenvalues(&bump(m, k, -step))?, z);
            Ok((up - dn) / (2.0 * step))
        })
        .collect()
}

/// `max_k |analytic_k - fd_k| / |analytic_k|`.
pub fn partials_max_relative_error(m: &SymMatrix, z: UpperPoint) -> Result<f64> {
    let a = resolvent_partials(m, z)?;
    let f = finite_difference_partials(m, z, FD_STEP)?;
    Ok(a.iter()
        .zip(&f)
        .map(|(a, f)| (a - f).norm() / a.norm())
        .fold(0.0, f64::max))
}

/// `d^k/dt^k s(x + t d) = (1/n) (-1)^k k! Tr(R (Delta R)^k)` with
/// `Delta = A_n(d)`.
pub fn directional_derivative(m: &SymMatrix, z: UpperPoint, direction: &[f64], order: u32) -> Result<Complex64> {
    let n = m.order();
    let delta = entry_matrix(n, direction)?;
    let r = resolvent(m, z)?;
    let rs = r.as_slice();
    let mut dr = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for l in 0..n {
            let d = delta.get(i, l);
            if d != 0.0 {
                for c in 0..n {
                    dr[i * n + c] += d * rs[l * n + c];
                }
            }
        }
    }
    let dr = crate::spectra::ComplexMatrix::from_vec(n, dr);
    let mut t = r;
    let mut fact = 1.0;
    for k in 1..=order {
        t = t.matmul(&dr);
        fact *= f64::from(k);
    }
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * fact * t.trace() / n as f64)
}

/// Rigorous bound on every second coordinate partial: `4 / (n^2 v^3)`.
pub fn second_partial_ceiling(n: usize, v: f64) -> f64 {
    4.0 / ((n * n) as f64 * v.powi(3))
}

/// Rigorous bound on every (mixed) third coordinate partial:
/// `12 / (n^{5/2} v^4)`.
pub fn third_partial_ceiling(n: usize, v: f64) -> f64 {
    12.0 / ((n as f64).powf(2.5) * v.powi(4))
}

pub(crate) fn unit_vector(len: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; len];
    e[k] = 1.0;
    e
}

pub(crate) fn random_unit(len: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut d: Vec<f64> = (0..len).map(|_| rng.gaussian()).collect();
    let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    d.iter_mut().for_each(|x| *x /= norm);
    d
}

/// Fitted second-derivative constant: twice the largest `|d^2 s / dx_k^2|`
/// over `samples` unit-Gaussian points and random coordinates.
pub fn estimate_l2(n: usize, z: UpperPoint, samples: usize, rng: &mut RngStream) -> Result<f64> {
    let len = triangle_len(n);
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let x: Vec<f64> = (0..len).map(|_| rng.gaussian()).collect();
        let k = (rng.uniform() * len as f64) as usize % len;
        let m = entry_matrix(n, &x)?;
        best = best.max(directional_derivative(&m, z, &unit_vector(len, k), 2)?.norm());
    }
    Ok(2.0 * best)
}

/// `max_{ij} |ds/dx_ij|` versus `n`, and the least-squares slope of the
/// log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub sizes: Vec<usize>,
    /// Mean over seeds of `max_k |ds/dx_k|` for a Gaussian Wigner matrix.
    pub max_partial: Vec<f64>,
    pub exponent: f64,
}

pub fn partial_scaling(sizes: &[usize], z: UpperPoint, seeds: &[u64]) -> Result<ScalingFit> {
    if sizes.len() < 2 || seeds.is_empty() {
        return invalid("scaling fit needs at least two sizes and one seed");
    }
    let mut max_partial = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut acc = 0.0;
        for &seed in seeds {
            let mut rng = RngStream::new(seed, n as u64);
            let x: Vec<f64> = (0..triangle_len(n)).map(|_| rng.gaussian()).collect();
            let p = resolvent_partials(&entry_matrix(n, &x)?, z)?;
            acc += p.iter().map(|c| c.norm()).fold(0.0, f64::max);
        }
        max_partial.push(acc / seeds.len() as f64);
    }
    let lx: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = max_partial.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(ScalingFit {
        sizes: sizes.to_vec(),
        max_partial,
        exponent: sxy / sxx,
    })
}
