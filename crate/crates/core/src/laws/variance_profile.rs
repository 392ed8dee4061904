use num_complex::Complex64;
use rayon::prelude::*;

use super::LimitLaw;
use crate::cdf::Cdf;
use crate::error::{invalid, Error, Result};
use crate::point::UpperPoint;

pub const VP_TOL: f64 = 1e-12;
pub const VP_MAX_ITER: usize = 10_000;
/// Damping of the plain step `g <- g + theta (T(g) - g)`.
const DAMPING: f64 = 0.5;

/// Finitely supported measure on `[0, inf)`: the limit of the empirical
/// distribution of the profile weights `a_j^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Weights must be non-negative and sum to one within `1e-9`; they are
    /// renormalized exactly.
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return invalid("measure needs matching, non-empty atoms and weights");
        }
        if atoms.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return invalid("measure atoms must be finite and >= 0");
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return invalid("measure weights must be finite and >= 0");
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return invalid(format!("measure weights sum to {total}, not 1"));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(Self { atoms, weights })
    }

    /// Unit mass at `lambda`.
    pub fn point(lambda: f64) -> Result<Self> {
        Self::new(vec![lambda], vec![1.0])
    }

    /// Equal mass on each atom.
    pub fn uniform(atoms: &[f64]) -> Result<Self> {
        let w = vec![1.0 / atoms.len().max(1) as f64; atoms.len()];
        Self::new(atoms.to_vec(), w)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    pub fn max_atom(&self) -> f64 {
        self.atoms.iter().fold(0.0, |m, &a| m.max(a))
    }

    /// `(int lambda dnu / (-z - lambda g), int dnu / (-z - lambda g))`.
    fn integrals(&self, z: Complex64, g: Complex64) -> (Complex64, Complex64) {
        let mut tg = Complex64::new(0.0, 0.0);
        let mut ts = Complex64::new(0.0, 0.0);
        for (&l, &w) in self.atoms.iter().zip(&self.weights) {
            let d = (-z - l * g).inv();
            tg += w * l * d;
            ts += w * d;
        }
        (tg, ts)
    }
}

/// Converged solution of the self-consistent equation at one `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub g: Complex64,
    pub s: Complex64,
    pub iterations: usize,
    /// `|g - T(g)|` at return.
    pub residual: f64,
}

/// Solves `g = int lambda dnu / (-z - lambda g)` in the upper half-plane and
/// returns `S = int dnu / (-z - lambda g)`.
///
/// Damped Picard steps, accelerated by a Steffensen (Aitken) step whenever
/// that lowers the residual; near the real axis the plain map contracts only
/// at rate `1 - O(Im z)`.
pub fn vp_fixed_point(nu: &DiscreteMeasure, z: UpperPoint, tol: f64, max_iter: usize) -> Result<FixedPoint> {
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be > 0, got {tol}"));
    }
    let zc = z.z();
    let t = |g: Complex64| nu.integrals(zc, g).0;
    let mut g = -nu.mean() / zc;
    let mut tg = t(g);
    let mut residual = (tg - g).norm();
    let mut it = 0;
    while residual >= tol {
        if it == max_iter {
            return Err(Error::NoConvergence {
                what: "variance-profile fixed point",
                iterations: it,
                residual,
            });
        }
        it += 1;
        let mut next = g + DAMPING * (tg - g);
        let ttg = t(tg);
        let denom = ttg - 2.0 * tg + g;
        if denom.norm() > 0.0 {
            let acc = g - (tg - g) * (tg - g) / denom;
            if acc.is_finite() && acc.im >= 0.0 && (t(acc) - acc).norm() < (t(next) - next).norm() {
                next = acc;
            }
        }
        g = next;
        tg = t(g);
        residual = (tg - g).norm();
    }
    let s = nu.integrals(zc, g).1;
    let screened = if nu.mean() > 0.0 {
        g.im > 0.0 && s.im > 0.0
    } else {
        g.im >= 0.0 && s.im > 0.0
    };
    if !screened || !g.is_finite() {
        return invalid(format!("fixed point {g} at z = {zc} leaves the Herglotz class"));
    }
    Ok(FixedPoint {
        g,
        s,
        iterations: it,
        residual,
    })
}

/// Variance-profile limit tabulated on a grid: density `Im S(x + iv)/pi`,
/// CDF by cumulative trapezoid, clamped monotone into `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProfileLaw {
    nu: DiscreteMeasure,
    v: f64,
    grid: Vec<f64>,
    pdf: Vec<f64>,
    cdf: Vec<f64>,
}

/// Tabulates the variance-profile limit of `nu` at height `v`.
pub fn vp_cdf(nu: &DiscreteMeasure, grid: &[f64], v: f64) -> Result<VarianceProfileLaw> {
    if !(v > 0.0) {
        return invalid(format!("inversion height must be > 0, got {v}"));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|x| !x.is_finite()) {
        return invalid("grid must be finite, strictly increasing, with at least two points");
    }
    let pdf: Vec<f64> = grid
        .par_iter()
        .map(|&x| {
            let fp = vp_fixed_point(nu, UpperPoint::new(x, v)?, VP_TOL, VP_MAX_ITER)
                .map_err(|e| Error::AtPoint { x, source: Box::new(e) })?;
            Ok(fp.s.im / std::f64::consts::PI)
        })
        .collect::<Result<_>>()?;
    let mut cdf = Vec::with_capacity(grid.len());
    let mut acc = 0.0f64;
    cdf.push(0.0);
    for k in 1..grid.len() {
        acc += 0.5 * (grid[k] - grid[k - 1]) * (pdf[k] + pdf[k - 1]);
        cdf.push(acc.clamp(0.0, 1.0).max(cdf[k - 1]));
    }
    Ok(VarianceProfileLaw {
        nu: nu.clone(),
        v,
        grid: grid.to_vec(),
        pdf,
        cdf,
    })
}

/// Default tabulation grid: `[-R - 0.5, R + 0.5]` with `R = 2 sqrt(max(nu) mean(nu))`,
/// which bounds the support.
pub fn vp_default_grid(nu: &DiscreteMeasure, points: usize) -> Vec<f64> {
    let r = 2.0 * (nu.max_atom() * nu.mean()).sqrt();
    crate::spectra::linspace(-r - 0.5, r + 0.5, points)
}

impl VarianceProfileLaw {
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.nu
    }

    pub fn height(&self) -> f64 {
        self.v
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn total_mass(&self) -> f64 {
        *self.cdf.last().expect("grid has two points")
    }

    fn interp(&self, ys: &[f64], x: f64, left: f64, right: f64) -> f64 {
        let g = &self.grid;
        if x < g[0] {
            return left;
        }
        if x >= g[g.len() - 1] {
            return right;
        }
        let k = g.partition_point(|&p| p <= x);
        let (x0, x1) = (g[k - 1], g[k]);
        ys[k - 1] + (ys[k] - ys[k - 1]) * (x - x0) / (x1 - x0)
    }
}

impl Cdf for VarianceProfileLaw {
    fn cdf(&self, x: f64) -> f64 {
        self.interp(&self.cdf, x, 0.0, self.total_mass())
    }

    fn knots(&self) -> Vec<f64> {
        self.grid.clone()
    }
}

impl LimitLaw for VarianceProfileLaw {
    fn density(&self, x: f64) -> f64 {
        self.interp(&self.pdf, x, 0.0, 0.0)
    }

    fn support(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    fn stieltjes(&self, z: UpperPoint) -> Result<Complex64> {
        Ok(vp_fixed_point(&self.nu, z, VP_TOL, VP_MAX_ITER)?.s)
    }
}
