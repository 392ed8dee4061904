//! Eigenvalues, empirical spectral distributions, Stieltjes transforms and
//! density recovery by Stieltjes inversion.

mod eigen;
mod resolvent;

pub use eigen::{symmetric_eigenvalues, tridiagonal_eigenvalues, tridiagonalize};
pub(crate) use resolvent::factor_shifted;
pub use resolvent::{resolvent, ComplexMatrix, RESOLVENT_RESIDUAL_TOL};

use std::io::Write;

use num_complex::Complex64;

use crate::cdf::StepCdf;
use crate::error::{invalid, Result};
use crate::matrix::{build_sym_bn, RectMatrix, SymMatrix};
use crate::point::UpperPoint;

/// Default inversion height.
pub const DEFAULT_INVERSION_HEIGHT: f64 = 0.01;
/// Default number of inversion grid points.
pub const DEFAULT_INVERSION_POINTS: usize = 2001;

/// Ascending eigenvalues of a built ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSample {
    eigenvalues: Vec<f64>,
}

impl SpectralSample {
    /// Sorts the input.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return invalid("eigenvalues must be finite");
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }
}

pub fn eigenvalues(m: &SymMatrix) -> Result<SpectralSample> {
    Ok(SpectralSample {
        eigenvalues: symmetric_eigenvalues(m)?,
    })
}

/// Covariance eigenvalues below this fraction of the largest are exact zeros
/// of the rank-deficient PSD matrix and are returned as `0.0`.
pub const COVARIANCE_ZERO_SNAP: f64 = 1e-10;

/// Spectrum of `X X^T / n` (order `p`). With `via_block` the spectrum is read
/// off the symmetrized block matrix: squares of its top `min(p, n)`
/// eigenvalues, padded with zeros.
pub fn covariance_eigenvalues(x: &RectMatrix, via_block: bool) -> Result<SpectralSample> {
    let (p, n) = (x.rows(), x.cols());
    let raw = if via_block {
        let b = symmetric_eigenvalues(&build_sym_bn(x))?;
        let mut v: Vec<f64> = b.iter().rev().take(p.min(n)).map(|s| s * s).collect();
        v.resize(p, 0.0);
        v
    } else {
        symmetric_eigenvalues(&crate::matrix::build_cov(x))?
    };
    let top = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    SpectralSample::new(
        raw.into_iter()
            .map(|v| if v.abs() <= COVARIANCE_ZERO_SNAP * top { 0.0 } else { v })
            .collect(),
    )
}

/// Empirical spectral distribution: mass `1/n` at each eigenvalue.
pub fn esd(s: &SpectralSample) -> Result<StepCdf> {
    StepCdf::from_samples(&s.eigenvalues)
}

/// `(1/n) sum_k 1/(lambda_k - z)`.
pub fn stieltjes_from_eigs(s: &SpectralSample, z: UpperPoint) -> Complex64 {
    let z = z.z();
    let sum: Complex64 = s.eigenvalues.iter().map(|&l| (Complex64::new(l, 0.0) - z).inv()).sum();
    sum / s.order() as f64
}

/// `(1/n) Tr (M - zI)^{-1}` through complex linear solves.
pub fn stieltjes_resolvent(m: &SymMatrix, z: UpperPoint) -> Result<Complex64> {
    Ok(resolvent(m, z)?.trace() / m.order() as f64)
}

/// Right-hand side of the identity linking the sample-covariance transform
/// to the symmetrized block transform, for `p <= n`:
/// `S_A(z) = z^{-1/2} (N / 2p) S_B(z^{1/2}) + (n - p) / (2 p z)`,
/// with `N = n + p` and the principal root `z^{1/2}`.
pub fn covariance_from_block(s_b: Complex64, p: usize, n: usize, z: UpperPoint) -> Complex64 {
    let (pf, nf) = (p as f64, n as f64);
    let root = z.sqrt().z();
    s_b * (nf + pf) / (2.0 * pf) / root + (nf - pf) / (2.0 * pf * z.z())
}

/// `S_A(z)` for `A = X X^T / n`, computed only from the spectrum of the
/// block matrix `B_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceTransform {
    pub value: Complex64,
    /// `p > n`: the identity was applied to `X^T` and the atom at zero
    /// added back.
    pub exchanged: bool,
}

pub fn covariance_stieltjes_via_block(x: &RectMatrix, z: UpperPoint) -> Result<CovarianceTransform> {
    let (p, n) = (x.rows(), x.cols());
    if p == 0 || n == 0 {
        return invalid("data matrix must be non-empty");
    }
    let spec = eigenvalues(&build_sym_bn(x))?;
    let s_b = stieltjes_from_eigs(&spec, z.sqrt());
    if p <= n {
        return Ok(CovarianceTransform {
            value: covariance_from_block(s_b, p, n, z),
            exchanged: false,
        });
    }
    // X^T X / n (order n) shares the nonzero spectrum and B_N is the same
    // matrix up to a permutation; the p - n extra zeros of A add -1/z each.
    let s_t = covariance_from_block(s_b, n, p, z);
    let r = n as f64 / p as f64;
    Ok(CovarianceTransform {
        value: r * s_t - (1.0 - r) / z.z(),
        exchanged: true,
    })
}

/// `Im S(x + iv) / pi` at each grid point.
pub fn density_recover<F>(s: F, grid: &[f64], v: f64) -> Result<Vec<(f64, f64)>>
where
    F: Fn(UpperPoint) -> Complex64,
{
    if !(v > 0.0) {
        return invalid(format!("inversion height must be > 0, got {v}"));
    }
    grid.iter()
        .map(|&x| Ok((x, s(UpperPoint::new(x, v)?).im / std::f64::consts::PI)))
        .collect()
}

/// Evenly spaced grid of `points` values over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    let h = (hi - lo) / (points - 1) as f64;
    (0..points).map(|k| lo + h * k as f64).collect()
}

/// Default inversion grid: the support padded by 0.5 on each side.
pub fn default_inversion_grid(support: (f64, f64)) -> Vec<f64> {
    linspace(support.0 - 0.5, support.1 + 0.5, DEFAULT_INVERSION_POINTS)
}

/// Rows `x, f` of a sampled density.
pub fn write_density_csv(rows: &[(f64, f64)], mut w: impl Write) -> Result<()> {
    writeln!(w, "x,f")?;
    for (x, f) in rows {
        writeln!(w, "{x:e},{f:e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdf::Cdf;

    fn upper(re: f64, im: f64) -> UpperPoint {
        UpperPoint::new(re, im).unwrap()
    }

    #[test]
    fn small_eigenproblems() {
        assert_eq!(
            eigenvalues(&SymMatrix::diagonal(&[1.0, 2.0, 3.0]))
                .unwrap()
                .eigenvalues(),
            &[1.0, 2.0, 3.0]
        );
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, 1.0);
        let ev = eigenvalues(&m).unwrap();
        assert!((ev.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((ev.eigenvalues()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covariance_routes_agree_and_zeros_are_exact() {
        let mut rng = crate::field::RngStream::new(4, 0);
        for (p, n) in [(40, 10), (10, 40), (25, 25)] {
            let x = RectMatrix::new(p, n, (0..p * n).map(|_| rng.gaussian()).collect()).unwrap();
            let direct = covariance_eigenvalues(&x, false).unwrap();
            let block = covariance_eigenvalues(&x, true).unwrap();
            assert_eq!(direct.order(), p);
            let zeros = direct.eigenvalues().iter().filter(|&&v| v == 0.0).count();
            assert_eq!(zeros, p.saturating_sub(n));
            for (a, b) in direct.eigenvalues().iter().zip(block.eigenvalues()) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn esd_examples() {
        let f = esd(&SpectralSample::new(vec![0.0]).unwrap()).unwrap();
        assert_eq!(f.cdf(0.0), 1.0);
        assert_eq!(f.cdf(-0.1), 0.0);
        let f = esd(&SpectralSample::new(vec![1.0, -1.0]).unwrap()).unwrap();
        assert_eq!(f.cdf(0.0), 0.5);
    }

    #[test]
    fn stieltjes_examples() {
        let s = SpectralSample::new(vec![0.0]).unwrap();
        let v = stieltjes_from_eigs(&s, UpperPoint::i());
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);

        let s = SpectralSample::new(vec![-1.0, 1.0]).unwrap();
        let v = stieltjes_from_eigs(&s, UpperPoint::i());
        assert!((v - Complex64::new(0.0, 0.5)).norm() < 1e-15);

        let r = stieltjes_resolvent(&SymMatrix::zeros(1), UpperPoint::i()).unwrap();
        assert!((r - Complex64::new(0.0, 1.0)).norm() < 1e-15);

        let z = upper(0.4, 0.3);
        let r = stieltjes_resolvent(&SymMatrix::identity(5), z).unwrap();
        assert!((r - (Complex64::new(1.0, 0.0) - z.z()).inv()).norm() < 1e-14);
    }

    fn random_rect(p: usize, n: usize, rng: &mut crate::field::RngStream) -> RectMatrix {
        RectMatrix::new(p, n, (0..p * n).map(|_| rng.gaussian()).collect()).unwrap()
    }

    #[test]
    fn block_spectrum_structure() {
        let mut rng = crate::field::RngStream::new(3, 0);
        let x = random_rect(3, 5, &mut rng);
        let b = eigenvalues(&build_sym_bn(&x)).unwrap();
        let a = eigenvalues(&crate::matrix::build_cov(&x)).unwrap();
        let ev = b.eigenvalues();
        // +- pairs plus |n - p| zeros
        for k in 0..ev.len() {
            assert!((ev[k] + ev[ev.len() - 1 - k]).abs() < 1e-10);
        }
        assert_eq!(ev.iter().filter(|v| v.abs() < 1e-10).count(), 2);
        let mut sq: Vec<f64> = ev[5..].iter().map(|v| v * v).collect();
        sq.sort_by(f64::total_cmp);
        for (u, v) in sq.iter().zip(a.eigenvalues()) {
            assert!((u - v).abs() < 1e-8);
        }
    }

    #[test]
    fn covariance_identity_both_shapes() {
        let mut rng = crate::field::RngStream::new(4, 0);
        let z = upper(1.0, 1.0);
        for &(p, n) in &[(4, 6), (5, 5), (6, 4), (1, 7), (9, 2)] {
            let x = random_rect(p, n, &mut rng);
            let direct = stieltjes_from_eigs(&eigenvalues(&crate::matrix::build_cov(&x)).unwrap(), z);
            let via = covariance_stieltjes_via_block(&x, z).unwrap();
            assert_eq!(via.exchanged, p > n);
            assert!((via.value - direct).norm() / direct.norm() < 1e-10, "{p}x{n}");
        }
    }

    #[test]
    fn identity_constant_term_on_zero_matrix() {
        // X = 0: S_A = -1/z and S_B = -1/w pin down the sign of the count term
        let z = upper(0.3, 0.8);
        let s_b = -z.sqrt().z().inv();
        let v = covariance_from_block(s_b, 2, 5, z);
        assert!((v + z.z().inv()).norm() < 1e-14);
    }

    #[test]
    fn density_recover_of_point_mass_is_poisson_kernel() {
        let a = 0.7;
        let v = 0.05;
        let grid = linspace(-1.0, 2.0, 301);
        let d = density_recover(|z| (Complex64::new(a, 0.0) - z.z()).inv(), &grid, v).unwrap();
        let (peak, _) = d
            .iter()
            .cloned()
            .fold((0.0, -1.0), |b, (x, f)| if f > b.1 { (x, f) } else { b });
        assert!((peak - a).abs() < 0.011);
        for (x, f) in &d {
            let expect = v / (std::f64::consts::PI * ((x - a).powi(2) + v * v));
            assert!((f - expect).abs() < 1e-12);
        }
        assert!(density_recover(|z| z.z(), &grid, 0.0).is_err());
    }

    #[test]
    fn recovered_density_integrates_to_one() {
        let s = SpectralSample::new(vec![-0.5, 0.1, 0.3, 1.2]).unwrap();
        let v = 0.01;
        let grid = linspace(-60.0, 60.0, 240_001);
        let d = density_recover(|z| stieltjes_from_eigs(&s, z), &grid, v).unwrap();
        let h = grid[1] - grid[0];
        let mass: f64 = d.windows(2).map(|w| 0.5 * h * (w[0].1 + w[1].1)).sum();
        // Cauchy tails beyond +-60 carry about 2v/(60 pi)
        assert!((mass - 1.0).abs() < 2.0 * v, "mass {mass}");
    }
}
