use std::f64::consts::PI;

use num_complex::Complex64;

use super::{law_knots, LimitLaw};
use crate::cdf::Cdf;
use crate::error::Result;
use crate::point::UpperPoint;

/// Wigner's semicircle law on `[-2, 2]`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Semicircle;

impl Semicircle {
    /// `(-z + sqrt(z - 2) sqrt(z + 2)) / 2`; the product of principal roots
    /// picks the branch with `s(z) ~ -1/z`.
    pub fn transform(z: Complex64) -> Complex64 {
        let two = Complex64::new(2.0, 0.0);
        (-z + (z - two).sqrt() * (z + two).sqrt()) * 0.5
    }
}

impl Cdf for Semicircle {
    fn cdf(&self, x: f64) -> f64 {
        if x <= -2.0 {
            0.0
        } else if x >= 2.0 {
            1.0
        } else {
            (0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI).clamp(0.0, 1.0)
        }
    }

    fn knots(&self) -> Vec<f64> {
        law_knots(self.support(), None)
    }
}

impl LimitLaw for Semicircle {
    fn density(&self, x: f64) -> f64 {
        if x.abs() < 2.0 {
            (4.0 - x * x).sqrt() / (2.0 * PI)
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (-2.0, 2.0)
    }

    fn stieltjes(&self, z: UpperPoint) -> Result<Complex64> {
        Ok(Self::transform(z.z()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
        let h = (b - a) / (2 * m) as f64;
        let mut s = f(a) + f(b);
        for k in 1..2 * m {
            s += f(a + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn density_and_cdf_values() {
        assert!((Semicircle.density(0.0) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(Semicircle.cdf(0.0), 0.5);
        assert_eq!(Semicircle.cdf(2.0), 1.0);
        assert_eq!(Semicircle.cdf(-2.0), 0.0);
    }

    #[test]
    fn second_moment_is_one() {
        // x = 2 sin t removes the edge singularity of the derivative
        let m2 = simpson(
            |t| 4.0 * t.sin().powi(2) * Semicircle.density(2.0 * t.sin()) * 2.0 * t.cos(),
            -PI / 2.0,
            PI / 2.0,
            2000,
        );
        assert!((m2 - 1.0).abs() < 1e-10, "{m2}");
    }

    #[test]
    fn cdf_matches_quadrature() {
        for &x in &[-1.9, -0.7, 0.3, 1.2, 1.99] {
            let t1 = (x / 2.0f64).asin();
            let q = simpson(
                |t| Semicircle.density(2.0 * t.sin()) * 2.0 * t.cos(),
                -PI / 2.0,
                t1,
                2000,
            );
            assert!((q - Semicircle.cdf(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn transform_matches_quadrature_and_fixed_point() {
        for &(re, im) in &[(0.0, 1.0), (1.5, 0.2), (-3.0, 0.5), (0.1, 5.0)] {
            let z = Complex64::new(re, im);
            let s = Semicircle.stieltjes(UpperPoint::new(re, im).unwrap()).unwrap();
            // s solves s^2 + z s + 1 = 0 in the upper half-plane
            assert!((s * s + z * s + 1.0).norm() < 1e-13);
            assert!(s.im > 0.0);
            let f = |t: f64, part: bool| {
                let x = 2.0 * t.sin();
                let v = Complex64::new(Semicircle.density(x) * 2.0 * t.cos(), 0.0) / (Complex64::new(x, 0.0) - z);
                if part {
                    v.re
                } else {
                    v.im
                }
            };
            let q = Complex64::new(
                simpson(|t| f(t, true), -PI / 2.0, PI / 2.0, 4000),
                simpson(|t| f(t, false), -PI / 2.0, PI / 2.0, 4000),
            );
            assert!((q - s).norm() < 1e-8, "{q} vs {s}");
        }
        let s = Semicircle.stieltjes(UpperPoint::i()).unwrap();
        assert!((s.im - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15 && s.re.abs() < 1e-15);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for k in 1..200 {
            let x = -1.99 + 3.98 * k as f64 / 200.0;
            let q = Semicircle.quantile(Semicircle.cdf(x)).unwrap();
            assert!((q - x).abs() < 1e-6);
        }
    }

    #[test]
    fn monotone_on_fine_grid() {
        let xs = crate::spectra::linspace(-2.5, 2.5, 10_000);
        assert!(xs.windows(2).all(|w| Semicircle.cdf(w[0]) <= Semicircle.cdf(w[1])));
    }
}
