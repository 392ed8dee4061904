use std::f64::consts::PI;

use num_complex::Complex64;

use super::{law_knots, LimitLaw};
use crate::cdf::Cdf;
use crate::error::{invalid, Result};
use crate::point::UpperPoint;

/// Marchenko-Pastur law with ratio `y = p/n`: continuous part on
/// `[(1 - sqrt y)^2, (1 + sqrt y)^2]` and an atom `1 - 1/y` at zero when
/// `y > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchenkoPastur {
    y: f64,
    b: f64,
    c: f64,
}

impl MarchenkoPastur {
    pub fn new(y: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite()) {
            return invalid(format!("Marchenko-Pastur ratio must be > 0, got {y}"));
        }
        let r = y.sqrt();
        Ok(Self {
            y,
            b: (1.0 - r) * (1.0 - r),
            c: (1.0 + r) * (1.0 + r),
        })
    }

    pub fn ratio(&self) -> f64 {
        self.y
    }

    pub fn atom_mass(&self) -> f64 {
        if self.y > 1.0 {
            1.0 - 1.0 / self.y
        } else {
            0.0
        }
    }

    /// Mass of the continuous part below `x`. With `x = 1 + y - 2 sqrt(y) cos t`
    /// the integrand becomes a rational function of `cos t`, integrated in
    /// closed form.
    fn continuous_cdf(&self, x: f64) -> f64 {
        if x <= self.b {
            return 0.0;
        }
        let y = self.y;
        let (a, bb) = (1.0 + y, 2.0 * y.sqrt());
        let theta = ((a - x.min(self.c)) / bb).clamp(-1.0, 1.0).acos();
        let h = (self.c.sqrt() * (theta / 2.0).sin()).atan2(self.b.sqrt() * (theta / 2.0).cos());
        let v = (bb * theta.sin() + a * theta - 2.0 * (1.0 - y).abs() * h) / (2.0 * PI * y);
        v.clamp(0.0, 1.0f64.min(1.0 / y))
    }
}

impl Cdf for MarchenkoPastur {
    fn cdf(&self, x: f64) -> f64 {
        let atom = if x >= 0.0 { self.atom_mass() } else { 0.0 };
        (atom + self.continuous_cdf(x)).min(1.0)
    }

    fn cdf_left(&self, x: f64) -> f64 {
        let atom = if x > 0.0 { self.atom_mass() } else { 0.0 };
        (atom + self.continuous_cdf(x)).min(1.0)
    }

    fn knots(&self) -> Vec<f64> {
        law_knots(self.support(), self.atom())
    }
}

impl LimitLaw for MarchenkoPastur {
    fn density(&self, x: f64) -> f64 {
        if x > self.b && x < self.c {
            ((self.c - x) * (x - self.b)).sqrt() / (2.0 * PI * x * self.y)
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.b, self.c)
    }

    fn atom(&self) -> Option<(f64, f64)> {
        (self.y > 1.0).then(|| (0.0, self.atom_mass()))
    }

    /// `(1 - y - z + sqrt(z - b) sqrt(z - c)) / (2 y z)`, atom included.
    fn stieltjes(&self, z: UpperPoint) -> Result<Complex64> {
        let z = z.z();
        let root = (z - self.b).sqrt() * (z - self.c).sqrt();
        Ok((1.0 - self.y - z + root) / (2.0 * self.y * z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Simpson over `t` after `x = b + (c - b)(1 - cos t)/2`, which removes the
    /// square-root edges (and the `x^{-1/2}` pole when `y = 1`).
    fn quad(law: &MarchenkoPastur, upto: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let (b, c) = law.support();
        let half = (c - b) / 2.0;
        let t_end = if upto >= c {
            PI
        } else {
            (1.0 - (upto - b) / half).clamp(-1.0, 1.0).acos()
        };
        let m = 20_000;
        let h = t_end / (2 * m) as f64;
        let g = |t: f64| {
            let x = b + half * (1.0 - t.cos());
            let s = t.sin();
            // density * dx with sqrt((c-x)(x-b)) = half * sin t
            let w = if b == 0.0 {
                // sin^2 t / (1 - cos t) = 1 + cos t
                half * (1.0 + t.cos()) / (2.0 * PI * law.ratio())
            } else {
                half * s * half * s / (2.0 * PI * x * law.ratio())
            };
            f(x) * w
        };
        let mut s = g(0.0) + g(t_end);
        for k in 1..2 * m {
            s += g(h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn edges_and_atoms() {
        let l = MarchenkoPastur::new(1.0).unwrap();
        assert_eq!(l.support(), (0.0, 4.0));
        assert_eq!(l.atom(), None);
        let l = MarchenkoPastur::new(4.0).unwrap();
        assert_eq!(l.atom(), Some((0.0, 0.75)));
        assert_eq!(l.cdf(0.0), 0.75);
        assert_eq!(l.cdf_left(0.0), 0.0);
        assert!(MarchenkoPastur::new(0.0).is_err());
        assert!(MarchenkoPastur::new(-1.0).is_err());
    }

    #[test]
    fn total_mass_is_one() {
        for &y in &[0.25, 0.5, 1.0, 2.0, 4.0] {
            let l = MarchenkoPastur::new(y).unwrap();
            let cont = quad(&l, f64::INFINITY, |_| Complex64::new(1.0, 0.0)).re;
            assert!((cont + l.atom_mass() - 1.0).abs() < 1e-8, "y={y}: {cont}");
            assert!((l.cdf(l.support().1) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_cdf_matches_quadrature() {
        for &y in &[0.25, 1.0, 3.0] {
            let l = MarchenkoPastur::new(y).unwrap();
            let (b, c) = l.support();
            for k in 1..10 {
                let x = b + (c - b) * k as f64 / 10.0;
                let q = quad(&l, x, |_| Complex64::new(1.0, 0.0)).re + l.atom_mass();
                assert!((q - l.cdf(x)).abs() < 1e-9, "y={y} x={x}: {q} vs {}", l.cdf(x));
            }
        }
    }

    #[test]
    fn transform_matches_quadrature() {
        for &y in &[0.5, 1.0, 4.0] {
            let l = MarchenkoPastur::new(y).unwrap();
            for &(re, im) in &[(1.0, 1.0), (0.2, 0.3), (-1.0, 0.5), (6.0, 0.1)] {
                let z = UpperPoint::new(re, im).unwrap();
                let atom = Complex64::new(l.atom_mass(), 0.0) / (-z.z());
                let q = quad(&l, f64::INFINITY, |x| (Complex64::new(x, 0.0) - z.z()).inv()) + atom;
                let s = l.stieltjes(z).unwrap();
                assert!((q - s).norm() < 1e-7, "y={y} z={re}+{im}i: {q} vs {s}");
                assert!(s.im > 0.0);
            }
        }
    }

    #[test]
    fn quantiles() {
        let l = MarchenkoPastur::new(0.5).unwrap();
        let (b, c) = l.support();
        for k in 1..100 {
            let x = b + (c - b) * k as f64 / 100.0;
            assert!((l.quantile(l.cdf(x)).unwrap() - x).abs() < 1e-6);
        }
        let l = MarchenkoPastur::new(4.0).unwrap();
        assert_eq!(l.quantile(0.5).unwrap(), 0.0);
        assert_eq!(l.quantile(0.75).unwrap(), 0.0);
        assert!(l.quantile(0.76).unwrap() >= l.support().0);
    }

    #[test]
    fn monotone_on_fine_grid() {
        for &y in &[0.3, 1.0, 2.5] {
            let l = MarchenkoPastur::new(y).unwrap();
            let xs = crate::spectra::linspace(-0.5, l.support().1 + 0.5, 10_000);
            assert!(xs.windows(2).all(|w| l.cdf(w[0]) <= l.cdf(w[1])));
        }
    }
}
