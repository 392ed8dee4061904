//! Limiting spectral laws: the semicircle, Marchenko-Pastur and the
//! variance-profile limit defined by a self-consistent equation.

mod marchenko_pastur;
mod semicircle;
mod variance_profile;

pub use marchenko_pastur::MarchenkoPastur;
pub use semicircle::Semicircle;
pub use variance_profile::{
    vp_cdf, vp_default_grid, vp_fixed_point, DiscreteMeasure, FixedPoint, VarianceProfileLaw, VP_MAX_ITER, VP_TOL,
};

use std::io::Write;

use num_complex::Complex64;

use crate::cdf::Cdf;
use crate::error::{invalid, Result};
use crate::point::UpperPoint;

/// Number of evenly spaced knots a continuous law exposes to distance
/// computations (in addition to its atom).
pub const LAW_KNOTS: usize = 4001;

/// A limiting distribution with an absolutely continuous part on a compact
/// support and at most one atom.
pub trait LimitLaw: Cdf + Send + Sync {
    /// Density of the continuous part.
    fn density(&self, x: f64) -> f64;

    /// Interval carrying the continuous part.
    fn support(&self) -> (f64, f64);

    /// `(location, mass)` of the atom, if any.
    fn atom(&self) -> Option<(f64, f64)> {
        None
    }

    /// `int 1/(x - z) dF(x)`.
    fn stieltjes(&self, z: UpperPoint) -> Result<Complex64>;

    /// Smallest `x` with `F(x) >= p`, by bisection.
    fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("quantile level {p} outside [0, 1]"));
        }
        let (mut lo, mut hi) = self.support();
        if let Some((x0, _)) = self.atom() {
            lo = lo.min(x0);
            hi = hi.max(x0);
        }
        if p == 0.0 {
            return Ok(lo);
        }
        if let Some((x0, _)) = self.atom() {
            if self.cdf_left(x0) < p && self.cdf(x0) >= p {
                return Ok(x0);
            }
        }
        // F(lo - 1) = 0 < p <= F(hi)
        lo -= 1.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) >= p {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// Evenly spaced support knots plus the atom location.
pub(crate) fn law_knots(support: (f64, f64), atom: Option<(f64, f64)>) -> Vec<f64> {
    let mut k = crate::spectra::linspace(support.0, support.1, LAW_KNOTS);
    if let Some((x0, _)) = atom {
        k.push(x0);
        k.sort_by(f64::total_cmp);
        k.dedup();
    }
    k
}

/// Rows `x, pdf, cdf` on an evenly spaced grid over the support padded by
/// `pad` on each side.
pub fn write_law_csv<L: LimitLaw + ?Sized>(law: &L, points: usize, pad: f64, mut w: impl Write) -> Result<()> {
    let (lo, hi) = law.support();
    writeln!(w, "x,pdf,cdf")?;
    for x in crate::spectra::linspace(lo - pad, hi + pad, points) {
        writeln!(w, "{x:e},{:e},{:e}", law.density(x), law.cdf(x))?;
    }
    Ok(())
}
