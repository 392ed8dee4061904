//! Levy and Kolmogorov distances between distribution functions.

use crate::cdf::Cdf;

/// Guaranteed absolute accuracy of [`levy_distance`]. The bisection runs to
/// floating-point resolution, so in practice the error is a few ulps.
pub const LEVY_TOL: f64 = 1e-7;

/// `sup_x (G(x) - F(x + eps)) <= eps`, checked where the difference can peak:
/// at jumps of `G` (right values and left limits) and just before jumps of
/// `F(. + eps)`.
fn one_sided_ok<F: Cdf + ?Sized, G: Cdf + ?Sized>(f: &F, g: &G, fk: &[f64], gk: &[f64], eps: f64) -> bool {
    let ok = |d: f64| d <= eps;
    gk.iter()
        .all(|&t| ok(g.cdf(t) - f.cdf(t + eps)) && ok(g.cdf_left(t) - f.cdf_left(t + eps)))
        && fk
            .iter()
            .all(|&s| ok(g.cdf_left(s - eps) - f.cdf_left(s)) && ok(g.cdf(s - eps) - f.cdf(s)))
}

/// `inf { eps > 0 : F(x - eps) - eps <= G(x) <= F(x + eps) + eps for all x }`,
/// by bisection on `eps` in `[0, 1]` down to adjacent floats; the smallest
/// `eps` found to satisfy the sandwich is returned.
///
/// Exact (to [`LEVY_TOL`]) when either argument is a step function; for two
/// continuous laws the check is confined to their knots.
pub fn levy_distance<F: Cdf + ?Sized, G: Cdf + ?Sized>(f: &F, g: &G) -> f64 {
    let fk = f.knots();
    let gk = g.knots();
    let holds = |eps: f64| one_sided_ok(f, g, &fk, &gk, eps) && one_sided_ok(g, f, &gk, &fk, eps);
    if holds(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `sup_x |F(x) - G(x)|` over the merged knots, using both right values and
/// left limits.
pub fn kolmogorov_distance<F: Cdf + ?Sized, G: Cdf + ?Sized>(f: &F, g: &G) -> f64 {
    f.knots()
        .into_iter()
        .chain(g.knots())
        .map(|t| (f.cdf(t) - g.cdf(t)).abs().max((f.cdf_left(t) - g.cdf_left(t)).abs()))
        .fold(0.0, f64::max)
}
