//! Eigenvalues of a dense symmetric matrix: Householder reduction to
//! tridiagonal form followed by implicit-shift QL.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

const MAX_QL_SWEEPS: usize = 60;
const PAR_ROWS: usize = 192;

/// Diagonal and sub-diagonal of an orthogonally similar tridiagonal matrix.
pub fn tridiagonalize(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.order();
    let mut a = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return (d, e);
    }
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let x = &a[k * n + lo..k * n + n];
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        d[k] = a[k * n + k];
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        v[lo..].copy_from_slice(x);
        v[lo] -= alpha;
        let vnorm_sq: f64 = v[lo..].iter().map(|t| t * t).sum();
        e[k] = alpha;
        if vnorm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm_sq;
        let vs = &v[lo..];

        // p = tau * S v over the trailing block
        let rows = &a[lo * n..];
        let fill = |(r, pi): (usize, &mut f64)| {
            let row = &rows[r * n + lo..r * n + n];
            *pi = tau * row.iter().zip(vs).map(|(s, t)| s * t).sum::<f64>();
        };
        if n - lo >= PAR_ROWS {
            p[lo..].par_iter_mut().enumerate().for_each(fill);
        } else {
            p[lo..].iter_mut().enumerate().for_each(fill);
        }
        let kk = 0.5 * tau * p[lo..].iter().zip(vs).map(|(s, t)| s * t).sum::<f64>();
        for (pi, vi) in p[lo..].iter_mut().zip(vs) {
            *pi -= kk * vi;
        }
        let ws = &p[lo..];

        // S <- S - v w^T - w v^T
        let update = |(r, row): (usize, &mut [f64])| {
            let (vr, wr) = (vs[r], ws[r]);
            for ((s, vc), wc) in row[lo..].iter_mut().zip(vs).zip(ws) {
                *s -= vr * wc + wr * vc;
            }
        };
        let trailing = &mut a[lo * n..];
        if n - lo >= PAR_ROWS {
            trailing.par_chunks_mut(n).enumerate().for_each(update);
        } else {
            trailing.chunks_mut(n).enumerate().for_each(update);
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    d[n - 1] = a[n * n - 1];
    e[n - 1] = 0.0;
    (d, e)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (`e[i]` couples `i` and `i + 1`; `e[n-1]` is ignored).
/// Returned unsorted.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    e[n - 1] = 0.0;
    // Absolute floor: clusters of (near-)zero eigenvalues never satisfy the
    // relative test, and eps * ||T|| is already the reduction's backward error.
    let floor = f64::EPSILON
        * d.iter()
            .zip(&e)
            .map(|(a, b)| a.abs() + 2.0 * b.abs())
            .fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence {
                    what: "implicit QL",
                    iterations: iter,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// All eigenvalues, ascending.
pub fn symmetric_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let (d, e) = tridiagonalize(m);
    let mut ev = tridiagonal_eigenvalues(d, e)?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
