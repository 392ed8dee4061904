//! Nonlinear ARCH random field on Z^2,
//! `X_ij = xi_ij (c + sum_{(k,l) >lex (0,0)} alpha_kl tanh(X_{i-k, j-l}))`.
//!
//! Coefficients live on the quadrant `k, l >= 0` (minus the origin) with
//! `alpha_kl` proportional to `rho^(k+l-1)`. The normalizing constant is the
//! infinite-quadrant sum, so a finite window carries mass at most `alpha_tot`
//! and growing the window only appends the geometric tail.

use serde::{Deserialize, Serialize};

use super::{FieldSample, FieldShape, Provenance, RngStream, VarianceProfile};
use crate::error::{invalid, Result};

/// Side of the independent square lattice used to estimate `E X_0^2`
/// (`SIGMA_MC_SIDE^2` samples after burn-in).
pub const SIGMA_MC_SIDE: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchSpec {
    pub c: f64,
    pub rho: f64,
    pub alpha_tot: f64,
    pub window: usize,
    pub burn_in: usize,
}

impl ArchSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return invalid(format!("ARCH base volatility c = {} must be > 0", self.c));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return invalid(format!("ARCH decay rho = {} must lie in (0, 1)", self.rho));
        }
        if !(self.alpha_tot >= 0.0 && self.alpha_tot < 1.0) {
            return invalid(format!(
                "ARCH coefficient mass alpha_tot = {} must lie in [0, 1)",
                self.alpha_tot
            ));
        }
        if self.window < 1 {
            return invalid("ARCH window must be >= 1");
        }
        Ok(())
    }
}

impl Default for ArchSpec {
    fn default() -> Self {
        Self {
            c: 1.0,
            rho: 0.5,
            alpha_tot: 0.5,
            window: 8,
            burn_in: 32,
        }
    }
}

/// `alpha[k][l]` for `0 <= k, l <= window`, zero at the origin.
pub fn arch_coefficients(spec: &ArchSpec) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let rho = spec.rho;
    // sum over k, l >= 0, (k, l) != 0 of rho^(k+l-1)
    let quadrant = ((1.0 - rho).powi(-2) - 1.0) / rho;
    let w = spec.window;
    let mut alpha = vec![vec![0.0; w + 1]; w + 1];
    for (k, row) in alpha.iter_mut().enumerate() {
        for (l, a) in row.iter_mut().enumerate() {
            if k + l > 0 {
                *a = spec.alpha_tot * rho.powi((k + l) as i32 - 1) / quadrant;
            }
        }
    }
    Ok(alpha)
}

/// Causal lex-order sweep over a `side x side` lattice, zero outside.
fn sweep(spec: &ArchSpec, alpha: &[Vec<f64>], side: usize, rng: &mut RngStream) -> Vec<f64> {
    let w = spec.window;
    let mut x = vec![0.0; side * side];
    let mut t = vec![0.0; side * side];
    for r in 0..side {
        for c in 0..side {
            let mut acc = spec.c;
            for k in 0..=w.min(r) {
                let row = (r - k) * side;
                let lo = usize::from(k == 0);
                for l in lo..=w.min(c) {
                    acc += alpha[k][l] * t[row + c - l];
                }
            }
            let v = rng.gaussian() * acc;
            x[r * side + c] = v;
            t[r * side + c] = v.tanh();
        }
    }
    x
}

/// Stationary ARCH field restricted to the lower triangle of the centered
/// `n x n` window of an `(n + 2B)^2` sweep. Entries are raw; `sigma_hat`
/// estimates `sqrt(E X_0^2)` from an independent lattice.
pub fn gen_arch_field(n: usize, spec: &ArchSpec, rng: &mut RngStream) -> Result<FieldSample> {
    if n == 0 {
        return invalid("matrix order must be positive");
    }
    let alpha = arch_coefficients(spec)?;
    let b = spec.burn_in;
    let side = n + 2 * b;
    let lattice = sweep(spec, &alpha, side, rng);

    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            entries.push(lattice[(i + b) * side + (j + b)]);
        }
    }

    let mut mc = rng.derive(0x51_67_4d_41);
    let mc_side = SIGMA_MC_SIDE + 2 * b;
    let mc_lattice = sweep(spec, &alpha, mc_side, &mut mc);
    let mut sum_sq = 0.0;
    for r in b..b + SIGMA_MC_SIDE {
        sum_sq += mc_lattice[r * mc_side + b..r * mc_side + b + SIGMA_MC_SIDE]
            .iter()
            .map(|v| v * v)
            .sum::<f64>();
    }
    let var = sum_sq / (SIGMA_MC_SIDE * SIGMA_MC_SIDE) as f64;

    Ok(FieldSample {
        shape: FieldShape::Triangular { n },
        entries,
        sigma_hat: var.sqrt(),
        normalized: false,
        profile: Some(VarianceProfile::Uniform { variance: var }),
        provenance: Provenance {
            generator: "arch".into(),
            params: serde_json::to_value(spec)?,
            seed: rng.seed(),
            stream: rng.stream(),
            truncations: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ArchSpec {
        ArchSpec::default()
    }

    #[test]
    fn coefficient_mass_below_alpha_tot() {
        for w in [1, 4, 8, 16, 40] {
            let s = ArchSpec { window: w, ..spec() };
            let a = arch_coefficients(&s).unwrap();
            let total: f64 = a.iter().flatten().sum();
            assert!(total <= s.alpha_tot + 1e-15);
            assert!(a.iter().flatten().all(|&v| v >= 0.0));
            assert_eq!(a[0][0], 0.0);
        }
        let big = ArchSpec { window: 80, ..spec() };
        let total: f64 = arch_coefficients(&big).unwrap().iter().flatten().sum();
        assert!((total - big.alpha_tot).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut rng = RngStream::new(0, 0);
        for bad in [
            ArchSpec {
                alpha_tot: 1.0,
                ..spec()
            },
            ArchSpec {
                alpha_tot: 1.5,
                ..spec()
            },
            ArchSpec { window: 0, ..spec() },
            ArchSpec { c: 0.0, ..spec() },
            ArchSpec { rho: 1.0, ..spec() },
        ] {
            assert!(gen_arch_field(4, &bad, &mut rng).is_err());
        }
    }

    #[test]
    fn zero_mass_reduces_to_scaled_noise() {
        let s = ArchSpec {
            c: 2.5,
            alpha_tot: 0.0,
            ..spec()
        };
        let f = gen_arch_field(8, &s, &mut RngStream::new(4, 0)).unwrap();
        // 10^6 samples: relative stderr of the variance is sqrt(2e-6)
        assert!((f.sigma_hat - 2.5).abs() < 2.5 * 3.0 * (2e-6f64).sqrt());
    }

    #[test]
    fn mean_and_lex_future_orthogonality() {
        let n = 512;
        let f = gen_arch_field(n, &spec(), &mut RngStream::new(21, 0)).unwrap();
        // full square window for the orthogonality check
        let alpha = arch_coefficients(&spec()).unwrap();
        let side = n + 64;
        let lat = sweep(&spec(), &alpha, side, &mut RngStream::new(22, 0));
        let at = |r: usize, c: usize| lat[(r + 32) * side + c + 32];

        let mean = f.entries.iter().sum::<f64>() / f.entries.len() as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");

        let sq = |r, c| at(r, c) * at(r, c);
        let var: f64 = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| sq(r, c))
            .sum::<f64>()
            / (n * n) as f64;
        for (dr, dc) in [(0usize, 1usize), (1, 0), (1, 1), (0, 2), (2, 3)] {
            let mut s = 0.0;
            let mut s2 = 0.0;
            let mut m = 0usize;
            for r in 0..n - dr {
                for c in 0..n - dc {
                    let p = at(r, c) * at(r + dr, c + dc);
                    s += p;
                    s2 += p * p;
                    m += 1;
                }
            }
            let mean = s / m as f64 / var;
            let stderr = (s2 / m as f64).sqrt() / (m as f64).sqrt() / var;
            assert!(mean.abs() < 0.02, "lag ({dr},{dc}) autocov {mean}");
            assert!(mean.abs() < 3.0 * stderr, "lag ({dr},{dc}): {mean} vs {stderr}");
        }
    }

    #[test]
    fn unit_normalization_variance() {
        let f = gen_arch_field(400, &spec(), &mut RngStream::new(2, 5))
            .unwrap()
            .normalized();
        let var = f.entries.iter().map(|x| x * x).sum::<f64>() / f.entries.len() as f64;
        assert!((0.9..=1.1).contains(&var), "var {var}");
        match f.profile {
            Some(VarianceProfile::Uniform { variance }) => assert!((variance - 1.0).abs() < 1e-12),
            other => panic!("unexpected profile {other:?}"),
        }
    }

    #[test]
    fn window_doubling_changes_entries_geometrically() {
        let s8 = spec();
        let s16 = ArchSpec { window: 16, ..spec() };
        let a = gen_arch_field(128, &s8, &mut RngStream::new(13, 0)).unwrap();
        let b = gen_arch_field(128, &s16, &mut RngStream::new(13, 0)).unwrap();
        let diff = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let bound = 10.0 * s8.alpha_tot.powi(s8.window as i32);
        assert!(diff < bound, "max diff {diff} vs {bound}");
    }

    #[test]
    fn reproducible() {
        let a = gen_arch_field(32, &spec(), &mut RngStream::new(1, 1)).unwrap();
        let b = gen_arch_field(32, &spec(), &mut RngStream::new(1, 1)).unwrap();
        assert_eq!(a, b);
    }
}
