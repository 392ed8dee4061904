//! Scalar ARCH(1) martingale differences `D_i = eps_i (omega + beta D_{i-1}^2)^{1/2}`
//! and the two ensembles built from them: the lex-filled symmetric matrix and
//! the panel of independent copies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FieldSample, FieldShape, Provenance, RngStream, VarianceProfile};
use crate::error::{invalid, Result};
use crate::index_lattice::triangle_len;

pub const ARCH1_BURN_IN: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arch1 {
    pub omega: f64,
    pub beta: f64,
}

impl Arch1 {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return invalid(format!("ARCH(1) omega = {} must be > 0", self.omega));
        }
        // E D^4 < infinity iff 3 beta^2 < 1 for Gaussian innovations
        if !(self.beta >= 0.0 && 3.0 * self.beta * self.beta < 1.0) {
            return invalid(format!(
                "ARCH(1) beta = {} violates 0 <= beta, 3 beta^2 < 1 (infinite fourth moment)",
                self.beta
            ));
        }
        Ok(())
    }

    /// Stationary variance `omega / (1 - beta)`.
    pub fn stationary_variance(&self) -> f64 {
        self.omega / (1.0 - self.beta)
    }

    /// `len` consecutive values after [`ARCH1_BURN_IN`] warm-up steps.
    pub fn simulate(&self, len: usize, rng: &mut RngStream) -> Vec<f64> {
        let mut d = 0.0f64;
        for _ in 0..ARCH1_BURN_IN {
            d = rng.gaussian() * (self.omega + self.beta * d * d).sqrt();
        }
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            d = rng.gaussian() * (self.omega + self.beta * d * d).sqrt();
            out.push(d);
        }
        out
    }
}

/// Symmetric matrix filled with `D_{u(i,j)}` at `(i, j)`, `u(i,j) = i(i-1)/2 + j`,
/// normalized by the stationary standard deviation.
pub fn gen_martingale_matrix_fill(n: usize, arch1: Arch1, rng: &mut RngStream) -> Result<FieldSample> {
    if n == 0 {
        return invalid("matrix order must be positive");
    }
    arch1.validate()?;
    let sd = arch1.stationary_variance().sqrt();
    let entries = arch1
        .simulate(triangle_len(n), rng)
        .into_iter()
        .map(|d| d / sd)
        .collect();
    Ok(FieldSample {
        shape: FieldShape::Triangular { n },
        entries,
        sigma_hat: sd,
        normalized: true,
        profile: Some(VarianceProfile::unit()),
        provenance: Provenance {
            generator: "martingale_fill".into(),
            params: serde_json::to_value(arch1)?,
            seed: rng.seed(),
            stream: rng.stream(),
            truncations: Vec::new(),
        },
    })
}

/// `p x n` panel whose rows are independent unit-variance ARCH(1) paths.
/// Row `i` (1-based) draws from stream `base.stream() + i` of the base seed.
pub fn gen_panel(p: usize, n: usize, arch1: Arch1, base: &RngStream) -> Result<FieldSample> {
    if p == 0 || n == 0 {
        return invalid(format!("panel dimensions must be positive, got {p}x{n}"));
    }
    arch1.validate()?;
    let sd = arch1.stationary_variance().sqrt();
    let rows: Vec<Vec<f64>> = (1..=p as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(base.seed(), base.stream().wrapping_add(i));
            arch1.simulate(n, &mut rng)
        })
        .collect();
    let entries = rows.into_iter().flatten().map(|d| d / sd).collect();
    Ok(FieldSample {
        shape: FieldShape::Rectangular { p, n },
        entries,
        sigma_hat: sd,
        normalized: true,
        profile: Some(VarianceProfile::unit()),
        provenance: Provenance {
            generator: "panel".into(),
            params: serde_json::to_value(arch1)?,
            seed: base.seed(),
            stream: base.stream(),
            truncations: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_and_stderr(xs: impl Iterator<Item = f64>) -> (f64, f64) {
        let (mut s, mut s2, mut m) = (0.0, 0.0, 0usize);
        for x in xs {
            s += x;
            s2 += x * x;
            m += 1;
        }
        let mean = s / m as f64;
        (mean, ((s2 / m as f64 - mean * mean) / m as f64).sqrt())
    }

    #[test]
    fn rejects_moment_failure() {
        let mut rng = RngStream::new(0, 0);
        let beta = 0.578; // just above 1/sqrt(3)
        assert!(gen_martingale_matrix_fill(4, Arch1 { omega: 1.0, beta }, &mut rng).is_err());
        assert!(gen_martingale_matrix_fill(4, Arch1 { omega: 0.0, beta: 0.1 }, &mut rng).is_err());
        assert!(gen_panel(0, 3, Arch1 { omega: 1.0, beta: 0.1 }, &rng).is_err());
        assert!(gen_panel(2, 3, Arch1 { omega: 1.0, beta: 0.9 }, &rng).is_err());
    }

    #[test]
    fn beta_zero_is_iid_gaussian_with_variance_omega() {
        let arch = Arch1 { omega: 2.0, beta: 0.0 };
        let raw = arch.simulate(200_000, &mut RngStream::new(3, 0));
        let (v, se) = mean_and_stderr(raw.iter().map(|d| d * d));
        assert!((v - 2.0).abs() < 3.0 * se);
        let f = gen_martingale_matrix_fill(300, arch, &mut RngStream::new(3, 1)).unwrap();
        let (v, se) = mean_and_stderr(f.entries.iter().map(|d| d * d));
        assert!((v - 1.0).abs() < 3.0 * se);
    }

    #[test]
    fn stationary_variance_identity() {
        let arch = Arch1 { omega: 1.0, beta: 0.3 };
        let d = arch.simulate(1_000_000, &mut RngStream::new(77, 0));
        let v = d.iter().map(|x| x * x).sum::<f64>() / d.len() as f64;
        let target = arch.stationary_variance();
        assert!((v / target - 1.0).abs() < 0.01, "{v} vs {target}");
        let (m, se) = mean_and_stderr(d.windows(2).map(|w| w[0] * w[1]));
        assert!(m.abs() < 3.0 * se, "successive products {m} +- {se}");
    }

    #[test]
    fn fill_places_sequence_in_lex_order() {
        let arch = Arch1 { omega: 1.0, beta: 0.2 };
        let f = gen_martingale_matrix_fill(5, arch, &mut RngStream::new(9, 4)).unwrap();
        let d = arch.simulate(15, &mut RngStream::new(9, 4));
        let sd = arch.stationary_variance().sqrt();
        assert_eq!(f.get(4, 4), d[9] / sd);
        assert_eq!(f.get(2, 1), d[1] / sd);
        assert_eq!(f.get(1, 1), d[0] / sd);
    }

    #[test]
    fn panel_rows_independent_unit_variance() {
        let arch = Arch1 { omega: 1.0, beta: 0.3 };
        let n = 1_000_000;
        let f = gen_panel(2, n, arch, &RngStream::new(5, 0)).unwrap();
        let (r1, r2) = f.entries.split_at(n);
        for row in [r1, r2] {
            let v = row.iter().map(|x| x * x).sum::<f64>() / n as f64;
            assert!((v - 1.0).abs() < 0.01, "row variance {v}");
        }
        let (m, se) = mean_and_stderr(r1.iter().zip(r2).map(|(a, b)| a * b));
        assert!(m.abs() < 3.0 * se, "cross-row product {m} +- {se}");
    }

    #[test]
    fn panel_beta_zero_and_reproducible() {
        let arch = Arch1 { omega: 1.0, beta: 0.0 };
        let a = gen_panel(3, 50, arch, &RngStream::new(1, 0)).unwrap();
        let b = gen_panel(3, 50, arch, &RngStream::new(1, 0)).unwrap();
        assert_eq!(a, b);
        let row2 = arch.simulate(50, &mut RngStream::new(1, 2));
        assert_eq!(a.get(2, 7), row2[6]);
    }
}
