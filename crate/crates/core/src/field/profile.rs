use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Declared entry variances `sigma^2_ij`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarianceProfile {
    /// Every entry has the same variance.
    Uniform { variance: f64 },
    /// `sigma^2_ij = a_i^2 a_j^2`.
    Product { a_sq: Vec<f64> },
    /// Lower-triangle variances in lexicographic order.
    Explicit { lex: Vec<f64> },
}

impl VarianceProfile {
    pub fn unit() -> Self {
        VarianceProfile::Uniform { variance: 1.0 }
    }

    /// Variance of position `(i, j)`, 1-based.
    pub fn variance(&self, i: usize, j: usize) -> f64 {
        match self {
            VarianceProfile::Uniform { variance } => *variance,
            VarianceProfile::Product { a_sq } => a_sq[i - 1] * a_sq[j - 1],
            VarianceProfile::Explicit { lex } => {
                let (r, c) = if i >= j { (i, j) } else { (j, i) };
                lex[r * (r - 1) / 2 + c - 1]
            }
        }
    }

    /// Checks the profile covers an order-`n` triangle with non-negative,
    /// finite variances.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |v: f64| !(v.is_finite() && v >= 0.0);
        match self {
            VarianceProfile::Uniform { variance } => {
                if bad(*variance) {
                    return invalid(format!("variance {variance} must be finite and >= 0"));
                }
            }
            VarianceProfile::Product { a_sq } => {
                if a_sq.len() < n {
                    return invalid(format!("profile has {} weights, need {n}", a_sq.len()));
                }
                if let Some(v) = a_sq.iter().find(|v| bad(**v)) {
                    return invalid(format!("a_j^2 = {v} must be finite and >= 0"));
                }
            }
            VarianceProfile::Explicit { lex } => {
                if lex.len() < n * (n + 1) / 2 {
                    return invalid("explicit profile shorter than the triangle");
                }
                if let Some(v) = lex.iter().find(|v| bad(**v)) {
                    return invalid(format!("variance {v} must be finite and >= 0"));
                }
            }
        }
        Ok(())
    }
}

/// Variance profile `sigma^2_ij = a_i^2 a_j^2` from the first `n` weights.
pub fn sample_profile_from_sequence(n: usize, a_sq: &[f64]) -> Result<VarianceProfile> {
    if a_sq.len() < n {
        return invalid(format!("need {n} weights, got {}", a_sq.len()));
    }
    let profile = VarianceProfile::Product {
        a_sq: a_sq[..n].to_vec(),
    };
    profile.validate(n)?;
    Ok(profile)
}

/// Empirical `nu_n(t) = (1/n) #{j : a_j^2 <= t}`.
pub fn empirical_nu(a_sq: &[f64], t: f64) -> f64 {
    a_sq.iter().filter(|&&a| a <= t).count() as f64 / a_sq.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RngStream;

    #[test]
    fn unit_sequence_gives_unit_profile() {
        let p = sample_profile_from_sequence(5, &[1.0; 5]).unwrap();
        for i in 1..=5 {
            for j in 1..=i {
                assert_eq!(p.variance(i, j), 1.0);
            }
        }
    }

    #[test]
    fn product_formula() {
        let p = sample_profile_from_sequence(2, &[2.0, 0.0]).unwrap();
        assert_eq!(p.variance(2, 1), 0.0);
        assert_eq!(p.variance(1, 1), 4.0);
    }

    #[test]
    fn rejects_negative_and_short() {
        assert!(sample_profile_from_sequence(2, &[1.0, -0.5]).is_err());
        assert!(sample_profile_from_sequence(3, &[1.0, 1.0]).is_err());
        assert!(sample_profile_from_sequence(1, &[f64::INFINITY]).is_err());
    }

    #[test]
    fn empirical_nu_of_uniform_weights() {
        let n = 100_000;
        let mut rng = RngStream::new(11, 0);
        let a_sq: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let mut worst: f64 = 0.0;
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            worst = worst.max((empirical_nu(&a_sq, t) - t).abs());
        }
        assert!(worst < 0.01, "sup deviation {worst}");
    }
}
