use std::io::Write;

use crate::error::{invalid, Result};

/// A distribution function on the real line.
///
/// `knots` lists the points where the function may jump or bend; distance
/// computations only inspect these points (and their shifts).
pub trait Cdf {
    fn cdf(&self, x: f64) -> f64;

    /// `F(x-)`; equal to `cdf` for continuous distributions.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }

    fn knots(&self) -> Vec<f64>;
}

impl<T: Cdf + ?Sized> Cdf for &T {
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn cdf_left(&self, x: f64) -> f64 {
        (**self).cdf_left(x)
    }
    fn knots(&self) -> Vec<f64> {
        (**self).knots()
    }
}

/// Right-continuous step distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    points: Vec<f64>,
    cumulative: Vec<f64>,
}

impl StepCdf {
    /// Equal mass `1/len` at every value; repeated values merge.
    pub fn from_samples(values: &[f64]) -> Result<Self> {
        let w = vec![1.0; values.len()];
        Self::from_weighted(values, &w)
    }

    /// Masses proportional to `weights` (normalized to one).
    pub fn from_weighted(values: &[f64], weights: &[f64]) -> Result<Self> {
        if values.is_empty() || values.len() != weights.len() {
            return invalid("step CDF needs matching, non-empty values and weights");
        }
        if values.iter().any(|v| !v.is_finite()) || weights.iter().any(|w| !(*w >= 0.0)) {
            return invalid("step CDF needs finite values and non-negative weights");
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return invalid("step CDF weights sum to zero");
        }
        let mut pairs: Vec<(f64, f64)> = values.iter().copied().zip(weights.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut points: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut mass: Vec<f64> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            if points.last() == Some(&x) {
                *mass.last_mut().expect("non-empty") += w;
            } else {
                points.push(x);
                mass.push(w);
            }
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = mass
            .iter()
            .map(|m| {
                acc += m;
                acc / total
            })
            .collect();
        *cumulative.last_mut().expect("non-empty") = 1.0;
        Ok(Self { points, cumulative })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Rows `t, F(t)` at each jump.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "t,F")?;
        for (t, f) in self.points.iter().zip(&self.cumulative) {
            writeln!(w, "{t:e},{f:e}")?;
        }
        Ok(())
    }
}

impl Cdf for StepCdf {
    fn cdf(&self, x: f64) -> f64 {
        let k = self.points.partition_point(|&p| p <= x);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    fn cdf_left(&self, x: f64) -> f64 {
        let k = self.points.partition_point(|&p| p < x);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    fn knots(&self) -> Vec<f64> {
        self.points.clone()
    }
}
