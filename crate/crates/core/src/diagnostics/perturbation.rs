//! Lipschitz bound of the Stieltjes transform in the entries.

use serde::Serialize;

use super::derivatives::stieltjes_of_entries;
use crate::error::{invalid, Error, Result};
use crate::field::FieldSample;
use crate::index_lattice::lex_pair;
use crate::point::UpperPoint;

/// Relative slack allowed on `lhs <= rhs`.
pub const PERTURBATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationCheck {
    /// `|s(x) - s(y)|`.
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `v^{-2} (n^{-2} (sum_i (x_ii - y_ii)^2 + 2 sum_{i>j} (x_ij - y_ij)^2))^{1/2}`.
pub fn perturbation_rhs(n: usize, x: &[f64], y: &[f64], v: f64) -> f64 {
    let ss: f64 = x
        .iter()
        .zip(y)
        .enumerate()
        .map(|(k, (a, b))| {
            let (i, j) = lex_pair(k + 1).expect("coordinate in range");
            let w = if i == j { 1.0 } else { 2.0 };
            w * (a - b) * (a - b)
        })
        .sum();
    (ss / (n * n) as f64).sqrt() / (v * v)
}

/// Compares `|s(x) - s(y)|` with [`perturbation_rhs`] for two entry vectors.
pub fn perturbation_bound(n: usize, x: &[f64], y: &[f64], z: UpperPoint) -> Result<PerturbationCheck> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} entries", x.len(), y.len())));
    }
    let lhs = (stieltjes_of_entries(n, x, z)? - stieltjes_of_entries(n, y, z)?).norm();
    let rhs = perturbation_rhs(n, x, y, z.im());
    Ok(PerturbationCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + PERTURBATION_SLACK),
    })
}

/// [`perturbation_bound`] on two triangular samples of the same order.
pub fn perturbation_bound_check(x: &FieldSample, y: &FieldSample, z: UpperPoint) -> Result<PerturbationCheck> {
    if !x.is_triangular() || !y.is_triangular() {
        return invalid("perturbation bound needs triangular fields");
    }
    if x.order() != y.order() {
        return Err(Error::DimensionMismatch(format!(
            "orders {} and {}",
            x.order(),
            y.order()
        )));
    }
    perturbation_bound(x.order(), &x.entries, &y.entries, z)
}
