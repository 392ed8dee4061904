//! Gaussian interpolation inequality between two variance profiles.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::derivatives::{estimate_l2, second_partial_ceiling, stieltjes_of_entries};
use crate::error::{invalid, Result};
use crate::field::{RngStream, VarianceProfile};
use crate::index_lattice::LatticeIndex;
use crate::point::UpperPoint;

pub const MIN_REPLICATES: usize = 10_000;
/// Sampled points used to fit the second-derivative constant.
pub const L2_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationCheck {
    pub n: usize,
    pub replicates: usize,
    /// `|E s(Y) - E s(Z)|`, Monte Carlo.
    pub lhs: f64,
    pub stderr: f64,
    pub l2_fitted: f64,
    pub l2_ceiling: f64,
    /// `(l2_fitted / 2) sum_k |E Y_k^2 - E Z_k^2|`.
    pub rhs: f64,
    pub rhs_ceiling: f64,
    /// `lhs <= rhs + 3 stderr`.
    pub holds: bool,
}

/// Centered Gaussian vectors `Y`, `Z` with the two profiles, coupled through
/// common normals. The fitted `L2` depends only on `(n, z, rng)`, so the
/// right-hand side is linear in the profile gap.
pub fn gaussian_interpolation_check(
    profile_y: &VarianceProfile,
    profile_z: &VarianceProfile,
    n: usize,
    z: UpperPoint,
    replicates: usize,
    rng: &RngStream,
) -> Result<InterpolationCheck> {
    if replicates < MIN_REPLICATES {
        return invalid(format!("need at least {MIN_REPLICATES} replicates, got {replicates}"));
    }
    profile_y.validate(n)?;
    profile_z.validate(n)?;
    let lattice = LatticeIndex::new(n)?;
    let (sy, sz): (Vec<f64>, Vec<f64>) = lattice
        .pairs()
        .map(|(i, j)| (profile_y.variance(i, j), profile_z.variance(i, j)))
        .unzip();
    let diffs: Vec<Complex64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut g = rng.derive(r as u64);
            let normals: Vec<f64> = (0..sy.len()).map(|_| g.gaussian()).collect();
            let y: Vec<f64> = normals.iter().zip(&sy).map(|(e, s)| e * s.sqrt()).collect();
            let zz: Vec<f64> = normals.iter().zip(&sz).map(|(e, s)| e * s.sqrt()).collect();
            Ok(stieltjes_of_entries(n, &y, z)? - stieltjes_of_entries(n, &zz, z)?)
        })
        .collect::<Result<_>>()?;
    let m = replicates as f64;
    let mean: Complex64 = diffs.iter().sum::<Complex64>() / m;
    let var: f64 = diffs.iter().map(|d| (d - mean).norm_sqr()).sum::<f64>() / (m - 1.0);
    let stderr = (var / m).sqrt();
    let l2_fitted = estimate_l2(n, z, L2_SAMPLES, &mut rng.derive(u64::MAX))?;
    let l2_ceiling = second_partial_ceiling(n, z.im());
    let gap: f64 = sy.iter().zip(&sz).map(|(a, b)| (a - b).abs()).sum();
    let lhs = mean.norm();
    let rhs = 0.5 * l2_fitted * gap;
    Ok(InterpolationCheck {
        n,
        replicates,
        lhs,
        stderr,
        l2_fitted,
        l2_ceiling,
        rhs,
        rhs_ceiling: 0.5 * l2_ceiling * gap,
        holds: lhs <= rhs + 3.0 * stderr,
    })
}
