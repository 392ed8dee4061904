//! Seeded generators for the entry arrays of the ensembles.
//!
//! Triangular samples store the lower triangle `1 <= j <= i <= n` in
//! lexicographic order (see [`crate::index_lattice`]); rectangular samples
//! store a `p x n` panel row-major.

mod arch;
mod martingale;
mod profile;
mod rng;

pub use arch::{arch_coefficients, gen_arch_field, ArchSpec, SIGMA_MC_SIDE};
pub use martingale::{gen_martingale_matrix_fill, gen_panel, Arch1, ARCH1_BURN_IN};
pub use profile::{empirical_nu, sample_profile_from_sequence, VarianceProfile};
pub use rng::RngStream;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::index_lattice::triangle_len;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldShape {
    Triangular { n: usize },
    Rectangular { p: usize, n: usize },
}

impl FieldShape {
    pub fn len(&self) -> usize {
        match *self {
            FieldShape::Triangular { n } => triangle_len(n),
            FieldShape::Rectangular { p, n } => p * n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Truncation applied to a sample: threshold `eps * sqrt(n)` and the number of
/// entries that were zeroed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRecord {
    pub eps: f64,
    pub threshold: f64,
    pub zeroed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub stream: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub truncations: Vec<TruncationRecord>,
}

/// A realized entry array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub shape: FieldShape,
    pub entries: Vec<f64>,
    /// Standard deviation of a raw entry (estimated or exact).
    pub sigma_hat: f64,
    /// Whether `entries` have already been divided by `sigma_hat`.
    pub normalized: bool,
    /// Declared variances of the current `entries`, when known.
    pub profile: Option<VarianceProfile>,
    pub provenance: Provenance,
}

impl FieldSample {
    pub fn order(&self) -> usize {
        match self.shape {
            FieldShape::Triangular { n } => n,
            FieldShape::Rectangular { n, .. } => n,
        }
    }

    pub fn is_triangular(&self) -> bool {
        matches!(self.shape, FieldShape::Triangular { .. })
    }

    /// Triangular sample from explicit lex-ordered entries (tests, diagnostics).
    pub fn from_lex(n: usize, entries: Vec<f64>, profile: Option<VarianceProfile>) -> Result<Self> {
        if entries.len() != triangle_len(n) {
            return invalid(format!(
                "order {n} needs {} entries, got {}",
                triangle_len(n),
                entries.len()
            ));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return invalid("entries must be finite");
        }
        Ok(Self {
            shape: FieldShape::Triangular { n },
            entries,
            sigma_hat: 1.0,
            normalized: true,
            profile,
            provenance: Provenance {
                generator: "explicit".into(),
                params: serde_json::Value::Null,
                seed: 0,
                stream: 0,
                truncations: Vec::new(),
            },
        })
    }

    /// Row-major `p x n` panel from explicit entries.
    pub fn from_panel(p: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != p * n {
            return invalid(format!("{p}x{n} panel needs {} entries", p * n));
        }
        let mut f = Self::from_lex(1, vec![0.0], None)?;
        f.shape = FieldShape::Rectangular { p, n };
        f.entries = entries;
        Ok(f)
    }

    /// Entry `(i, j)`, 1-based. For triangular samples `(i, j)` and `(j, i)`
    /// refer to the same entry.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.shape {
            FieldShape::Triangular { .. } => {
                let (r, c) = if i >= j { (i, j) } else { (j, i) };
                self.entries[r * (r - 1) / 2 + c - 1]
            }
            FieldShape::Rectangular { n, .. } => self.entries[(i - 1) * n + (j - 1)],
        }
    }

    /// Divides the entries by `sigma_hat`; the declared profile becomes unit.
    pub fn normalized(&self) -> FieldSample {
        if self.normalized {
            return self.clone();
        }
        let s = self.sigma_hat;
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|x| *x /= s);
        out.normalized = true;
        out.profile = self.profile.as_ref().map(|p| match p {
            VarianceProfile::Uniform { variance } => VarianceProfile::Uniform {
                variance: variance / (s * s),
            },
            VarianceProfile::Product { a_sq } => VarianceProfile::Product {
                a_sq: a_sq.iter().map(|a| a / s).collect(),
            },
            VarianceProfile::Explicit { lex } => VarianceProfile::Explicit {
                lex: lex.iter().map(|v| v / (s * s)).collect(),
            },
        });
        out
    }
}

/// Independent centered Gaussian entries with variances from `profile`
/// (unit when `None`).
pub fn gen_gaussian_field(n: usize, profile: Option<&VarianceProfile>, rng: &mut RngStream) -> Result<FieldSample> {
    if n == 0 {
        return invalid("matrix order must be positive");
    }
    let profile = profile.cloned().unwrap_or_else(VarianceProfile::unit);
    profile.validate(n)?;
    let mut entries = Vec::with_capacity(triangle_len(n));
    for i in 1..=n {
        for j in 1..=i {
            let sd = profile.variance(i, j).sqrt();
            entries.push(sd * rng.gaussian());
        }
    }
    Ok(FieldSample {
        shape: FieldShape::Triangular { n },
        entries,
        sigma_hat: 1.0,
        normalized: true,
        provenance: Provenance {
            generator: "gaussian".into(),
            params: serde_json::to_value(&profile)?,
            seed: rng.seed(),
            stream: rng.stream(),
            truncations: Vec::new(),
        },
        profile: Some(profile),
    })
}
