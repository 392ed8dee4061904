//! Experiment configuration (TOML, schema version 1). Unknown keys are errors.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Arch1, ArchSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub generator: GeneratorConfig,
    #[serde(default)]
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub limit: Option<LimitConfig>,
    #[serde(default)]
    pub metrics: MetricsConfig,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub assertions: Vec<AssertionConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorConfig {
    /// Independent Gaussian entries; optional product profile
    /// `sigma^2_ij = a_i^2 a_j^2` with `a_j^2 = a_sq[(j - 1) mod len]`.
    Gaussian {
        #[serde(default)]
        a_sq: Option<Vec<f64>>,
    },
    /// Nonlinear ARCH random field, normalized by its estimated sigma.
    Arch {
        #[serde(default = "default_arch")]
        spec: ArchSpec,
    },
    /// Lex-ordered ARCH(1) sequence filled into the lower triangle.
    MartingaleFill { omega: f64, beta: f64 },
    /// Independent ARCH(1) rows (covariance ensembles only).
    Panel { omega: f64, beta: f64 },
}

fn default_arch() -> ArchSpec {
    ArchSpec::default()
}

impl GeneratorConfig {
    pub fn arch1(&self) -> Option<Arch1> {
        match *self {
            GeneratorConfig::MartingaleFill { omega, beta } | GeneratorConfig::Panel { omega, beta } => {
                Some(Arch1 { omega, beta })
            }
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorConfig::Gaussian { .. } => "gaussian",
            GeneratorConfig::Arch { .. } => "arch",
            GeneratorConfig::MartingaleFill { .. } => "martingale_fill",
            GeneratorConfig::Panel { .. } => "panel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    #[default]
    Wigner,
    Covariance,
    /// Covariance spectrum recovered from the symmetrized block matrix.
    Symmetrized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    #[serde(default)]
    pub kind: EnsembleKind,
    /// Matrix order `n` (columns for covariance ensembles).
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    /// Fixed row count for covariance ensembles.
    #[serde(default)]
    pub p: Option<usize>,
    /// Row ratio `p = round(y n)` for covariance ensembles.
    #[serde(default)]
    pub y: Option<f64>,
}

fn default_sizes() -> Vec<usize> {
    vec![200]
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            kind: EnsembleKind::Wigner,
            sizes: default_sizes(),
            p: None,
            y: None,
        }
    }
}

impl EnsembleConfig {
    /// Row count for size `n` (covariance ensembles).
    pub fn rows(&self, n: usize) -> Option<usize> {
        self.p
            .or_else(|| self.y.map(|y| ((y * n as f64).round() as usize).max(1)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LimitConfig {
    // a struct variant, so that stray keys in the table are still rejected
    Semicircle {},
    /// Ratio defaults to the realized `p / n` of each record.
    MarchenkoPastur {
        #[serde(default)]
        y: Option<f64>,
    },
    /// Atoms default to the generator's `a_sq` weights.
    VarianceProfile {
        #[serde(default)]
        atoms: Option<Vec<f64>>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
        #[serde(default = "default_height")]
        height: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
}

fn default_height() -> f64 {
    1e-3
}

fn default_points() -> usize {
    crate::spectra::DEFAULT_INVERSION_POINTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsConfig {
    #[serde(default = "yes")]
    pub levy: bool,
    #[serde(default = "yes")]
    pub kolmogorov: bool,
    /// One Lindeberg sum per epsilon.
    #[serde(default)]
    pub lindeberg: Vec<f64>,
    #[serde(default)]
    pub variance_deviation: bool,
    /// Extreme points dropped on each side for the Q-Q gap.
    #[serde(default = "default_trim")]
    pub qq_trim: usize,
}

fn yes() -> bool {
    true
}

fn default_trim() -> usize {
    5
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            levy: true,
            kolmogorov: true,
            lindeberg: Vec::new(),
            variance_deviation: false,
            qq_trim: default_trim(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default)]
    pub swap: Option<SwapConfig>,
    #[serde(default)]
    pub derivative_check: Option<DerivativeConfig>,
    #[serde(default)]
    pub interpolation_check: Option<InterpolationConfig>,
    #[serde(default)]
    pub perturbation_check: Option<PerturbationConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapConfig {
    pub n: usize,
    pub a: u32,
    /// `[re, im]`.
    #[serde(default = "default_z")]
    pub z: [f64; 2],
    pub replicates: usize,
    #[serde(default = "default_l3_samples")]
    pub l3_samples: usize,
    #[serde(default)]
    pub allow_large: bool,
}

fn default_z() -> [f64; 2] {
    [0.0, 1.0]
}

fn default_l3_samples() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeConfig {
    pub sizes: Vec<usize>,
    #[serde(default = "default_z")]
    pub z: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolationConfig {
    pub n: usize,
    pub variance_y: f64,
    pub variance_z: f64,
    #[serde(default = "default_z")]
    pub z: [f64; 2],
    #[serde(default = "default_replicates")]
    pub replicates: usize,
}

fn default_replicates() -> usize {
    crate::diagnostics::MIN_REPLICATES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    pub n: usize,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default = "yes")]
    pub esd: bool,
    #[serde(default = "yes")]
    pub law: bool,
    #[serde(default = "yes")]
    pub qq: bool,
}

fn default_dir() -> String {
    "out".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            esd: true,
            law: true,
            qq: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Mean,
    #[default]
    Median,
    Min,
    Max,
}

/// A pass/fail condition on an aggregated metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertionConfig {
    pub metric: String,
    #[serde(default)]
    pub statistic: Statistic,
    /// Restricts the check to one size; all sizes otherwise.
    #[serde(default)]
    pub size: Option<usize>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub min: Option<f64>,
    /// The statistic must not increase with size.
    #[serde(default)]
    pub decreasing: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        if self.ensemble.sizes.is_empty() || self.ensemble.sizes.contains(&0) {
            return bad("sizes must be a non-empty list of positive integers".into());
        }
        let covariance = self.ensemble.kind != EnsembleKind::Wigner;
        if covariance && self.ensemble.p.is_none() && self.ensemble.y.is_none() {
            return bad("covariance ensembles need p or y".into());
        }
        if let Some(y) = self.ensemble.y {
            if !(y > 0.0) {
                return bad(format!("y = {y} must be > 0"));
            }
        }
        if self.ensemble.p == Some(0) {
            return bad("p must be positive".into());
        }
        if matches!(self.generator, GeneratorConfig::Panel { .. }) != covariance {
            return bad("the panel generator pairs with covariance ensembles (and only with them)".into());
        }
        match &self.generator {
            GeneratorConfig::Arch { spec } => spec.validate()?,
            GeneratorConfig::Gaussian { a_sq: Some(a) } if a.is_empty() || a.iter().any(|v| !(*v >= 0.0)) => {
                return bad("a_sq must be non-empty and non-negative".into())
            }
            g => {
                if let Some(a) = g.arch1() {
                    a.validate()?;
                }
            }
        }
        if self.metrics.lindeberg.iter().any(|e| !(*e > 0.0)) {
            return bad("lindeberg epsilons must be > 0".into());
        }
        for d in [
            self.diagnostics.swap.as_ref().map(|s| s.z),
            self.diagnostics.derivative_check.as_ref().map(|s| s.z),
        ]
        .into_iter()
        .flatten()
        {
            if !(d[1] > 0.0) {
                return bad(format!("diagnostic point z = {} + {}i must have Im z > 0", d[0], d[1]));
            }
        }
        Ok(())
    }

    /// The configuration as it enters the hash: output location removed.
    pub fn canonical(&self) -> ExperimentConfig {
        let mut c = self.clone();
        c.output.dir = String::new();
        c
    }

    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.canonical()).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
