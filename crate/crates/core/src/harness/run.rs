//! Seeded Monte Carlo sweeps behind the CLI verbs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::config::{EnsembleKind, ExperimentConfig, GeneratorConfig, LimitConfig};
use super::qq::{qq_against, qq_max_gap, write_qq_csv};
use super::report::{aggregate, check, evaluate, Record, RecordTiming, RunReport, Timings, TOOL_VERSION};
use crate::diagnostics::{
    entry_matrix, gaussian_interpolation_check, kolmogorov_distance, levy_distance, lindeberg_sum, partial_scaling,
    partials_max_relative_error, perturbation_bound, swap_decomposition, truncate, variance_deviation, SwapOptions,
};
use crate::error::{invalid, Error, Result};
use crate::field::{
    gen_arch_field, gen_gaussian_field, gen_martingale_matrix_fill, gen_panel, sample_profile_from_sequence,
    FieldSample, RngStream, VarianceProfile,
};
use crate::index_lattice::triangle_len;
use crate::laws::{vp_cdf, vp_default_grid, write_law_csv, DiscreteMeasure, LimitLaw, MarchenkoPastur, Semicircle};
use crate::matrix::{build_wigner, RectMatrix};
use crate::point::UpperPoint;
use crate::spectra::{
    covariance_eigenvalues, default_inversion_grid, density_recover, eigenvalues, esd, write_density_csv,
    SpectralSample, DEFAULT_INVERSION_HEIGHT,
};

/// Eigenvalue threshold for the atom fraction of covariance spectra.
pub const ATOM_THRESHOLD: f64 = 1e-6;
/// Residual tolerance of the swap identity.
pub const SWAP_RESIDUAL_TOL: f64 = 1e-10;
/// Relative tolerance of analytic versus finite-difference partials.
pub const PARTIALS_TOL: f64 = 1e-5;
/// Accepted range of the fitted `max |ds/dx|` exponent in `n`.
pub const SCALING_RANGE: (f64, f64) = (-1.7, -1.3);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Wigner,
    Covariance,
    LimitCurve,
    SwapDiagnostic,
    Conditions,
    Qq,
}

impl Verb {
    pub const ALL: [Verb; 6] = [
        Verb::Wigner,
        Verb::Covariance,
        Verb::LimitCurve,
        Verb::SwapDiagnostic,
        Verb::Conditions,
        Verb::Qq,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Verb::Wigner => "wigner",
            Verb::Covariance => "covariance",
            Verb::LimitCurve => "limit-curve",
            Verb::SwapDiagnostic => "swap-diagnostic",
            Verb::Conditions => "conditions",
            Verb::Qq => "qq",
        }
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verb {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Verb::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown verb {s:?}")))
    }
}

/// Report, timings and the CSV files of one run, held in memory.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub timings: Timings,
    /// `(file name, contents)`, sorted by name.
    pub artifacts: Vec<(String, String)>,
}

impl RunOutcome {
    /// Writes `report.json`, `timings.json` and the CSV artifacts into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: &str, body: &str| -> Result<()> {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            written.push(p);
            Ok(())
        };
        put("report.json", &self.report.to_json())?;
        put("timings.json", &(serde_json::to_string_pretty(&self.timings)? + "\n"))?;
        for (name, body) in &self.artifacts {
            put(name, body)?;
        }
        Ok(written)
    }
}

struct Task {
    size: usize,
    seed: u64,
    replicate: Option<usize>,
}

#[derive(Default)]
struct TaskOutput {
    rows: Option<usize>,
    metrics: BTreeMap<String, f64>,
    artifacts: Vec<(String, String)>,
}

fn csv<F>(f: F) -> Result<String>
where
    F: FnOnce(&mut Vec<u8>) -> Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn upper(z: [f64; 2]) -> Result<UpperPoint> {
    UpperPoint::new(z[0], z[1])
}

fn record_rng(seed: u64, size: usize, replicate: Option<usize>) -> RngStream {
    let base = RngStream::new(seed, 0).derive(size as u64);
    match replicate {
        Some(r) => base.derive(r as u64 + 1),
        None => base,
    }
}

/// `a_j^2` for `j = 1..=n`, cycling through the configured weights.
fn cycled(a_sq: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|j| a_sq[j % a_sq.len()]).collect()
}

/// Normalized triangular field of order `n` from the configured generator.
fn triangular_field(gen: &GeneratorConfig, n: usize, rng: &mut RngStream) -> Result<FieldSample> {
    match gen {
        GeneratorConfig::Gaussian { a_sq } => {
            let profile = match a_sq {
                Some(a) => Some(sample_profile_from_sequence(n, &cycled(a, n))?),
                None => None,
            };
            gen_gaussian_field(n, profile.as_ref(), rng)
        }
        GeneratorConfig::Arch { spec } => Ok(gen_arch_field(n, spec, rng)?.normalized()),
        GeneratorConfig::MartingaleFill { omega, beta } => gen_martingale_matrix_fill(
            n,
            crate::field::Arch1 {
                omega: *omega,
                beta: *beta,
            },
            rng,
        ),
        GeneratorConfig::Panel { .. } => invalid("the panel generator produces rectangular fields"),
    }
}

/// Empirical `nu` of the first `n` profile weights, duplicates merged.
fn profile_measure(a_sq: &[f64]) -> Result<DiscreteMeasure> {
    let mut counts: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for &a in a_sq {
        counts.entry(a.to_bits()).or_insert((a, 0)).1 += 1;
    }
    let m = a_sq.len() as f64;
    let (atoms, weights) = counts.values().map(|&(a, c)| (a, c as f64 / m)).unzip();
    DiscreteMeasure::new(atoms, weights)
}

fn limit_law(cfg: &ExperimentConfig, n: usize, rows: Option<usize>) -> Result<Box<dyn LimitLaw>> {
    let default = match cfg.ensemble.kind {
        EnsembleKind::Wigner => match &cfg.generator {
            GeneratorConfig::Gaussian { a_sq: Some(_) } => LimitConfig::VarianceProfile {
                atoms: None,
                weights: None,
                height: 1e-3,
                points: crate::spectra::DEFAULT_INVERSION_POINTS,
            },
            _ => LimitConfig::Semicircle {},
        },
        _ => LimitConfig::MarchenkoPastur { y: None },
    };
    match cfg.limit.as_ref().unwrap_or(&default) {
        LimitConfig::Semicircle {} => Ok(Box::new(Semicircle)),
        LimitConfig::MarchenkoPastur { y } => {
            let y = match (y, rows) {
                (Some(y), _) => *y,
                (None, Some(p)) => p as f64 / n as f64,
                (None, None) => return invalid("Marchenko-Pastur limit needs y or a covariance ensemble"),
            };
            Ok(Box::new(MarchenkoPastur::new(y)?))
        }
        LimitConfig::VarianceProfile {
            atoms,
            weights,
            height,
            points,
        } => {
            let nu = match (atoms, weights, &cfg.generator) {
                (Some(a), Some(w), _) => DiscreteMeasure::new(a.clone(), w.clone())?,
                (Some(a), None, _) => DiscreteMeasure::uniform(a)?,
                (None, _, GeneratorConfig::Gaussian { a_sq: Some(a) }) => profile_measure(&cycled(a, n))?,
                _ => return invalid("variance-profile limit needs atoms or a profiled Gaussian generator"),
            };
            Ok(Box::new(vp_cdf(&nu, &vp_default_grid(&nu, *points), *height)?))
        }
    }
}

struct Spectrum {
    sample: SpectralSample,
    rows: Option<usize>,
    field_metrics: BTreeMap<String, f64>,
}

fn field_metrics(cfg: &ExperimentConfig, field: &FieldSample, out: &mut BTreeMap<String, f64>) -> Result<()> {
    for &eps in &cfg.metrics.lindeberg {
        out.insert(format!("lindeberg@{eps}"), lindeberg_sum(field, eps)?);
    }
    if cfg.metrics.variance_deviation {
        out.insert("variance_deviation".into(), variance_deviation(field)?);
    }
    Ok(())
}

fn spectrum(cfg: &ExperimentConfig, n: usize, rng: &mut RngStream) -> Result<Spectrum> {
    let mut fm = BTreeMap::new();
    match cfg.ensemble.kind {
        EnsembleKind::Wigner => {
            let field = triangular_field(&cfg.generator, n, rng)?;
            field_metrics(cfg, &field, &mut fm)?;
            Ok(Spectrum {
                sample: eigenvalues(&build_wigner(&field)?)?,
                rows: None,
                field_metrics: fm,
            })
        }
        kind => {
            let p = cfg.ensemble.rows(n).expect("validated");
            let arch1 = cfg.generator.arch1().expect("validated");
            let field = gen_panel(p, n, arch1, rng)?;
            field_metrics(cfg, &field, &mut fm)?;
            let sample = covariance_eigenvalues(&RectMatrix::from_field(&field)?, kind == EnsembleKind::Symmetrized)?;
            let atoms = sample.eigenvalues().iter().filter(|v| v.abs() < ATOM_THRESHOLD).count();
            fm.insert("atom_fraction".into(), atoms as f64 / p as f64);
            Ok(Spectrum {
                sample,
                rows: Some(p),
                field_metrics: fm,
            })
        }
    }
}

fn spectral_task(cfg: &ExperimentConfig, verb: Verb, t: &Task) -> Result<TaskOutput> {
    let mut rng = record_rng(t.seed, t.size, t.replicate);
    let sp = spectrum(cfg, t.size, &mut rng)?;
    let law = limit_law(cfg, t.size, sp.rows)?;
    let f = esd(&sp.sample)?;
    let mut out = TaskOutput {
        rows: sp.rows,
        metrics: sp.field_metrics,
        artifacts: Vec::new(),
    };
    if cfg.metrics.levy {
        out.metrics.insert("levy".into(), levy_distance(&f, law.as_ref()));
    }
    if cfg.metrics.kolmogorov {
        out.metrics
            .insert("kolmogorov".into(), kolmogorov_distance(&f, law.as_ref()));
    }
    let tag = format!("n{}_s{}", t.size, t.seed);
    if verb == Verb::Qq {
        let rows = qq_against(&sp.sample, law.as_ref())?;
        out.metrics
            .insert("qq_max_gap".into(), qq_max_gap(&rows, cfg.metrics.qq_trim));
        if cfg.output.qq {
            out.artifacts
                .push((format!("qq_{tag}.csv"), csv(|w| write_qq_csv(&rows, w))?));
        }
    }
    if cfg.output.esd {
        out.artifacts.push((format!("esd_{tag}.csv"), csv(|w| f.write_csv(w))?));
    }
    Ok(out)
}

fn conditions_task(cfg: &ExperimentConfig, t: &Task) -> Result<TaskOutput> {
    let mut rng = record_rng(t.seed, t.size, t.replicate);
    let (field, rows) = match &cfg.generator {
        GeneratorConfig::Panel { omega, beta } => {
            let p = cfg.ensemble.rows(t.size).expect("validated");
            (
                gen_panel(
                    p,
                    t.size,
                    crate::field::Arch1 {
                        omega: *omega,
                        beta: *beta,
                    },
                    &rng,
                )?,
                Some(p),
            )
        }
        g => (triangular_field(g, t.size, &mut rng)?, None),
    };
    let mut out = TaskOutput {
        rows,
        ..TaskOutput::default()
    };
    let eps_list = if cfg.metrics.lindeberg.is_empty() {
        vec![0.1]
    } else {
        cfg.metrics.lindeberg.clone()
    };
    for &eps in &eps_list {
        out.metrics
            .insert(format!("lindeberg@{eps}"), lindeberg_sum(&field, eps)?);
        let cut = truncate(&field, eps)?;
        let zeroed = cut.provenance.truncations.last().map_or(0, |r| r.zeroed);
        out.metrics.insert(format!("truncated@{eps}"), zeroed as f64);
    }
    if field.profile.is_some() && field.is_triangular() {
        out.metrics
            .insert("variance_deviation".into(), variance_deviation(&field)?);
    }
    let second: f64 = field.entries.iter().map(|x| x * x).sum::<f64>() / field.entries.len() as f64;
    out.metrics.insert("mean_square".into(), second);
    Ok(out)
}

fn swap_task(cfg: &ExperimentConfig, t: &Task) -> Result<TaskOutput> {
    let sc = cfg.diagnostics.swap.as_ref().expect("checked by caller");
    let mut rng = record_rng(t.seed, t.size, t.replicate);
    let x = triangular_field(&cfg.generator, sc.n, &mut rng)?;
    let zf = gen_gaussian_field(sc.n, None, &mut rng)?;
    let opts = SwapOptions {
        a: sc.a,
        l3_samples: sc.l3_samples,
        allow_large: sc.allow_large,
    };
    let r = swap_decomposition(&x.entries, &zf.entries, sc.n, upper(sc.z)?, opts, &mut rng)?;
    let m: BTreeMap<String, f64> = [
        ("swap_residual", r.residual),
        ("r1_abs", r.r1.norm()),
        ("r2_abs", r.r2.norm()),
        ("r3_abs", r.r3.norm()),
        ("delta_abs", r.delta.norm()),
        ("r3_bound", r.r3_bound),
        ("r3_bound_ceiling", r.r3_bound_ceiling),
        ("l3_fitted", r.l3_fitted),
        ("l3_ceiling", r.l3_ceiling),
        ("bound_holds", if r.bound_holds { 1.0 } else { 0.0 }),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(TaskOutput {
        rows: None,
        metrics: m,
        artifacts: Vec::new(),
    })
}

/// Diagnostics that run once per configuration (not per size and seed).
fn global_diagnostics(
    cfg: &ExperimentConfig,
    diag: &mut BTreeMap<String, serde_json::Value>,
    checks: &mut Vec<super::report::AssertionOutcome>,
) -> Result<()> {
    let seed = cfg.seeds[0];
    if let Some(pc) = &cfg.diagnostics.perturbation_check {
        let len = triangle_len(pc.n);
        let results: Vec<(f64, f64)> = (0..pc.instances)
            .into_par_iter()
            .map(|k| {
                let mut rng = RngStream::new(seed, 0).derive(0x5045_5254).derive(k as u64);
                let x: Vec<f64> = (0..len).map(|_| rng.gaussian()).collect();
                let y: Vec<f64> = (0..len).map(|_| rng.gaussian()).collect();
                let z = UpperPoint::new(6.0 * rng.uniform() - 3.0, 0.1 + 1.9 * rng.uniform())?;
                let c = perturbation_bound(pc.n, &x, &y, z)?;
                Ok((c.lhs, c.rhs))
            })
            .collect::<Result<_>>()?;
        let violations = results
            .iter()
            .filter(|(l, r)| l > &(r * (1.0 + crate::diagnostics::PERTURBATION_SLACK)))
            .count();
        let worst = results.iter().map(|(l, r)| l / r).fold(0.0, f64::max);
        diag.insert(
            "perturbation".into(),
            json!({"n": pc.n, "instances": pc.instances, "violations": violations, "max_lhs_over_rhs": worst}),
        );
        checks.push(check(
            "perturbation bound violations == 0",
            violations == 0,
            violations as f64,
        ));
    }
    if let Some(dc) = &cfg.diagnostics.derivative_check {
        let z = upper(dc.z)?;
        let mut fd = BTreeMap::new();
        for &n in dc.sizes.iter().filter(|&&n| n <= 16) {
            let mut rng = RngStream::new(seed, 0).derive(0x4445_5256).derive(n as u64);
            let x: Vec<f64> = (0..triangle_len(n)).map(|_| rng.gaussian()).collect();
            let e = partials_max_relative_error(&entry_matrix(n, &x)?, z)?;
            fd.insert(n.to_string(), e);
            checks.push(check(
                format!("analytic vs finite-difference partials < {PARTIALS_TOL} at n = {n}"),
                e < PARTIALS_TOL,
                e,
            ));
        }
        let fit = partial_scaling(&dc.sizes, z, &cfg.seeds)?;
        checks.push(check(
            format!(
                "fitted max|ds/dx| exponent in [{}, {}]",
                SCALING_RANGE.0, SCALING_RANGE.1
            ),
            (SCALING_RANGE.0..=SCALING_RANGE.1).contains(&fit.exponent),
            fit.exponent,
        ));
        diag.insert(
            "derivatives".into(),
            json!({"fd_max_relative_error": fd, "scaling": fit}),
        );
    }
    if let Some(ic) = &cfg.diagnostics.interpolation_check {
        let c = gaussian_interpolation_check(
            &VarianceProfile::Uniform {
                variance: ic.variance_y,
            },
            &VarianceProfile::Uniform {
                variance: ic.variance_z,
            },
            ic.n,
            upper(ic.z)?,
            ic.replicates,
            &RngStream::new(seed, 0).derive(0x494e_5450),
        )?;
        checks.push(check("interpolation: lhs <= rhs + 3 stderr", c.holds, c.lhs));
        diag.insert("interpolation".into(), serde_json::to_value(&c)?);
    }
    Ok(())
}

type Diagnostics = BTreeMap<String, serde_json::Value>;
/// `(file name, contents)`.
type Artifacts = Vec<(String, String)>;

fn limit_curve(cfg: &ExperimentConfig) -> Result<(Diagnostics, Artifacts)> {
    let n = cfg.ensemble.sizes[0];
    let rows = (cfg.ensemble.kind != EnsembleKind::Wigner)
        .then(|| cfg.ensemble.rows(n))
        .flatten();
    let law = limit_law(cfg, n, rows)?;
    let grid = default_inversion_grid(law.support());
    let density = density_recover(
        |z| {
            law.stieltjes(z)
                .unwrap_or(num_complex::Complex64::new(f64::NAN, f64::NAN))
        },
        &grid,
        DEFAULT_INVERSION_HEIGHT,
    )?;
    if density.iter().any(|(_, f)| !f.is_finite()) {
        return Err(Error::NoConvergence {
            what: "limit transform on the inversion grid",
            iterations: 0,
            residual: f64::NAN,
        });
    }
    let mut artifacts = vec![("density.csv".to_string(), csv(|w| write_density_csv(&density, w))?)];
    if cfg.output.law {
        artifacts.push((
            "law.csv".to_string(),
            csv(|w| write_law_csv(law.as_ref(), 2001, 0.5, w))?,
        ));
    }
    let (lo, hi) = law.support();
    let mut d = BTreeMap::new();
    d.insert(
        "limit".into(),
        json!({
            "support": [lo, hi],
            "atom": law.atom().map(|(x, m)| vec![x, m]),
            "cdf_at_right_edge": law.cdf(hi),
            "inversion_height": DEFAULT_INVERSION_HEIGHT,
        }),
    );
    Ok((d, artifacts))
}

fn tasks(cfg: &ExperimentConfig, verb: Verb) -> Result<Vec<Task>> {
    let seeds = &cfg.seeds;
    Ok(match verb {
        Verb::SwapDiagnostic => {
            let sc = cfg
                .diagnostics
                .swap
                .as_ref()
                .ok_or_else(|| Error::Config("swap-diagnostic needs [diagnostics.swap]".into()))?;
            seeds
                .iter()
                .flat_map(|&seed| {
                    (0..sc.replicates).map(move |r| Task {
                        size: sc.n,
                        seed,
                        replicate: Some(r),
                    })
                })
                .collect()
        }
        Verb::LimitCurve => Vec::new(),
        _ => cfg
            .ensemble
            .sizes
            .iter()
            .flat_map(|&size| {
                seeds.iter().map(move |&seed| Task {
                    size,
                    seed,
                    replicate: None,
                })
            })
            .collect(),
    })
}

fn check_verb(cfg: &ExperimentConfig, verb: Verb) -> Result<()> {
    match (verb, cfg.ensemble.kind) {
        (Verb::Wigner, k) if k != EnsembleKind::Wigner => {
            Err(Error::Config("wigner needs ensemble.kind = \"wigner\"".into()))
        }
        (Verb::Covariance, EnsembleKind::Wigner) => Err(Error::Config(
            "covariance needs a covariance or symmetrized ensemble".into(),
        )),
        (Verb::SwapDiagnostic, _) if matches!(cfg.generator, GeneratorConfig::Panel { .. }) => {
            Err(Error::Config("swap-diagnostic needs a triangular generator".into()))
        }
        _ => Ok(()),
    }
}

/// Runs `verb` on `cfg` with a pool of `threads` workers (all cores when `None`).
pub fn run(cfg: &ExperimentConfig, verb: Verb, threads: Option<usize>) -> Result<RunOutcome> {
    cfg.validate()?;
    check_verb(cfg, verb)?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let tasks = tasks(cfg, verb)?;
    let results: Vec<(Result<TaskOutput>, f64)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let t0 = Instant::now();
                let r = match verb {
                    Verb::Wigner | Verb::Covariance | Verb::Qq => spectral_task(cfg, verb, t),
                    Verb::Conditions => conditions_task(cfg, t),
                    Verb::SwapDiagnostic => swap_task(cfg, t),
                    Verb::LimitCurve => unreachable!("limit-curve has no records"),
                };
                (r, t0.elapsed().as_secs_f64())
            })
            .collect()
    });

    let mut records = Vec::with_capacity(tasks.len());
    let mut timing = Vec::with_capacity(tasks.len());
    let mut artifacts = Vec::new();
    for (t, (r, secs)) in tasks.iter().zip(results) {
        let mut rec = Record {
            size: t.size,
            seed: t.seed,
            replicate: t.replicate,
            rows: None,
            ok: true,
            error: None,
            metrics: BTreeMap::new(),
        };
        match r {
            Ok(o) => {
                rec.rows = o.rows;
                rec.metrics = o.metrics;
                artifacts.extend(o.artifacts);
            }
            Err(e) => {
                rec.ok = false;
                rec.error = Some(e.to_string());
            }
        }
        timing.push(RecordTiming {
            size: t.size,
            seed: t.seed,
            replicate: t.replicate,
            seconds: secs,
        });
        records.push(rec);
    }
    records.sort_by_key(Record::key);
    timing.sort_by_key(|r| (r.size, r.seed, r.replicate.unwrap_or(0)));

    let mut diagnostics = BTreeMap::new();
    let mut outcomes = Vec::new();
    match verb {
        Verb::LimitCurve => {
            let (d, a) = pool.install(|| limit_curve(cfg))?;
            diagnostics.extend(d);
            artifacts.extend(a);
        }
        Verb::Conditions => pool.install(|| global_diagnostics(cfg, &mut diagnostics, &mut outcomes))?,
        Verb::SwapDiagnostic => {
            let ok: Vec<&Record> = records.iter().filter(|r| r.ok).collect();
            let worst = ok.iter().map(|r| r.metrics["swap_residual"]).fold(0.0, f64::max);
            let violations = ok.iter().filter(|r| r.metrics["bound_holds"] == 0.0).count();
            outcomes.push(check(
                format!("swap residual < {SWAP_RESIDUAL_TOL}"),
                worst < SWAP_RESIDUAL_TOL,
                worst,
            ));
            outcomes.push(check(
                "|R3| <= fitted bound in every replicate",
                violations == 0,
                violations as f64,
            ));
        }
        _ => {}
    }
    if matches!(verb, Verb::Wigner | Verb::Covariance | Verb::Qq) && cfg.output.law {
        let n = cfg.ensemble.sizes[0];
        let rows = (cfg.ensemble.kind != EnsembleKind::Wigner)
            .then(|| cfg.ensemble.rows(n))
            .flatten();
        if let Ok(law) = limit_law(cfg, n, rows) {
            artifacts.push(("law.csv".into(), csv(|w| write_law_csv(law.as_ref(), 2001, 0.5, w))?));
        }
    }
    artifacts.sort_by(|a, b| a.0.cmp(&b.0));

    let aggregates = aggregate(&records);
    for a in &cfg.assertions {
        outcomes.extend(evaluate(a, &aggregates));
    }
    let success = records.iter().all(|r| r.ok) && outcomes.iter().all(|o| o.passed);
    let mut seeds = cfg.seeds.clone();
    seeds.sort_unstable();
    let report = RunReport {
        schema_version: super::config::SCHEMA_VERSION,
        tool_version: TOOL_VERSION.into(),
        verb: verb.name().into(),
        config_hash: cfg.hash(),
        seeds,
        config: cfg.canonical(),
        records,
        aggregates,
        diagnostics,
        assertions: outcomes,
        success,
    };
    Ok(RunOutcome {
        report,
        timings: Timings {
            records: timing,
            total_seconds: start.elapsed().as_secs_f64(),
        },
        artifacts,
    })
}
