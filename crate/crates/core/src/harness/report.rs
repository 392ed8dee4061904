//! Run report: per-(size, seed) records, aggregates and assertion outcomes.

use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{AssertionConfig, ExperimentConfig, Statistic};

pub const TOOL_VERSION: &str = concat!("rmtlab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub size: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicate: Option<usize>,
    /// Row count of covariance ensembles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub metrics: BTreeMap<String, f64>,
}

impl Record {
    pub(crate) fn key(&self) -> (usize, u64, usize) {
        (self.size, self.seed, self.replicate.unwrap_or(0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub size: usize,
    pub metric: String,
    pub count: usize,
    /// Records at this size that failed.
    pub failed: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertionOutcome {
    pub description: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub verb: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub config: ExperimentConfig,
    pub records: Vec<Record>,
    pub aggregates: Vec<Aggregate>,
    pub diagnostics: BTreeMap<String, serde_json::Value>,
    pub assertions: Vec<AssertionOutcome>,
    pub success: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Wall-clock timings, kept out of the report payload.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub records: Vec<RecordTiming>,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordTiming {
    pub size: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicate: Option<usize>,
    pub seconds: f64,
}

fn median(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

fn summary(values: &[f64]) -> (f64, f64, f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    let stderr = if v.len() > 1 {
        (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0) / m).sqrt()
    } else {
        0.0
    };
    (mean, median(&v), v[0], v[v.len() - 1], stderr)
}

/// Per-size statistics of every metric; `records` must already be sorted.
/// Values are sorted before summation, so the result does not depend on the
/// order of the seed list.
pub fn aggregate(records: &[Record]) -> Vec<Aggregate> {
    let mut by: BTreeMap<(usize, String), Vec<f64>> = BTreeMap::new();
    let mut failed: BTreeMap<usize, usize> = BTreeMap::new();
    for r in records {
        if !r.ok {
            *failed.entry(r.size).or_default() += 1;
            continue;
        }
        for (k, v) in &r.metrics {
            by.entry((r.size, k.clone())).or_default().push(*v);
        }
    }
    let mut out: Vec<Aggregate> = by
        .into_iter()
        .map(|((size, metric), vals)| {
            let (mean, median, min, max, stderr) = summary(&vals);
            Aggregate {
                size,
                metric,
                count: vals.len(),
                failed: failed.get(&size).copied().unwrap_or(0),
                mean,
                median,
                min,
                max,
                stderr,
            }
        })
        .collect();
    // sizes where every record failed still show up
    for (&size, &f) in &failed {
        if !out.iter().any(|a| a.size == size) {
            out.push(Aggregate {
                size,
                metric: String::new(),
                count: 0,
                failed: f,
                mean: f64::NAN,
                median: f64::NAN,
                min: f64::NAN,
                max: f64::NAN,
                stderr: f64::NAN,
            });
        }
    }
    out.sort_by(|a, b| (a.size, &a.metric).cmp(&(b.size, &b.metric)));
    out
}

fn pick(a: &Aggregate, s: Statistic) -> f64 {
    match s {
        Statistic::Mean => a.mean,
        Statistic::Median => a.median,
        Statistic::Min => a.min,
        Statistic::Max => a.max,
    }
}

fn stat_name(s: Statistic) -> &'static str {
    match s {
        Statistic::Mean => "mean",
        Statistic::Median => "median",
        Statistic::Min => "min",
        Statistic::Max => "max",
    }
}

/// Evaluates one configured assertion; one outcome per size checked.
pub fn evaluate(cond: &AssertionConfig, aggregates: &[Aggregate]) -> Vec<AssertionOutcome> {
    let rows: Vec<&Aggregate> = aggregates
        .iter()
        .filter(|a| a.metric == cond.metric && cond.size.is_none_or(|s| s == a.size))
        .collect();
    let name = format!("{} {}", stat_name(cond.statistic), cond.metric);
    if rows.is_empty() {
        return vec![AssertionOutcome {
            description: format!(
                "{name}: no values{}",
                cond.size.map(|s| format!(" at n = {s}")).unwrap_or_default()
            ),
            passed: false,
            observed: None,
        }];
    }
    let mut out = Vec::new();
    for a in &rows {
        let v = pick(a, cond.statistic);
        if let Some(max) = cond.max {
            out.push(AssertionOutcome {
                description: format!("{name} <= {max} at n = {}", a.size),
                passed: v <= max,
                observed: Some(v),
            });
        }
        if let Some(min) = cond.min {
            out.push(AssertionOutcome {
                description: format!("{name} >= {min} at n = {}", a.size),
                passed: v >= min,
                observed: Some(v),
            });
        }
    }
    if cond.decreasing {
        let vals: Vec<f64> = rows.iter().map(|a| pick(a, cond.statistic)).collect();
        out.push(AssertionOutcome {
            description: format!("{name} non-increasing in n"),
            passed: vals.windows(2).all(|w| w[1] <= w[0]),
            observed: None,
        });
    }
    out
}

/// Built-in check on a diagnostic value.
pub(crate) fn check(description: impl Into<String>, passed: bool, observed: f64) -> AssertionOutcome {
    AssertionOutcome {
        description: description.into(),
        passed,
        observed: Some(observed),
    }
}
