use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::experiment::{mean, run_experiment, RunRecord};
use crate::error::{Error, Result};
use crate::learning::Algorithm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    NumSbs,
    NumUsers,
    /// Total backhaul in bits/s before profile scaling.
    BackhaulRate,
    /// Fixed `σ_max` for every user.
    SigmaMaxScale,
    /// Period index; reports convergence iterations per period.
    Period,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::NumSbs => "num_sbs",
            Axis::NumUsers => "num_users",
            Axis::BackhaulRate => "backhaul_rate",
            Axis::SigmaMaxScale => "sigma_max_scale",
            Axis::Period => "period",
        }
    }

    /// Config with this axis set to `value` (the period axis leaves it as is).
    pub fn apply(self, config: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut c = config.clone();
        let count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::config(
                    self.name(),
                    format!("expected a positive integer, got {v}"),
                ))
            }
        };
        match self {
            Axis::NumSbs => c.topology.num_sbs = count(value)?,
            Axis::NumUsers => c.topology.num_users = count(value)?,
            Axis::BackhaulRate => c.channel.backhaul_rate = value,
            Axis::SigmaMaxScale => c.correlation.sigma_max_override = Some(value),
            Axis::Period => {
                count(value)?;
            }
        }
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "num_sbs" => Ok(Axis::NumSbs),
            "num_users" => Ok(Axis::NumUsers),
            "backhaul_rate" => Ok(Axis::BackhaulRate),
            "sigma_max_scale" => Ok(Axis::SigmaMaxScale),
            "period" => Ok(Axis::Period),
            _ => Err(Error::config("axis", format!("unknown sweep axis `{s}`"))),
        }
    }
}

/// One (axis value, algorithm, seed) run reduced to the swept metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub value: f64,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub total_success: f64,
    pub per_user_success: f64,
    /// Only for the period axis.
    pub convergence_iter: Option<f64>,
}

/// Mean and standard deviation over seeds of one (value, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: Axis,
    pub value: f64,
    pub algorithm: Algorithm,
    pub seeds: usize,
    pub mean_total_success: f64,
    pub std_total_success: f64,
    pub mean_per_user_success: f64,
    pub std_per_user_success: f64,
    pub mean_convergence_iter: Option<f64>,
    pub std_convergence_iter: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: Axis,
    pub rows: Vec<SweepRow>,
    pub samples: Vec<SweepSample>,
}

impl SweepResult {
    pub fn row(&self, value: f64, algorithm: Algorithm) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.value == value && r.algorithm == algorithm)
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let m = mean(values.iter().copied());
    if values.len() < 2 {
        return (m, 0.0);
    }
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    (m, var.sqrt())
}

fn sample_of(axis: Axis, value: f64, rec: &RunRecord) -> SweepSample {
    let (total, conv) = if axis == Axis::Period {
        let p = &rec.periods[value as usize - 1];
        (p.mean_total_success, rec.convergence_at(p.period))
    } else {
        (rec.mean_total_success(), None)
    };
    SweepSample {
        value,
        algorithm: rec.algorithm,
        seed: rec.seed,
        total_success: total,
        per_user_success: total / rec.num_users.max(1) as f64,
        convergence_iter: conv,
    }
}

/// Aggregate `samples` into one row per (value, algorithm), in input order.
pub fn aggregate(
    axis: Axis,
    values: &[f64],
    algorithms: &[Algorithm],
    samples: &[SweepSample],
) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &value in values {
        for &algorithm in algorithms {
            let cell: Vec<&SweepSample> = samples
                .iter()
                .filter(|s| s.value == value && s.algorithm == algorithm)
                .collect();
            let totals: Vec<f64> = cell.iter().map(|s| s.total_success).collect();
            let users: Vec<f64> = cell.iter().map(|s| s.per_user_success).collect();
            let convs: Vec<f64> = cell.iter().filter_map(|s| s.convergence_iter).collect();
            let (mt, st) = mean_std(&totals);
            let (mu, su) = mean_std(&users);
            let conv = (!convs.is_empty()).then(|| mean_std(&convs));
            rows.push(SweepRow {
                axis,
                value,
                algorithm,
                seeds: cell.len(),
                mean_total_success: mt,
                std_total_success: st,
                mean_per_user_success: mu,
                std_per_user_success: su,
                mean_convergence_iter: conv.map(|c| c.0),
                std_convergence_iter: conv.map(|c| c.1),
            });
        }
    }
    rows
}

/// Run every (value, algorithm, seed) combination and aggregate over seeds.
///
/// For the period axis one run of `max(values)` periods per seed serves all
/// values.
pub fn sweep(
    config: &ExperimentConfig,
    axis: Axis,
    values: &[f64],
    algorithms: &[Algorithm],
    seeds: &[u64],
) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::config("values", "sweep needs at least one value"));
    }
    let mut samples: Vec<SweepSample> = if axis == Axis::Period {
        for &v in values {
            axis.apply(config, v)?;
        }
        let mut c = config.clone();
        c.harness.periods = values.iter().fold(1.0f64, |a, &b| a.max(b)) as usize;
        c.harness.record_traces = false;
        let tasks: Vec<(Algorithm, u64)> = algorithms
            .iter()
            .flat_map(|&a| seeds.iter().map(move |&s| (a, s)))
            .collect();
        let records: Vec<RunRecord> = tasks
            .par_iter()
            .map(|&(a, s)| run_experiment(&c, a, s))
            .collect::<Result<_>>()?;
        records
            .iter()
            .flat_map(|r| values.iter().map(move |&v| sample_of(axis, v, r)))
            .collect()
    } else {
        let mut tasks = Vec::new();
        for &v in values {
            let mut c = axis.apply(config, v)?;
            c.harness.record_traces = false;
            for &a in algorithms {
                for &s in seeds {
                    tasks.push((v, c.clone(), a, s));
                }
            }
        }
        tasks
            .par_iter()
            .map(|(v, c, a, s)| run_experiment(c, *a, *s).map(|r| sample_of(axis, *v, &r)))
            .collect::<Result<_>>()?
    };
    samples.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.algorithm.cmp(&b.algorithm))
            .then(a.seed.cmp(&b.seed))
    });
    let rows = aggregate(axis, values, algorithms, &samples);
    Ok(SweepResult {
        axis,
        rows,
        samples,
    })
}
