use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::experiment::RunRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfMetric {
    /// Network `Σ P_i` of each (run, period).
    TotalSuccess,
    /// Mean utility of each (run, period, SBS with users).
    SbsUtility,
    /// Final success probability of each (run, period, user).
    UserSuccess,
}

impl FromStr for CdfMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total_success" => Ok(CdfMetric::TotalSuccess),
            "sbs_utility" => Ok(CdfMetric::SbsUtility),
            "user_success" => Ok(CdfMetric::UserSuccess),
            _ => Err(Error::config("metric", format!("unknown CDF metric `{s}`"))),
        }
    }
}

pub fn samples(records: &[RunRecord], metric: CdfMetric) -> Vec<f64> {
    let periods = records.iter().flat_map(|r| &r.periods);
    match metric {
        CdfMetric::TotalSuccess => periods.map(|p| p.mean_total_success).collect(),
        CdfMetric::SbsUtility => periods
            .flat_map(|p| &p.sbs)
            .filter(|s| !s.users.is_empty())
            .map(|s| s.mean_utility)
            .collect(),
        CdfMetric::UserSuccess => periods
            .flat_map(|p| &p.sbs)
            .flat_map(|s| s.final_success.iter().copied())
            .collect(),
    }
}

/// Empirical CDF as right-continuous step points `(v, F(v))`, one per
/// distinct value, ascending, ending at 1.
pub fn empirical_cdf(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::contract("CDF of an empty sample"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::contract("CDF sample contains NaN"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match points.last_mut() {
            Some(last) if last.0 == v => last.1 = f,
            _ => points.push((v, f)),
        }
    }
    Ok(points)
}

/// `F(x)` from step points.
pub fn cdf_at(points: &[(f64, f64)], x: f64) -> f64 {
    points
        .iter()
        .take_while(|(v, _)| *v <= x)
        .last()
        .map_or(0.0, |p| p.1)
}

pub fn compute_cdf(records: &[RunRecord], metric: CdfMetric) -> Result<Vec<(f64, f64)>> {
    if records.is_empty() {
        return Err(Error::contract("CDF needs at least one run record"));
    }
    empirical_cdf(&samples(records, metric))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample() {
        assert_eq!(empirical_cdf(&[0.4]).unwrap(), vec![(0.4, 1.0)]);
    }

    #[test]
    fn two_samples() {
        let c = empirical_cdf(&[0.8, 0.2]).unwrap();
        assert_eq!(c, vec![(0.2, 0.5), (0.8, 1.0)]);
        assert_eq!(cdf_at(&c, 0.5), 0.5);
        assert_eq!(cdf_at(&c, 0.1), 0.0);
        assert_eq!(cdf_at(&c, 0.8), 1.0);
    }

    #[test]
    fn ties_and_shape() {
        let c = empirical_cdf(&[3.0, 1.0, 1.0, 2.0, 3.0, 3.0]).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(c.last().unwrap().1, 1.0);
        assert!(empirical_cdf(&[]).is_err());
    }
}
