//! Empirical CDF of the network success probability per period, for the
//! transfer learner and the correlation-aware Q baseline.

use vrnetsim::harness::{cdf_at, compute_cdf, run_seeds, CdfMetric, ExperimentConfig};
use vrnetsim::learning::Algorithm;

fn main() -> vrnetsim::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.harness.periods = 4;
    cfg.harness.record_traces = false;
    let seeds: Vec<u64> = (0..6).collect();

    let mut curves = Vec::new();
    for algo in [Algorithm::EsnTransfer, Algorithm::QCorr] {
        let records = run_seeds(&cfg, algo, &seeds)?;
        curves.push((algo, compute_cdf(&records, CdfMetric::TotalSuccess)?));
    }
    println!(
        "total success   {:>14}  {:>14}",
        curves[0].0.tag(),
        curves[1].0.tag()
    );
    let lo = curves
        .iter()
        .map(|c| c.1[0].0)
        .fold(f64::INFINITY, f64::min);
    let hi = curves
        .iter()
        .map(|c| c.1.last().unwrap().0)
        .fold(0.0, f64::max);
    for i in 0..=10 {
        let x = lo + (hi - lo) * i as f64 / 10.0;
        println!(
            "{x:13.3}   {:>14.3}  {:>14.3}",
            cdf_at(&curves[0].1, x),
            cdf_at(&curves[1].1, x)
        );
    }
    Ok(())
}
