//! Mean network success and convergence speed of the four learners.
//!
//! `cargo run --release --example compare_algorithms -- [seeds] [periods] [config.toml]`

use std::time::Instant;

use vrnetsim::harness::{run_seeds, ExperimentConfig};
use vrnetsim::learning::Algorithm;

fn main() -> vrnetsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let periods: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let mut cfg = match args.next() {
        Some(path) => vrnetsim::harness::load_config(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.harness.periods = periods;
    cfg.harness.record_traces = false;
    let offset: u64 = std::env::var("SEED_OFFSET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let seeds: Vec<u64> = (offset..offset + seeds).collect();

    println!("algorithm      total   per-user  conv1   conv3   secs");
    let mut totals = Vec::new();
    let mut ratios = Vec::new();
    for algo in Algorithm::ALL {
        let start = Instant::now();
        let runs = run_seeds(&cfg, algo, &seeds)?;
        let total = runs.iter().map(|r| r.mean_total_success()).sum::<f64>() / runs.len() as f64;
        let per_user = total / cfg.topology.num_users as f64;
        let conv = |p: usize| {
            runs.iter().filter_map(|r| r.convergence_at(p)).sum::<f64>() / runs.len() as f64
        };
        println!(
            "{:<14} {:<7.3} {:<9.4} {:<7.1} {:<7.1} {:.1}",
            algo.tag(),
            total,
            per_user,
            conv(1),
            if periods >= 3 { conv(3) } else { f64::NAN },
            start.elapsed().as_secs_f64()
        );
        totals.push(total);
        ratios.push(conv(3) / conv(1));
    }
    println!(
        "relative gap esn-transfer vs q-corr: {:.3}; period-3/period-1 convergence: esn {:.3}, q-corr {:.3}",
        totals[0] / totals[2] - 1.0,
        ratios[0],
        ratios[2]
    );
    Ok(())
}
