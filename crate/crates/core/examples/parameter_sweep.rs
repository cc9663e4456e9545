//! Mean network success as the number of SBSs or the backhaul rate varies,
//! written to CSV and JSON.
//!
//! `cargo run --release --example parameter_sweep -- [num_sbs|backhaul_rate] [seeds] [out_dir]`

use vrnetsim::harness::{emit, sweep, write_json, Axis, ExperimentConfig};
use vrnetsim::learning::Algorithm;

fn main() -> vrnetsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let axis: Axis = args.next().unwrap_or_else(|| "num_sbs".into()).parse()?;
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let out = args.next().unwrap_or_else(|| "sweep-out".into());

    let values: Vec<f64> = match axis {
        Axis::BackhaulRate => vec![25e8, 50e8, 100e8, 200e8],
        _ => vec![3.0, 5.0, 7.0, 9.0],
    };
    let mut cfg = ExperimentConfig::default();
    cfg.harness.periods = 3;
    let seeds: Vec<u64> = (0..seeds).collect();
    let result = sweep(&cfg, axis, &values, &Algorithm::ALL, &seeds)?;

    print!("{:>14}", axis.name());
    for a in Algorithm::ALL {
        print!("  {:>14}", a.tag());
    }
    println!();
    for &v in &values {
        print!("{:>14}", emit::fmt_sig(v));
        for a in Algorithm::ALL {
            let r = result.row(v, a).expect("row per cell");
            print!(
                "  {:>7.3} ±{:>5.2}",
                r.mean_total_success, r.std_total_success
            );
        }
        println!();
    }
    emit::write_sweep_csv(&result, format!("{out}/sweep_{}.csv", axis.name()))?;
    write_json(&result, format!("{out}/sweep_{}.json", axis.name()))?;
    println!("written to {out}/");
    Ok(())
}
