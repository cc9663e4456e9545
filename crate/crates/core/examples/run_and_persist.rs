//! Load or build a config, run one seeded experiment, write the per-period
//! table and the lossless record, and read the record back.
//!
//! `cargo run --release --example run_and_persist -- [config.toml|-] [out_dir]`

use vrnetsim::harness::{
    load_config, read_json_records, run_experiment, write_csv, write_json, ExperimentConfig,
};
use vrnetsim::learning::Algorithm;

fn main() -> vrnetsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = match args.next().filter(|p| !p.is_empty() && p != "-") {
        Some(p) => load_config(p)?,
        None => ExperimentConfig::default(),
    };
    let out = args.next().unwrap_or_else(|| "run-out".into());
    cfg.harness.periods = cfg.harness.periods.min(3);
    println!("config hash {}", cfg.hash());

    let record = run_experiment(&cfg, Algorithm::EsnTransfer, cfg.harness.seed)?;
    for p in &record.periods {
        let conv: Vec<usize> = p
            .sbs
            .iter()
            .filter(|s| !s.users.is_empty())
            .map(|s| s.convergence_iter)
            .collect();
        println!(
            "period {}: mean total success {:.3} of {} users, final {:.3}, convergence {:?}",
            p.period, p.mean_total_success, record.num_users, p.final_total_success, conv
        );
        for s in p.sbs.iter().filter(|s| !s.users.is_empty()) {
            let bits: Vec<String> = s
                .union_bits
                .iter()
                .map(|b| b.map_or("-".into(), |v| format!("{:.0}", v / 1e3)))
                .collect();
            println!(
                "  SBS {}: 360° share {:.2}, mean visible union per content (kbit) [{}]",
                s.sbs,
                s.format_360_fraction,
                bits.join(" ")
            );
        }
    }

    let records = vec![record];
    write_csv(&records, format!("{out}/run.csv"))?;
    write_json(&records, format!("{out}/run.json"))?;
    let back = read_json_records(format!("{out}/run.json"))?;
    println!("record read back identical: {}", back == records);
    Ok(())
}
