use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vrnetsim::harness::{
    self, compute_cdf, load_config, run_seeds, sweep, Axis, CdfMetric, ExperimentConfig, Profile,
};
use vrnetsim::learning::Algorithm;
use vrnetsim::{Error, Result};

#[derive(Parser)]
#[command(
    name = "vrnetsim",
    version,
    about = "Wireless VR resource-allocation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML config; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scale profile, overriding the config file.
    #[arg(long, value_parser = parse_profile)]
    profile: Option<Profile>,
    /// Single seed (defaults to the config's seed).
    #[arg(long, env = "VRNETSIM_SEED")]
    seed: Option<u64>,
    /// Seed range `N..M` (half-open), instead of a single seed.
    #[arg(long, conflicts_with = "seed")]
    seeds: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm and write per-run CSV and JSON.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "esn-transfer")]
        algo: String,
    },
    /// Sweep one parameter over a list of values.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// num_sbs, num_users, backhaul_rate, sigma_max_scale or period.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
        /// Comma-separated algorithms; all four when omitted.
        #[arg(long)]
        algo: Option<String>,
    },
    /// Empirical CDF of a metric over seeds.
    Cdf {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "esn-transfer")]
        algo: String,
        /// total_success, sbs_utility or user_success.
        #[arg(long, default_value = "total_success")]
        metric: String,
    },
    /// Parse and validate a config file, then print it with defaults filled in.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_profile(s: &str) -> Result<Profile> {
    s.parse()
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config {
        key: "seeds".into(),
        reason: format!("expected N..M, got `{s}`"),
    };
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if b <= a {
        return Err(bad());
    }
    Ok((a..b).collect())
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|v| {
            v.trim().parse().map_err(|_| Error::Config {
                key: key.into(),
                reason: format!("cannot parse `{v}`"),
            })
        })
        .collect()
}

fn setup(common: &Common) -> Result<(ExperimentConfig, Vec<u64>)> {
    let mut cfg = match &common.config {
        Some(p) => load_config(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(p) = common.profile {
        cfg.harness.profile = p;
    }
    let seeds = match (&common.seeds, common.seed) {
        (Some(r), _) => parse_seeds(r)?,
        (None, Some(s)) => vec![s],
        (None, None) => vec![cfg.harness.seed],
    };
    Ok((cfg, seeds))
}

fn out_file(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common, algo } => {
            let (cfg, seeds) = setup(&common)?;
            let algo: Algorithm = algo.parse()?;
            let records = run_seeds(&cfg, algo, &seeds)?;
            let stem = format!("run_{}", algo.tag());
            harness::write_csv(&records, out_file(&common.out, &format!("{stem}.csv")))?;
            harness::write_json(&records, out_file(&common.out, &format!("{stem}.json")))?;
            for r in &records {
                println!(
                    "seed {} {}: mean total success {} (per user {})",
                    r.seed,
                    algo,
                    harness::fmt_sig(r.mean_total_success()),
                    harness::fmt_sig(r.mean_per_user_success())
                );
            }
        }
        Command::Sweep {
            common,
            axis,
            values,
            algo,
        } => {
            let (cfg, seeds) = setup(&common)?;
            let axis: Axis = axis.parse()?;
            let values: Vec<f64> = parse_list("values", &values)?;
            let algos: Vec<Algorithm> = match algo {
                Some(a) => parse_list("algo", &a)?,
                None => Algorithm::ALL.to_vec(),
            };
            let result = sweep(&cfg, axis, &values, &algos, &seeds)?;
            let stem = format!("sweep_{}", axis.name());
            harness::emit::write_sweep_csv(&result, out_file(&common.out, &format!("{stem}.csv")))?;
            harness::write_json(&result, out_file(&common.out, &format!("{stem}.json")))?;
            for r in &result.rows {
                println!(
                    "{}={} {}: total {} ± {}",
                    axis,
                    harness::fmt_sig(r.value),
                    r.algorithm,
                    harness::fmt_sig(r.mean_total_success),
                    harness::fmt_sig(r.std_total_success)
                );
            }
        }
        Command::Cdf {
            common,
            algo,
            metric,
        } => {
            let (cfg, seeds) = setup(&common)?;
            let algo: Algorithm = algo.parse()?;
            let metric: CdfMetric = metric.parse()?;
            let records = run_seeds(&cfg, algo, &seeds)?;
            let points = compute_cdf(&records, metric)?;
            harness::emit::write_cdf_csv(
                &points,
                out_file(&common.out, &format!("cdf_{}.csv", algo.tag())),
            )?;
            println!("{} CDF points written", points.len());
        }
        Command::ValidateConfig { config } => {
            let cfg = load_config(&config)?;
            print!("{}", cfg.to_toml_string());
            eprintln!("config ok, hash {}", cfg.hash());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
