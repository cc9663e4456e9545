use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Profile};
use crate::error::Result;
use crate::learning::{run_period, Agent, Algorithm, Learners, PeriodMetrics};
use crate::sim::{Network, PeriodEnvironment};
use crate::topology::generate_topology;

/// Everything measured in one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub profile: Profile,
    pub num_users: usize,
    pub periods: Vec<PeriodMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<Option<Agent>>>,
}

impl RunRecord {
    /// Network `Σ_i P_i` averaged over iterations and periods.
    pub fn mean_total_success(&self) -> f64 {
        mean(self.periods.iter().map(|p| p.mean_total_success))
    }

    pub fn mean_per_user_success(&self) -> f64 {
        self.mean_total_success() / self.num_users.max(1) as f64
    }

    /// Mean convergence iteration over the SBSs that have users.
    pub fn convergence_at(&self, period: usize) -> Option<f64> {
        let p = self.periods.iter().find(|p| p.period == period)?;
        Some(mean(
            p.sbs
                .iter()
                .filter(|s| !s.users.is_empty())
                .map(|s| s.convergence_iter as f64),
        ))
    }
}

pub(crate) fn mean(it: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = it.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Run `periods × iterations` learning iterations with one algorithm.
pub fn run_experiment(
    config: &ExperimentConfig,
    algorithm: Algorithm,
    seed: u64,
) -> Result<RunRecord> {
    config.validate()?;
    let params = config.scenario_for(algorithm);
    let topology = generate_topology(
        config.topology.num_sbs,
        config.topology.num_users,
        config.topology.area_radius,
        seed,
    )?;
    let network = Network::new(topology, &params, seed)?;
    let mut learners = Learners::new(&network, algorithm, config.agent_settings(), seed);
    let n_total = config.harness.periods;
    let mut periods = Vec::with_capacity(n_total);
    for n in 1..=n_total {
        let env = PeriodEnvironment::build(&network, &params, n, seed)?;
        let mut m = run_period(
            &mut learners,
            &network,
            &env,
            config.harness.iterations,
            n,
            n_total,
        )?;
        if !config.harness.record_traces {
            for s in &mut m.sbs {
                s.utility_trace.clear();
                s.greedy_trace.clear();
            }
        }
        periods.push(m);
    }
    Ok(RunRecord {
        config_hash: config.hash(),
        seed,
        algorithm,
        profile: config.harness.profile,
        num_users: network.num_users(),
        periods,
        checkpoints: config.harness.record_checkpoints.then_some(learners.agents),
    })
}

/// Independent runs over seeds, in parallel, returned in seed order.
pub fn run_seeds(
    config: &ExperimentConfig,
    algorithm: Algorithm,
    seeds: &[u64],
) -> Result<Vec<RunRecord>> {
    seeds
        .par_iter()
        .map(|&s| run_experiment(config, algorithm, s))
        .collect()
}
