use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::actions::enumerate_actions;
use super::esn::{build_input, EsnAgent, EsnParams};
use super::policy::{argmax, Exploration};
use super::qlearn::QAgent;
use super::Algorithm;
use crate::channel::Allocation;
use crate::error::Result;
use crate::rng;
use crate::sim::{Network, PeriodEnvironment};

/// Length of the tail averaged to get the end-of-period level.
pub const CONVERGENCE_WINDOW: usize = 100;
/// Relative band around the end-of-period level.
pub const CONVERGENCE_TOLERANCE: f64 = 0.01;

/// First iteration from which every later entry stays within
/// `tolerance · |m|` of `m`, the mean of the last `window` entries.
pub fn convergence_iteration(trace: &[f64], window: usize, tolerance: f64) -> usize {
    if trace.is_empty() {
        return 0;
    }
    let w = window.clamp(1, trace.len());
    let tail = &trace[trace.len() - w..];
    let m = tail.iter().sum::<f64>() / w as f64;
    let band = tolerance * m.abs();
    trace
        .iter()
        .rposition(|&g| (g - m).abs() > band + 1e-12)
        .map_or(0, |t| t + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentSettings {
    pub esn: EsnParams,
    pub exploration: Exploration,
    pub zeta: f64,
    pub action_cap: usize,
}

impl Default for AgentSettings {
    fn default() -> Self {
        AgentSettings {
            esn: EsnParams::default(),
            exploration: Exploration::fixed(0.1),
            zeta: 0.3,
            action_cap: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Agent {
    Esn(EsnAgent),
    Q(QAgent),
}

impl Agent {
    pub fn actions(&self) -> &[Allocation] {
        match self {
            Agent::Esn(a) => &a.actions,
            Agent::Q(a) => &a.actions,
        }
    }
}

/// All SBS agents of one run plus their exploration streams.
#[derive(Debug, Clone)]
pub struct Learners {
    pub algorithm: Algorithm,
    pub settings: AgentSettings,
    /// `None` for SBSs without users.
    pub agents: Vec<Option<Agent>>,
    policy_rngs: Vec<ChaCha8Rng>,
    /// Input of the previous iteration (what the current state was built from).
    input: Vec<f64>,
    table_sizes: Vec<usize>,
    periods_done: usize,
}

impl Learners {
    pub fn new(
        network: &Network,
        algorithm: Algorithm,
        settings: AgentSettings,
        seed: u64,
    ) -> Self {
        let nk = network.num_sbs();
        let (s, v) = (network.downlink_rbs, network.uplink_rbs);
        let agents: Vec<Option<Agent>> = (0..nk)
            .map(|j| {
                let users = network.members[j].len();
                if users == 0 {
                    return None;
                }
                let mut init = rng::fork(seed, rng::AGENT_INIT, j as u64);
                let actions = enumerate_actions(users, s, v, settings.action_cap, &mut init);
                Some(if algorithm.uses_esn() {
                    Agent::Esn(EsnAgent::new(settings.esn, nk + 1, actions, &mut init))
                } else {
                    Agent::Q(QAgent::new(settings.zeta, actions))
                })
            })
            .collect();
        let table_sizes = agents
            .iter()
            .map(|a| a.as_ref().map_or(1, |a| a.actions().len()))
            .collect();
        let policy_rngs = (0..nk)
            .map(|j| rng::fork(seed, rng::POLICY, j as u64))
            .collect();
        Learners {
            algorithm,
            settings,
            agents,
            policy_rngs,
            input: vec![0.0; nk + 1],
            table_sizes,
            periods_done: 0,
        }
    }

    pub fn table_sizes(&self) -> &[usize] {
        &self.table_sizes
    }

    fn greedy(&self, j: usize, input: &[f64], state_key: &str) -> Option<usize> {
        match self.agents[j].as_ref()? {
            Agent::Esn(a) => Some(argmax(&a.predict(input))),
            Agent::Q(q) => Some(q.greedy(state_key)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbsPeriodMetrics {
    pub sbs: usize,
    /// Realized utility `Σ P_i` of the performed action at every iteration.
    pub utility_trace: Vec<f64>,
    /// Utility of this SBS's greedy action at every iteration, with the other
    /// SBSs playing their end-of-period greedy actions.
    pub greedy_trace: Vec<f64>,
    pub convergence_iter: usize,
    pub mean_utility: f64,
    /// Users of this SBS, in local order.
    pub users: Vec<usize>,
    /// Success probability of each user under the final greedy profile.
    pub final_success: Vec<f64>,
    pub format_360_fraction: f64,
    pub sigma_max: Vec<f64>,
    /// Mean `L_a` per content (`None` when not requested here).
    pub union_bits: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodMetrics {
    pub period: usize,
    pub sbs: Vec<SbsPeriodMetrics>,
    /// Network-wide `Σ_i P_i`, averaged over the iterations of the period.
    pub mean_total_success: f64,
    /// Network-wide `Σ_i P_i` under the final greedy profile.
    pub final_total_success: f64,
}

impl PeriodMetrics {
    pub fn mean_per_user_success(&self) -> f64 {
        let users: usize = self.sbs.iter().map(|s| s.users.len()).sum();
        if users == 0 {
            0.0
        } else {
            self.mean_total_success / users as f64
        }
    }
}

fn q_state(period: usize) -> String {
    format!("n={period}")
}

/// Run `iterations` learning iterations of period `period` (1-based).
///
/// Per iteration every SBS predicts, picks an ε-greedy action and broadcasts
/// its index; the joint action is scored on the period's evaluation batch;
/// then ESN agents step their reservoir and train the utility readout (and
/// the delta readout after the first period), while Q agents update their
/// table.
pub fn run_period(
    learners: &mut Learners,
    network: &Network,
    env: &PeriodEnvironment,
    iterations: usize,
    period: usize,
    num_periods: usize,
) -> Result<PeriodMetrics> {
    let nk = network.num_sbs();
    let state_key = q_state(period);
    let exploration = learners.settings.exploration;

    if period > 1 && learners.periods_done > 0 {
        for agent in learners.agents.iter_mut().flatten() {
            if let Agent::Esn(a) = agent {
                a.begin_period();
                a.transfer_warm_start(period, &learners.input)?;
            }
        }
    }

    let mut utility_traces = vec![Vec::with_capacity(iterations); nk];
    let mut greedy_history: Vec<Vec<usize>> = vec![Vec::with_capacity(iterations); nk];
    let mut total_sum = 0.0;
    let mut chosen = vec![0usize; nk];
    let mut greedy = vec![0usize; nk];

    for t in 0..iterations {
        let eps = exploration.at(t);
        for j in 0..nk {
            let Some(agent) = learners.agents[j].as_ref() else {
                continue;
            };
            let rng = &mut learners.policy_rngs[j];
            let (pick, g) = match agent {
                Agent::Esn(a) => {
                    let y = a.predict(&learners.input);
                    let g = argmax(&y);
                    (choose(&y, g, eps, t == 0 && period == 1, rng), g)
                }
                Agent::Q(q) => {
                    let values = q.values(&state_key);
                    let g = argmax(&values);
                    (choose(&values, g, eps, t == 0, rng), g)
                }
            };
            chosen[j] = pick;
            greedy[j] = g;
        }

        let input = build_input(&chosen, &learners.table_sizes, period, num_periods);
        let joint: Vec<Option<&Allocation>> = learners
            .agents
            .iter()
            .zip(&chosen)
            .map(|(a, &k)| a.as_ref().map(|a| &a.actions()[k]))
            .collect();
        let p = env.evaluate(network, &joint, None);

        let mut utilities = vec![0.0; nk];
        for j in 0..nk {
            if learners.agents[j].is_none() {
                continue;
            }
            let members = &network.members[j];
            utilities[j] = members.iter().map(|&u| p[u]).sum();
            total_sum += utilities[j];
            utility_traces[j].push(utilities[j]);
            greedy_history[j].push(greedy[j]);
        }

        for j in 0..nk {
            let k = chosen[j];
            match learners.agents[j].as_mut() {
                None => {}
                Some(Agent::Esn(a)) => {
                    a.update_state(&input);
                    a.train_utility(k, utilities[j], &input);
                    if period > 1 {
                        if let Some(before) = a.previous_utility(k) {
                            a.train_delta(k, utilities[j], before, &input, period)?;
                        }
                    }
                }
                Some(Agent::Q(q)) => {
                    q.update(&state_key, k, utilities[j]);
                }
            }
        }
        learners.input = input;
    }
    learners.periods_done += 1;

    let final_greedy: Vec<Option<usize>> = (0..nk)
        .map(|j| learners.greedy(j, &learners.input, &state_key))
        .collect();
    let final_joint: Vec<Option<&Allocation>> = learners
        .agents
        .iter()
        .zip(&final_greedy)
        .map(|(a, g)| a.as_ref().zip(*g).map(|(a, k)| &a.actions()[k]))
        .collect();
    let final_p = env.evaluate(network, &final_joint, None);
    let num_contents = network.focal.len();

    // each SBS's greedy action per iteration, scored against the others' final greedy actions
    let mut greedy_traces: Vec<Vec<f64>> = vec![Vec::new(); nk];
    for j in 0..nk {
        let Some(agent) = learners.agents[j].as_ref() else {
            continue;
        };
        let mut scored: BTreeMap<usize, f64> = BTreeMap::new();
        let mut joint = final_joint.clone();
        greedy_traces[j] = greedy_history[j]
            .iter()
            .map(|&k| {
                *scored.entry(k).or_insert_with(|| {
                    joint[j] = Some(&agent.actions()[k]);
                    env.sbs_utility(network, &joint, j)
                })
            })
            .collect();
    }

    let sbs = (0..nk)
        .map(|j| {
            let users = network.members[j].clone();
            let trace = std::mem::take(&mut utility_traces[j]);
            let greedy_trace = std::mem::take(&mut greedy_traces[j]);
            let mean_utility = if trace.is_empty() {
                0.0
            } else {
                trace.iter().sum::<f64>() / trace.len() as f64
            };
            SbsPeriodMetrics {
                sbs: j,
                convergence_iter: convergence_iteration(
                    &greedy_trace,
                    CONVERGENCE_WINDOW,
                    CONVERGENCE_TOLERANCE,
                ),
                utility_trace: trace,
                greedy_trace,
                mean_utility,
                final_success: users.iter().map(|&u| final_p[u]).collect(),
                format_360_fraction: env.full_format_fraction(j),
                sigma_max: users.iter().map(|&u| network.sigma_max[u]).collect(),
                union_bits: env.mean_union_bits(j, num_contents),
                users,
            }
        })
        .collect();
    Ok(PeriodMetrics {
        period,
        sbs,
        mean_total_success: if iterations == 0 {
            0.0
        } else {
            total_sum / iterations as f64
        },
        final_total_success: final_p.iter().sum(),
    })
}

/// ε-greedy pick; `fresh` forces a uniform draw (an agent with nothing learned
/// for the current state).
fn choose<R: Rng + ?Sized>(
    values: &[f64],
    greedy: usize,
    eps: f64,
    fresh: bool,
    rng: &mut R,
) -> usize {
    if fresh {
        rng.random_range(0..values.len())
    } else if eps > 0.0 && rng.random::<f64>() < eps {
        rng.random_range(0..values.len())
    } else {
        greedy
    }
}
