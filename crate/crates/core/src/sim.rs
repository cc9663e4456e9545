//! Slot-level network environment shared by every learning algorithm.
//!
//! A period fixes a batch of evaluation slots (fading, requests and views).
//! Downlink SINRs do not depend on the agents' actions, so per-block
//! downlink rates and per-user backhaul terms are computed once per period.
//! Uplink interference couples the SBSs and is evaluated per joint action.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Normal};
use serde::{Deserialize, Serialize};

use crate::channel::{self, Allocation, ChannelRealization, RadioParams};
use crate::correlation::{
    choose_format, sigma_max, tracking_data_size, visible_payload, ContentFormat, TrackingSize,
    UserTrackingModel, ViewState, FULL_TURN,
};
use crate::error::Result;
use crate::qos;
use crate::rng;
use crate::topology::Topology;

/// Physical parameters of one simulated network, after profile scaling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub radio: RadioParams,
    pub downlink_rbs: usize,
    pub uplink_rbs: usize,
    /// `G_120`, bits.
    pub visible_bits: f64,
    /// `G_360`, bits.
    pub full_bits: f64,
    /// `γ_D`, seconds.
    pub deadline: f64,
    /// `V^B`, bits/s.
    pub backhaul_total: f64,
    pub tracking: TrackingSize,
    pub user_sigma: f64,
    pub alpha: f64,
    pub kappa: f64,
    /// Replaces every user's `σ_max` when set.
    pub sigma_max_override: Option<f64>,
    pub view_width: f64,
    pub num_contents: usize,
    /// 0 draws view centers uniformly; larger values concentrate them
    /// around a per-content focal direction.
    pub view_concentration: f64,
    pub eval_slots: usize,
    /// Whether the cloud exploits overlapping views and peer covariance.
    pub correlation_aware: bool,
}

/// Static part of a run: layout, association and tracking payloads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub topology: Topology,
    /// Users of each SBS, ascending.
    pub members: Vec<Vec<usize>>,
    /// Position of each user inside its SBS's member list.
    pub local_index: Vec<usize>,
    pub sigma_max: Vec<f64>,
    /// `K_i` actually uploaded, bits.
    pub tracking_bits: Vec<f64>,
    /// Per-user backhaul share `V^B / U`.
    pub per_user_backhaul: f64,
    /// Per-content focal yaw used by concentrated views.
    pub focal: Vec<f64>,
    pub downlink_rbs: usize,
    pub uplink_rbs: usize,
}

impl Network {
    pub fn new(topology: Topology, params: &ScenarioParams, seed: u64) -> Result<Self> {
        let members = topology.partition();
        let mut local_index = vec![0; topology.num_users()];
        for users in &members {
            for (l, &u) in users.iter().enumerate() {
                local_index[u] = l;
            }
        }
        let models =
            vec![
                UserTrackingModel::new(params.user_sigma, 0.0, params.alpha, params.kappa)?;
                topology.num_users()
            ];
        let sigma_max: Vec<f64> = (0..topology.num_users())
            .map(|u| {
                params.sigma_max_override.unwrap_or_else(|| {
                    sigma_max(u, &members[topology.association[u]], &topology, &models)
                })
            })
            .collect();
        let tracking_bits = sigma_max
            .iter()
            .map(|&s| {
                if params.correlation_aware {
                    tracking_data_size(s, &params.tracking)
                } else {
                    params.tracking.k_max
                }
            })
            .collect();
        let per_user_backhaul =
            channel::backhaul_rate(params.backhaul_total, topology.num_users())?;
        let mut frng = rng::fork(seed, rng::REQUESTS, u64::MAX);
        let focal = (0..params.num_contents)
            .map(|_| frng.random_range(0.0..FULL_TURN))
            .collect();
        Ok(Network {
            topology,
            members,
            local_index,
            sigma_max,
            tracking_bits,
            per_user_backhaul,
            focal,
            downlink_rbs: params.downlink_rbs,
            uplink_rbs: params.uplink_rbs,
        })
    }

    pub fn num_sbs(&self) -> usize {
        self.members.len()
    }

    pub fn num_users(&self) -> usize {
        self.local_index.len()
    }
}

/// Format decision for one (slot, SBS, content) requester group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupDecision {
    pub sbs: usize,
    pub content: usize,
    pub requesters: usize,
    /// Visible-union size `L_a`, bits.
    pub union_bits: f64,
    pub format: ContentFormat,
}

/// Precomputed evaluation batch of one period.
#[derive(Debug, Clone)]
pub struct PeriodEnvironment {
    pub period: usize,
    num_dl: usize,
    num_ul: usize,
    bandwidth: f64,
    deadline: f64,
    visible_bits: f64,
    /// Downlink rate per slot, user and block: `[(e * U + u) * S + rb]`.
    dl_rate: Vec<f64>,
    /// Backhaul delay term per slot and user: `[e * U + u]`.
    backhaul_delay: Vec<f64>,
    channels: Vec<ChannelRealization>,
    pub requests: Vec<Vec<ViewState>>,
    pub groups: Vec<GroupDecision>,
}

impl PeriodEnvironment {
    pub fn build(
        network: &Network,
        params: &ScenarioParams,
        period: usize,
        seed: u64,
    ) -> Result<Self> {
        let topo = &network.topology;
        let (nu, nk) = (topo.num_users(), topo.num_sbs());
        let (s, v) = (params.downlink_rbs, params.uplink_rbs);
        let mut frng = rng::fork(seed, rng::FADING, period as u64);
        let mut rrng = rng::fork(seed, rng::REQUESTS, period as u64);

        let popularity: Vec<Vec<f64>> = (0..nu)
            .map(|_| draw_popularity(params.num_contents, &mut rrng))
            .collect();
        let spread = if params.view_concentration > 0.0 {
            Some(
                Normal::new(0.0, (1.0 / params.view_concentration.sqrt()).to_degrees())
                    .expect("positive std"),
            )
        } else {
            None
        };

        let e_n = params.eval_slots;
        let mut dl_rate = Vec::with_capacity(e_n * nu * s);
        let mut backhaul_delay = vec![0.0; e_n * nu];
        let mut channels = Vec::with_capacity(e_n);
        let mut requests = Vec::with_capacity(e_n);
        let mut groups = Vec::new();
        for e in 0..e_n {
            let ch = ChannelRealization::draw(topo, params.radio, s, v, &mut frng);
            for u in 0..nu {
                let j = topo.association[u];
                for rb in 0..s {
                    dl_rate.push(channel::rb_rate(
                        params.radio.rb_bandwidth,
                        ch.sinr_downlink(u, j, rb),
                    ));
                }
            }
            channels.push(ch);

            let views: Vec<ViewState> = (0..nu)
                .map(|u| {
                    let c = sample_index(&popularity[u], &mut rrng);
                    let center = match &spread {
                        Some(n) => (network.focal[c] + n.sample(&mut rrng)).rem_euclid(FULL_TURN),
                        None => rrng.random_range(0.0..FULL_TURN),
                    };
                    ViewState::new(c, center, params.view_width)
                })
                .collect();

            for (j, users) in network.members.iter().enumerate().take(nk) {
                if params.correlation_aware {
                    for c in 0..params.num_contents {
                        let group: Vec<usize> = users
                            .iter()
                            .copied()
                            .filter(|&u| views[u].content_id == c)
                            .collect();
                        if group.is_empty() {
                            continue;
                        }
                        let gv: Vec<ViewState> = group.iter().map(|&u| views[u]).collect();
                        let l_a = visible_payload(&gv, params.visible_bits);
                        let d = choose_format(params.full_bits, l_a);
                        for &u in &group {
                            backhaul_delay[e * nu + u] = qos::downlink_delay(
                                0.0,
                                1.0,
                                d.payload,
                                group.len(),
                                network.per_user_backhaul,
                            );
                        }
                        groups.push(GroupDecision {
                            sbs: j,
                            content: c,
                            requesters: group.len(),
                            union_bits: l_a,
                            format: d.format,
                        });
                    }
                } else {
                    for &u in users {
                        backhaul_delay[e * nu + u] = qos::downlink_delay(
                            0.0,
                            1.0,
                            params.full_bits,
                            1,
                            network.per_user_backhaul,
                        );
                        groups.push(GroupDecision {
                            sbs: j,
                            content: views[u].content_id,
                            requesters: 1,
                            union_bits: params.visible_bits,
                            format: ContentFormat::Full360,
                        });
                    }
                }
            }
            requests.push(views);
        }
        Ok(PeriodEnvironment {
            period,
            num_dl: s,
            num_ul: v,
            bandwidth: params.radio.rb_bandwidth,
            deadline: params.deadline,
            visible_bits: params.visible_bits,
            dl_rate,
            backhaul_delay,
            channels,
            requests,
            groups,
        })
    }

    pub fn eval_slots(&self) -> usize {
        self.channels.len()
    }

    /// Per-user success probability over the batch under a joint action.
    /// `joint[j]` is `None` for SBSs without users. When `only` is set, users
    /// of other SBSs are skipped and left at 0.
    pub fn evaluate(
        &self,
        network: &Network,
        joint: &[Option<&Allocation>],
        only: Option<usize>,
    ) -> Vec<f64> {
        let nu = network.num_users();
        let nk = network.num_sbs();
        let s = self.num_dl;
        // co_channel[rb]: global users transmitting on uplink block rb
        let mut co_channel: Vec<Vec<usize>> = vec![Vec::with_capacity(nk); self.num_ul];
        for (j, a) in joint.iter().enumerate() {
            if let Some(a) = a {
                for (rb, &l) in a.uplink.iter().enumerate() {
                    co_channel[rb].push(network.members[j][l]);
                }
            }
        }
        let mut wins = vec![0usize; nu];
        let mut ul = vec![0.0; nu];
        for (e, ch) in self.channels.iter().enumerate() {
            ul.iter_mut().for_each(|r| *r = 0.0);
            for j in 0..nk {
                if only.is_some_and(|o| o != j) {
                    continue;
                }
                let Some(a) = joint[j] else { continue };
                for (rb, &l) in a.uplink.iter().enumerate() {
                    let u = network.members[j][l];
                    ul[u] +=
                        channel::rb_rate(self.bandwidth, ch.sinr_uplink(u, j, rb, &co_channel[rb]));
                }
                for (l, &u) in network.members[j].iter().enumerate() {
                    let base = (e * nu + u) * s;
                    let dl: f64 = (0..s)
                        .filter(|&rb| a.downlink[rb] == l)
                        .map(|rb| self.dl_rate[base + rb])
                        .sum();
                    let d_down = qos::downlink_delay(self.visible_bits, dl, 0.0, 1, 1.0)
                        + self.backhaul_delay[e * nu + u];
                    let d_up = qos::uplink_delay(network.tracking_bits[u], ul[u]);
                    if qos::success_indicator(d_down, d_up, self.deadline) {
                        wins[u] += 1;
                    }
                }
            }
        }
        let n = self.channels.len() as f64;
        wins.iter().map(|&w| w as f64 / n).collect()
    }

    /// Utility `Σ_{i ∈ U_j} P_i` of SBS `j` under a joint action.
    pub fn sbs_utility(&self, network: &Network, joint: &[Option<&Allocation>], j: usize) -> f64 {
        let p = self.evaluate(network, joint, Some(j));
        network.members[j].iter().map(|&u| p[u]).sum()
    }

    /// Share of SBS `j`'s requester groups shipped as full panoramas.
    pub fn full_format_fraction(&self, sbs: usize) -> f64 {
        let (mut full, mut all) = (0usize, 0usize);
        for g in self.groups.iter().filter(|g| g.sbs == sbs) {
            all += 1;
            if g.format == ContentFormat::Full360 {
                full += 1;
            }
        }
        if all == 0 {
            0.0
        } else {
            full as f64 / all as f64
        }
    }

    /// Mean `L_a` per content at SBS `j` over the batch (`None` if never requested).
    pub fn mean_union_bits(&self, sbs: usize, num_contents: usize) -> Vec<Option<f64>> {
        let mut sum = vec![0.0; num_contents];
        let mut count = vec![0usize; num_contents];
        for g in self.groups.iter().filter(|g| g.sbs == sbs) {
            sum[g.content] += g.union_bits;
            count[g.content] += 1;
        }
        sum.iter()
            .zip(&count)
            .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
            .collect()
    }
}

fn draw_popularity<R: Rng + ?Sized>(num_contents: usize, rng: &mut R) -> Vec<f64> {
    if num_contents == 1 {
        return vec![1.0];
    }
    // symmetric Dirichlet(1): normalized unit exponentials
    let draws: Vec<f64> = (0..num_contents)
        .map(|_| rng.sample::<f64, _>(Exp1))
        .collect();
    let total: f64 = draws.iter().sum();
    draws.iter().map(|d| d / total).collect()
}

fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let x: f64 = rng.random::<f64>() * weights.iter().sum::<f64>();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if x < acc {
            return i;
        }
    }
    weights.len() - 1
}
